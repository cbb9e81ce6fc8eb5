#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/prob.hpp"

namespace dsi {

/// Side-information availability: at neither end, decoder only, encoder
/// only, or both ends.
enum class Scenario { None, Dec, Enc, Both };

const char* to_string(Scenario s);

struct SolverConfig {
  // Lagrange slopes to sweep, strictly positive, ascending.
  std::vector<double> slope_grid = default_slopes();
  int max_iterations = 10000;
  double rel_tolerance = 1e-9;
  // |U| for the decoder-side scenario; 0 means recon_size() + 1.
  std::size_t aux_cardinality = 0;
  // Restarts per slope for the decoder-side scenario: one seeded from the
  // uninformed solution plus (restarts - 1) random initializations.
  int restarts = 8;
  std::uint64_t seed = 0x6a09e667f3bcc908ULL;

  static std::vector<double> default_slopes(std::size_t count = 32,
                                            double lo = 0.05, double hi = 50.0);
  void validate() const;
};

struct RdPoint {
  double slope = 0.0;
  double rate = 0.0;        // nats per sample
  double distortion = 0.0;
  int iterations = 0;
  bool converged = true;
};

struct ScenarioResult {
  Scenario scenario = Scenario::None;
  std::vector<RdPoint> points;  // ascending slope, hence descending distortion

  // Optimizing channels per point. Row layout: None -> x, Both/Enc -> (x, q)
  // flattened as x * nq + q, Dec -> x with aux letters as columns.
  std::vector<Matrix> channels;
  // Dec only: reconstruction map v(u, q) per point, flattened u * nq + q.
  std::vector<std::vector<int>> recon_maps;
  // Enc only: per-point decomposition I(x; xhat | q) and I(xhat; q).
  std::vector<double> conditional_rate;
  std::vector<double> side_leakage;

  // Largest observed per-iteration increase of the I + lambda E[d]
  // objective across all solves (should be nonpositive up to roundoff).
  double max_objective_increase = 0.0;

  bool all_converged() const;
};

/// Sweep the slope grid for one scenario. Each point minimizes
/// I + slope * E[d] by alternating minimization; non-convergence within
/// max_iterations is recorded per point, never dropped.
ScenarioResult solve_scenario(const DiscreteInstance& instance, Scenario s,
                              const SolverConfig& config);

/// Rate at exactly zero distortion, in nats, computed as a support-
/// constrained minimum-information problem rather than a slope limit.
/// Returns +infinity when zero distortion is unattainable. Supported for
/// None, Enc, and Both.
double lossless_rate(const DiscreteInstance& instance, Scenario s,
                     const SolverConfig& config = {});

// ---- Curve utilities ----

/// Linear interpolation of rate at a given distortion; points need not be
/// sorted. Throws if d lies outside the curve's distortion range.
double curve_rate_at(const std::vector<RdPoint>& points, double d);

bool curve_distortion_in_range(const std::vector<RdPoint>& points, double d);

/// Rates non-increasing in distortion, within slack.
bool curve_rates_non_increasing(const std::vector<RdPoint>& points,
                                double slack = 1e-9);

/// Convexity via chord-slope monotonicity in distortion, within slack.
bool curve_is_convex(const std::vector<RdPoint>& points, double slack = 1e-6);

struct GapReport {
  double max_gap = 0.0;
  double slope_at_max = 0.0;
  double distortion_at_max = 0.0;
};

/// max |R_a(D) - R_b(D)| over matched distortions, evaluating each curve's
/// points against the other's linear interpolation.
GapReport max_matched_rate_gap(const std::vector<RdPoint>& a,
                               const std::vector<RdPoint>& b);

/// Largest violation of R_lower(D) <= R_upper(D): exact points of the lower
/// curve against the interpolated upper curve. Nonpositive when the
/// ordering holds.
double max_ordering_violation(const std::vector<RdPoint>& lower,
                              const std::vector<RdPoint>& upper);

// ---- Equality checks ----

struct EqualityReport {
  double max_gap = 0.0;        // max matched-distortion rate gap, nats
  double slope_at_max = 0.0;
  double max_side_leakage = 0.0;   // encoder check: max I(xhat; q) over points
  bool recon_constant_in_side = true;  // decoder check: v(u, q) free of q
  ScenarioResult lhs;
  ScenarioResult rhs;
};

/// Verifies R_ENC == R_BOTH on a group-difference instance with uniform
/// source law; refuses anything else.
EqualityReport check_theorem1(const DiscreteInstance& instance,
                              const GroupTable& group,
                              const SolverConfig& config);

/// Verifies R_DEC == R_NONE on a separable (side_scale * base) instance;
/// refuses non-separable tensors.
EqualityReport check_theorem3(const DiscreteInstance& instance,
                              const SolverConfig& config);

}  // namespace dsi
