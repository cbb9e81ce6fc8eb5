#pragma once

#include <vector>

#include "core/prob.hpp"
#include "core/rd_solver.hpp"

namespace dsi {

/// Two-level side information q in {value0, value1} with P(q = value1) = prob1.
struct TwoAtomSide {
  double value0 = 1.0;
  double value1 = 1.0;
  double prob1 = 0.5;

  double mean() const { return (1.0 - prob1) * value0 + prob1 * value1; }
  double mean_log() const;
  /// (1/2)(ln E[q] - E[ln q]).
  double gap_closed_form() const;
};

/// Standard-Gaussian source quantized to grid_points equispaced levels over
/// +-span_sigmas, with distortion q * (x - xhat)^2 on the same grid.
DiscreteInstance make_quantized_gaussian_instance(std::size_t grid_points,
                                                  double span_sigmas,
                                                  const TwoAtomSide& side);

struct PenaltyCheckConfig {
  std::size_t grid_points = 129;
  double span_sigmas = 6.0;
  // Distortions at which the uninformed-vs-informed gap is measured,
  // descending; the gap should climb toward the closed form.
  std::vector<double> target_distortions = {0.8, 0.3, 0.05};
  SolverConfig solver;
};

struct PenaltyCheckResult {
  double closed_form_gap = 0.0;
  std::vector<double> distortions;
  std::vector<double> measured_gaps;  // R_NONE - R_BOTH at each distortion
  bool monotone_increasing = true;
  double final_error = 0.0;  // |last gap - closed form|
  bool grid_resolution_warning = false;
};

/// Measures R_NONE - R_BOTH on the quantized instance across shrinking
/// distortions and compares with the closed-form penalty.
PenaltyCheckResult penalty_empirical_check(const TwoAtomSide& side,
                                           const PenaltyCheckConfig& config);

}  // namespace dsi
