#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "core/rng.hpp"

namespace dsi {

/// Digamma function, accurate to ~1e-13 relative for x > 0; recurrence to
/// push the argument above 6, then the asymptotic series.
double digamma(double x);

enum class SideFamily {
  Exponential,    // tau * exp(-q tau), q >= 0
  Uniform01,      // 1 on [0, 1]
  Lognormal,      // parameters M (log-mean) and Q2 (log-variance)
  Pareto,         // a b^a / q^(a+1), q >= b > 0, a > 1
  Gamma,          // b (b q)^(a-1) exp(-b q) / Gamma(a)
  Pathological,   // (1-eps) at q=eps, eps at q=1/eps
  PositiveCauchy  // (2/pi) / (1 + q^2), q >= 0
};

const char* to_string(SideFamily f);

/// Nonnegative side-information laws scaling a quadratic distortion; the
/// penalty for encoder ignorance of q is (1/2)(ln E[q] - E[ln q]) nats.
struct SideInfoDistribution {
  SideFamily family = SideFamily::Uniform01;
  double param1 = 0.0;
  double param2 = 0.0;

  static SideInfoDistribution exponential(double tau);
  static SideInfoDistribution uniform01();
  static SideInfoDistribution lognormal(double m, double q2);
  static SideInfoDistribution pareto(double a, double b);
  static SideInfoDistribution gamma(double a, double b);
  static SideInfoDistribution pathological(double eps);
  static SideInfoDistribution positive_cauchy();

  void validate() const;
  std::string params_label() const;

  double mean() const;      // E[q]; +infinity when divergent
  double mean_log() const;  // E[ln q]

  /// Per-family simplified closed form of the penalty; cross-checked in
  /// tests against the moment difference and Monte-Carlo.
  double gap_closed_form() const;

  /// Density at q; Pathological (atoms) has none and throws.
  double density(double q) const;
  double sample(Rng& rng) const;
};

struct GapEstimate {
  double estimate = 0.0;
  double std_error = 0.0;   // delta-method standard error
  long long samples = 0;
  std::uint64_t seed = 0;
  bool diverging = false;   // running estimate keeps growing (infinite-mean laws)
  long long nonfinite_draws = 0;
  // (sample count, running estimate) checkpoints, for divergence reporting.
  std::vector<std::pair<long long, double>> trajectory;
};

/// Monte-Carlo estimate of (1/2)(ln mean(q) - mean(ln q)).
GapEstimate gap_monte_carlo(const SideInfoDistribution& dist, long long samples,
                            std::uint64_t seed);

/// High-resolution rates under q-scaled quadratic distortion for a source
/// of differential entropy h nats: both-ends and decoder-only. Their
/// difference is exactly the closed-form penalty.
std::pair<double, double> high_resolution_rates(double source_entropy_nats,
                                                double distortion,
                                                const SideInfoDistribution& dist);

}  // namespace dsi
