#include "core/side_info.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dsi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEulerGamma = 0.5772156649015328606;
constexpr double kPi = 3.141592653589793238;

double lgamma_local(double x) { return std::lgamma(x); }

// Marsaglia-Tsang gamma(shape, 1) sampler; shape < 1 handled by boosting.
double sample_gamma_shape(Rng& rng, double shape) {
  if (shape < 1.0) {
    const double u = rng.next_unit();
    return sample_gamma_shape(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.next_gaussian();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_unit();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double digamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("digamma: requires x > 0");
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // ln x - 1/(2x) - sum B_2n / (2n x^(2n))
  double series = std::log(x) - 0.5 * inv;
  series -= inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 -
            inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
  return acc + series;
}

const char* to_string(SideFamily f) {
  switch (f) {
    case SideFamily::Exponential: return "exponential";
    case SideFamily::Uniform01: return "uniform";
    case SideFamily::Lognormal: return "lognormal";
    case SideFamily::Pareto: return "pareto";
    case SideFamily::Gamma: return "gamma";
    case SideFamily::Pathological: return "pathological";
    case SideFamily::PositiveCauchy: return "positive_cauchy";
  }
  return "?";
}

SideInfoDistribution SideInfoDistribution::exponential(double tau) {
  return {SideFamily::Exponential, tau, 0.0};
}
SideInfoDistribution SideInfoDistribution::uniform01() {
  return {SideFamily::Uniform01, 0.0, 0.0};
}
SideInfoDistribution SideInfoDistribution::lognormal(double m, double q2) {
  return {SideFamily::Lognormal, m, q2};
}
SideInfoDistribution SideInfoDistribution::pareto(double a, double b) {
  return {SideFamily::Pareto, a, b};
}
SideInfoDistribution SideInfoDistribution::gamma(double a, double b) {
  return {SideFamily::Gamma, a, b};
}
SideInfoDistribution SideInfoDistribution::pathological(double eps) {
  return {SideFamily::Pathological, eps, 0.0};
}
SideInfoDistribution SideInfoDistribution::positive_cauchy() {
  return {SideFamily::PositiveCauchy, 0.0, 0.0};
}

void SideInfoDistribution::validate() const {
  switch (family) {
    case SideFamily::Exponential:
      if (!(param1 > 0.0)) throw std::invalid_argument("exponential: tau > 0 required");
      break;
    case SideFamily::Uniform01:
    case SideFamily::PositiveCauchy:
      break;
    case SideFamily::Lognormal:
      if (!(param2 > 0.0)) throw std::invalid_argument("lognormal: Q^2 > 0 required");
      break;
    case SideFamily::Pareto:
      // a <= 1 keeps a valid density; the mean (and the penalty) diverges.
      if (!(param1 > 0.0) || !(param2 > 0.0)) {
        throw std::invalid_argument("pareto: a > 0 and b > 0 required");
      }
      break;
    case SideFamily::Gamma:
      if (!(param1 > 0.0) || !(param2 > 0.0)) {
        throw std::invalid_argument("gamma: a > 0 and b > 0 required");
      }
      break;
    case SideFamily::Pathological:
      if (!(param1 > 0.0 && param1 < 1.0)) {
        throw std::invalid_argument("pathological: eps in (0, 1) required");
      }
      break;
  }
}

std::string SideInfoDistribution::params_label() const {
  std::ostringstream os;
  switch (family) {
    case SideFamily::Exponential: os << "tau=" << param1; break;
    case SideFamily::Uniform01: os << "-"; break;
    case SideFamily::Lognormal: os << "M=" << param1 << ";Q2=" << param2; break;
    case SideFamily::Pareto: os << "a=" << param1 << ";b=" << param2; break;
    case SideFamily::Gamma: os << "a=" << param1 << ";b=" << param2; break;
    case SideFamily::Pathological: os << "eps=" << param1; break;
    case SideFamily::PositiveCauchy: os << "-"; break;
  }
  return os.str();
}

double SideInfoDistribution::mean() const {
  switch (family) {
    case SideFamily::Exponential: return 1.0 / param1;
    case SideFamily::Uniform01: return 0.5;
    case SideFamily::Lognormal: return std::exp(param1 + 0.5 * param2);
    case SideFamily::Pareto:
      return param1 > 1.0 ? param1 * param2 / (param1 - 1.0) : kInf;
    case SideFamily::Gamma: return param1 / param2;
    case SideFamily::Pathological:
      return 1.0 + param1 - param1 * param1;  // (1-eps) eps + eps (1/eps)
    case SideFamily::PositiveCauchy: return kInf;
  }
  return kInf;
}

double SideInfoDistribution::mean_log() const {
  switch (family) {
    case SideFamily::Exponential: return -kEulerGamma - std::log(param1);
    case SideFamily::Uniform01: return -1.0;
    case SideFamily::Lognormal: return param1;
    case SideFamily::Pareto: return std::log(param2) + 1.0 / param1;
    case SideFamily::Gamma: return digamma(param1) - std::log(param2);
    case SideFamily::Pathological:
      return (1.0 - 2.0 * param1) * std::log(param1);
    case SideFamily::PositiveCauchy: return 0.0;  // symmetry of ln q under q -> 1/q
  }
  return 0.0;
}

double SideInfoDistribution::gap_closed_form() const {
  validate();
  switch (family) {
    case SideFamily::Exponential:
      return 0.5 * kEulerGamma;
    case SideFamily::Uniform01:
      return 0.5 * (1.0 - std::log(2.0));
    case SideFamily::Lognormal:
      return param2 / 4.0;
    case SideFamily::Pareto:
      if (param1 <= 1.0) return kInf;  // divergent mean, reported as such
      return 0.5 * (std::log(param1 / (param1 - 1.0)) - 1.0 / param1);
    case SideFamily::Gamma:
      return 0.5 * (std::log(param1) - digamma(param1));
    case SideFamily::Pathological: {
      const double eps = param1;
      return 0.5 * std::log(1.0 + eps - eps * eps) -
             0.5 * (1.0 - 2.0 * eps) * std::log(eps);
    }
    case SideFamily::PositiveCauchy:
      return kInf;
  }
  return kInf;
}

double SideInfoDistribution::density(double q) const {
  switch (family) {
    case SideFamily::Exponential:
      return q < 0.0 ? 0.0 : param1 * std::exp(-q * param1);
    case SideFamily::Uniform01:
      return (q >= 0.0 && q <= 1.0) ? 1.0 : 0.0;
    case SideFamily::Lognormal: {
      if (q <= 0.0) return 0.0;
      const double z = std::log(q) - param1;
      return std::exp(-z * z / (2.0 * param2)) / (q * std::sqrt(2.0 * kPi * param2));
    }
    case SideFamily::Pareto:
      if (q < param2) return 0.0;
      return param1 * std::pow(param2, param1) / std::pow(q, param1 + 1.0);
    case SideFamily::Gamma: {
      if (q <= 0.0) return 0.0;
      const double a = param1, b = param2;
      return std::exp(std::log(b) + (a - 1.0) * std::log(b * q) - b * q - lgamma_local(a));
    }
    case SideFamily::Pathological:
      throw std::domain_error("pathological law is atomic; it has no density");
    case SideFamily::PositiveCauchy:
      return q < 0.0 ? 0.0 : (2.0 / kPi) / (1.0 + q * q);
  }
  return 0.0;
}

double SideInfoDistribution::sample(Rng& rng) const {
  switch (family) {
    case SideFamily::Exponential:
      return rng.next_exponential() / param1;
    case SideFamily::Uniform01:
      return rng.next_unit();
    case SideFamily::Lognormal:
      return std::exp(param1 + std::sqrt(param2) * rng.next_gaussian());
    case SideFamily::Pareto:
      return param2 * std::pow(rng.next_unit(), -1.0 / param1);
    case SideFamily::Gamma:
      return sample_gamma_shape(rng, param1) / param2;
    case SideFamily::Pathological:
      return rng.next_unit() < 1.0 - param1 ? param1 : 1.0 / param1;
    case SideFamily::PositiveCauchy:
      return std::tan(0.5 * kPi * rng.next_unit());
  }
  return 0.0;
}

GapEstimate gap_monte_carlo(const SideInfoDistribution& dist, long long samples,
                            std::uint64_t seed) {
  dist.validate();
  if (samples < 1) throw std::invalid_argument("monte carlo: need at least one sample");
  GapEstimate out;
  out.samples = samples;
  out.seed = seed;
  Rng rng(seed, static_cast<std::uint64_t>(dist.family));

  double sum_q = 0.0, sum_log = 0.0, sum_q2 = 0.0, sum_log2 = 0.0, sum_qlog = 0.0;
  double max_q = 0.0;
  long long checkpoint = std::max<long long>(samples / 64, 1);
  for (long long i = 1; i <= samples; ++i) {
    const double q = dist.sample(rng);
    const double lq = std::log(q);
    if (!std::isfinite(q) || !std::isfinite(lq)) {
      ++out.nonfinite_draws;
      continue;
    }
    sum_q += q;
    sum_log += lq;
    sum_q2 += q * q;
    sum_log2 += lq * lq;
    sum_qlog += q * lq;
    max_q = std::max(max_q, q);
    if (i % checkpoint == 0 || i == samples) {
      const double n = static_cast<double>(i - out.nonfinite_draws);
      out.trajectory.emplace_back(i, 0.5 * (std::log(sum_q / n) - sum_log / n));
    }
  }
  const double n = static_cast<double>(samples - out.nonfinite_draws);
  const double m1 = sum_q / n;
  const double m2 = sum_log / n;
  out.estimate = 0.5 * (std::log(m1) - m2);
  // Delta method on g(m1, m2) = (ln m1 - m2) / 2.
  const double var_q = std::max(sum_q2 / n - m1 * m1, 0.0);
  const double var_log = std::max(sum_log2 / n - m2 * m2, 0.0);
  const double cov = sum_qlog / n - m1 * m2;
  const double var_g =
      0.25 * (var_q / (m1 * m1) + var_log - 2.0 * cov / m1) / n;
  out.std_error = std::sqrt(std::max(var_g, 0.0));

  // Infinite-mean diagnostic: when E[q] diverges the largest single draw
  // carries a non-vanishing share of the whole sum, so ln(mean) never
  // settles. Comfortably finite-mean laws sit orders of magnitude below
  // this threshold at any realistic sample size.
  out.diverging = max_q > 0.02 * sum_q;
  return out;
}

std::pair<double, double> high_resolution_rates(double source_entropy_nats,
                                                double distortion,
                                                const SideInfoDistribution& dist) {
  dist.validate();
  if (!(distortion > 0.0)) throw std::invalid_argument("high-resolution rates: D > 0 required");
  const double base = source_entropy_nats -
                      0.5 * std::log(2.0 * kPi * std::exp(1.0) * distortion);
  const double mlog = dist.mean_log();
  const double m = dist.mean();
  const double r_both = base + 0.5 * mlog;
  const double r_dec = m == kInf ? kInf : base + 0.5 * std::log(m);
  return {r_both, r_dec};
}

}  // namespace dsi
