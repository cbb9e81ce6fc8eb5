#include "core/penalty_check.hpp"

#include <cmath>
#include <stdexcept>

namespace dsi {

double TwoAtomSide::mean_log() const {
  return (1.0 - prob1) * std::log(value0) + prob1 * std::log(value1);
}

double TwoAtomSide::gap_closed_form() const {
  return 0.5 * (std::log(mean()) - mean_log());
}

DiscreteInstance make_quantized_gaussian_instance(std::size_t grid_points,
                                                  double span_sigmas,
                                                  const TwoAtomSide& side) {
  if (grid_points < 2) throw std::invalid_argument("penalty check: need at least 2 grid points");
  if (!(side.value0 > 0.0) || !(side.value1 > 0.0)) {
    throw std::invalid_argument("penalty check: atoms must be positive");
  }
  if (!(side.prob1 >= 0.0 && side.prob1 <= 1.0)) {
    throw std::invalid_argument("penalty check: prob1 must lie in [0, 1]");
  }
  std::vector<double> grid(grid_points);
  const double step = 2.0 * span_sigmas / static_cast<double>(grid_points - 1);
  for (std::size_t i = 0; i < grid_points; ++i) {
    grid[i] = -span_sigmas + step * static_cast<double>(i);
  }
  std::vector<double> px(grid_points);
  double z = 0.0;
  for (std::size_t i = 0; i < grid_points; ++i) {
    px[i] = std::exp(-0.5 * grid[i] * grid[i]);
    z += px[i];
  }
  for (auto& p : px) p /= z;
  // Renormalize exactly; the validation tolerance is tight.
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < grid_points; ++i) s += px[i];
  px[grid_points - 1] = 1.0 - s;

  DistortionTensor dist(grid_points, grid_points, 2);
  for (std::size_t x = 0; x < grid_points; ++x) {
    for (std::size_t xh = 0; xh < grid_points; ++xh) {
      const double se = (grid[x] - grid[xh]) * (grid[x] - grid[xh]);
      dist.at(x, xh, 0) = side.value0 * se;
      dist.at(x, xh, 1) = side.value1 * se;
    }
  }
  return DiscreteInstance(std::move(px), {1.0 - side.prob1, side.prob1},
                          std::move(dist));
}

PenaltyCheckResult penalty_empirical_check(const TwoAtomSide& side,
                                           const PenaltyCheckConfig& config) {
  PenaltyCheckResult res;
  res.closed_form_gap = side.gap_closed_form();
  const DiscreteInstance instance = make_quantized_gaussian_instance(
      config.grid_points, config.span_sigmas, side);

  const ScenarioResult none = solve_scenario(instance, Scenario::None, config.solver);
  const ScenarioResult both = solve_scenario(instance, Scenario::Both, config.solver);

  const double grid_step =
      2.0 * config.span_sigmas / static_cast<double>(config.grid_points - 1);
  for (double target : config.target_distortions) {
    if (!curve_distortion_in_range(none.points, target) ||
        !curve_distortion_in_range(both.points, target)) {
      throw std::invalid_argument(
          "penalty check: target distortion outside the swept range; widen the slope grid");
    }
    res.distortions.push_back(target);
    res.measured_gaps.push_back(curve_rate_at(none.points, target) -
                                curve_rate_at(both.points, target));
    // Discretization dominates once the finest branch's squared error
    // comes within a small factor of the quantization floor step^2 / 12.
    const double floor_scale = grid_step * grid_step / 3.0;
    if (target / std::max(side.value1, side.value0) < floor_scale) {
      res.grid_resolution_warning = true;
    }
  }
  for (std::size_t i = 0; i + 1 < res.measured_gaps.size(); ++i) {
    if (res.measured_gaps[i + 1] < res.measured_gaps[i]) {
      res.monotone_increasing = false;
    }
  }
  if (!res.measured_gaps.empty()) {
    res.final_error = std::abs(res.measured_gaps.back() - res.closed_form_gap);
  }
  return res;
}

}  // namespace dsi
