#include "core/quantizer.hpp"

#include <algorithm>
#include <stdexcept>

namespace dsi {

double gaussian_optimal_loading_factor(int levels) {
  // Classical optimal uniform symmetric quantizer supports for the unit
  // Gaussian (step * levels / 2), extended by ~0.3 sigma per octave beyond.
  static const double table[] = {1.0,    1.5956, 1.9914, 2.344,
                                 2.6816, 3.0096, 3.3312, 3.6416, 3.9424};
  if (levels <= 1) return table[0];
  int idx = 0;
  int l = levels;
  while (l > 1 && idx < 8) {
    l >>= 1;
    ++idx;
  }
  double loading = table[idx];
  while (l > 1) {
    loading += 0.3;
    l >>= 1;
  }
  return loading;
}

UniformQuantizer::UniformQuantizer(double loading, int levels)
    : loading_(loading), levels_(levels) {
  if (!(loading > 0.0)) throw std::invalid_argument("quantizer: loading must be positive");
  if (levels < 1) throw std::invalid_argument("quantizer: need at least one level");
  step_ = 2.0 * loading_ / levels_;
}

int UniformQuantizer::index_of(double v) const {
  const int idx = static_cast<int>(std::floor((v + loading_) / step_));
  return std::clamp(idx, 0, levels_ - 1);
}

double UniformQuantizer::value_of(int index) const {
  return -loading_ + (index + 0.5) * step_;
}

ComplexQuantizer::ComplexQuantizer(const ScalarQuantizerSpec& spec, double sigma_per_dim)
    : dim_(spec.effective_loading_factor() * std::max(sigma_per_dim, 1e-300),
           spec.levels_per_dim()),
      bypass_(spec.bypass) {}

std::complex<double> ComplexQuantizer::quantize(std::complex<double> v) const {
  if (bypass_) return v;
  return {dim_.quantize(v.real()), dim_.quantize(v.imag())};
}

std::pair<int, int> ComplexQuantizer::encode(std::complex<double> v) const {
  return {dim_.index_of(v.real()), dim_.index_of(v.imag())};
}

std::complex<double> ComplexQuantizer::decode(std::pair<int, int> idx) const {
  return {dim_.value_of(idx.first), dim_.value_of(idx.second)};
}

}  // namespace dsi
