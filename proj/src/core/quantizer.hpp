#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace dsi {

/// Uniform mid-rise quantizer on one real dimension, symmetric about 0,
/// levels cells over [-loading, +loading], saturating outside. With a
/// single level everything maps to 0.
class UniformQuantizer {
 public:
  UniformQuantizer(double loading, int levels);

  int levels() const { return levels_; }
  double loading() const { return loading_; }
  double step() const { return step_; }

  int index_of(double v) const;
  double value_of(int index) const;
  double quantize(double v) const { return value_of(index_of(v)); }

 private:
  double loading_ = 1.0;
  int levels_ = 1;
  double step_ = 2.0;
};

/// Overload point, in input standard deviations, minimizing the mean
/// squared error of a uniform mid-rise quantizer on a Gaussian input with
/// the given number of levels per dimension.
double gaussian_optimal_loading_factor(int levels);

/// Fixed-rate scalar quantization of complex samples: the rate in bits per
/// complex sample is split evenly between the real and imaginary parts,
/// each quantized with 2^ceil(rate/2) mid-rise levels loaded at
/// loading_factor standard deviations of the per-dimension input.
/// loading_factor 0 selects the Gaussian-optimal loading for the level
/// count.
struct ScalarQuantizerSpec {
  double rate_bits = 0.0;        // per complex sample
  double loading_factor = 4.0;   // overload point in input standard deviations
  bool bypass = false;           // pass-through; used to take quantizers out of a path

  int levels_per_dim() const {
    if (rate_bits <= 0.0) return 1;
    return 1 << static_cast<int>(std::ceil(rate_bits / 2.0));
  }
  double effective_loading_factor() const {
    return loading_factor > 0.0 ? loading_factor
                                : gaussian_optimal_loading_factor(levels_per_dim());
  }
};

/// Pair of per-dimension quantizers realizing a ScalarQuantizerSpec for a
/// complex stream with known per-dimension scale.
class ComplexQuantizer {
 public:
  ComplexQuantizer(const ScalarQuantizerSpec& spec, double sigma_per_dim);

  bool bypass() const { return bypass_; }
  std::complex<double> quantize(std::complex<double> v) const;
  // Index pair (re, im) for exact bit accounting; undefined in bypass mode.
  std::pair<int, int> encode(std::complex<double> v) const;
  std::complex<double> decode(std::pair<int, int> idx) const;

 private:
  UniformQuantizer dim_;
  bool bypass_ = false;
};

}  // namespace dsi
