#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace dsi {

using cxd = std::complex<double>;

/// Unitary DFT (1/sqrt(n) both ways). Direct O(n^2) evaluation; block
/// lengths here are small.
std::vector<cxd> unitary_dft(const std::vector<cxd>& x);
std::vector<cxd> unitary_idft(const std::vector<cxd>& coeffs);

/// Inverse DFT of coefficients zero-padded to length n (only the first
/// coeffs.size() frequencies are nonzero).
std::vector<cxd> unitary_idft_padded(const std::vector<cxd>& coeffs, std::size_t n);

/// The k x k map between the k lowest DFT coefficients and the samples at
/// k chosen positions: A[i][f] = exp(2 pi i t_i f / n) / sqrt(n).
/// A is a submatrix of a unitary matrix, hence a contraction; it is always
/// invertible for distinct positions, but construction rejects systems
/// whose 1-norm condition number exceeds the bound.
class InterpolationSystem {
 public:
  InterpolationSystem(std::size_t n, std::vector<std::size_t> positions,
                      double condition_bound = 1e6);

  std::size_t block_length() const { return n_; }
  std::size_t coefficient_count() const { return positions_.size(); }
  const std::vector<std::size_t>& positions() const { return positions_; }
  double condition_number() const { return condition_; }

  /// Solve A * coeffs = samples_at_positions.
  std::vector<cxd> interpolate(const std::vector<cxd>& relevant_samples) const;

  /// A * coeffs: the padded inverse DFT restricted to the positions.
  std::vector<cxd> apply(const std::vector<cxd>& coeffs) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> positions_;
  double condition_ = 0.0;
  std::vector<cxd> matrix_;          // row-major k x k
  std::vector<cxd> lu_;              // LU factors, row-major
  std::vector<std::size_t> pivot_;
};

/// Condition number (1-norm) of the system for a given mask, without the
/// construction bound; handy for ensemble calibration.
double interpolation_condition(std::size_t n, const std::vector<std::size_t>& positions);

}  // namespace dsi
