#include "core/dft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dsi {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

// In-place LU with partial pivoting; returns false on exact singularity.
bool lu_factor(std::vector<cxd>& a, std::size_t k, std::vector<std::size_t>& piv) {
  piv.resize(k);
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t best = col;
    double best_mag = std::abs(a[col * k + col]);
    for (std::size_t r = col + 1; r < k; ++r) {
      const double mag = std::abs(a[r * k + col]);
      if (mag > best_mag) {
        best_mag = mag;
        best = r;
      }
    }
    if (best_mag == 0.0) return false;
    piv[col] = best;
    if (best != col) {
      for (std::size_t j = 0; j < k; ++j) std::swap(a[col * k + j], a[best * k + j]);
    }
    const cxd d = a[col * k + col];
    for (std::size_t r = col + 1; r < k; ++r) {
      const cxd f = a[r * k + col] / d;
      a[r * k + col] = f;
      for (std::size_t j = col + 1; j < k; ++j) a[r * k + j] -= f * a[col * k + j];
    }
  }
  return true;
}

void lu_solve(const std::vector<cxd>& lu, std::size_t k,
              const std::vector<std::size_t>& piv, std::vector<cxd>& b) {
  for (std::size_t i = 0; i < k; ++i) {
    if (piv[i] != i) std::swap(b[i], b[piv[i]]);
    for (std::size_t j = 0; j < i; ++j) b[i] -= lu[i * k + j] * b[j];
  }
  for (std::size_t i = k; i-- > 0;) {
    for (std::size_t j = i + 1; j < k; ++j) b[i] -= lu[i * k + j] * b[j];
    b[i] /= lu[i * k + i];
  }
}

double one_norm(const std::vector<cxd>& a, std::size_t k) {
  double best = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < k; ++i) col += std::abs(a[i * k + j]);
    best = std::max(best, col);
  }
  return best;
}

}  // namespace

std::vector<cxd> unitary_dft(const std::vector<cxd>& x) {
  const std::size_t n = x.size();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<cxd> out(n);
  for (std::size_t f = 0; f < n; ++f) {
    cxd acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = -kTwoPi * static_cast<double>(f * t % n) / static_cast<double>(n);
      acc += x[t] * cxd(std::cos(ang), std::sin(ang));
    }
    out[f] = acc * scale;
  }
  return out;
}

std::vector<cxd> unitary_idft(const std::vector<cxd>& coeffs) {
  return unitary_idft_padded(coeffs, coeffs.size());
}

std::vector<cxd> unitary_idft_padded(const std::vector<cxd>& coeffs, std::size_t n) {
  if (coeffs.size() > n) throw std::invalid_argument("idft: more coefficients than samples");
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<cxd> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    cxd acc = 0.0;
    for (std::size_t f = 0; f < coeffs.size(); ++f) {
      const double ang = kTwoPi * static_cast<double>(f * t % n) / static_cast<double>(n);
      acc += coeffs[f] * cxd(std::cos(ang), std::sin(ang));
    }
    out[t] = acc * scale;
  }
  return out;
}

InterpolationSystem::InterpolationSystem(std::size_t n,
                                         std::vector<std::size_t> positions,
                                         double condition_bound)
    : n_(n), positions_(std::move(positions)) {
  const std::size_t k = positions_.size();
  if (k == 0 || k > n) throw std::invalid_argument("interpolation: need 1 <= k <= n");
  for (std::size_t i = 0; i < k; ++i) {
    if (positions_[i] >= n) throw std::invalid_argument("interpolation: position out of range");
    for (std::size_t j = i + 1; j < k; ++j) {
      if (positions_[i] == positions_[j]) {
        throw std::invalid_argument("interpolation: repeated positions");
      }
    }
  }
  matrix_.resize(k * k);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t f = 0; f < k; ++f) {
      const double ang = kTwoPi * static_cast<double>(positions_[i] * f % n) /
                         static_cast<double>(n);
      matrix_[i * k + f] = scale * cxd(std::cos(ang), std::sin(ang));
    }
  }
  lu_ = matrix_;
  if (!lu_factor(lu_, k, pivot_)) {
    throw std::invalid_argument("interpolation: singular system");
  }
  // cond_1(A) = ||A||_1 * ||A^-1||_1 with the inverse formed column by column.
  std::vector<cxd> inv(k * k);
  std::vector<cxd> col(k);
  for (std::size_t j = 0; j < k; ++j) {
    std::fill(col.begin(), col.end(), cxd(0.0));
    col[j] = 1.0;
    lu_solve(lu_, k, pivot_, col);
    for (std::size_t i = 0; i < k; ++i) inv[i * k + j] = col[i];
  }
  condition_ = one_norm(matrix_, k) * one_norm(inv, k);
  if (!(condition_ <= condition_bound)) {
    std::ostringstream msg;
    msg << "interpolation: condition number " << condition_ << " exceeds bound "
        << condition_bound << " for mask positions [";
    for (std::size_t i = 0; i < k; ++i) {
      msg << positions_[i] << (i + 1 < k ? "," : "");
    }
    msg << "] with n=" << n;
    throw std::invalid_argument(msg.str());
  }
}

std::vector<cxd> InterpolationSystem::interpolate(
    const std::vector<cxd>& relevant_samples) const {
  const std::size_t k = positions_.size();
  if (relevant_samples.size() != k) {
    throw std::invalid_argument("interpolate: need exactly k samples");
  }
  std::vector<cxd> b = relevant_samples;
  lu_solve(lu_, k, pivot_, b);
  return b;
}

std::vector<cxd> InterpolationSystem::apply(const std::vector<cxd>& coeffs) const {
  const std::size_t k = positions_.size();
  if (coeffs.size() != k) throw std::invalid_argument("apply: need exactly k coefficients");
  std::vector<cxd> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    cxd acc = 0.0;
    for (std::size_t f = 0; f < k; ++f) acc += matrix_[i * k + f] * coeffs[f];
    out[i] = acc;
  }
  return out;
}

double interpolation_condition(std::size_t n, const std::vector<std::size_t>& positions) {
  InterpolationSystem sys(n, positions, std::numeric_limits<double>::infinity());
  return sys.condition_number();
}

}  // namespace dsi
