#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dsi {

// Alphabet sizes above this are rejected by DiscreteInstance; the exact
// solvers enumerate full product spaces and are meant for desk-scale inputs.
inline constexpr std::size_t kMaxAlphabet = 256;

// x * ln(x) with the continuity convention 0 ln 0 = 0.
double xlogx(double x);

// Shannon entropy of a probability vector, in nats.
double entropy(const std::vector<double>& p);

// Binary entropy H_b(p) in nats.
double binary_entropy(double p);

/// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Distortion tensor d(x, xhat, q); finite and nonnegative everywhere.
struct DistortionTensor {
  std::size_t nx = 0;
  std::size_t nxhat = 0;
  std::size_t nq = 0;
  std::vector<double> data;

  DistortionTensor() = default;
  DistortionTensor(std::size_t x, std::size_t xh, std::size_t q, double fill = 0.0)
      : nx(x), nxhat(xh), nq(q), data(x * xh * q, fill) {}

  double& at(std::size_t x, std::size_t xh, std::size_t q) {
    return data[(x * nxhat + xh) * nq + q];
  }
  double operator()(std::size_t x, std::size_t xh, std::size_t q) const {
    return data[(x * nxhat + xh) * nq + q];
  }
};

/// Finite group given by its composition table; axioms are verified
/// exhaustively at construction.
class GroupTable {
 public:
  explicit GroupTable(std::vector<std::vector<unsigned>> table);

  static GroupTable cyclic(std::size_t n);

  std::size_t size() const { return size_; }
  unsigned compose(unsigned a, unsigned b) const { return table_[a][b]; }
  unsigned inverse(unsigned a) const { return inverse_[a]; }
  unsigned identity() const { return identity_; }

  // Left-invariant difference: inverse(b) * a, so that
  // difference(g*a, g*b) == difference(a, b) for every g.
  unsigned difference(unsigned a, unsigned b) const {
    return table_[inverse_[b]][a];
  }

 private:
  std::size_t size_ = 0;
  unsigned identity_ = 0;
  std::vector<std::vector<unsigned>> table_;
  std::vector<unsigned> inverse_;
};

/// Immutable source-coding instance: alphabets, independent source and side
/// laws, and a distortion tensor d(x, xhat, q). The joint law is always
/// pX (x) pQ (q).
class DiscreteInstance {
 public:
  DiscreteInstance(std::vector<double> px, std::vector<double> pq,
                   DistortionTensor dist);

  std::size_t source_size() const { return px_.size(); }
  std::size_t recon_size() const { return dist_.nxhat; }
  std::size_t side_size() const { return pq_.size(); }

  double px(std::size_t x) const { return px_[x]; }
  double pq(std::size_t q) const { return pq_[q]; }
  const std::vector<double>& source_law() const { return px_; }
  const std::vector<double>& side_law() const { return pq_; }
  double d(std::size_t x, std::size_t xh, std::size_t q) const {
    return dist_(x, xh, q);
  }
  const DistortionTensor& distortion() const { return dist_; }

  /// dbar(x, xhat) = sum_q pQ(q) d(x, xhat, q).
  Matrix averaged_distortion() const;

  /// Smallest achievable expected distortion at unbounded rate.
  double min_distortion() const;

  /// Expected distortion of the best constant reconstruction (the D at
  /// which every rate-distortion curve of this instance reaches zero rate).
  double max_useful_distortion() const;

 private:
  std::vector<double> px_;
  std::vector<double> pq_;
  DistortionTensor dist_;
};

enum class Conditioning { SourceOnly, SourceAndSide };

/// Mutual information of a joint probability matrix, in nats.
/// Rejects negative entries and total mass deviating from 1 beyond 1e-9.
double mutual_information(const Matrix& joint);

/// E[d(x, xhat, q)] under pX x pQ and a channel whose rows are indexed by
/// x (SourceOnly) or by (x, q) flattened as x * nq + q (SourceAndSide).
double expected_distortion(const DiscreteInstance& instance,
                           const Matrix& channel, Conditioning mode);

/// dist(x, xhat, q) = side_scale(q) * base(x, xhat).
DistortionTensor scaled_distortion(const std::vector<double>& side_scale,
                                   const Matrix& base);

/// dist(x, xhat, q) = profile(difference(x, xhat), q).
DistortionTensor group_difference_distortion(const GroupTable& group,
                                             const Matrix& profile);

/// Recover (side_scale, base) from a separable tensor; throws if the tensor
/// does not factor as side_scale(q) * base(x, xhat) within relative 1e-9.
void split_scaled_distortion(const DistortionTensor& dist,
                             std::vector<double>* side_scale, Matrix* base);

/// True if dist(x, xhat, q) depends on (x, xhat) only through
/// group.difference(x, xhat).
bool is_group_difference_distortion(const DistortionTensor& dist,
                                    const GroupTable& group, double tol = 0.0);

}  // namespace dsi
