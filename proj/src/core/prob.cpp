#include "core/prob.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dsi {

namespace {

constexpr double kProbSumTol = 1e-12;
constexpr double kJointMassTol = 1e-9;
// Probabilities below this are treated as exact zeros before logs.
constexpr double kProbFloor = 1e-15;

void check_probability_vector(const std::vector<double>& p, const char* name) {
  if (p.empty() || p.size() > kMaxAlphabet) {
    throw std::invalid_argument(std::string(name) + ": alphabet size " +
                                std::to_string(p.size()) +
                                " outside [1, " + std::to_string(kMaxAlphabet) + "]");
  }
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(name) + ": negative or non-finite entry");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kProbSumTol) {
    throw std::invalid_argument(std::string(name) + ": mass " + std::to_string(sum) +
                                " deviates from 1 beyond tolerance");
  }
}

}  // namespace

double xlogx(double x) {
  if (x <= kProbFloor) return 0.0;
  return x * std::log(x);
}

double entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) h -= xlogx(v);
  return h;
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
}

GroupTable::GroupTable(std::vector<std::vector<unsigned>> table)
    : table_(std::move(table)) {
  size_ = table_.size();
  if (size_ == 0 || size_ > kMaxAlphabet) {
    throw std::invalid_argument("group table: order outside [1, 256]");
  }
  for (const auto& row : table_) {
    if (row.size() != size_) {
      throw std::invalid_argument("group table: not square");
    }
    for (unsigned v : row) {
      if (v >= size_) throw std::invalid_argument("group table: entry out of range");
    }
  }
  // Identity: a two-sided unit element.
  bool found = false;
  for (unsigned e = 0; e < size_; ++e) {
    bool ok = true;
    for (unsigned a = 0; a < size_ && ok; ++a) {
      ok = table_[e][a] == a && table_[a][e] == a;
    }
    if (ok) {
      identity_ = e;
      found = true;
      break;
    }
  }
  if (!found) throw std::invalid_argument("group table: no identity element");
  // Inverses.
  inverse_.assign(size_, 0);
  for (unsigned a = 0; a < size_; ++a) {
    bool ok = false;
    for (unsigned b = 0; b < size_; ++b) {
      if (table_[a][b] == identity_ && table_[b][a] == identity_) {
        inverse_[a] = b;
        ok = true;
        break;
      }
    }
    if (!ok) throw std::invalid_argument("group table: missing inverse");
  }
  // Associativity, exhaustively.
  for (unsigned a = 0; a < size_; ++a) {
    for (unsigned b = 0; b < size_; ++b) {
      for (unsigned c = 0; c < size_; ++c) {
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]]) {
          throw std::invalid_argument("group table: operation is not associative");
        }
      }
    }
  }
}

GroupTable GroupTable::cyclic(std::size_t n) {
  std::vector<std::vector<unsigned>> t(n, std::vector<unsigned>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      t[a][b] = static_cast<unsigned>((a + b) % n);
    }
  }
  return GroupTable(std::move(t));
}

DiscreteInstance::DiscreteInstance(std::vector<double> px, std::vector<double> pq,
                                   DistortionTensor dist)
    : px_(std::move(px)), pq_(std::move(pq)), dist_(std::move(dist)) {
  check_probability_vector(px_, "p_x");
  check_probability_vector(pq_, "p_q");
  if (dist_.nx != px_.size() || dist_.nq != pq_.size()) {
    throw std::invalid_argument("distortion tensor dimensions do not match laws");
  }
  if (dist_.nxhat == 0 || dist_.nxhat > kMaxAlphabet) {
    throw std::invalid_argument("reconstruction alphabet size outside [1, 256]");
  }
  for (double v : dist_.data) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("distortion tensor has negative or non-finite entry");
    }
  }
}

Matrix DiscreteInstance::averaged_distortion() const {
  Matrix dbar(source_size(), recon_size(), 0.0);
  for (std::size_t x = 0; x < dist_.nx; ++x) {
    for (std::size_t xh = 0; xh < dist_.nxhat; ++xh) {
      double s = 0.0;
      for (std::size_t q = 0; q < dist_.nq; ++q) s += pq_[q] * dist_(x, xh, q);
      dbar(x, xh) = s;
    }
  }
  return dbar;
}

double DiscreteInstance::min_distortion() const {
  // Encoder and decoder both informed: pick the best xhat per (x, q).
  double total = 0.0;
  for (std::size_t x = 0; x < dist_.nx; ++x) {
    for (std::size_t q = 0; q < dist_.nq; ++q) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t xh = 0; xh < dist_.nxhat; ++xh) {
        best = std::min(best, dist_(x, xh, q));
      }
      total += px_[x] * pq_[q] * best;
    }
  }
  return total;
}

double DiscreteInstance::max_useful_distortion() const {
  Matrix dbar = averaged_distortion();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t xh = 0; xh < dbar.cols; ++xh) {
    double s = 0.0;
    for (std::size_t x = 0; x < dbar.rows; ++x) s += px_[x] * dbar(x, xh);
    best = std::min(best, s);
  }
  return best;
}

double mutual_information(const Matrix& joint) {
  if (joint.rows == 0 || joint.cols == 0) {
    throw std::invalid_argument("mutual information: empty joint");
  }
  double mass = 0.0;
  for (double v : joint.data) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw std::invalid_argument("mutual information: negative or non-finite entry");
    }
    mass += v;
  }
  if (std::abs(mass - 1.0) > kJointMassTol) {
    throw std::invalid_argument("mutual information: mass deviates from 1 beyond 1e-9");
  }
  std::vector<double> pa(joint.rows, 0.0), pb(joint.cols, 0.0);
  for (std::size_t i = 0; i < joint.rows; ++i) {
    for (std::size_t j = 0; j < joint.cols; ++j) {
      pa[i] += joint(i, j);
      pb[j] += joint(i, j);
    }
  }
  double info = 0.0;
  for (std::size_t i = 0; i < joint.rows; ++i) {
    for (std::size_t j = 0; j < joint.cols; ++j) {
      double p = joint(i, j);
      if (p <= kProbFloor) continue;
      info += p * std::log(p / (pa[i] * pb[j]));
    }
  }
  return std::max(info, 0.0);
}

double expected_distortion(const DiscreteInstance& instance,
                           const Matrix& channel, Conditioning mode) {
  const std::size_t nx = instance.source_size();
  const std::size_t nxh = instance.recon_size();
  const std::size_t nq = instance.side_size();
  if (channel.cols != nxh) {
    throw std::invalid_argument("expected distortion: channel output dimension mismatch");
  }
  double total = 0.0;
  if (mode == Conditioning::SourceOnly) {
    if (channel.rows != nx) {
      throw std::invalid_argument("expected distortion: channel row dimension mismatch");
    }
    Matrix dbar = instance.averaged_distortion();
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t xh = 0; xh < nxh; ++xh) {
        total += instance.px(x) * channel(x, xh) * dbar(x, xh);
      }
    }
  } else {
    if (channel.rows != nx * nq) {
      throw std::invalid_argument("expected distortion: channel row dimension mismatch");
    }
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t q = 0; q < nq; ++q) {
        const double w = instance.px(x) * instance.pq(q);
        for (std::size_t xh = 0; xh < nxh; ++xh) {
          total += w * channel(x * nq + q, xh) * instance.d(x, xh, q);
        }
      }
    }
  }
  return total;
}

DistortionTensor scaled_distortion(const std::vector<double>& side_scale,
                                   const Matrix& base) {
  for (double v : side_scale) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw std::invalid_argument("scaled distortion: negative side scale");
    }
  }
  for (double v : base.data) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw std::invalid_argument("scaled distortion: negative base entry");
    }
  }
  DistortionTensor t(base.rows, base.cols, side_scale.size());
  for (std::size_t x = 0; x < base.rows; ++x) {
    for (std::size_t xh = 0; xh < base.cols; ++xh) {
      for (std::size_t q = 0; q < side_scale.size(); ++q) {
        t.at(x, xh, q) = side_scale[q] * base(x, xh);
      }
    }
  }
  return t;
}

DistortionTensor group_difference_distortion(const GroupTable& group,
                                             const Matrix& profile) {
  const std::size_t n = group.size();
  if (profile.rows != n) {
    throw std::invalid_argument("group distortion: profile rows must equal group order");
  }
  for (double v : profile.data) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw std::invalid_argument("group distortion: negative profile entry");
    }
  }
  DistortionTensor t(n, n, profile.cols);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t xh = 0; xh < n; ++xh) {
      const unsigned z = group.difference(static_cast<unsigned>(x),
                                          static_cast<unsigned>(xh));
      for (std::size_t q = 0; q < profile.cols; ++q) {
        t.at(x, xh, q) = profile(z, q);
      }
    }
  }
  return t;
}

void split_scaled_distortion(const DistortionTensor& dist,
                             std::vector<double>* side_scale, Matrix* base) {
  // Reference side value: the one with the largest sup-norm slice.
  std::size_t qref = 0;
  double best = -1.0;
  for (std::size_t q = 0; q < dist.nq; ++q) {
    double m = 0.0;
    for (std::size_t x = 0; x < dist.nx; ++x) {
      for (std::size_t xh = 0; xh < dist.nxhat; ++xh) {
        m = std::max(m, dist(x, xh, q));
      }
    }
    if (m > best) {
      best = m;
      qref = q;
    }
  }
  if (best <= 0.0) {
    // All-zero tensor factors trivially.
    if (side_scale) side_scale->assign(dist.nq, 0.0);
    if (base) *base = Matrix(dist.nx, dist.nxhat, 0.0);
    return;
  }
  Matrix b(dist.nx, dist.nxhat);
  for (std::size_t x = 0; x < dist.nx; ++x) {
    for (std::size_t xh = 0; xh < dist.nxhat; ++xh) {
      b(x, xh) = dist(x, xh, qref);
    }
  }
  std::vector<double> s(dist.nq, 0.0);
  for (std::size_t q = 0; q < dist.nq; ++q) {
    // Least-squares scalar for this slice, then verify proportionality.
    double num = 0.0, den = 0.0;
    for (std::size_t x = 0; x < dist.nx; ++x) {
      for (std::size_t xh = 0; xh < dist.nxhat; ++xh) {
        num += dist(x, xh, q) * b(x, xh);
        den += b(x, xh) * b(x, xh);
      }
    }
    s[q] = den > 0.0 ? num / den : 0.0;
    for (std::size_t x = 0; x < dist.nx; ++x) {
      for (std::size_t xh = 0; xh < dist.nxhat; ++xh) {
        const double expect = s[q] * b(x, xh);
        if (std::abs(dist(x, xh, q) - expect) > 1e-9 * std::max(1.0, best)) {
          throw std::invalid_argument(
              "distortion tensor is not separable as side_scale(q) * base(x, xhat)");
        }
      }
    }
  }
  if (side_scale) *side_scale = std::move(s);
  if (base) *base = std::move(b);
}

bool is_group_difference_distortion(const DistortionTensor& dist,
                                    const GroupTable& group, double tol) {
  if (dist.nx != group.size() || dist.nxhat != group.size()) return false;
  const unsigned e = group.identity();
  for (std::size_t x = 0; x < dist.nx; ++x) {
    for (std::size_t xh = 0; xh < dist.nxhat; ++xh) {
      const unsigned z = group.difference(static_cast<unsigned>(x),
                                          static_cast<unsigned>(xh));
      for (std::size_t q = 0; q < dist.nq; ++q) {
        // profile(z, q) is the distortion of reconstructing identity as z.
        if (std::abs(dist(x, xh, q) - dist(z, e, q)) > tol) return false;
      }
    }
  }
  return true;
}

}  // namespace dsi
