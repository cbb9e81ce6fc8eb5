#include "core/mds.hpp"

#include <cmath>
#include <stdexcept>

namespace dsi {

namespace {

// p *= (x + root); field characteristic 2, so + and - coincide.
void multiply_by_linear(const GaloisField& f, std::vector<unsigned>* p, unsigned root) {
  p->push_back(0);
  for (std::size_t i = p->size(); i-- > 1;) {
    (*p)[i] = f.add((*p)[i - 1], f.mul((*p)[i], root));
  }
  (*p)[0] = f.mul((*p)[0], root);
}

// q(x) = p(x) / (x + root), exact division via synthetic steps.
std::vector<unsigned> divide_by_linear(const GaloisField& f,
                                       const std::vector<unsigned>& p, unsigned root) {
  std::vector<unsigned> q(p.size() - 1, 0);
  unsigned carry = 0;
  for (std::size_t i = p.size(); i-- > 1;) {
    carry = f.add(p[i], f.mul(carry, root));
    q[i - 1] = carry;
  }
  return q;
}

}  // namespace

std::size_t MaskedBlock::relevant_count() const {
  std::size_t k = 0;
  for (auto b : mask) k += b ? 1 : 0;
  return k;
}

std::vector<unsigned> default_eval_points(const GaloisField& field, std::size_t n) {
  if (n == 0 || n > field.size() - 1) {
    throw std::invalid_argument("eval points: need 1 <= n <= 2^m - 1");
  }
  std::vector<unsigned> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = field.alpha_power(static_cast<unsigned>(i));
  return pts;
}

FieldPolynomial mds_encode(const GaloisField& field, const MaskedBlock& block,
                           const std::vector<unsigned>& eval_points) {
  const std::size_t n = block.length();
  if (block.mask.size() != n || eval_points.size() != n) {
    throw std::invalid_argument("mds encode: mismatched block/mask/points lengths");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (block.symbols[i] >= field.size()) {
      throw std::invalid_argument("mds encode: symbol outside the field");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (eval_points[i] == eval_points[j]) {
        throw std::invalid_argument("mds encode: repeated evaluation points");
      }
    }
  }
  std::vector<unsigned> xs, ys;
  for (std::size_t i = 0; i < n; ++i) {
    if (block.mask[i]) {
      xs.push_back(eval_points[i]);
      ys.push_back(block.symbols[i]);
    }
  }
  const std::size_t k = xs.size();
  if (k == 0) throw std::invalid_argument("mds encode: mask selects no samples");

  // N(x) = prod_j (x + x_j); each Lagrange basis is N/(x + x_i) scaled.
  std::vector<unsigned> master{1};
  for (unsigned x : xs) multiply_by_linear(field, &master, x);

  std::vector<unsigned> coeffs(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<unsigned> basis = divide_by_linear(field, master, xs[i]);
    unsigned denom = 1;
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i) denom = field.mul(denom, field.add(xs[i], xs[j]));
    }
    const unsigned scale = field.div(ys[i], denom);
    for (std::size_t c = 0; c < k; ++c) {
      coeffs[c] = field.add(coeffs[c], field.mul(scale, basis[c]));
    }
  }
  return FieldPolynomial{std::move(coeffs)};
}

std::vector<unsigned> mds_reconstruct(const GaloisField& field,
                                      const FieldPolynomial& poly,
                                      const std::vector<unsigned>& eval_points) {
  std::vector<unsigned> out(eval_points.size());
  for (std::size_t i = 0; i < eval_points.size(); ++i) {
    out[i] = poly.evaluate(field, eval_points[i]);
  }
  return out;
}

std::vector<std::uint8_t> pack_coefficients(const GaloisField& field,
                                            const FieldPolynomial& poly) {
  const unsigned m = field.bits();
  const std::size_t total_bits = poly.coefficients.size() * m;
  std::vector<std::uint8_t> bytes((total_bits + 7) / 8, 0);
  std::size_t bit = 0;
  for (unsigned c : poly.coefficients) {
    for (unsigned j = m; j-- > 0; ++bit) {
      if ((c >> j) & 1u) bytes[bit / 8] |= static_cast<std::uint8_t>(0x80u >> (bit % 8));
    }
  }
  return bytes;
}

FieldPolynomial unpack_coefficients(const GaloisField& field,
                                    const std::vector<std::uint8_t>& bytes,
                                    std::size_t k) {
  const unsigned m = field.bits();
  if (bytes.size() * 8 < k * m) {
    throw std::invalid_argument("unpack: payload too short");
  }
  FieldPolynomial poly;
  poly.coefficients.assign(k, 0);
  std::size_t bit = 0;
  for (std::size_t i = 0; i < k; ++i) {
    unsigned c = 0;
    for (unsigned j = 0; j < m; ++j, ++bit) {
      c = (c << 1) | ((bytes[bit / 8] >> (7 - bit % 8)) & 1u);
    }
    poly.coefficients[i] = c;
  }
  return poly;
}

std::string bytes_to_hex(const std::vector<std::uint8_t>& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 0xF]);
  }
  return s;
}

MdsRateReport mds_rate_report(std::size_t n, std::size_t k, unsigned m) {
  if (k > n || n == 0) throw std::invalid_argument("rate report: need 0 <= k <= n, n >= 1");
  if (n > (1u << m) - 1u) {
    throw std::invalid_argument("rate report: need n <= 2^m - 1 for distinct points");
  }
  const double ratio = static_cast<double>(k) / static_cast<double>(n);
  double hb = 0.0;
  if (ratio > 0.0 && ratio < 1.0) {
    hb = -ratio * std::log2(ratio) - (1.0 - ratio) * std::log2(1.0 - ratio);
  }
  MdsRateReport rep;
  rep.ignore_bits = static_cast<double>(n * m);
  rep.tell_decoder_bits = static_cast<double>(n) * hb + static_cast<double>(k * m);
  rep.scheme_bits = static_cast<double>(k * m);
  return rep;
}

}  // namespace dsi
