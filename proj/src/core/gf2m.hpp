#pragma once

#include <cstdint>
#include <vector>

namespace dsi {

/// GF(2^m) for m in {3, 4, 8}, with a fixed primitive modulus per m and
/// log/antilog tables built once at construction. Addition is xor.
class GaloisField {
 public:
  explicit GaloisField(unsigned m);

  unsigned bits() const { return m_; }
  unsigned size() const { return 1u << m_; }
  unsigned modulus() const { return modulus_; }

  unsigned add(unsigned a, unsigned b) const { return a ^ b; }
  unsigned mul(unsigned a, unsigned b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  unsigned inv(unsigned a) const;
  unsigned div(unsigned a, unsigned b) const { return mul(a, inv(b)); }

  /// alpha^i for the field generator alpha (the class of x).
  unsigned alpha_power(unsigned i) const { return exp_[i % (size() - 1)]; }

 private:
  unsigned m_ = 0;
  unsigned modulus_ = 0;
  std::vector<std::uint16_t> log_;   // index: element, value: discrete log
  std::vector<std::uint16_t> exp_;   // doubled antilog table
};

/// Polynomial over GF(2^m), coefficients in ascending degree order.
struct FieldPolynomial {
  std::vector<unsigned> coefficients;

  std::size_t degree_bound() const { return coefficients.size(); }
  unsigned evaluate(const GaloisField& f, unsigned point) const;
};

}  // namespace dsi
