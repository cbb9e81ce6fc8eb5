#include "core/gf2m.hpp"

#include <stdexcept>

namespace dsi {

namespace {

unsigned modulus_for(unsigned m) {
  switch (m) {
    case 3: return 0xB;    // x^3 + x + 1
    case 4: return 0x13;   // x^4 + x + 1
    case 8: return 0x11D;  // x^8 + x^4 + x^3 + x^2 + 1
    default:
      throw std::invalid_argument("GaloisField: supported widths are m in {3, 4, 8}");
  }
}

}  // namespace

GaloisField::GaloisField(unsigned m) : m_(m), modulus_(modulus_for(m)) {
  const unsigned n = size();
  log_.assign(n, 0);
  exp_.assign(2 * (n - 1), 0);
  unsigned v = 1;
  for (unsigned i = 0; i < n - 1; ++i) {
    exp_[i] = static_cast<std::uint16_t>(v);
    exp_[i + n - 1] = static_cast<std::uint16_t>(v);
    log_[v] = static_cast<std::uint16_t>(i);
    v <<= 1;
    if (v & n) v ^= modulus_;
  }
  if (v != 1) {
    throw std::logic_error("GaloisField: modulus is not primitive");
  }
}

unsigned GaloisField::inv(unsigned a) const {
  if (a == 0) throw std::domain_error("GaloisField: zero has no inverse");
  return exp_[(size() - 1 - log_[a]) % (size() - 1)];
}

unsigned FieldPolynomial::evaluate(const GaloisField& f, unsigned point) const {
  unsigned acc = 0;
  for (std::size_t i = coefficients.size(); i-- > 0;) {
    acc = f.add(f.mul(acc, point), coefficients[i]);
  }
  return acc;
}

}  // namespace dsi
