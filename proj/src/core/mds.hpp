#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/gf2m.hpp"

namespace dsi {

/// n field symbols plus a binary relevance mask with exactly k ones.
struct MaskedBlock {
  std::vector<unsigned> symbols;
  std::vector<std::uint8_t> mask;

  std::size_t length() const { return symbols.size(); }
  std::size_t relevant_count() const;
};

/// The first n nonzero field elements in generator-power order:
/// alpha^0, alpha^1, ..., alpha^(n-1). Requires n <= 2^m - 1.
std::vector<unsigned> default_eval_points(const GaloisField& field, std::size_t n);

/// Fit the unique polynomial of degree <= k-1 through the k relevant
/// samples (Lagrange interpolation; equivalently erasure-only
/// Reed-Solomon decoding). The payload is its k coefficients.
FieldPolynomial mds_encode(const GaloisField& field, const MaskedBlock& block,
                           const std::vector<unsigned>& eval_points);

/// Evaluate the polynomial at every point; equals the source wherever the
/// encoding mask was 1.
std::vector<unsigned> mds_reconstruct(const GaloisField& field,
                                      const FieldPolynomial& poly,
                                      const std::vector<unsigned>& eval_points);

/// Coefficients packed m bits each in ascending degree order, big-endian
/// within bytes; exactly ceil(k*m/8) bytes carrying k*m payload bits.
std::vector<std::uint8_t> pack_coefficients(const GaloisField& field,
                                            const FieldPolynomial& poly);
FieldPolynomial unpack_coefficients(const GaloisField& field,
                                    const std::vector<std::uint8_t>& bytes,
                                    std::size_t k);

std::string bytes_to_hex(const std::vector<std::uint8_t>& bytes);

/// The three lossless rates for an (n, k) relevance pattern over GF(2^m),
/// in bits per block: send everything, send the mask then the relevant
/// symbols, or send the k fitted coefficients.
struct MdsRateReport {
  double ignore_bits = 0.0;
  double tell_decoder_bits = 0.0;
  double scheme_bits = 0.0;
};
MdsRateReport mds_rate_report(std::size_t n, std::size_t k, unsigned m);

}  // namespace dsi
