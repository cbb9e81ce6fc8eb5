#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "core/dft.hpp"
#include "core/quantizer.hpp"
#include "core/rng.hpp"

using namespace dsi;

namespace {

double norm2(const std::vector<cxd>& v) {
  double s = 0.0;
  for (const auto& c : v) s += std::norm(c);
  return s;
}

std::vector<cxd> random_block(Rng& rng, std::size_t n) {
  std::vector<cxd> x(n);
  for (auto& v : x) v = rng.next_complex_gaussian();
  return x;
}

std::vector<std::size_t> random_positions(Rng& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> pos;
  while (pos.size() < k) {
    const std::size_t c = static_cast<std::size_t>(rng.next_below(n));
    if (std::find(pos.begin(), pos.end(), c) == pos.end()) pos.push_back(c);
  }
  std::sort(pos.begin(), pos.end());
  return pos;
}

}  // namespace

TEST_CASE("unitary transform round trip and Parseval") {
  Rng rng(41, 0);
  const auto x = random_block(rng, 16);
  const auto coeffs = unitary_dft(x);
  CHECK(norm2(coeffs) == doctest::Approx(norm2(x)).epsilon(1e-12));
  const auto back = unitary_idft(coeffs);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(std::abs(back[i] - x[i]) < 1e-12);
  }
}

TEST_CASE("n=2, k=1 system is the half-power scalar") {
  InterpolationSystem sys(2, {0});
  const std::vector<cxd> sample{cxd(1.0, -0.5)};
  const auto coeffs = sys.interpolate(sample);
  REQUIRE(coeffs.size() == 1);
  // A = 1/sqrt(2), so the coefficient is sqrt(2) times the sample.
  CHECK(std::abs(coeffs[0] - std::sqrt(2.0) * sample[0]) < 1e-12);
  CHECK(sys.condition_number() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("interpolation reproduces the relevant samples") {
  Rng rng(43, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 7, k = 5;
    const auto pos = random_positions(rng, n, k);
    InterpolationSystem sys(n, pos, 1e9);
    const auto x = random_block(rng, n);
    std::vector<cxd> rel(k);
    for (std::size_t i = 0; i < k; ++i) rel[i] = x[pos[i]];
    const auto coeffs = sys.interpolate(rel);
    const auto recon = unitary_idft_padded(coeffs, n);
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      err += std::norm(recon[pos[i]] - x[pos[i]]);
      ref += std::norm(x[pos[i]]);
    }
    CHECK(std::sqrt(err / ref) < 1e-10);
  }
}

TEST_CASE("full mask is unitary: coefficients equal the transform") {
  Rng rng(47, 0);
  const std::size_t n = 8;
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  InterpolationSystem sys(n, all);
  const auto x = random_block(rng, n);
  const auto coeffs = sys.interpolate(x);
  const auto dft = unitary_dft(x);
  for (std::size_t f = 0; f < n; ++f) CHECK(std::abs(coeffs[f] - dft[f]) < 1e-10);
  CHECK(norm2(coeffs) == doctest::Approx(norm2(x)).epsilon(1e-12));
}

TEST_CASE("submatrix contraction never amplifies coefficient error") {
  Rng rng(53, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 16, k = 6;
    const auto pos = random_positions(rng, n, k);
    InterpolationSystem sys(n, pos, 1e12);
    const auto e = random_block(rng, k);
    const auto mapped = sys.apply(e);
    CHECK(norm2(mapped) <= norm2(e) * (1.0 + 1e-12));
  }
}

TEST_CASE("ill-conditioned masks are rejected with the pattern named") {
  // Clustered positions against the lowest frequencies extrapolate badly.
  try {
    InterpolationSystem sys(
        64, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15}, 2.0);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("condition number") != std::string::npos);
    CHECK(msg.find("[0,1,2") != std::string::npos);
  }
  CHECK_THROWS_AS(InterpolationSystem(8, {1, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(InterpolationSystem(8, {9}), std::invalid_argument);
}

TEST_CASE("uniform mid-rise quantizer") {
  const UniformQuantizer q(4.0, 8);  // step 1.0 over [-4, 4]
  CHECK(q.step() == doctest::Approx(1.0));
  CHECK(q.quantize(0.2) == doctest::Approx(0.5));
  CHECK(q.quantize(-0.2) == doctest::Approx(-0.5));
  CHECK(q.quantize(3.7) == doctest::Approx(3.5));
  CHECK(q.quantize(100.0) == doctest::Approx(3.5));   // saturates
  CHECK(q.quantize(-100.0) == doctest::Approx(-3.5));
  CHECK(q.index_of(0.2) == 4);
  CHECK(q.value_of(q.index_of(-3.9)) == doctest::Approx(-3.5));

  // One level collapses everything to zero.
  const UniformQuantizer zero(4.0, 1);
  CHECK(zero.quantize(2.7) == doctest::Approx(0.0));

  CHECK_THROWS_AS(UniformQuantizer(0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(UniformQuantizer(1.0, 0), std::invalid_argument);
}

TEST_CASE("complex quantizer splits rate across dimensions") {
  ScalarQuantizerSpec spec;
  spec.rate_bits = 8.0;
  CHECK(spec.levels_per_dim() == 16);
  spec.rate_bits = 0.0;
  CHECK(spec.levels_per_dim() == 1);
  spec.rate_bits = 3.0;  // odd rates round the per-dimension level count up
  CHECK(spec.levels_per_dim() == 4);

  spec.rate_bits = 4.0;
  const ComplexQuantizer q(spec, 1.0 / std::sqrt(2.0));
  const cxd v(0.3, -0.8);
  const auto idx = q.encode(v);
  CHECK(q.decode(idx) == q.quantize(v));

  ScalarQuantizerSpec by = spec;
  by.bypass = true;
  const ComplexQuantizer pass(by, 1.0);
  CHECK(pass.quantize(v) == v);

  // Zero rate reconstructs the origin.
  ScalarQuantizerSpec zr;
  zr.rate_bits = 0.0;
  const ComplexQuantizer zq(zr, 1.0);
  CHECK(std::abs(zq.quantize(cxd(1.7, -2.3))) < 1e-12);
}

TEST_CASE("rate-matched loading grows with the level count") {
  CHECK(gaussian_optimal_loading_factor(2) == doctest::Approx(1.5956));
  CHECK(gaussian_optimal_loading_factor(4) == doctest::Approx(1.9914));
  CHECK(gaussian_optimal_loading_factor(16) == doctest::Approx(2.6816));
  CHECK(gaussian_optimal_loading_factor(256) == doctest::Approx(3.9424));
  CHECK(gaussian_optimal_loading_factor(1024) >
        gaussian_optimal_loading_factor(256));
  ScalarQuantizerSpec spec;
  spec.rate_bits = 4.0;
  spec.loading_factor = 0.0;
  CHECK(spec.effective_loading_factor() == doctest::Approx(1.9914));
}
