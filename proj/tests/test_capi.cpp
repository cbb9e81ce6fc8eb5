// Exercises the public C surface end to end through the shared library.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "dsi.h"

namespace fs = std::filesystem;

namespace {

const char* kBinaryHamming = R"({
  "source_alphabet": 2, "recon_alphabet": 2, "side_alphabet": 1,
  "p_x": [0.5, 0.5], "p_q": [1.0],
  "dist": [[[0.0], [1.0]], [[1.0], [0.0]]]
})";

double binary_entropy_nats(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(dsi_status_name(DSI_OK)) == "ok");
  CHECK(std::string(dsi_status_name(DSI_ERR_CHECK_FAILED)) == "check_failed");
  CHECK(std::string(dsi_version()).size() >= 5);
}

TEST_CASE("instance parsing, dims, and round trip") {
  dsi_instance* inst = nullptr;
  REQUIRE(dsi_instance_from_json(kBinaryHamming, &inst) == DSI_OK);
  size_t nx = 0, nxh = 0, nq = 0;
  CHECK(dsi_instance_dims(inst, &nx, &nxh, &nq) == DSI_OK);
  CHECK(nx == 2);
  CHECK(nxh == 2);
  CHECK(nq == 1);

  char* text = nullptr;
  REQUIRE(dsi_instance_to_json(inst, &text) == DSI_OK);
  dsi_instance* again = nullptr;
  CHECK(dsi_instance_from_json(text, &again) == DSI_OK);
  dsi_string_free(text);
  dsi_instance_free(again);
  dsi_instance_free(inst);

  dsi_instance* bad = nullptr;
  CHECK(dsi_instance_from_json("{oops", &bad) == DSI_ERR_PARSE);
  CHECK(std::strlen(dsi_last_error_message()) > 0);
  CHECK(dsi_instance_from_json(nullptr, &bad) == DSI_ERR_INVALID_ARGUMENT);
  CHECK(dsi_instance_from_file("/no/such/file.json", &bad) == DSI_ERR_IO);
}

TEST_CASE("mutual information") {
  const double joint[] = {0.4, 0.1, 0.1, 0.4};
  double mi = 0.0;
  REQUIRE(dsi_mutual_information(joint, 2, 2, &mi) == DSI_OK);
  CHECK(mi == doctest::Approx(0.192744757).epsilon(1e-8));
  const double bad[] = {-0.5, 0.5, 0.5, 0.5};
  CHECK(dsi_mutual_information(bad, 2, 2, &mi) == DSI_ERR_INVALID_ARGUMENT);
}

TEST_CASE("solving through the C surface") {
  dsi_instance* inst = nullptr;
  REQUIRE(dsi_instance_from_json(kBinaryHamming, &inst) == DSI_OK);

  const double slopes[] = {std::log(9.0)};
  dsi_solver_options opts{};
  opts.slopes = slopes;
  opts.num_slopes = 1;
  dsi_curve* curve = nullptr;
  REQUIRE(dsi_solve(inst, DSI_SCENARIO_NONE, &opts, &curve) == DSI_OK);
  REQUIRE(dsi_curve_size(curve) == 1);
  dsi_rd_point pt{};
  REQUIRE(dsi_curve_point(curve, 0, &pt) == DSI_OK);
  CHECK(pt.distortion == doctest::Approx(0.1).epsilon(1e-5));
  CHECK(pt.rate_nats ==
        doctest::Approx(std::log(2.0) - binary_entropy_nats(0.1)).epsilon(1e-5));
  CHECK(pt.converged == 1);
  CHECK(dsi_curve_point(curve, 5, &pt) == DSI_ERR_INVALID_ARGUMENT);
  dsi_curve_free(curve);

  // Default options sweep the standard grid.
  dsi_curve* full = nullptr;
  REQUIRE(dsi_solve(inst, DSI_SCENARIO_BOTH, nullptr, &full) == DSI_OK);
  CHECK(dsi_curve_size(full) == 32);
  double rate = 0.0;
  REQUIRE(dsi_curve_rate_at(full, 0.25, &rate) == DSI_OK);
  CHECK(rate == doctest::Approx(std::log(2.0) - binary_entropy_nats(0.25)).epsilon(1e-3));
  CHECK(dsi_curve_rate_at(full, 99.0, &rate) == DSI_ERR_INVALID_ARGUMENT);
  dsi_curve_free(full);

  double lossless = 0.0;
  REQUIRE(dsi_lossless_rate(inst, DSI_SCENARIO_NONE, &lossless) == DSI_OK);
  CHECK(lossless == doctest::Approx(std::log(2.0)).epsilon(1e-9));
  CHECK(dsi_lossless_rate(inst, DSI_SCENARIO_DEC, &lossless) == DSI_ERR_UNSUPPORTED);
  CHECK(dsi_solve(inst, 17, nullptr, &full) == DSI_ERR_INVALID_ARGUMENT);

  dsi_instance_free(inst);
}

TEST_CASE("equality checks through the C surface") {
  // Uniform bit over the order-2 group, q-scaled Hamming.
  const char* group_instance = R"({
    "source_alphabet": 2, "recon_alphabet": 2, "side_alphabet": 2,
    "p_x": [0.5, 0.5], "p_q": [0.5, 0.5],
    "dist": [[[0.0, 0.0], [1.0, 2.0]], [[1.0, 2.0], [0.0, 0.0]]]
  })";
  dsi_instance* inst = nullptr;
  REQUIRE(dsi_instance_from_json(group_instance, &inst) == DSI_OK);

  const unsigned table[] = {0, 1, 1, 0};
  dsi_equality_report rep{};
  REQUIRE(dsi_check_theorem1(inst, table, nullptr, &rep) == DSI_OK);
  CHECK(rep.max_gap_nats <= 1e-3);
  CHECK(rep.max_side_leakage_nats <= 1e-4);

  dsi_solver_options fast{};
  fast.restarts = 4;
  REQUIRE(dsi_check_theorem3(inst, &fast, &rep) == DSI_OK);
  CHECK(rep.max_gap_nats <= 1e-3);
  CHECK(rep.recon_constant_in_side == 1);

  dsi_instance_free(inst);
}

TEST_CASE("erasure coder through the C surface") {
  const unsigned symbols[] = {3, 1, 4, 1, 5, 2, 6};
  const unsigned char mask[] = {1, 1, 0, 1, 1, 0, 1};
  unsigned coeffs[5] = {0};
  REQUIRE(dsi_mds_encode(3, symbols, mask, 7, 5, coeffs) == DSI_OK);
  unsigned recon[7] = {0};
  REQUIRE(dsi_mds_reconstruct(3, coeffs, 5, 7, recon) == DSI_OK);
  for (int i = 0; i < 7; ++i) {
    if (mask[i]) CHECK(recon[i] == symbols[i]);
  }
  unsigned char payload[2] = {0, 0};
  size_t len = sizeof payload;
  REQUIRE(dsi_mds_pack(3, coeffs, 5, payload, &len) == DSI_OK);
  CHECK(len == 2);

  dsi_mds_rates rates{};
  REQUIRE(dsi_mds_rate_report(7, 5, 3, &rates) == DSI_OK);
  CHECK(rates.ignore_bits == doctest::Approx(21.0));
  CHECK(rates.scheme_bits == doctest::Approx(15.0));
  CHECK(rates.tell_decoder_bits == doctest::Approx(21.0418).epsilon(1e-4));

  // Wrong mask weight is refused.
  CHECK(dsi_mds_encode(3, symbols, mask, 7, 4, coeffs) == DSI_ERR_INVALID_ARGUMENT);
  CHECK(dsi_mds_encode(5, symbols, mask, 7, 5, coeffs) == DSI_ERR_INVALID_ARGUMENT);
}

TEST_CASE("rate-gap analysis through the C surface") {
  dsi_side_distribution uniform{DSI_SIDE_UNIFORM01, 0.0, 0.0};
  double gap = 0.0;
  REQUIRE(dsi_rate_gap_closed_form(&uniform, &gap) == DSI_OK);
  CHECK(gap == doctest::Approx(0.153426).epsilon(1e-5));

  dsi_side_distribution cauchy{DSI_SIDE_POSITIVE_CAUCHY, 0.0, 0.0};
  REQUIRE(dsi_rate_gap_closed_form(&cauchy, &gap) == DSI_OK);
  CHECK(std::isinf(gap));

  dsi_gap_estimate est{};
  REQUIRE(dsi_rate_gap_monte_carlo(&uniform, 100000, 42, &est) == DSI_OK);
  CHECK(std::abs(est.estimate - 0.153426) <= 4.0 * est.std_error);
  CHECK(est.diverging == 0);

  double r_both = 0.0, r_dec = 0.0;
  REQUIRE(dsi_high_resolution_rates(1.4189, 0.01, &uniform, &r_both, &r_dec) == DSI_OK);
  CHECK(r_dec - r_both == doctest::Approx(0.5 * (1.0 - std::log(2.0))).epsilon(1e-9));

  dsi_side_distribution bad{DSI_SIDE_GAMMA, -1.0, 1.0};
  CHECK(dsi_rate_gap_closed_form(&bad, &gap) == DSI_ERR_INVALID_ARGUMENT);
  bad.family = 99;
  CHECK(dsi_rate_gap_closed_form(&bad, &gap) == DSI_ERR_INVALID_ARGUMENT);
}

TEST_CASE("preset enumeration and a preset run") {
  REQUIRE(dsi_preset_count() >= 9);
  bool found = false;
  for (size_t i = 0; i < dsi_preset_count(); ++i) {
    const char *name = nullptr, *tags = nullptr, *desc = nullptr;
    REQUIRE(dsi_preset_info(i, &name, &tags, &desc) == DSI_OK);
    if (std::string(name) == "mds-7-5-gf8") {
      found = true;
      CHECK(std::string(tags) == "2.1");
    }
  }
  CHECK(found);
  const char* name = nullptr;
  CHECK(dsi_preset_info(dsi_preset_count(), &name, nullptr, nullptr) ==
        DSI_ERR_INVALID_ARGUMENT);

  const fs::path dir = fs::temp_directory_path() / "dsi_capi_run";
  fs::remove_all(dir);
  char* summary = nullptr;
  CHECK(dsi_run_preset("no-such-preset", dir.string().c_str(), "csv", 0, 0, 1,
                       &summary) == DSI_ERR_INVALID_ARGUMENT);
  REQUIRE(dsi_run_preset("rd-curves-binary-hamming", dir.string().c_str(), "csv", 0,
                         0, 1, &summary) == DSI_OK);
  REQUIRE(summary != nullptr);
  CHECK(std::string(summary).find("curve_shape_ok") != std::string::npos);
  dsi_string_free(summary);
  CHECK(fs::exists(dir / "rd_curves.csv"));
  fs::remove_all(dir);
}
