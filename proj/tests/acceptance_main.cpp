// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Each check pins its tolerance in code; no thresholds are configurable.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "core/experiment.hpp"
#include "core/gf2m.hpp"
#include "core/mds.hpp"
#include "core/penalty_check.hpp"
#include "core/prob.hpp"
#include "core/rd_solver.hpp"
#include "core/rng.hpp"
#include "core/side_info.hpp"
#include "core/transform_scheme.hpp"

using namespace dsi;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("criterion %2d %s  %s\n", criterion, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

Matrix hamming(std::size_t n) {
  Matrix m(n, n, 1.0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 0.0;
  return m;
}

std::vector<double> uniform_law(std::size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

// ---- criterion 1: encoder-side equality on group instances ----

void criterion1() {
  const auto start = std::chrono::steady_clock::now();
  SolverConfig cfg;  // default 32-slope sweep
  double worst_gap = 0.0, worst_leak = 0.0;

  Matrix profile2(2, 2, 0.0);
  profile2(1, 0) = 1.0;
  profile2(1, 1) = 2.0;
  const GroupTable z2 = GroupTable::cyclic(2);
  const DiscreteInstance inst2(uniform_law(2), {0.5, 0.5},
                               group_difference_distortion(z2, profile2));
  const EqualityReport rep2 = check_theorem1(inst2, z2, cfg);

  Matrix profile4(4, 2);
  for (int z = 0; z < 4; ++z) {
    const double wrap = std::min(z, 4 - z);
    profile4(z, 0) = wrap * wrap;
    profile4(z, 1) = 2.0 * wrap * wrap;
  }
  const GroupTable z4 = GroupTable::cyclic(4);
  const DiscreteInstance inst4(uniform_law(4), {0.5, 0.5},
                               group_difference_distortion(z4, profile4));
  const EqualityReport rep4 = check_theorem1(inst4, z4, cfg);

  worst_gap = std::max(rep2.max_gap, rep4.max_gap);
  worst_leak = std::max(rep2.max_side_leakage, rep4.max_side_leakage);
  const double elapsed = seconds_since(start);
  const bool pass = worst_gap <= 1e-3 && worst_leak <= 1e-4 && elapsed <= 60.0;
  report(1, pass,
         fmt("R_ENC vs R_BOTH on order-2/4 groups: max gap %.3g nats (<= 1e-3), "
             "max I(xhat;q) %.3g nats (<= 1e-4), %.1f s (<= 60)",
             worst_gap, worst_leak, elapsed));
}

// ---- criterion 2: decoder-side equality on scaled instances ----

void criterion2() {
  const auto start = std::chrono::steady_clock::now();
  SolverConfig cfg;  // 8 restarts per slope by default
  const DiscreteInstance binary(uniform_law(2), {0.5, 0.5},
                                scaled_distortion({1.0, 3.0}, hamming(2)));
  const EqualityReport repb = check_theorem3(binary, cfg);

  Matrix sq(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double diff = std::abs(i - j);
      const double wrap = std::min(diff, 4.0 - diff);
      sq(i, j) = wrap * wrap;
    }
  }
  const DiscreteInstance quaternary(uniform_law(4), {0.5, 0.5},
                                    scaled_distortion({0.5, 2.0}, sq));
  const EqualityReport repq = check_theorem3(quaternary, cfg);

  const double worst = std::max(repb.max_gap, repq.max_gap);
  const bool recon_ok = repb.recon_constant_in_side && repq.recon_constant_in_side;
  const double elapsed = seconds_since(start);
  const bool pass = worst <= 1e-3 && recon_ok && elapsed <= 120.0;
  report(2, pass,
         fmt("R_DEC vs R_NONE on binary/4-ary scaled instances: max gap %.3g nats "
             "(<= 1e-3), recon q-free %s, %.1f s (<= 120)",
             worst, recon_ok ? "yes" : "NO", elapsed));
}

// ---- criterion 3: scenario ordering on randomized instances ----

void criterion3() {
  Rng rng(20250808, 0);
  SolverConfig cfg;
  // The 1e-6 slack needs the solvers converged well past their default
  // stopping rule; these instances are tiny, so tighten generously.
  cfg.rel_tolerance = 1e-11;
  cfg.max_iterations = 50000;
  double worst = -1e9;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t nx = 2 + static_cast<std::size_t>(rng.next_below(3));
    const std::size_t nxh = 2 + static_cast<std::size_t>(rng.next_below(3));
    const std::size_t nq = 2 + static_cast<std::size_t>(rng.next_below(2));
    std::vector<double> px(nx), pq(nq);
    double zx = 0.0, zq = 0.0;
    for (auto& v : px) zx += v = rng.next_exponential();
    for (auto& v : pq) zq += v = rng.next_exponential();
    for (auto& v : px) v /= zx;
    for (auto& v : pq) v /= zq;
    double sx = 0.0, sq = 0.0;
    for (std::size_t i = 0; i + 1 < nx; ++i) sx += px[i];
    for (std::size_t i = 0; i + 1 < nq; ++i) sq += pq[i];
    px[nx - 1] = 1.0 - sx;
    pq[nq - 1] = 1.0 - sq;
    DistortionTensor d(nx, nxh, nq);
    for (auto& v : d.data) v = 2.0 * rng.next_unit();
    const DiscreteInstance inst(px, pq, d);

    const ScenarioResult none = solve_scenario(inst, Scenario::None, cfg);
    const ScenarioResult both = solve_scenario(inst, Scenario::Both, cfg);
    const ScenarioResult enc = solve_scenario(inst, Scenario::Enc, cfg);
    const ScenarioResult dec = solve_scenario(inst, Scenario::Dec, cfg);
    worst = std::max(worst, max_ordering_violation(both.points, enc.points));
    worst = std::max(worst, max_ordering_violation(enc.points, none.points));
    worst = std::max(worst, max_ordering_violation(both.points, dec.points));
    worst = std::max(worst, max_ordering_violation(dec.points, none.points));
  }
  report(3, worst <= 1e-6,
         fmt("ordering BOTH <= ENC <= NONE and BOTH <= DEC <= NONE on 20 random "
             "instances: worst violation %.3g nats (<= 1e-6)",
             worst));
}

// ---- criterion 4: the lossless interpolation coder ----

void criterion4() {
  const GaloisField field(3);
  const auto points = default_eval_points(field, 7);
  Rng rng(424242, 0);
  std::size_t mismatches = 0;
  bool payload_ok = true;
  for (int trial = 0; trial < 10000; ++trial) {
    MaskedBlock block;
    block.symbols.resize(7);
    block.mask.assign(7, 0);
    for (auto& s : block.symbols) s = static_cast<unsigned>(rng.next_below(8));
    std::size_t placed = 0;
    while (placed < 5) {
      const std::size_t i = static_cast<std::size_t>(rng.next_below(7));
      if (!block.mask[i]) {
        block.mask[i] = 1;
        ++placed;
      }
    }
    const FieldPolynomial poly = mds_encode(field, block, points);
    payload_ok = payload_ok && poly.coefficients.size() * field.bits() == 15 &&
                 pack_coefficients(field, poly).size() == 2;
    const auto recon = mds_reconstruct(field, poly, points);
    for (std::size_t i = 0; i < 7; ++i) {
      if (block.mask[i] && recon[i] != block.symbols[i]) ++mismatches;
    }
  }
  const MdsRateReport rates = mds_rate_report(7, 5, 3);
  const bool rates_ok = rates.ignore_bits == 21.0 && rates.scheme_bits == 15.0 &&
                        std::abs(rates.tell_decoder_bits - 21.0418) <= 1e-3;
  const bool pass = mismatches == 0 && payload_ok && rates_ok;
  report(4, pass,
         fmt("(7,5) coder over GF(8), 10^4 blocks: %zu relevant mismatches (= 0), "
             "payload 15 bits vs 21 ignore / %.4f tell-decoder",
             mismatches, rates.tell_decoder_bits));
}

// ---- criterion 5: band-limited interpolation quantizer ----

void criterion5() {
  DftSchemeConfig cfg;
  cfg.n = 64;
  cfg.k = 16;
  cfg.rate_bits = 8.0;
  cfg.trials = 100000;
  cfg.seed = 1;
  cfg.jobs = 0;
  const DftSchemeResult masked = run_dft_scheme(cfg, false);

  DftSchemeConfig full = cfg;
  full.k = 64;
  full.trials = 2000;
  const DftSchemeResult unitary = run_dft_scheme(full, true);
  double worst_eq = 0.0;
  for (const auto& row : unitary.rows) {
    worst_eq = std::max(worst_eq, std::abs(row.dist_important - row.dist_coeff));
  }
  const bool pass = masked.contraction_violations == 0 && worst_eq <= 1e-12;
  report(5, pass,
         fmt("n=64 k=16, 10^5 blocks: %zu contraction violations (= 0, max excess "
             "%.3g); k=n energy match within %.3g (<= 1e-12)",
             masked.contraction_violations, masked.max_contraction_excess, worst_eq));
}

// ---- criterion 6: two-stage quantizer vs the informed baseline ----

void criterion6() {
  const Preset* preset = find_preset("two-stage-64-32");
  RunOptions opts;
  opts.out_dir = "acceptance_artifacts/two_stage";
  opts.jobs = 0;
  const RunOutcome out = run_experiment(preset->config, opts);
  const auto& rows = out.summary["results"];
  const double first_deficit = rows[0]["deficit_db"].get<double>();
  bool monotone = true;
  double prev = 1e300;
  std::string trail;
  for (const auto& row : rows) {
    const double excess = row["excess_dist_important"].get<double>();
    monotone = monotone && excess <= prev;
    prev = excess;
    trail += fmt("%.2e ", excess);
  }
  const bool pass = first_deficit <= 1.25 && monotone && out.passed;
  report(6, pass,
         fmt("two-stage (4,8)->(6,10)->(8,12), 10^4 blocks: deficit %.3f dB "
             "(<= 1.25), informed-baseline excess %s monotone %s",
             first_deficit, trail.c_str(), monotone ? "yes" : "NO"));
}

// ---- criterion 7: the rate-penalty table ----

void criterion7() {
  const auto start = std::chrono::steady_clock::now();
  const Preset* preset = find_preset("rate-gap-table");
  RunOptions opts;
  opts.out_dir = "acceptance_artifacts/rate_gap";
  opts.jobs = 0;
  const RunOutcome out = run_experiment(preset->config, opts);

  bool uniform_ok = false, lognormal_ok = false, pareto_ok = false;
  bool pathological_ok = false, cauchy_ok = false, exponential_ok = false;
  bool mc_ok = true;
  for (const auto& row : out.summary["rows"]) {
    const std::string family = row["family"];
    const double closed = row["gap_closed_nats"].get<double>();
    if (family == "uniform") {
      uniform_ok = std::abs(closed - 0.1534) <= 5e-4;
    } else if (family == "lognormal") {
      lognormal_ok = closed == 1.0 / 4.0;  // Q^2 / 4 with Q^2 = 1, exact
    } else if (family == "pareto") {
      const double a = 3.0;
      pareto_ok = std::abs(closed - 0.5 * (std::log(a / (a - 1.0)) - 1.0 / a)) <= 1e-15;
    } else if (family == "pathological") {
      const double eps = 0.01;
      const double formula = 0.5 * std::log(1.0 + eps - eps * eps) -
                             0.5 * (1.0 - 2.0 * eps) * std::log(eps);
      pathological_ok = std::abs(closed - formula) <= 1e-15;
    } else if (family == "positive_cauchy") {
      cauchy_ok = std::isinf(closed) && row["diverging"].get<bool>();
    } else if (family == "exponential") {
      const double half_gamma = 0.5 * 0.5772156649015329;
      const double mc = row["gap_mc_nats"].get<double>();
      const double se = row["mc_stderr"].get<double>();
      exponential_ok = std::abs(closed - half_gamma) <= 1e-12 &&
                       std::abs(mc - half_gamma) <= 3.0 * se &&
                       row.value("documented_discrepancy", false) &&
                       std::abs(row["alternative_value_neg_half_log_euler"].get<double>() -
                                0.2748) <= 1e-3;
    }
    if (std::isfinite(closed)) {
      mc_ok = mc_ok && std::abs(row["gap_mc_nats"].get<double>() - closed) <=
                           3.0 * row["mc_stderr"].get<double>();
    }
  }
  const double elapsed = seconds_since(start);
  const bool pass = uniform_ok && lognormal_ok && pareto_ok && pathological_ok &&
                    cauchy_ok && exponential_ok && mc_ok && elapsed <= 60.0;
  report(7, pass,
         fmt("rate-penalty table, 10^6 samples: rows uniform %s lognormal %s pareto %s "
             "pathological %s cauchy-divergent %s exponential(gamma/2, flagged) %s, "
             "all finite rows within 3 sigma %s, %.1f s (<= 60)",
             uniform_ok ? "ok" : "NO", lognormal_ok ? "ok" : "NO",
             pareto_ok ? "ok" : "NO", pathological_ok ? "ok" : "NO",
             cauchy_ok ? "ok" : "NO", exponential_ok ? "ok" : "NO",
             mc_ok ? "ok" : "NO", elapsed));
}

// ---- criterion 8: high-resolution identity ----

void criterion8() {
  const std::vector<SideInfoDistribution> finite = {
      SideInfoDistribution::exponential(1.0),
      SideInfoDistribution::exponential(0.2),
      SideInfoDistribution::uniform01(),
      SideInfoDistribution::lognormal(0.0, 1.0),
      SideInfoDistribution::lognormal(1.3, 2.0),
      SideInfoDistribution::pareto(3.0, 2.0),
      SideInfoDistribution::pareto(1.5, 0.4),
      SideInfoDistribution::gamma(4.0, 1.0),
      SideInfoDistribution::gamma(0.7, 2.5),
      SideInfoDistribution::pathological(0.01),
      SideInfoDistribution::pathological(0.2),
  };
  double worst = 0.0;
  for (const auto& d : finite) {
    for (double h : {0.5, 1.4189}) {
      for (double dist : {0.3, 0.01, 1e-4}) {
        const auto [r_both, r_dec] = high_resolution_rates(h, dist, d);
        worst = std::max(worst, std::abs((r_dec - r_both) - d.gap_closed_form()));
      }
    }
  }
  report(8, worst <= 1e-12,
         fmt("R_DEC - R_BOTH equals the closed-form penalty for every finite "
             "family: max deviation %.3g (<= 1e-12)",
             worst));
}

// ---- criterion 9: oracle-measured penalty trend ----

void criterion9() {
  const Preset* preset = find_preset("penalty-check-two-atom");
  RunOptions opts;
  opts.out_dir = "acceptance_artifacts/penalty_check";
  opts.jobs = 0;
  const RunOutcome out = run_experiment(preset->config, opts);
  const double closed = out.summary["closed_form_gap_nats"].get<double>();
  const bool monotone = out.summary["monotone_increasing"].get<bool>();
  const double final_err = out.summary["final_error_nats"].get<double>();
  std::string trail;
  for (const auto& g : out.summary["measured_gaps_nats"]) {
    trail += fmt("%.4f ", g.get<double>());
  }
  const bool pass = monotone && final_err <= 0.05 &&
                    std::abs(closed - 0.3769) <= 1e-3 && out.passed;
  report(9, pass,
         fmt("two-atom (0.25, 4) on the 129-point quantized Gaussian: gaps %s-> "
             "%.4f nats, monotone %s, final error %.3f (<= 0.05)",
             trail.c_str(), closed, monotone ? "yes" : "NO", final_err));
}

// ---- criterion 10: preset determinism ----

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void criterion10() {
  bool all_equal = true;
  std::string detail;
  for (const auto& preset : presets()) {
    const fs::path dir_a = fs::path("acceptance_artifacts/det_a") / preset.name;
    const fs::path dir_b = fs::path("acceptance_artifacts/det_b") / preset.name;
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    RunOptions opts;
    opts.jobs = 0;
    opts.out_dir = dir_a.string();
    run_experiment(preset.config, opts);
    opts.out_dir = dir_b.string();
    run_experiment(preset.config, opts);

    for (const auto& entry : fs::directory_iterator(dir_a)) {
      const fs::path other = dir_b / entry.path().filename();
      if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
        all_equal = false;
        detail += preset.name + ":" + entry.path().filename().string() + " ";
      }
    }
  }
  report(10, all_equal,
         all_equal ? "every preset rerun with the same seed is byte-identical"
                   : "differing artifacts: " + detail);
}

}  // namespace

int main() {
  std::printf("acceptance suite (tolerances pinned in code)\n");
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  if (g_failures == 0) {
    std::printf("all 10 criteria passed\n");
  } else {
    std::printf("%d criteria FAILED\n", g_failures);
  }
  return g_failures;
}
