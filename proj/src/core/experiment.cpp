#include "core/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "core/instance_json.hpp"
#include "core/mds.hpp"
#include "core/parallel.hpp"
#include "core/penalty_check.hpp"
#include "core/prob.hpp"
#include "core/rd_solver.hpp"
#include "core/rng.hpp"
#include "core/side_info.hpp"
#include "core/transform_scheme.hpp"
#include "core/version.hpp"

namespace dsi {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string config_hash(const json& config) {
  const std::string dump = config.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string artifact_header(const json& config, std::uint64_t seed) {
  return std::string("# tool=dsi ") + kToolVersion +
         " config_hash=" + config_hash(config) + " seed=" + std::to_string(seed);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write artifact: " + path);
  out << content;
}

SolverConfig solver_from_json(const json& cfg) {
  SolverConfig sc;
  if (cfg.contains("slopes")) {
    const json& s = cfg["slopes"];
    if (s.is_array()) {
      sc.slope_grid = s.get<std::vector<double>>();
    } else {
      sc.slope_grid = SolverConfig::default_slopes(
          s.value("count", std::size_t{32}), s.value("min", 0.05), s.value("max", 50.0));
    }
  }
  sc.max_iterations = cfg.value("max_iterations", sc.max_iterations);
  sc.rel_tolerance = cfg.value("rel_tolerance", sc.rel_tolerance);
  sc.aux_cardinality = cfg.value("aux_cardinality", sc.aux_cardinality);
  sc.restarts = cfg.value("restarts", sc.restarts);
  sc.seed = cfg.value("seed", std::uint64_t{1});
  sc.validate();
  return sc;
}

Matrix hamming_matrix(std::size_t n) {
  Matrix m(n, n, 1.0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 0.0;
  return m;
}

Matrix squared_cyclic_matrix(std::size_t n) {
  Matrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double diff = std::abs(static_cast<double>(i) - static_cast<double>(j));
      const double wrap = std::min(diff, static_cast<double>(n) - diff);
      m(i, j) = wrap * wrap;
    }
  }
  return m;
}

std::vector<double> uniform_law(std::size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

DiscreteInstance instance_from_config(const json& cfg) {
  if (cfg.contains("instance_file")) {
    return instance_from_file(cfg["instance_file"].get<std::string>());
  }
  if (cfg.contains("instance")) {
    return instance_from_json(cfg["instance"].dump());
  }
  throw std::invalid_argument("config: needs \"instance\" or \"instance_file\"");
}

json curve_to_json(const ScenarioResult& r) {
  json pts = json::array();
  for (const auto& p : r.points) {
    pts.push_back({{"slope", p.slope},
                   {"rate_nats", p.rate},
                   {"distortion", p.distortion},
                   {"iterations", p.iterations},
                   {"converged", p.converged}});
  }
  return pts;
}

std::string curves_csv(const json& config, std::uint64_t seed,
                       const std::vector<const ScenarioResult*>& results,
                       const std::vector<std::pair<std::string, double>>& lossless = {}) {
  std::string out = artifact_header(config, seed) + "\n";
  out += "scenario,slope,rate_nats,distortion,iterations\n";
  for (const auto* r : results) {
    for (const auto& p : r->points) {
      out += std::string(to_string(r->scenario)) + "," + format_double(p.slope) + "," +
             format_double(p.rate) + "," + format_double(p.distortion) + "," +
             std::to_string(p.iterations) + "\n";
    }
  }
  for (const auto& [name, rate] : lossless) {
    out += name + ",inf," + format_double(rate) + ",0,0\n";
  }
  return out;
}

// Rows-as-JSON alternative to a CSV table, selected by --format json.
void write_table(const std::string& path_base, const RunOptions& opts,
                 const std::string& csv_text, const json& row_array,
                 const json& config, std::uint64_t seed, RunOutcome* outcome) {
  if (opts.format == "json") {
    json doc{{"tool_version", kToolVersion},
             {"config_hash", config_hash(config)},
             {"seed", seed},
             {"rows", row_array}};
    const std::string path = path_base + ".json";
    write_text_file(path, doc.dump(2) + "\n");
    outcome->files.push_back(path);
  } else {
    const std::string path = path_base + ".csv";
    write_text_file(path, csv_text);
    outcome->files.push_back(path);
  }
}

void write_report(const std::string& path, json report, const json& config,
                  std::uint64_t seed, RunOutcome* outcome) {
  report["tool_version"] = kToolVersion;
  report["config_hash"] = config_hash(config);
  report["seed"] = seed;
  write_text_file(path, report.dump(2) + "\n");
  outcome->files.push_back(path);
  outcome->summary = std::move(report);
}

// ---- rd-curves ----

RunOutcome run_rd_curves(const json& cfg, const RunOptions& opts) {
  RunOutcome out;
  const std::uint64_t seed = cfg.value("seed", std::uint64_t{1});
  const DiscreteInstance instance = instance_from_config(cfg);
  SolverConfig sc = solver_from_json(cfg);
  sc.seed = seed;

  std::vector<std::string> names =
      cfg.value("scenarios", std::vector<std::string>{"NONE", "DEC", "ENC", "BOTH"});
  std::vector<ScenarioResult> results;
  json report_curves;
  for (const auto& name : names) {
    Scenario s;
    if (name == "NONE") s = Scenario::None;
    else if (name == "DEC") s = Scenario::Dec;
    else if (name == "ENC") s = Scenario::Enc;
    else if (name == "BOTH") s = Scenario::Both;
    else throw std::invalid_argument("rd-curves: unknown scenario " + name);
    results.push_back(solve_scenario(instance, s, sc));
    report_curves[name] = curve_to_json(results.back());
  }
  std::vector<std::pair<std::string, double>> lossless;
  if (cfg.value("include_lossless", false)) {
    for (const auto& name : names) {
      if (name == "DEC") continue;
      Scenario s = name == "NONE" ? Scenario::None
                  : name == "ENC" ? Scenario::Enc
                                  : Scenario::Both;
      lossless.emplace_back(name, lossless_rate(instance, s, sc));
    }
  }

  std::vector<const ScenarioResult*> ptrs;
  json rows = json::array();
  for (const auto& r : results) {
    ptrs.push_back(&r);
    for (const auto& p : r.points) {
      rows.push_back({{"scenario", to_string(r.scenario)},
                      {"slope", p.slope},
                      {"rate_nats", p.rate},
                      {"distortion", p.distortion},
                      {"iterations", p.iterations}});
    }
  }
  write_table(opts.out_dir + "/rd_curves", opts, curves_csv(cfg, seed, ptrs, lossless),
              rows, cfg, seed, &out);

  json report{{"curves", report_curves}};
  bool shape_ok = true;
  for (const auto& r : results) {
    shape_ok = shape_ok && curve_rates_non_increasing(r.points, 1e-9) &&
               curve_is_convex(r.points, 1e-6) && r.all_converged();
  }
  report["curve_shape_ok"] = shape_ok;
  for (const auto& [name, rate] : lossless) {
    report["lossless_rate_nats"][name] = rate;
  }
  write_report(opts.out_dir + "/rd_curves_report.json", std::move(report), cfg, seed, &out);
  return out;
}

// ---- theorem checks ----

DiscreteInstance theorem1_instance(const json& cfg, GroupTable* group_out) {
  const std::size_t order = cfg.value("cyclic_order", std::size_t{2});
  GroupTable group = GroupTable::cyclic(order);
  std::vector<double> pq = cfg.value("p_q", std::vector<double>{0.5, 0.5});
  Matrix profile(order, pq.size(), 0.0);
  if (cfg.contains("profile")) {
    const auto rows = cfg["profile"].get<std::vector<std::vector<double>>>();
    for (std::size_t z = 0; z < order; ++z) {
      for (std::size_t q = 0; q < pq.size(); ++q) profile(z, q) = rows.at(z).at(q);
    }
  } else {
    // q-scaled cyclic squared error with side values 1, 2, ..., |Q|.
    for (std::size_t z = 0; z < order; ++z) {
      const double wrap = std::min<double>(z, order - z);
      for (std::size_t q = 0; q < pq.size(); ++q) {
        profile(z, q) = static_cast<double>(q + 1) * wrap * wrap;
      }
    }
  }
  DistortionTensor dist = group_difference_distortion(group, profile);
  if (group_out) *group_out = std::move(group);
  return DiscreteInstance(uniform_law(order), std::move(pq), std::move(dist));
}

RunOutcome run_theorem1(const json& cfg, const RunOptions& opts) {
  RunOutcome out;
  const std::uint64_t seed = cfg.value("seed", std::uint64_t{1});
  SolverConfig sc = solver_from_json(cfg);
  GroupTable group = GroupTable::cyclic(2);
  const DiscreteInstance instance = theorem1_instance(cfg, &group);
  const double tol = cfg.value("tolerance_nats", 1e-3);
  const double leak_tol = cfg.value("leakage_tolerance_nats", 1e-4);

  const EqualityReport rep = check_theorem1(instance, group, sc);
  const bool passed = rep.max_gap <= tol && rep.max_side_leakage <= leak_tol &&
                      rep.lhs.all_converged() && rep.rhs.all_converged();

  std::vector<const ScenarioResult*> ptrs{&rep.lhs, &rep.rhs};
  json rows = json::array();
  write_table(opts.out_dir + "/theorem1_curves", opts, curves_csv(cfg, seed, ptrs),
              curve_to_json(rep.lhs), cfg, seed, &out);

  json report{{"check", "R_ENC == R_BOTH on a group-difference instance"},
              {"group_order", group.size()},
              {"max_gap_nats", rep.max_gap},
              {"slope_at_max", rep.slope_at_max},
              {"max_side_leakage_nats", rep.max_side_leakage},
              {"tolerance_nats", tol},
              {"leakage_tolerance_nats", leak_tol},
              {"passed", passed}};
  write_report(opts.out_dir + "/theorem1_report.json", std::move(report), cfg, seed, &out);
  out.passed = passed;
  out.exit_code = passed ? 0 : 1;
  return out;
}

DiscreteInstance theorem3_instance(const json& cfg) {
  std::vector<double> side_scale = cfg.value("side_scale", std::vector<double>{1.0, 3.0});
  const std::size_t nx = cfg.value("alphabet", std::size_t{2});
  Matrix base;
  const std::string base_name = cfg.value("base", std::string("hamming"));
  if (base_name == "hamming") base = hamming_matrix(nx);
  else if (base_name == "squared_cyclic") base = squared_cyclic_matrix(nx);
  else throw std::invalid_argument("theorem3: unknown base distortion " + base_name);
  std::vector<double> pq =
      cfg.value("p_q", uniform_law(side_scale.size()));
  std::vector<double> px = cfg.value("p_x", uniform_law(nx));
  return DiscreteInstance(std::move(px), std::move(pq),
                          scaled_distortion(side_scale, base));
}

RunOutcome run_theorem3(const json& cfg, const RunOptions& opts) {
  RunOutcome out;
  const std::uint64_t seed = cfg.value("seed", std::uint64_t{1});
  SolverConfig sc = solver_from_json(cfg);
  sc.seed = seed;
  const DiscreteInstance instance = theorem3_instance(cfg);
  const double tol = cfg.value("tolerance_nats", 1e-3);

  const EqualityReport rep = check_theorem3(instance, sc);
  const bool passed = rep.max_gap <= tol && rep.recon_constant_in_side;

  std::vector<const ScenarioResult*> ptrs{&rep.lhs, &rep.rhs};
  write_table(opts.out_dir + "/theorem3_curves", opts, curves_csv(cfg, seed, ptrs),
              curve_to_json(rep.lhs), cfg, seed, &out);

  json report{{"check", "R_DEC == R_NONE on a scaled-distortion instance"},
              {"max_gap_nats", rep.max_gap},
              {"slope_at_max", rep.slope_at_max},
              {"recon_constant_in_side", rep.recon_constant_in_side},
              {"tolerance_nats", tol},
              {"passed", passed}};
  write_report(opts.out_dir + "/theorem3_report.json", std::move(report), cfg, seed, &out);
  out.passed = passed;
  out.exit_code = passed ? 0 : 1;
  return out;
}

// ---- the erasure-interpolation coder demo ----

std::string symbols_to_hex(const std::vector<unsigned>& symbols, unsigned m) {
  static const char* digits = "0123456789abcdef";
  const unsigned width = (m + 3) / 4;
  std::string s;
  for (unsigned v : symbols) {
    for (unsigned d = width; d-- > 0;) s.push_back(digits[(v >> (4 * d)) & 0xF]);
  }
  return s;
}

RunOutcome run_mds_demo(const json& cfg, const RunOptions& opts) {
  RunOutcome out;
  const std::uint64_t seed = cfg.value("seed", std::uint64_t{1});
  const std::size_t n = cfg.value("n", std::size_t{7});
  const std::size_t k = cfg.value("k", std::size_t{5});
  const unsigned m = cfg.value("field_bits", 3u);
  const std::size_t trials = cfg.value("trials", std::size_t{10000});

  const GaloisField field(m);
  const auto points = default_eval_points(field, n);

  struct Row {
    std::string block, mask, payload;
    bool ok;
  };
  std::vector<Row> rows(trials);
  parallel_for(trials, opts.jobs, [&](std::size_t t) {
    Rng rng(seed, t);
    MaskedBlock block;
    block.symbols.resize(n);
    block.mask.assign(n, 0);
    for (auto& s : block.symbols) s = static_cast<unsigned>(rng.next_below(field.size()));
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
      std::swap(idx[i], idx[j]);
      block.mask[idx[i]] = 1;
    }
    const FieldPolynomial poly = mds_encode(field, block, points);
    const auto recon = mds_reconstruct(field, poly, points);
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (block.mask[i] && recon[i] != block.symbols[i]) ok = false;
    }
    Row row;
    row.block = symbols_to_hex(block.symbols, m);
    for (std::size_t i = 0; i < n; ++i) row.mask.push_back(block.mask[i] ? '1' : '0');
    row.payload = bytes_to_hex(pack_coefficients(field, poly));
    row.ok = ok;
    rows[t] = std::move(row);
  });

  std::size_t mismatches = 0;
  std::string csv = artifact_header(cfg, seed) + "\nblock,mask,payload,ok\n";
  json jrows = json::array();
  for (const auto& r : rows) {
    if (!r.ok) ++mismatches;
    csv += r.block + "," + r.mask + "," + r.payload + "," + (r.ok ? "1" : "0") + "\n";
    jrows.push_back({{"block", r.block}, {"mask", r.mask}, {"payload", r.payload}, {"ok", r.ok}});
  }
  write_table(opts.out_dir + "/mds_trials", opts, csv, jrows, cfg, seed, &out);

  const MdsRateReport rates = mds_rate_report(n, k, m);
  const bool passed = mismatches == 0;
  json report{{"n", n},
              {"k", k},
              {"field_bits", m},
              {"trials", trials},
              {"relevant_mismatches", mismatches},
              {"payload_bits_per_block", static_cast<double>(k * m)},
              {"rate_ignore_bits", rates.ignore_bits},
              {"rate_tell_decoder_bits", rates.tell_decoder_bits},
              {"rate_scheme_bits", rates.scheme_bits},
              {"passed", passed}};
  write_report(opts.out_dir + "/mds_report.json", std::move(report), cfg, seed, &out);
  out.passed = passed;
  out.exit_code = passed ? 0 : 1;
  return out;
}

// ---- transform-coding demos ----

std::string transform_rows_csv(const json& cfg, std::uint64_t seed,
                               const std::vector<TransformTrialRow>& rows,
                               std::size_t n, std::size_t k, double r0, double r1,
                               json* jrows) {
  std::string csv = artifact_header(cfg, seed) +
                    "\ntrial,n,k,R0,R1,dist_important,dist_other,bits\n";
  for (std::size_t t = 0; t < rows.size(); ++t) {
    csv += std::to_string(t) + "," + std::to_string(n) + "," + std::to_string(k) + "," +
           format_double(r0) + "," + format_double(r1) + "," +
           format_double(rows[t].dist_important) + "," +
           format_double(rows[t].dist_other) + "," + format_double(rows[t].bits) + "\n";
    if (jrows) {
      jrows->push_back({{"trial", t},
                        {"n", n},
                        {"k", k},
                        {"R0", r0},
                        {"R1", r1},
                        {"dist_important", rows[t].dist_important},
                        {"dist_other", rows[t].dist_other},
                        {"bits", rows[t].bits}});
    }
  }
  return csv;
}

MaskKind mask_kind_from(const json& cfg, MaskKind fallback) {
  std::string fallback_name = "uniform";
  if (fallback == MaskKind::Stratified) fallback_name = "stratified";
  if (fallback == MaskKind::Comb) fallback_name = "comb";
  const std::string name = cfg.value("mask_ensemble", fallback_name);
  if (name == "uniform") return MaskKind::Uniform;
  if (name == "stratified") return MaskKind::Stratified;
  if (name == "comb") return MaskKind::Comb;
  throw std::invalid_argument("unknown mask ensemble: " + name);
}

RunOutcome run_dft_demo(const json& cfg, const RunOptions& opts) {
  RunOutcome out;
  DftSchemeConfig dc;
  dc.n = cfg.value("n", dc.n);
  dc.k = cfg.value("k", dc.k);
  dc.rate_bits = cfg.value("rate_bits", dc.rate_bits);
  dc.loading_factor = cfg.value("loading_factor", dc.loading_factor);
  dc.condition_bound = cfg.value("condition_bound", dc.condition_bound);
  dc.mask_kind = mask_kind_from(cfg, dc.mask_kind);
  dc.trials = cfg.value("trials", dc.trials);
  dc.calibration_trials = cfg.value("calibration_trials", dc.calibration_trials);
  dc.seed = cfg.value("seed", std::uint64_t{1});
  dc.jobs = opts.jobs;
  const bool keep_rows = cfg.value("write_trials", true);

  const DftSchemeResult res = run_dft_scheme(dc, keep_rows);
  if (keep_rows) {
    json jrows = json::array();
    const std::string csv = transform_rows_csv(cfg, dc.seed, res.rows, dc.n, dc.k, 0.0,
                                               dc.rate_bits, opts.format == "json" ? &jrows : nullptr);
    write_table(opts.out_dir + "/dft_trials", opts, csv, jrows, cfg, dc.seed, &out);
  }

  const bool passed = res.contraction_violations == 0;
  json report{{"n", dc.n},
              {"k", dc.k},
              {"rate_bits_per_coefficient", dc.rate_bits},
              {"trials", dc.trials},
              {"payload_bits_per_block", res.bits_per_block},
              {"mean_dist_important", res.mean_dist_important},
              {"mean_dist_other", res.mean_dist_other},
              {"mean_dist_coeff", res.mean_dist_coeff},
              {"contraction_violations", res.contraction_violations},
              {"max_contraction_excess", res.max_contraction_excess},
              {"mask_rejections", res.mask_rejections},
              {"passed", passed}};
  write_report(opts.out_dir + "/dft_report.json", std::move(report), cfg, dc.seed, &out);
  out.passed = passed;
  out.exit_code = passed ? 0 : 1;
  return out;
}

RunOutcome run_two_stage(const json& cfg, const RunOptions& opts) {
  RunOutcome out;
  TwoStageConfig base;
  base.n = cfg.value("n", base.n);
  base.k = cfg.value("k", base.k);
  base.loading_factor = cfg.value("loading_factor", base.loading_factor);
  base.shift_loading_factor = cfg.value("shift_loading_factor", base.shift_loading_factor);
  base.condition_bound = cfg.value("condition_bound", base.condition_bound);
  base.mask_kind = mask_kind_from(cfg, base.mask_kind);
  base.trials = cfg.value("trials", base.trials);
  base.calibration_trials = cfg.value("calibration_trials", base.calibration_trials);
  base.seed = cfg.value("seed", std::uint64_t{1});
  base.jobs = opts.jobs;

  std::vector<std::pair<double, double>> pairs;
  if (cfg.contains("rate_pairs")) {
    for (const auto& p : cfg["rate_pairs"]) {
      pairs.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    }
  } else {
    pairs.emplace_back(cfg.value("rate_low", 4.0), cfg.value("rate_high", 8.0));
  }
  const double max_deficit_db = cfg.value("max_deficit_db", kInf);
  const bool keep_rows = cfg.value("write_trials", true);

  std::string csv = artifact_header(cfg, base.seed) +
                    "\ntrial,n,k,R0,R1,dist_important,dist_other,bits\n";
  json jrows = json::array();
  json per_pair = json::array();
  std::vector<double> deficits_db, excesses;
  for (const auto& [r0, r1] : pairs) {
    TwoStageConfig tc = base;
    tc.rate_low = r0;
    tc.rate_high = r1;
    const TwoStageResult res = run_two_stage(tc, keep_rows);
    deficits_db.push_back(res.deficit_db);
    excesses.push_back(res.dist_important - res.informed_dist_important);
    if (keep_rows) {
      const std::string chunk = transform_rows_csv(cfg, base.seed, res.rows, tc.n, tc.k,
                                                   r0, r1, opts.format == "json" ? &jrows : nullptr);
      // Strip the per-chunk header lines; one header serves the whole file.
      csv += chunk.substr(chunk.find('\n', chunk.find('\n') + 1) + 1);
    }
    per_pair.push_back({{"R0", r0},
                        {"R1", r1},
                        {"dist_important", res.dist_important},
                        {"dist_other", res.dist_other},
                        {"bits_per_block", res.bits_per_block},
                        {"informed_dist_important", res.informed_dist_important},
                        {"informed_dist_other", res.informed_dist_other},
                        {"informed_bits_per_block", res.informed_bits_per_block},
                        {"deficit_db", res.deficit_db},
                        {"excess_dist_important", excesses.back()},
                        {"mask_rejections", res.mask_rejections}});
  }
  if (keep_rows) {
    write_table(opts.out_dir + "/two_stage_trials", opts, csv, jrows, cfg, base.seed, &out);
  }

  bool passed = deficits_db.front() <= max_deficit_db;
  // High-resolution trend: the absolute excess over the informed system
  // must keep shrinking as the rate pairs grow.
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < excesses.size(); ++i) {
    monotone = monotone && excesses[i + 1] <= excesses[i];
  }
  if (pairs.size() > 1) passed = passed && monotone;
  json report{{"n", base.n},
              {"k", base.k},
              {"results", per_pair},
              {"excess_monotone_decreasing", monotone},
              {"max_deficit_db", max_deficit_db},
              {"passed", passed}};
  write_report(opts.out_dir + "/two_stage_report.json", std::move(report), cfg,
               base.seed, &out);
  out.passed = passed;
  out.exit_code = passed ? 0 : 1;
  return out;
}

// ---- rate gap table ----

SideInfoDistribution side_from_json(const json& f) {
  const std::string name = f.at("family").get<std::string>();
  if (name == "exponential") return SideInfoDistribution::exponential(f.value("tau", 1.0));
  if (name == "uniform") return SideInfoDistribution::uniform01();
  if (name == "lognormal") {
    return SideInfoDistribution::lognormal(f.value("M", 0.0), f.value("Q2", 1.0));
  }
  if (name == "pareto") {
    return SideInfoDistribution::pareto(f.value("a", 3.0), f.value("b", 2.0));
  }
  if (name == "gamma") {
    return SideInfoDistribution::gamma(f.value("a", 4.0), f.value("b", 1.0));
  }
  if (name == "pathological") {
    return SideInfoDistribution::pathological(f.value("eps", 0.01));
  }
  if (name == "positive_cauchy") return SideInfoDistribution::positive_cauchy();
  throw std::invalid_argument("rate-gap: unknown family " + name);
}

json default_families() {
  return json::array({{{"family", "exponential"}, {"tau", 1.0}},
                      {{"family", "uniform"}},
                      {{"family", "lognormal"}, {"M", 0.0}, {"Q2", 1.0}},
                      {{"family", "pareto"}, {"a", 3.0}, {"b", 2.0}},
                      {{"family", "gamma"}, {"a", 4.0}, {"b", 1.0}},
                      {{"family", "pathological"}, {"eps", 0.01}},
                      {{"family", "positive_cauchy"}}});
}

RunOutcome run_rate_gap(const json& cfg, const RunOptions& opts) {
  RunOutcome out;
  const std::uint64_t seed = cfg.value("seed", std::uint64_t{1});
  const long long samples = cfg.value("samples", 1000000LL);
  const json families = cfg.contains("families") ? cfg["families"] : default_families();

  struct RowResult {
    SideInfoDistribution dist;
    double closed = 0.0;
    GapEstimate mc;
  };
  std::vector<RowResult> rows(families.size());
  parallel_for(families.size(), opts.jobs, [&](std::size_t i) {
    RowResult r;
    r.dist = side_from_json(families[static_cast<int>(i)]);
    r.closed = r.dist.gap_closed_form();
    r.mc = gap_monte_carlo(r.dist, samples, seed);
    rows[i] = std::move(r);
  });

  std::string csv = artifact_header(cfg, seed) +
                    "\nfamily,params,gap_closed_nats,gap_mc_nats,mc_stderr,samples,seed\n";
  json jrows = json::array();
  json details = json::array();
  bool passed = true;
  for (const auto& r : rows) {
    csv += std::string(to_string(r.dist.family)) + "," + r.dist.params_label() + "," +
           format_double(r.closed) + "," + format_double(r.mc.estimate) + "," +
           format_double(r.mc.std_error) + "," + std::to_string(r.mc.samples) + "," +
           std::to_string(seed) + "\n";
    json d{{"family", to_string(r.dist.family)},
           {"params", r.dist.params_label()},
           {"gap_closed_nats", r.closed},
           {"gap_mc_nats", r.mc.estimate},
           {"mc_stderr", r.mc.std_error},
           {"diverging", r.mc.diverging}};
    jrows.push_back(d);
    if (r.closed == kInf) {
      // Infinite-penalty rows must show a diverging running estimate.
      passed = passed && r.mc.diverging;
      json traj = json::array();
      for (const auto& [count, est] : r.mc.trajectory) {
        traj.push_back({{"samples", count}, {"estimate", est}});
      }
      d["running_estimate"] = traj;
    } else {
      passed = passed && std::abs(r.mc.estimate - r.closed) <= 3.0 * r.mc.std_error;
    }
    if (r.dist.family == SideFamily::Exponential) {
      // Two published candidates exist for this row; the moment computation
      // gives Euler's constant over two and the Monte-Carlo run adjudicates.
      d["alternative_value_neg_half_log_euler"] = -0.5 * std::log(0.5772156649015329);
      d["alternative_matches_monte_carlo"] =
          std::abs(r.mc.estimate - (-0.5 * std::log(0.5772156649015329))) <=
          3.0 * r.mc.std_error;
      d["documented_discrepancy"] = true;
    }
    if (r.dist.family == SideFamily::Gamma) {
      d["approx_half_inv_a"] = 0.5 / r.dist.param1;
      d["approx_quarter_inv_a"] = 0.25 / r.dist.param1;
    }
    details.push_back(std::move(d));
  }
  write_table(opts.out_dir + "/rate_gap", opts, csv, jrows, cfg, seed, &out);

  json report{{"samples", samples}, {"rows", details}, {"passed", passed}};
  write_report(opts.out_dir + "/rate_gap_report.json", std::move(report), cfg, seed, &out);
  out.passed = passed;
  out.exit_code = passed ? 0 : 1;
  return out;
}

// ---- penalty check ----

RunOutcome run_penalty_check(const json& cfg, const RunOptions& opts) {
  RunOutcome out;
  const std::uint64_t seed = cfg.value("seed", std::uint64_t{1});
  TwoAtomSide side;
  if (cfg.contains("atoms")) {
    side.value0 = cfg["atoms"].at(0).get<double>();
    side.value1 = cfg["atoms"].at(1).get<double>();
  }
  side.prob1 = cfg.value("prob1", 0.5);
  PenaltyCheckConfig pc;
  pc.grid_points = cfg.value("grid_points", pc.grid_points);
  pc.span_sigmas = cfg.value("span_sigmas", pc.span_sigmas);
  pc.target_distortions = cfg.value("distortions", pc.target_distortions);
  pc.solver = solver_from_json(cfg);
  const double tol = cfg.value("tolerance_nats", 0.05);

  const PenaltyCheckResult res = penalty_empirical_check(side, pc);
  const bool passed = res.monotone_increasing && res.final_error <= tol;

  std::string csv = artifact_header(cfg, seed) + "\ndistortion,gap_nats\n";
  json jrows = json::array();
  for (std::size_t i = 0; i < res.distortions.size(); ++i) {
    csv += format_double(res.distortions[i]) + "," + format_double(res.measured_gaps[i]) + "\n";
    jrows.push_back({{"distortion", res.distortions[i]}, {"gap_nats", res.measured_gaps[i]}});
  }
  write_table(opts.out_dir + "/penalty_check", opts, csv, jrows, cfg, seed, &out);

  json report{{"atoms", {side.value0, side.value1}},
              {"prob1", side.prob1},
              {"closed_form_gap_nats", res.closed_form_gap},
              {"distortions", res.distortions},
              {"measured_gaps_nats", res.measured_gaps},
              {"monotone_increasing", res.monotone_increasing},
              {"final_error_nats", res.final_error},
              {"grid_resolution_warning", res.grid_resolution_warning},
              {"tolerance_nats", tol},
              {"passed", passed}};
  write_report(opts.out_dir + "/penalty_check_report.json", std::move(report), cfg, seed,
               &out);
  out.passed = passed;
  out.exit_code = passed ? 0 : 1;
  return out;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> list = [] {
    std::vector<Preset> p;
    p.push_back({"rd-curves-binary-hamming", "3",
                 "All four scenario curves for a uniform bit with Hamming distortion",
                 json{{"experiment", "rd-curves"},
                      {"seed", 1},
                      {"instance",
                       {{"source_alphabet", 2},
                        {"recon_alphabet", 2},
                        {"side_alphabet", 1},
                        {"p_x", {0.5, 0.5}},
                        {"p_q", {1.0}},
                        {"dist", {{{0.0}, {1.0}}, {{1.0}, {0.0}}}}}},
                      {"include_lossless", true}}});
    p.push_back({"theorem1-z2", "4.1",
                 "Encoder-side equality on the order-2 cyclic group, q-scaled Hamming",
                 json{{"experiment", "theorem1"},
                      {"seed", 1},
                      {"cyclic_order", 2},
                      {"profile", {{0.0, 0.0}, {1.0, 2.0}}},
                      {"p_q", {0.5, 0.5}},
                      {"tolerance_nats", 1e-3},
                      {"leakage_tolerance_nats", 1e-4}}});
    p.push_back({"theorem1-z4", "4.1",
                 "Encoder-side equality on the order-4 cyclic group, cyclic squared profile",
                 json{{"experiment", "theorem1"},
                      {"seed", 1},
                      {"cyclic_order", 4},
                      {"p_q", {0.5, 0.5}},
                      {"tolerance_nats", 1e-3},
                      {"leakage_tolerance_nats", 1e-4}}});
    p.push_back({"theorem3-binary", "4.1",
                 "Decoder-side uselessness for scaled Hamming on a uniform bit",
                 json{{"experiment", "theorem3"},
                      {"seed", 1},
                      {"alphabet", 2},
                      {"base", "hamming"},
                      {"side_scale", {1.0, 3.0}},
                      {"tolerance_nats", 1e-3}}});
    p.push_back({"theorem3-quaternary", "4.1",
                 "Decoder-side uselessness for scaled cyclic squared error on 4 letters",
                 json{{"experiment", "theorem3"},
                      {"seed", 1},
                      {"alphabet", 4},
                      {"base", "squared_cyclic"},
                      {"side_scale", {0.5, 2.0}},
                      {"tolerance_nats", 1e-3}}});
    p.push_back({"mds-7-5-gf8", "2.1",
                 "Curve-fitting lossless coder, n=7, k=5 over GF(8)",
                 json{{"experiment", "mds-demo"},
                      {"seed", 1},
                      {"n", 7},
                      {"k", 5},
                      {"field_bits", 3},
                      {"trials", 10000}}});
    p.push_back({"dft-64-16", "2.2",
                 "Band-limited interpolation quantizer, n=64, k=16, 8 bits/coefficient",
                 json{{"experiment", "dft-demo"},
                      {"seed", 1},
                      {"n", 64},
                      {"k", 16},
                      {"rate_bits", 8.0},
                      {"trials", 100000}}});
    p.push_back({"two-stage-64-32", "4.3",
                 "Two-stage transform quantizer against the informed baseline",
                 json{{"experiment", "two-stage"},
                      {"seed", 1},
                      {"n", 64},
                      {"k", 32},
                      {"rate_pairs", {{4.0, 8.0}, {6.0, 10.0}, {8.0, 12.0}}},
                      {"trials", 10000},
                      {"mask_ensemble", "comb"},
                      {"loading_factor", 0.0},
                      {"shift_loading_factor", 0.0},
                      {"max_deficit_db", 1.25}}});
    p.push_back({"rate-gap-table", "4.2",
                 "Closed-form and Monte-Carlo penalty for all side-information families",
                 json{{"experiment", "rate-gap"}, {"seed", 1}, {"samples", 1000000}}});
    p.push_back({"penalty-check-two-atom", "4.2",
                 "Oracle-measured penalty trend for two-atom side information (0.25, 4)",
                 json{{"experiment", "penalty-check"},
                      {"seed", 1},
                      {"atoms", {0.25, 4.0}},
                      {"prob1", 0.5},
                      {"grid_points", 129},
                      {"span_sigmas", 6.0},
                      {"distortions", {0.8, 0.3, 0.05}},
                      {"slopes", {{"count", 32}, {"min", 0.25}, {"max", 40.0}}},
                      {"tolerance_nats", 0.05}}});
    return p;
  }();
  return list;
}

std::vector<const Preset*> find_presets(const std::string& tag_filter) {
  std::vector<const Preset*> out;
  for (const auto& p : presets()) {
    if (tag_filter.empty() || ("," + p.tags + ",").find("," + tag_filter + ",") !=
                                  std::string::npos) {
      out.push_back(&p);
    }
  }
  return out;
}

const Preset* find_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

RunOutcome run_experiment(const json& config, const RunOptions& options) {
  if (!config.contains("experiment")) {
    throw std::invalid_argument("config: missing \"experiment\"");
  }
  json cfg = config;
  if (options.seed) cfg["seed"] = *options.seed;
  std::filesystem::create_directories(options.out_dir);
  const std::string name = cfg["experiment"].get<std::string>();
  if (name == "rd-curves") return run_rd_curves(cfg, options);
  if (name == "theorem1") return run_theorem1(cfg, options);
  if (name == "theorem3") return run_theorem3(cfg, options);
  if (name == "mds-demo") return run_mds_demo(cfg, options);
  if (name == "dft-demo") return run_dft_demo(cfg, options);
  if (name == "two-stage") return run_two_stage(cfg, options);
  if (name == "rate-gap") return run_rate_gap(cfg, options);
  if (name == "penalty-check") return run_penalty_check(cfg, options);
  throw std::invalid_argument("unknown experiment: " + name);
}

}  // namespace dsi
