#include "dsi.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <stdexcept>
#include <string>

#include "core/experiment.hpp"
#include "core/instance_json.hpp"
#include "core/mds.hpp"
#include "core/prob.hpp"
#include "core/rd_solver.hpp"
#include "core/side_info.hpp"
#include "core/version.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

// Maps C++ exceptions at the boundary onto status codes.
template <typename Fn>
dsi_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return DSI_ERR_INVALID_ARGUMENT;
  } catch (const std::domain_error& e) {
    set_error(e.what());
    return DSI_ERR_INVALID_ARGUMENT;
  } catch (const std::runtime_error& e) {
    set_error(e.what());
    return DSI_ERR_NUMERIC;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return DSI_ERR_NUMERIC;
  } catch (const std::exception& e) {
    set_error(e.what());
    return DSI_ERR_NUMERIC;
  }
}

dsi::Scenario scenario_from_int(int scenario) {
  switch (scenario) {
    case DSI_SCENARIO_NONE: return dsi::Scenario::None;
    case DSI_SCENARIO_DEC: return dsi::Scenario::Dec;
    case DSI_SCENARIO_ENC: return dsi::Scenario::Enc;
    case DSI_SCENARIO_BOTH: return dsi::Scenario::Both;
    default: throw std::invalid_argument("unknown scenario code");
  }
}

dsi::SolverConfig solver_from_options(const dsi_solver_options* options) {
  dsi::SolverConfig cfg;
  if (options == nullptr) return cfg;
  if (options->slopes != nullptr && options->num_slopes > 0) {
    cfg.slope_grid.assign(options->slopes, options->slopes + options->num_slopes);
  }
  if (options->max_iterations > 0) cfg.max_iterations = options->max_iterations;
  if (options->rel_tolerance > 0.0) cfg.rel_tolerance = options->rel_tolerance;
  cfg.aux_cardinality = options->aux_cardinality;
  if (options->restarts > 0) cfg.restarts = options->restarts;
  if (options->seed != 0) cfg.seed = options->seed;
  return cfg;
}

dsi::SideInfoDistribution side_from_c(const dsi_side_distribution* dist) {
  if (dist == nullptr) throw std::invalid_argument("null distribution");
  dsi::SideInfoDistribution d;
  switch (dist->family) {
    case DSI_SIDE_EXPONENTIAL: d.family = dsi::SideFamily::Exponential; break;
    case DSI_SIDE_UNIFORM01: d.family = dsi::SideFamily::Uniform01; break;
    case DSI_SIDE_LOGNORMAL: d.family = dsi::SideFamily::Lognormal; break;
    case DSI_SIDE_PARETO: d.family = dsi::SideFamily::Pareto; break;
    case DSI_SIDE_GAMMA: d.family = dsi::SideFamily::Gamma; break;
    case DSI_SIDE_PATHOLOGICAL: d.family = dsi::SideFamily::Pathological; break;
    case DSI_SIDE_POSITIVE_CAUCHY: d.family = dsi::SideFamily::PositiveCauchy; break;
    default: throw std::invalid_argument("unknown side-distribution family code");
  }
  d.param1 = dist->param1;
  d.param2 = dist->param2;
  d.validate();
  return d;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

dsi_status run_config(const nlohmann::json& config, const char* out_dir,
                      const char* format, uint64_t seed, int use_seed, int jobs,
                      char** summary_json) {
  dsi::RunOptions opts;
  if (out_dir != nullptr) opts.out_dir = out_dir;
  if (format != nullptr) opts.format = format;
  if (use_seed != 0) opts.seed = seed;
  opts.jobs = jobs;
  const dsi::RunOutcome outcome = dsi::run_experiment(config, opts);
  if (summary_json != nullptr) *summary_json = dup_string(outcome.summary.dump(2));
  if (!outcome.passed) {
    set_error("verification exceeded its declared tolerance; see the report artifact");
    return DSI_ERR_CHECK_FAILED;
  }
  return DSI_OK;
}

}  // namespace

struct dsi_instance {
  dsi::DiscreteInstance value;
};

struct dsi_curve {
  dsi::ScenarioResult value;
};

extern "C" {

const char* dsi_status_name(dsi_status status) {
  switch (status) {
    case DSI_OK: return "ok";
    case DSI_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case DSI_ERR_PARSE: return "parse_error";
    case DSI_ERR_UNSUPPORTED: return "unsupported";
    case DSI_ERR_NUMERIC: return "numeric_error";
    case DSI_ERR_IO: return "io_error";
    case DSI_ERR_CHECK_FAILED: return "check_failed";
  }
  return "unknown";
}

const char* dsi_last_error_message(void) { return g_last_error.c_str(); }

const char* dsi_version(void) { return dsi::kToolVersion; }

void dsi_string_free(char* s) { delete[] s; }

dsi_status dsi_instance_from_json(const char* text, dsi_instance** out) {
  return guarded([&]() {
    if (text == nullptr || out == nullptr) {
      throw std::invalid_argument("null argument");
    }
    try {
      *out = new dsi_instance{dsi::instance_from_json(text)};
    } catch (const std::invalid_argument& e) {
      set_error(e.what());
      return DSI_ERR_PARSE;
    }
    return DSI_OK;
  });
}

dsi_status dsi_instance_from_file(const char* path, dsi_instance** out) {
  return guarded([&]() {
    if (path == nullptr || out == nullptr) {
      throw std::invalid_argument("null argument");
    }
    std::ifstream probe(path);
    if (!probe) {
      set_error(std::string("cannot open instance file: ") + path);
      return DSI_ERR_IO;
    }
    try {
      *out = new dsi_instance{dsi::instance_from_file(path)};
    } catch (const std::invalid_argument& e) {
      set_error(e.what());
      return DSI_ERR_PARSE;
    }
    return DSI_OK;
  });
}

dsi_status dsi_instance_to_json(const dsi_instance* instance, char** out_text) {
  return guarded([&]() {
    if (instance == nullptr || out_text == nullptr) {
      throw std::invalid_argument("null argument");
    }
    *out_text = dup_string(dsi::instance_to_json(instance->value));
    return DSI_OK;
  });
}

dsi_status dsi_instance_dims(const dsi_instance* instance, size_t* nx,
                             size_t* nxhat, size_t* nq) {
  return guarded([&]() {
    if (instance == nullptr) throw std::invalid_argument("null instance");
    if (nx) *nx = instance->value.source_size();
    if (nxhat) *nxhat = instance->value.recon_size();
    if (nq) *nq = instance->value.side_size();
    return DSI_OK;
  });
}

void dsi_instance_free(dsi_instance* instance) { delete instance; }

dsi_status dsi_mutual_information(const double* joint, size_t rows, size_t cols,
                                  double* out_nats) {
  return guarded([&]() {
    if (joint == nullptr || out_nats == nullptr) {
      throw std::invalid_argument("null argument");
    }
    dsi::Matrix m(rows, cols);
    m.data.assign(joint, joint + rows * cols);
    *out_nats = dsi::mutual_information(m);
    return DSI_OK;
  });
}

dsi_status dsi_solve(const dsi_instance* instance, int scenario,
                     const dsi_solver_options* options, dsi_curve** out) {
  return guarded([&]() {
    if (instance == nullptr || out == nullptr) {
      throw std::invalid_argument("null argument");
    }
    *out = new dsi_curve{dsi::solve_scenario(
        instance->value, scenario_from_int(scenario), solver_from_options(options))};
    return DSI_OK;
  });
}

size_t dsi_curve_size(const dsi_curve* curve) {
  return curve == nullptr ? 0 : curve->value.points.size();
}

dsi_status dsi_curve_point(const dsi_curve* curve, size_t index, dsi_rd_point* out) {
  return guarded([&]() {
    if (curve == nullptr || out == nullptr) throw std::invalid_argument("null argument");
    if (index >= curve->value.points.size()) {
      throw std::invalid_argument("curve point index out of range");
    }
    const dsi::RdPoint& p = curve->value.points[index];
    *out = {p.slope, p.rate, p.distortion, p.iterations, p.converged ? 1 : 0};
    return DSI_OK;
  });
}

dsi_status dsi_curve_rate_at(const dsi_curve* curve, double distortion,
                             double* rate_nats) {
  return guarded([&]() {
    if (curve == nullptr || rate_nats == nullptr) {
      throw std::invalid_argument("null argument");
    }
    *rate_nats = dsi::curve_rate_at(curve->value.points, distortion);
    return DSI_OK;
  });
}

void dsi_curve_free(dsi_curve* curve) { delete curve; }

dsi_status dsi_lossless_rate(const dsi_instance* instance, int scenario,
                             double* rate_nats) {
  return guarded([&]() {
    if (instance == nullptr || rate_nats == nullptr) {
      throw std::invalid_argument("null argument");
    }
    const dsi::Scenario s = scenario_from_int(scenario);
    if (s == dsi::Scenario::Dec) {
      set_error("lossless rate is not provided for the decoder-side scenario");
      return DSI_ERR_UNSUPPORTED;
    }
    *rate_nats = dsi::lossless_rate(instance->value, s);
    return DSI_OK;
  });
}

dsi_status dsi_check_theorem1(const dsi_instance* instance,
                              const unsigned* group_table,
                              const dsi_solver_options* options,
                              dsi_equality_report* out) {
  return guarded([&]() {
    if (instance == nullptr || group_table == nullptr || out == nullptr) {
      throw std::invalid_argument("null argument");
    }
    const std::size_t n = instance->value.source_size();
    std::vector<std::vector<unsigned>> table(n, std::vector<unsigned>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) table[i][j] = group_table[i * n + j];
    }
    const dsi::EqualityReport rep = dsi::check_theorem1(
        instance->value, dsi::GroupTable(std::move(table)), solver_from_options(options));
    *out = {rep.max_gap, rep.slope_at_max, rep.max_side_leakage,
            rep.recon_constant_in_side ? 1 : 0};
    return DSI_OK;
  });
}

dsi_status dsi_check_theorem3(const dsi_instance* instance,
                              const dsi_solver_options* options,
                              dsi_equality_report* out) {
  return guarded([&]() {
    if (instance == nullptr || out == nullptr) throw std::invalid_argument("null argument");
    const dsi::EqualityReport rep =
        dsi::check_theorem3(instance->value, solver_from_options(options));
    *out = {rep.max_gap, rep.slope_at_max, rep.max_side_leakage,
            rep.recon_constant_in_side ? 1 : 0};
    return DSI_OK;
  });
}

dsi_status dsi_mds_encode(unsigned field_bits, const unsigned* symbols,
                          const unsigned char* mask, size_t n, size_t k,
                          unsigned* coeffs_out) {
  return guarded([&]() {
    if (symbols == nullptr || mask == nullptr || coeffs_out == nullptr) {
      throw std::invalid_argument("null argument");
    }
    const dsi::GaloisField field(field_bits);
    dsi::MaskedBlock block;
    block.symbols.assign(symbols, symbols + n);
    block.mask.assign(mask, mask + n);
    if (block.relevant_count() != k) {
      throw std::invalid_argument("mask weight does not equal k");
    }
    const dsi::FieldPolynomial poly =
        dsi::mds_encode(field, block, dsi::default_eval_points(field, n));
    for (std::size_t i = 0; i < k; ++i) coeffs_out[i] = poly.coefficients[i];
    return DSI_OK;
  });
}

dsi_status dsi_mds_reconstruct(unsigned field_bits, const unsigned* coeffs,
                               size_t k, size_t n, unsigned* symbols_out) {
  return guarded([&]() {
    if (coeffs == nullptr || symbols_out == nullptr) {
      throw std::invalid_argument("null argument");
    }
    const dsi::GaloisField field(field_bits);
    dsi::FieldPolynomial poly;
    poly.coefficients.assign(coeffs, coeffs + k);
    const auto recon =
        dsi::mds_reconstruct(field, poly, dsi::default_eval_points(field, n));
    for (std::size_t i = 0; i < n; ++i) symbols_out[i] = recon[i];
    return DSI_OK;
  });
}

dsi_status dsi_mds_pack(unsigned field_bits, const unsigned* coeffs, size_t k,
                        unsigned char* bytes_out, size_t* num_bytes) {
  return guarded([&]() {
    if (coeffs == nullptr || bytes_out == nullptr || num_bytes == nullptr) {
      throw std::invalid_argument("null argument");
    }
    const dsi::GaloisField field(field_bits);
    dsi::FieldPolynomial poly;
    poly.coefficients.assign(coeffs, coeffs + k);
    const auto bytes = dsi::pack_coefficients(field, poly);
    if (*num_bytes < bytes.size()) {
      throw std::invalid_argument("payload buffer too small");
    }
    std::memcpy(bytes_out, bytes.data(), bytes.size());
    *num_bytes = bytes.size();
    return DSI_OK;
  });
}

dsi_status dsi_mds_rate_report(size_t n, size_t k, unsigned field_bits,
                               dsi_mds_rates* out) {
  return guarded([&]() {
    if (out == nullptr) throw std::invalid_argument("null argument");
    const dsi::MdsRateReport rep = dsi::mds_rate_report(n, k, field_bits);
    *out = {rep.ignore_bits, rep.tell_decoder_bits, rep.scheme_bits};
    return DSI_OK;
  });
}

dsi_status dsi_rate_gap_closed_form(const dsi_side_distribution* dist,
                                    double* gap_nats) {
  return guarded([&]() {
    if (gap_nats == nullptr) throw std::invalid_argument("null argument");
    *gap_nats = side_from_c(dist).gap_closed_form();
    return DSI_OK;
  });
}

dsi_status dsi_rate_gap_monte_carlo(const dsi_side_distribution* dist,
                                    long long samples, uint64_t seed,
                                    dsi_gap_estimate* out) {
  return guarded([&]() {
    if (out == nullptr) throw std::invalid_argument("null argument");
    const dsi::GapEstimate est = dsi::gap_monte_carlo(side_from_c(dist), samples, seed);
    *out = {est.estimate, est.std_error, est.samples, est.diverging ? 1 : 0};
    return DSI_OK;
  });
}

dsi_status dsi_high_resolution_rates(double source_entropy_nats,
                                     double distortion,
                                     const dsi_side_distribution* dist,
                                     double* r_both, double* r_dec) {
  return guarded([&]() {
    if (r_both == nullptr || r_dec == nullptr) {
      throw std::invalid_argument("null argument");
    }
    const auto [both, dec] =
        dsi::high_resolution_rates(source_entropy_nats, distortion, side_from_c(dist));
    *r_both = both;
    *r_dec = dec;
    return DSI_OK;
  });
}

dsi_status dsi_run_preset(const char* name, const char* out_dir,
                          const char* format, uint64_t seed, int use_seed,
                          int jobs, char** summary_json) {
  return guarded([&]() {
    if (name == nullptr) throw std::invalid_argument("null preset name");
    const dsi::Preset* preset = dsi::find_preset(name);
    if (preset == nullptr) {
      set_error(std::string("unknown preset: ") + name);
      return DSI_ERR_INVALID_ARGUMENT;
    }
    return run_config(preset->config, out_dir, format, seed, use_seed, jobs,
                      summary_json);
  });
}

dsi_status dsi_run_config_file(const char* path, const char* out_dir,
                               const char* format, uint64_t seed, int use_seed,
                               int jobs, char** summary_json) {
  return guarded([&]() {
    if (path == nullptr) throw std::invalid_argument("null config path");
    std::ifstream in(path);
    if (!in) {
      set_error(std::string("cannot open config file: ") + path);
      return DSI_ERR_IO;
    }
    nlohmann::json config;
    try {
      in >> config;
    } catch (const nlohmann::json::exception& e) {
      set_error(std::string("config parse error: ") + e.what());
      return DSI_ERR_PARSE;
    }
    return run_config(config, out_dir, format, seed, use_seed, jobs, summary_json);
  });
}

size_t dsi_preset_count(void) { return dsi::presets().size(); }

dsi_status dsi_preset_info(size_t index, const char** name, const char** tags,
                           const char** description) {
  return guarded([&]() {
    const auto& list = dsi::presets();
    if (index >= list.size()) throw std::invalid_argument("preset index out of range");
    if (name) *name = list[index].name.c_str();
    if (tags) *tags = list[index].tags.c_str();
    if (description) *description = list[index].description.c_str();
    return DSI_OK;
  });
}

}  // extern "C"
