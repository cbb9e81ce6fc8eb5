#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace dsi {

/// A named, reproducible experiment configuration.
struct Preset {
  std::string name;
  std::string tags;  // comma-separated section labels, e.g. "2.1"
  std::string description;
  nlohmann::json config;
};

const std::vector<Preset>& presets();
std::vector<const Preset*> find_presets(const std::string& tag_filter);
const Preset* find_preset(const std::string& name);

struct RunOptions {
  std::string out_dir = ".";
  std::string format = "csv";  // "csv" or "json" for tabular artifacts
  std::optional<std::uint64_t> seed;  // overrides the config seed
  int jobs = 1;
};

struct RunOutcome {
  int exit_code = 0;  // 0 ok; 1 a verification tolerance failed
  bool passed = true;
  std::vector<std::string> files;
  nlohmann::json summary;
};

/// Execute one experiment config. Throws std::invalid_argument on schema
/// errors; tolerance failures are reported through exit_code/passed.
RunOutcome run_experiment(const nlohmann::json& config, const RunOptions& options);

/// FNV-1a over the canonical dump; recorded in every artifact header.
std::string config_hash(const nlohmann::json& config);

std::string format_double(double v);

}  // namespace dsi
