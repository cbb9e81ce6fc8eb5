// Command-line front end. Everything flows through the public C API in
// dsi.h; experiment logic lives behind it in the shared library.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dsi.h"

namespace {

struct CommonArgs {
  std::string config;
  std::string preset;
  std::string out_dir = "results";
  std::string format = "csv";
  std::uint64_t seed = 0;
  bool has_seed = false;
  int jobs = 0;
};

void add_common(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config, "JSON experiment config file");
  cmd->add_option("--preset", args->preset, "named preset to run");
  cmd->add_option("--out", args->out_dir, "output directory for artifacts")
      ->capture_default_str();
  cmd->add_option("--format", args->format, "tabular artifact format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--seed", args->seed, "seed override")
      ->each([args](const std::string&) { args->has_seed = true; });
  cmd->add_option("--jobs", args->jobs, "parallel workers (0 = all cores)");
}

int run_common(const CommonArgs& args, const std::string& default_preset) {
  char* summary = nullptr;
  dsi_status status;
  if (!args.config.empty()) {
    status = dsi_run_config_file(args.config.c_str(), args.out_dir.c_str(),
                                 args.format.c_str(), args.seed,
                                 args.has_seed ? 1 : 0, args.jobs, &summary);
  } else {
    const std::string name = args.preset.empty() ? default_preset : args.preset;
    status = dsi_run_preset(name.c_str(), args.out_dir.c_str(), args.format.c_str(),
                            args.seed, args.has_seed ? 1 : 0, args.jobs, &summary);
  }
  if (summary != nullptr) {
    std::printf("%s\n", summary);
    dsi_string_free(summary);
  }
  if (status == DSI_OK) return 0;
  if (status == DSI_ERR_CHECK_FAILED) {
    std::fprintf(stderr, "check failed: %s\n", dsi_last_error_message());
    return 1;
  }
  std::fprintf(stderr, "error (%s): %s\n", dsi_status_name(status),
               dsi_last_error_message());
  return 2;
}

int list_presets(const std::string& tag) {
  const size_t count = dsi_preset_count();
  bool any = false;
  for (size_t i = 0; i < count; ++i) {
    const char *name = nullptr, *tags = nullptr, *description = nullptr;
    if (dsi_preset_info(i, &name, &tags, &description) != DSI_OK) continue;
    if (!tag.empty()) {
      const std::string wrapped = "," + std::string(tags) + ",";
      if (wrapped.find("," + tag + ",") == std::string::npos) continue;
    }
    std::printf("%-28s [%s]  %s\n", name, tags, description);
    any = true;
  }
  if (!any && !tag.empty()) std::printf("(no presets tagged \"%s\")\n", tag.c_str());
  return 0;
}

// One-shot coder invocation: hex symbols in, hex payload out.
int mds_one_shot(const std::string& block_hex, const std::string& mask_bits,
                 unsigned field_bits) {
  const unsigned digits = (field_bits + 3) / 4;
  if (block_hex.size() % digits != 0) {
    std::fprintf(stderr, "block hex length must be a multiple of %u\n", digits);
    return 2;
  }
  const size_t n = block_hex.size() / digits;
  if (mask_bits.size() != n) {
    std::fprintf(stderr, "mask length %zu does not match %zu symbols\n",
                 mask_bits.size(), n);
    return 2;
  }
  std::vector<unsigned> symbols(n, 0);
  for (size_t i = 0; i < n; ++i) {
    unsigned v = 0;
    for (unsigned d = 0; d < digits; ++d) {
      const char c = block_hex[i * digits + d];
      const int nibble = c >= '0' && c <= '9'   ? c - '0'
                         : c >= 'a' && c <= 'f' ? c - 'a' + 10
                         : c >= 'A' && c <= 'F' ? c - 'A' + 10
                                                : -1;
      if (nibble < 0) {
        std::fprintf(stderr, "invalid hex digit '%c'\n", c);
        return 2;
      }
      v = (v << 4) | static_cast<unsigned>(nibble);
    }
    symbols[i] = v;
  }
  std::vector<unsigned char> mask(n, 0);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    if (mask_bits[i] == '1') {
      mask[i] = 1;
      ++k;
    } else if (mask_bits[i] != '0') {
      std::fprintf(stderr, "mask must be a 0/1 string\n");
      return 2;
    }
  }

  std::vector<unsigned> coeffs(k, 0);
  dsi_status status =
      dsi_mds_encode(field_bits, symbols.data(), mask.data(), n, k, coeffs.data());
  if (status != DSI_OK) {
    std::fprintf(stderr, "encode error: %s\n", dsi_last_error_message());
    return 2;
  }
  std::vector<unsigned char> payload((k * field_bits + 7) / 8);
  size_t payload_len = payload.size();
  status = dsi_mds_pack(field_bits, coeffs.data(), k, payload.data(), &payload_len);
  if (status != DSI_OK) {
    std::fprintf(stderr, "pack error: %s\n", dsi_last_error_message());
    return 2;
  }
  std::vector<unsigned> recon(n, 0);
  status = dsi_mds_reconstruct(field_bits, coeffs.data(), k, n, recon.data());
  if (status != DSI_OK) {
    std::fprintf(stderr, "reconstruct error: %s\n", dsi_last_error_message());
    return 2;
  }
  bool ok = true;
  for (size_t i = 0; i < n; ++i) {
    if (mask[i] && recon[i] != symbols[i]) ok = false;
  }
  dsi_mds_rates rates;
  dsi_mds_rate_report(n, k, field_bits, &rates);

  std::printf("payload_hex=");
  for (unsigned char b : payload) std::printf("%02x", b);
  std::printf("\npayload_bits=%zu\n", k * field_bits);
  std::printf("reconstruction=");
  for (size_t i = 0; i < n; ++i) {
    std::printf("%0*x", static_cast<int>(digits), recon[i]);
  }
  std::printf("\nrelevant_match=%s\n", ok ? "true" : "false");
  std::printf("rate_ignore_bits=%g rate_tell_decoder_bits=%g rate_scheme_bits=%g\n",
              rates.ignore_bits, rates.tell_decoder_bits, rates.scheme_bits);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Source coding with distortion side information: exact "
               "rate-distortion oracles, interpolation coders, and rate-penalty "
               "analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dsi_version()));

  struct Sub {
    const char* command;
    const char* preset;
    const char* help;
  };
  const std::vector<Sub> subs = {
      {"rd-curves", "rd-curves-binary-hamming",
       "sweep the four rate-distortion curves of an instance"},
      {"check-theorem1", "theorem1-z4",
       "verify encoder-side equality on a group instance"},
      {"check-theorem3", "theorem3-binary",
       "verify decoder-side uselessness on a scaled instance"},
      {"dft-demo", "dft-64-16", "band-limited interpolation quantizer demo"},
      {"two-stage", "two-stage-64-32", "two-stage transform quantizer demo"},
      {"rate-gap", "rate-gap-table", "closed-form and Monte-Carlo rate penalties"},
      {"penalty-check", "penalty-check-two-atom",
       "oracle-measured penalty trend for two-atom side information"},
  };
  std::vector<std::pair<CommonArgs, const Sub*>> runs(subs.size());
  for (size_t i = 0; i < subs.size(); ++i) {
    CLI::App* cmd = app.add_subcommand(subs[i].command, subs[i].help);
    runs[i].second = &subs[i];
    add_common(cmd, &runs[i].first);
    const size_t idx = i;
    cmd->callback([&runs, idx]() {
      std::exit(run_common(runs[idx].first, runs[idx].second->preset));
    });
  }

  // mds-demo doubles as a one-shot coder when --block is given.
  CommonArgs mds_args;
  std::string block_hex, mask_bits;
  unsigned field_bits = 3;
  CLI::App* mds = app.add_subcommand(
      "mds-demo", "erasure-interpolation lossless coder (preset demo or one block)");
  add_common(mds, &mds_args);
  mds->add_option("--block", block_hex, "block as fixed-width hex symbols");
  mds->add_option("--mask", mask_bits, "relevance mask as a 0/1 string");
  mds->add_option("--field-bits", field_bits, "field width m for GF(2^m)")
      ->capture_default_str();
  mds->callback([&]() {
    if (!block_hex.empty()) {
      std::exit(mds_one_shot(block_hex, mask_bits, field_bits));
    }
    std::exit(run_common(mds_args, "mds-7-5-gf8"));
  });

  std::string tag_filter;
  CLI::App* list = app.add_subcommand("list-presets", "list built-in experiment presets");
  list->add_option("--tag", tag_filter, "filter by section tag, e.g. 4.2");
  list->callback([&]() { std::exit(list_presets(tag_filter)); });

  CLI11_PARSE(app, argc, argv);
  return 0;
}
