#pragma once

#include <cstdint>
#include <vector>

#include "core/dft.hpp"
#include "core/quantizer.hpp"
#include "core/rng.hpp"

namespace dsi {

/// Complex source block with a binary relevance mask (1 = important).
struct ComplexBlock {
  std::vector<cxd> samples;
  std::vector<std::uint8_t> mask;
};

/// How random relevance patterns are drawn. Uniform picks any k-subset;
/// Stratified places one important sample uniformly inside each length-
/// (n/k) cell, which keeps the induced interpolation well conditioned;
/// Comb is an equispaced pattern at a uniformly random cyclic shift, whose
/// interpolation is perfectly conditioned.
enum class MaskKind { Uniform, Stratified, Comb };

/// Draw a random k-of-n mask whose interpolation system passes the
/// condition bound, redrawing otherwise. Rejections are counted, never
/// silently absorbed.
struct MaskEnsemble {
  std::size_t n = 0;
  std::size_t k = 0;
  double condition_bound = 1e6;
  int max_resamples = 10000;
  MaskKind kind = MaskKind::Uniform;
};

std::vector<std::size_t> sample_mask_positions(const MaskEnsemble& ens, Rng& rng,
                                               std::size_t* rejections);

std::vector<std::uint8_t> positions_to_mask(std::size_t n,
                                            const std::vector<std::size_t>& positions);

/// Per-dimension standard deviation of each interpolated coefficient,
/// estimated over the mask/source ensemble. With a stage-one quantizer the
/// calibrated signal is its residual; without one, the raw samples.
std::vector<double> calibrate_coefficient_sigma(
    const MaskEnsemble& ens, std::size_t trials, std::uint64_t seed,
    const ComplexQuantizer* stage_one);

// ---- Band-limited interpolation scheme (relevant-or-irrelevant masks) ----

struct DftSchemeConfig {
  std::size_t n = 64;
  std::size_t k = 16;
  double rate_bits = 8.0;         // per coefficient, split over re/im
  double loading_factor = 4.0;
  double condition_bound = 1e6;
  MaskKind mask_kind = MaskKind::Uniform;
  std::size_t trials = 100000;
  std::size_t calibration_trials = 512;
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct TransformTrialRow {
  double dist_important = 0.0;  // mean squared error at mask-1 positions
  double dist_other = 0.0;      // at mask-0 positions
  double dist_coeff = 0.0;      // per-coefficient quantization error
  double bits = 0.0;
};

struct DftSchemeResult {
  double mean_dist_important = 0.0;
  double mean_dist_other = 0.0;
  double mean_dist_coeff = 0.0;
  double bits_per_block = 0.0;
  std::size_t trials = 0;
  std::size_t mask_rejections = 0;
  std::size_t contraction_violations = 0;  // dist_important > dist_coeff + 1e-12
  double max_contraction_excess = 0.0;
  std::vector<double> coeff_sigma;
  std::vector<TransformTrialRow> rows;  // populated when keep_rows
};

/// Quantize the k interpolated coefficients of each block and reconstruct by
/// zero-padded inverse DFT; the decoder never sees the mask.
DftSchemeResult run_dft_scheme(const DftSchemeConfig& config, bool keep_rows = false);

// ---- Two-stage scheme for two-level side information ----

struct TwoStageConfig {
  std::size_t n = 64;
  std::size_t k = 32;              // number of important (q1) positions
  double rate_low = 4.0;           // R0, bits per complex sample
  double rate_high = 8.0;          // R1 >= R0
  double loading_factor = 4.0;     // source-sample quantizers; 0 = rate-matched
  double shift_loading_factor = 4.0;  // shift-coefficient quantizers; 0 = rate-matched
  double condition_bound = 1e6;
  MaskKind mask_kind = MaskKind::Comb;
  std::size_t trials = 10000;
  std::size_t calibration_trials = 512;
  std::uint64_t seed = 1;
  int jobs = 1;
  bool bypass_sample_quantizer = false;  // test hooks
  bool bypass_shift_quantizer = false;
};

/// Wire content of one encoded block: one rate-R0 index pair per position
/// (important positions carry the sample, the rest carry the residual) and
/// one rate-(R1-R0) index pair per shift coefficient. The decoder needs no
/// mask knowledge. In bypass mode values ride along unquantized.
struct TwoStagePayload {
  std::vector<std::pair<int, int>> sample_indices;
  std::vector<std::pair<int, int>> shift_indices;
  std::vector<cxd> sample_values;  // bypass only
  std::vector<cxd> shift_values;   // bypass only
};

class TwoStageCodec {
 public:
  TwoStageCodec(const TwoStageConfig& config, std::vector<double> shift_sigma);

  TwoStagePayload encode(const ComplexBlock& block,
                         const InterpolationSystem& system) const;
  std::vector<cxd> decode(const TwoStagePayload& payload, std::size_t n) const;

  double payload_bits() const;  // n*R0 + k*(R1-R0), exact

 private:
  TwoStageConfig cfg_;
  ComplexQuantizer sample_q_;
  std::vector<ComplexQuantizer> shift_q_;  // one per coefficient
};

struct TwoStageResult {
  double dist_important = 0.0;
  double dist_other = 0.0;
  double bits_per_block = 0.0;
  double informed_dist_important = 0.0;
  double informed_dist_other = 0.0;
  double informed_bits_per_block = 0.0;
  double deficit_db = 0.0;  // 10 log10(dist_important / informed_dist_important)
  std::size_t trials = 0;
  std::size_t mask_rejections = 0;
  std::vector<double> shift_sigma;
  std::vector<TransformTrialRow> rows;
};

/// Run the two-stage scheme and, on the same blocks and masks, the fully
/// informed per-label baseline (rate R1 at important positions, R0 at the
/// rest) for comparison at matched total rate.
TwoStageResult run_two_stage(const TwoStageConfig& config, bool keep_rows = false);

/// Per-label scalar quantization with known labels; the comparison target.
struct InformedSample {
  double dist_important = 0.0;
  double dist_other = 0.0;
  double bits = 0.0;
};
InformedSample informed_baseline(const ComplexBlock& block, double rate_low,
                                 double rate_high, double loading_factor);

}  // namespace dsi
