#include "core/transform_scheme.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/parallel.hpp"

namespace dsi {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865476;

std::vector<cxd> random_block(Rng& rng, std::size_t n) {
  std::vector<cxd> x(n);
  for (auto& v : x) v = rng.next_complex_gaussian();
  return x;
}

double mse_masked(const std::vector<cxd>& a, const std::vector<cxd>& b,
                  const std::vector<std::uint8_t>& mask, std::uint8_t want,
                  std::size_t count) {
  if (count == 0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (mask[i] == want) s += std::norm(a[i] - b[i]);
  }
  return s / static_cast<double>(count);
}

}  // namespace

std::vector<std::size_t> sample_mask_positions(const MaskEnsemble& ens, Rng& rng,
                                               std::size_t* rejections) {
  if (ens.k == 0 || ens.k > ens.n) throw std::invalid_argument("mask: need 1 <= k <= n");
  if (ens.kind != MaskKind::Uniform && ens.n % ens.k != 0) {
    throw std::invalid_argument("mask: structured placement needs k to divide n");
  }
  for (int attempt = 0; attempt <= ens.max_resamples; ++attempt) {
    std::vector<std::size_t> pos(ens.k);
    if (ens.kind == MaskKind::Stratified) {
      const std::size_t stride = ens.n / ens.k;
      for (std::size_t i = 0; i < ens.k; ++i) {
        pos[i] = i * stride + static_cast<std::size_t>(rng.next_below(stride));
      }
    } else if (ens.kind == MaskKind::Comb) {
      const std::size_t stride = ens.n / ens.k;
      const std::size_t shift = static_cast<std::size_t>(rng.next_below(ens.n));
      for (std::size_t i = 0; i < ens.k; ++i) pos[i] = (shift + i * stride) % ens.n;
      std::sort(pos.begin(), pos.end());
    } else {
      // Partial Fisher-Yates draw of k distinct positions.
      std::vector<std::size_t> pool(ens.n);
      for (std::size_t i = 0; i < ens.n; ++i) pool[i] = i;
      for (std::size_t i = 0; i < ens.k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next_below(ens.n - i));
        std::swap(pool[i], pool[j]);
        pos[i] = pool[i];
      }
      std::sort(pos.begin(), pos.end());
    }
    if (ens.k == ens.n) return pos;
    try {
      InterpolationSystem probe(ens.n, pos, ens.condition_bound);
      return pos;
    } catch (const std::invalid_argument&) {
      if (rejections) ++*rejections;
    }
  }
  throw std::runtime_error("mask: no mask within the condition bound after max_resamples draws");
}

std::vector<std::uint8_t> positions_to_mask(std::size_t n,
                                            const std::vector<std::size_t>& positions) {
  std::vector<std::uint8_t> mask(n, 0);
  for (auto p : positions) mask[p] = 1;
  return mask;
}

std::vector<double> calibrate_coefficient_sigma(
    const MaskEnsemble& ens, std::size_t trials, std::uint64_t seed,
    const ComplexQuantizer* stage_one) {
  std::vector<double> acc(ens.k, 0.0);
  std::size_t rejections = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(seed, 0xCA1B000000000000ULL ^ t);
    const auto positions = sample_mask_positions(ens, rng, &rejections);
    InterpolationSystem sys(ens.n, positions, ens.condition_bound);
    const auto x = random_block(rng, ens.n);
    std::vector<cxd> target(ens.k);
    for (std::size_t i = 0; i < ens.k; ++i) {
      const cxd v = x[positions[i]];
      // With a first-stage quantizer the calibrated signal is its residual.
      target[i] = stage_one ? v - stage_one->quantize(v) : v;
    }
    const auto coeffs = sys.interpolate(target);
    for (std::size_t f = 0; f < ens.k; ++f) {
      acc[f] += 0.5 * std::norm(coeffs[f]);  // per-dimension second moment
    }
  }
  std::vector<double> sigma(ens.k);
  for (std::size_t f = 0; f < ens.k; ++f) {
    sigma[f] = std::sqrt(acc[f] / static_cast<double>(trials));
  }
  return sigma;
}

// ---- band-limited interpolation scheme ----

DftSchemeResult run_dft_scheme(const DftSchemeConfig& config, bool keep_rows) {
  if (config.k == 0 || config.k > config.n) {
    throw std::invalid_argument("scheme: need 1 <= k <= n");
  }
  MaskEnsemble ens{config.n, config.k, config.condition_bound, 10000, config.mask_kind};

  // Quantizer scales from a calibration pass over the same ensemble.
  std::vector<double> sigma;
  if (config.k == config.n) {
    sigma.assign(config.k, kInvSqrt2);  // unitary case: coefficients are unit variance
  } else {
    sigma = calibrate_coefficient_sigma(ens, config.calibration_trials, config.seed,
                                        nullptr);
  }
  std::vector<ComplexQuantizer> quant;
  quant.reserve(config.k);
  for (std::size_t f = 0; f < config.k; ++f) {
    quant.emplace_back(ScalarQuantizerSpec{config.rate_bits, config.loading_factor, false},
                       sigma[f]);
  }

  DftSchemeResult res;
  res.coeff_sigma = sigma;
  res.trials = config.trials;
  res.bits_per_block = config.rate_bits * static_cast<double>(config.k);
  res.rows.resize(keep_rows ? config.trials : 0);

  std::vector<TransformTrialRow> rows(config.trials);
  std::vector<std::size_t> rejections(config.trials, 0);
  parallel_for(config.trials, config.jobs, [&](std::size_t t) {
    Rng rng(config.seed, t);
    const auto positions = sample_mask_positions(ens, rng, &rejections[t]);
    InterpolationSystem sys(config.n, positions, config.condition_bound);
    const auto mask = positions_to_mask(config.n, positions);
    const auto x = random_block(rng, config.n);
    std::vector<cxd> relevant(config.k);
    for (std::size_t i = 0; i < config.k; ++i) relevant[i] = x[positions[i]];

    const auto coeffs = sys.interpolate(relevant);
    std::vector<cxd> quantized(config.k);
    double coeff_err = 0.0;
    for (std::size_t f = 0; f < config.k; ++f) {
      quantized[f] = quant[f].quantize(coeffs[f]);
      coeff_err += std::norm(coeffs[f] - quantized[f]);
    }
    const auto recon = unitary_idft_padded(quantized, config.n);

    TransformTrialRow row;
    row.dist_coeff = coeff_err / static_cast<double>(config.k);
    row.dist_important = mse_masked(x, recon, mask, 1, config.k);
    row.dist_other = mse_masked(x, recon, mask, 0, config.n - config.k);
    row.bits = res.bits_per_block;
    rows[t] = row;
  });

  for (std::size_t t = 0; t < config.trials; ++t) {
    res.mean_dist_important += rows[t].dist_important;
    res.mean_dist_other += rows[t].dist_other;
    res.mean_dist_coeff += rows[t].dist_coeff;
    res.mask_rejections += rejections[t];
    const double excess = rows[t].dist_important - rows[t].dist_coeff;
    if (excess > 1e-12) {
      ++res.contraction_violations;
      res.max_contraction_excess = std::max(res.max_contraction_excess, excess);
    }
    if (keep_rows) res.rows[t] = rows[t];
  }
  res.mean_dist_important /= static_cast<double>(config.trials);
  res.mean_dist_other /= static_cast<double>(config.trials);
  res.mean_dist_coeff /= static_cast<double>(config.trials);
  return res;
}

// ---- two-stage scheme ----

TwoStageCodec::TwoStageCodec(const TwoStageConfig& config, std::vector<double> shift_sigma)
    : cfg_(config),
      sample_q_(ScalarQuantizerSpec{config.rate_low, config.loading_factor,
                                    config.bypass_sample_quantizer},
                kInvSqrt2) {
  if (config.rate_high < config.rate_low) {
    throw std::invalid_argument("two-stage: need rate_high >= rate_low");
  }
  if (shift_sigma.size() != config.k) {
    throw std::invalid_argument("two-stage: need one shift sigma per coefficient");
  }
  shift_q_.reserve(config.k);
  for (std::size_t f = 0; f < config.k; ++f) {
    shift_q_.emplace_back(
        ScalarQuantizerSpec{config.rate_high - config.rate_low,
                            config.shift_loading_factor, config.bypass_shift_quantizer},
        shift_sigma[f]);
  }
}

double TwoStageCodec::payload_bits() const {
  return static_cast<double>(cfg_.n) * cfg_.rate_low +
         static_cast<double>(cfg_.k) * (cfg_.rate_high - cfg_.rate_low);
}

TwoStagePayload TwoStageCodec::encode(const ComplexBlock& block,
                                      const InterpolationSystem& system) const {
  const std::size_t n = cfg_.n, k = cfg_.k;
  if (block.samples.size() != n || block.mask.size() != n) {
    throw std::invalid_argument("two-stage encode: block length mismatch");
  }
  const auto& positions = system.positions();
  if (positions.size() != k) {
    throw std::invalid_argument("two-stage encode: system size mismatch");
  }

  // Stage 1: quantize the important samples; unimportant ones stay 0.
  std::vector<cxd> y1(n, cxd(0.0));
  for (auto p : positions) y1[p] = sample_q_.quantize(block.samples[p]);

  // Shift: interpolate the first-stage error at the important positions and
  // quantize its coefficients.
  std::vector<cxd> err(k);
  for (std::size_t i = 0; i < k; ++i) {
    err[i] = block.samples[positions[i]] - y1[positions[i]];
  }
  const auto shift_coeffs = system.interpolate(err);
  std::vector<cxd> shift_hat(k);
  for (std::size_t f = 0; f < k; ++f) shift_hat[f] = shift_q_[f].quantize(shift_coeffs[f]);
  const auto shift_signal = unitary_idft_padded(shift_hat, n);

  // Stage 2: quantize the remaining residual at the unimportant positions
  // with the same rate-R0 quantizer the decoder applies everywhere.
  TwoStagePayload payload;
  payload.sample_indices.resize(n);
  payload.shift_indices.resize(k);
  if (cfg_.bypass_sample_quantizer) payload.sample_values.resize(n);
  if (cfg_.bypass_shift_quantizer) payload.shift_values = shift_hat;

  for (std::size_t i = 0; i < n; ++i) {
    cxd v;
    if (block.mask[i]) {
      v = block.samples[i];
    } else {
      v = block.samples[i] - shift_signal[i];  // y1 is 0 here
    }
    if (cfg_.bypass_sample_quantizer) {
      payload.sample_values[i] = v;
    } else {
      payload.sample_indices[i] = sample_q_.encode(v);
    }
  }
  if (!cfg_.bypass_shift_quantizer) {
    for (std::size_t f = 0; f < k; ++f) {
      payload.shift_indices[f] = shift_q_[f].encode(shift_coeffs[f]);
    }
  }
  return payload;
}

std::vector<cxd> TwoStageCodec::decode(const TwoStagePayload& payload,
                                       std::size_t n) const {
  if (n != cfg_.n) throw std::invalid_argument("two-stage decode: length mismatch");
  std::vector<cxd> shift_hat(cfg_.k);
  for (std::size_t f = 0; f < cfg_.k; ++f) {
    shift_hat[f] = cfg_.bypass_shift_quantizer ? payload.shift_values[f]
                                               : shift_q_[f].decode(payload.shift_indices[f]);
  }
  const auto shift_signal = unitary_idft_padded(shift_hat, n);
  std::vector<cxd> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cxd base = cfg_.bypass_sample_quantizer
                         ? payload.sample_values[i]
                         : sample_q_.decode(payload.sample_indices[i]);
    out[i] = base + shift_signal[i];
  }
  return out;
}

InformedSample informed_baseline(const ComplexBlock& block, double rate_low,
                                 double rate_high, double loading_factor) {
  const ComplexQuantizer q_low(ScalarQuantizerSpec{rate_low, loading_factor, false},
                               kInvSqrt2);
  const ComplexQuantizer q_high(ScalarQuantizerSpec{rate_high, loading_factor, false},
                                kInvSqrt2);
  InformedSample out;
  std::size_t n_imp = 0, n_oth = 0;
  for (std::size_t i = 0; i < block.samples.size(); ++i) {
    if (block.mask[i]) {
      out.dist_important += std::norm(block.samples[i] - q_high.quantize(block.samples[i]));
      out.bits += rate_high;
      ++n_imp;
    } else {
      out.dist_other += std::norm(block.samples[i] - q_low.quantize(block.samples[i]));
      out.bits += rate_low;
      ++n_oth;
    }
  }
  if (n_imp) out.dist_important /= static_cast<double>(n_imp);
  if (n_oth) out.dist_other /= static_cast<double>(n_oth);
  return out;
}

TwoStageResult run_two_stage(const TwoStageConfig& config, bool keep_rows) {
  if (config.k == 0 || config.k > config.n) {
    throw std::invalid_argument("two-stage: need 1 <= k <= n");
  }
  MaskEnsemble ens{config.n, config.k, config.condition_bound, 10000, config.mask_kind};

  // Calibrate the shift-coefficient scales against the stage-1 residual.
  const ComplexQuantizer stage_one(
      ScalarQuantizerSpec{config.rate_low, config.loading_factor,
                          config.bypass_sample_quantizer},
      kInvSqrt2);
  std::vector<double> shift_sigma =
      calibrate_coefficient_sigma(ens, config.calibration_trials, config.seed, &stage_one);
  const TwoStageCodec codec(config, shift_sigma);

  TwoStageResult res;
  res.shift_sigma = shift_sigma;
  res.trials = config.trials;
  res.bits_per_block = codec.payload_bits();
  res.informed_bits_per_block = static_cast<double>(config.k) * config.rate_high +
                                static_cast<double>(config.n - config.k) * config.rate_low;
  res.rows.resize(keep_rows ? config.trials : 0);

  std::vector<TransformTrialRow> rows(config.trials);
  std::vector<InformedSample> informed(config.trials);
  std::vector<std::size_t> rejections(config.trials, 0);
  parallel_for(config.trials, config.jobs, [&](std::size_t t) {
    Rng rng(config.seed, t);
    const auto positions = sample_mask_positions(ens, rng, &rejections[t]);
    InterpolationSystem sys(config.n, positions, config.condition_bound);
    ComplexBlock block{random_block(rng, config.n),
                       positions_to_mask(config.n, positions)};

    const auto payload = codec.encode(block, sys);
    const auto recon = codec.decode(payload, config.n);

    TransformTrialRow row;
    row.dist_important = mse_masked(block.samples, recon, block.mask, 1, config.k);
    row.dist_other = mse_masked(block.samples, recon, block.mask, 0,
                                config.n - config.k);
    row.bits = codec.payload_bits();
    rows[t] = row;
    informed[t] = informed_baseline(block, config.rate_low, config.rate_high,
                                    config.loading_factor);
  });

  for (std::size_t t = 0; t < config.trials; ++t) {
    res.dist_important += rows[t].dist_important;
    res.dist_other += rows[t].dist_other;
    res.informed_dist_important += informed[t].dist_important;
    res.informed_dist_other += informed[t].dist_other;
    res.mask_rejections += rejections[t];
    if (keep_rows) res.rows[t] = rows[t];
  }
  const double nt = static_cast<double>(config.trials);
  res.dist_important /= nt;
  res.dist_other /= nt;
  res.informed_dist_important /= nt;
  res.informed_dist_other /= nt;
  res.deficit_db =
      10.0 * std::log10(res.dist_important / res.informed_dist_important);
  return res;
}

}  // namespace dsi
