#include "core/rd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "core/rng.hpp"

namespace dsi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One alternating-minimization problem: inputs weighted by w, outputs b,
// distortion d(a, b), minimizing I(a; b) + slope * E[d]. An optional 0/1
// support mask restricts the channel's support (used at slope 0 for the
// zero-distortion endpoints).
struct BaOutcome {
  Matrix channel;
  double rate = 0.0;
  double distortion = 0.0;
  double objective = 0.0;
  int iterations = 0;
  bool converged = true;
  double max_objective_increase = 0.0;
};

double channel_objective(const std::vector<double>& w, const Matrix& d,
                         double slope, const Matrix& p, double* rate_out,
                         double* dist_out) {
  const std::size_t na = p.rows, nb = p.cols;
  std::vector<double> m(nb, 0.0);
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t b = 0; b < nb; ++b) m[b] += w[a] * p(a, b);
  }
  double info = 0.0, dist = 0.0;
  for (std::size_t a = 0; a < na; ++a) {
    if (w[a] <= 0.0) continue;
    for (std::size_t b = 0; b < nb; ++b) {
      const double pb = p(a, b);
      if (pb > 0.0) info += w[a] * pb * std::log(pb / m[b]);
      dist += w[a] * pb * d(a, b);
    }
  }
  info = std::max(info, 0.0);
  if (rate_out) *rate_out = info;
  if (dist_out) *dist_out = dist;
  return info + slope * dist;
}

// One marginal + channel update in place; returns the updated objective.
double ba_step(const std::vector<double>& w, const Matrix& d, double slope,
               const Matrix* support, Matrix& p, double* rate_out,
               double* dist_out) {
  const std::size_t na = p.rows, nb = p.cols;
  std::vector<double> m(nb, 0.0);
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t b = 0; b < nb; ++b) m[b] += w[a] * p(a, b);
  }
  std::vector<double> logm(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    logm[b] = m[b] > 0.0 ? std::log(m[b]) : -kInf;
  }
  std::vector<double> t(nb);
  for (std::size_t a = 0; a < na; ++a) {
    double tmax = -kInf;
    for (std::size_t b = 0; b < nb; ++b) {
      const bool allowed = support == nullptr || (*support)(a, b) > 0.0;
      t[b] = allowed ? logm[b] - slope * d(a, b) : -kInf;
      tmax = std::max(tmax, t[b]);
    }
    if (tmax == -kInf) {
      throw std::runtime_error("alternating minimization: empty channel row support");
    }
    double z = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      t[b] = t[b] == -kInf ? 0.0 : std::exp(t[b] - tmax);
      z += t[b];
    }
    for (std::size_t b = 0; b < nb; ++b) p(a, b) = t[b] / z;
  }
  return channel_objective(w, d, slope, p, rate_out, dist_out);
}

Matrix initial_channel(std::size_t na, std::size_t nb, const Matrix* support) {
  Matrix p(na, nb, 0.0);
  for (std::size_t a = 0; a < na; ++a) {
    double z = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      const bool allowed = support == nullptr || (*support)(a, b) > 0.0;
      p(a, b) = allowed ? 1.0 : 0.0;
      z += p(a, b);
    }
    if (z <= 0.0) {
      throw std::runtime_error("alternating minimization: empty channel row support");
    }
    for (std::size_t b = 0; b < nb; ++b) p(a, b) /= z;
  }
  return p;
}

BaOutcome blahut_arimoto(const std::vector<double>& w, const Matrix& d,
                         double slope, const SolverConfig& config,
                         const Matrix* support = nullptr) {
  BaOutcome out;
  out.channel = initial_channel(w.size(), d.cols, support);
  double rate = 0.0, dist = 0.0;
  double prev = channel_objective(w, d, slope, out.channel, &rate, &dist);
  out.converged = false;
  for (int it = 1; it <= config.max_iterations; ++it) {
    const double cur = ba_step(w, d, slope, support, out.channel, &rate, &dist);
    out.iterations = it;
    out.max_objective_increase = std::max(out.max_objective_increase, cur - prev);
    const double denom = std::max(std::abs(cur), 1e-12);
    if (std::abs(prev - cur) <= config.rel_tolerance * denom) {
      out.converged = true;
      prev = cur;
      break;
    }
    prev = cur;
  }
  out.objective = prev;
  out.rate = rate;
  out.distortion = dist;
  return out;
}

// ---- scenario assembly helpers ----

std::vector<double> super_source_weights(const DiscreteInstance& inst) {
  const std::size_t nx = inst.source_size(), nq = inst.side_size();
  std::vector<double> w(nx * nq);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t q = 0; q < nq; ++q) w[x * nq + q] = inst.px(x) * inst.pq(q);
  }
  return w;
}

Matrix super_source_distortion(const DiscreteInstance& inst) {
  const std::size_t nx = inst.source_size(), nq = inst.side_size();
  Matrix d(nx * nq, inst.recon_size());
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t q = 0; q < nq; ++q) {
      for (std::size_t xh = 0; xh < inst.recon_size(); ++xh) {
        d(x * nq + q, xh) = inst.d(x, xh, q);
      }
    }
  }
  return d;
}

// I(xhat; q) and I(x; xhat | q) of a channel p(xhat | x, q).
void enc_decomposition(const DiscreteInstance& inst, const Matrix& channel,
                       double* cond_rate, double* leakage) {
  const std::size_t nx = inst.source_size(), nq = inst.side_size();
  const std::size_t nxh = inst.recon_size();
  Matrix joint_qxh(nq, nxh, 0.0);
  double cond = 0.0;
  for (std::size_t q = 0; q < nq; ++q) {
    if (inst.pq(q) <= 0.0) continue;
    Matrix joint_q(nx, nxh, 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t xh = 0; xh < nxh; ++xh) {
        const double p = inst.px(x) * channel(x * nq + q, xh);
        joint_q(x, xh) = p;
        joint_qxh(q, xh) += inst.pq(q) * p;
      }
    }
    cond += inst.pq(q) * mutual_information(joint_q);
  }
  if (cond_rate) *cond_rate = cond;
  if (leakage) *leakage = mutual_information(joint_qxh);
}

ScenarioResult solve_none(const DiscreteInstance& inst, const SolverConfig& cfg) {
  ScenarioResult res;
  res.scenario = Scenario::None;
  const Matrix dbar = inst.averaged_distortion();
  for (double slope : cfg.slope_grid) {
    BaOutcome ba = blahut_arimoto(inst.source_law(), dbar, slope, cfg);
    res.points.push_back({slope, ba.rate, ba.distortion, ba.iterations, ba.converged});
    res.channels.push_back(std::move(ba.channel));
    res.max_objective_increase =
        std::max(res.max_objective_increase, ba.max_objective_increase);
  }
  return res;
}

ScenarioResult solve_both(const DiscreteInstance& inst, const SolverConfig& cfg) {
  ScenarioResult res;
  res.scenario = Scenario::Both;
  const std::size_t nx = inst.source_size(), nq = inst.side_size();
  const std::size_t nxh = inst.recon_size();
  for (double slope : cfg.slope_grid) {
    Matrix stacked(nx * nq, nxh, 0.0);
    double rate = 0.0, dist = 0.0;
    int iters = 0;
    bool conv = true;
    for (std::size_t q = 0; q < nq; ++q) {
      if (inst.pq(q) <= 0.0) {
        for (std::size_t x = 0; x < nx; ++x) {
          for (std::size_t xh = 0; xh < nxh; ++xh) stacked(x * nq + q, xh) = 1.0 / nxh;
        }
        continue;
      }
      Matrix dq(nx, nxh);
      for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t xh = 0; xh < nxh; ++xh) dq(x, xh) = inst.d(x, xh, q);
      }
      BaOutcome ba = blahut_arimoto(inst.source_law(), dq, slope, cfg);
      rate += inst.pq(q) * ba.rate;
      dist += inst.pq(q) * ba.distortion;
      iters = std::max(iters, ba.iterations);
      conv = conv && ba.converged;
      res.max_objective_increase =
          std::max(res.max_objective_increase, ba.max_objective_increase);
      for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t xh = 0; xh < nxh; ++xh) {
          stacked(x * nq + q, xh) = ba.channel(x, xh);
        }
      }
    }
    res.points.push_back({slope, rate, dist, iters, conv});
    res.channels.push_back(std::move(stacked));
  }
  return res;
}

ScenarioResult solve_enc(const DiscreteInstance& inst, const SolverConfig& cfg) {
  ScenarioResult res;
  res.scenario = Scenario::Enc;
  const std::vector<double> w = super_source_weights(inst);
  const Matrix d = super_source_distortion(inst);
  for (double slope : cfg.slope_grid) {
    BaOutcome ba = blahut_arimoto(w, d, slope, cfg);
    res.points.push_back({slope, ba.rate, ba.distortion, ba.iterations, ba.converged});
    double cond = 0.0, leak = 0.0;
    enc_decomposition(inst, ba.channel, &cond, &leak);
    res.conditional_rate.push_back(cond);
    res.side_leakage.push_back(leak);
    res.channels.push_back(std::move(ba.channel));
    res.max_objective_increase =
        std::max(res.max_objective_increase, ba.max_objective_increase);
  }
  return res;
}

// ---- decoder-side scenario ----

struct DecState {
  Matrix pu_given_x;        // rows x, cols u
  std::vector<int> recon;   // v(u, q), flattened u * nq + q
};

void dec_recon_update(const DiscreteInstance& inst, const Matrix& pu, DecState* s) {
  const std::size_t nx = inst.source_size(), nq = inst.side_size();
  const std::size_t nxh = inst.recon_size(), nu = pu.cols;
  s->recon.assign(nu * nq, 0);
  std::vector<double> weight(nx);
  for (std::size_t u = 0; u < nu; ++u) {
    double mass = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      weight[x] = inst.px(x) * pu(x, u);
      mass += weight[x];
    }
    for (std::size_t q = 0; q < nq; ++q) {
      int best = 0;
      if (mass > 0.0) {
        double best_val = kInf;
        for (std::size_t xh = 0; xh < nxh; ++xh) {
          double v = 0.0;
          for (std::size_t x = 0; x < nx; ++x) v += weight[x] * inst.d(x, xh, q);
          if (v < best_val - 0.0) {  // ties break toward the lowest index
            best_val = v;
            best = static_cast<int>(xh);
          }
        }
      }
      s->recon[u * nq + q] = best;
    }
  }
}

Matrix dec_induced_distortion(const DiscreteInstance& inst,
                              const std::vector<int>& recon, std::size_t nu) {
  const std::size_t nx = inst.source_size(), nq = inst.side_size();
  Matrix rho(nx, nu, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t u = 0; u < nu; ++u) {
      double v = 0.0;
      for (std::size_t q = 0; q < nq; ++q) {
        v += inst.pq(q) * inst.d(x, static_cast<std::size_t>(recon[u * nq + q]), q);
      }
      rho(x, u) = v;
    }
  }
  return rho;
}

struct DecOutcome {
  DecState state;
  double rate = 0.0, distortion = 0.0, objective = kInf;
  int iterations = 0;
  bool converged = false;
  double max_objective_increase = 0.0;
};

DecOutcome dec_solve_from(const DiscreteInstance& inst, const SolverConfig& cfg,
                          double slope, Matrix init_pu) {
  DecOutcome out;
  out.state.pu_given_x = std::move(init_pu);
  const std::size_t nu = out.state.pu_given_x.cols;
  dec_recon_update(inst, out.state.pu_given_x, &out.state);
  Matrix rho = dec_induced_distortion(inst, out.state.recon, nu);
  double rate = 0.0, dist = 0.0;
  double prev = channel_objective(inst.source_law(), rho, slope,
                                  out.state.pu_given_x, &rate, &dist);
  std::vector<int> prev_recon = out.state.recon;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    ba_step(inst.source_law(), rho, slope, nullptr, out.state.pu_given_x,
            nullptr, nullptr);
    dec_recon_update(inst, out.state.pu_given_x, &out.state);
    rho = dec_induced_distortion(inst, out.state.recon, nu);
    const double cur = channel_objective(inst.source_law(), rho, slope,
                                         out.state.pu_given_x, &rate, &dist);
    out.iterations = it;
    out.max_objective_increase = std::max(out.max_objective_increase, cur - prev);
    const double denom = std::max(std::abs(cur), 1e-12);
    if (std::abs(prev - cur) <= cfg.rel_tolerance * denom &&
        out.state.recon == prev_recon) {
      prev = cur;
      out.converged = true;
      break;
    }
    prev = cur;
    prev_recon = out.state.recon;
  }
  out.objective = prev;
  out.rate = rate;
  out.distortion = dist;
  return out;
}

ScenarioResult solve_dec(const DiscreteInstance& inst, const SolverConfig& cfg) {
  ScenarioResult res;
  res.scenario = Scenario::Dec;
  const std::size_t nx = inst.source_size(), nxh = inst.recon_size();
  const std::size_t nu = cfg.aux_cardinality == 0 ? nxh + 1 : cfg.aux_cardinality;
  if (nu < nxh) {
    throw std::invalid_argument("aux_cardinality must be at least the reconstruction alphabet size");
  }
  const Matrix dbar = inst.averaged_distortion();
  for (std::size_t si = 0; si < cfg.slope_grid.size(); ++si) {
    const double slope = cfg.slope_grid[si];
    DecOutcome best;
    for (int r = 0; r < std::max(cfg.restarts, 1); ++r) {
      Matrix init(nx, nu, 0.0);
      if (r == 0) {
        // Seed from the uninformed solution: aux letter u mirrors xhat.
        BaOutcome none = blahut_arimoto(inst.source_law(), dbar, slope, cfg);
        for (std::size_t x = 0; x < nx; ++x) {
          for (std::size_t xh = 0; xh < nxh; ++xh) init(x, xh) = none.channel(x, xh);
        }
      } else {
        Rng rng(cfg.seed, (si << 8) ^ static_cast<std::uint64_t>(r));
        for (std::size_t x = 0; x < nx; ++x) {
          double z = 0.0;
          for (std::size_t u = 0; u < nu; ++u) {
            init(x, u) = rng.next_exponential();
            z += init(x, u);
          }
          for (std::size_t u = 0; u < nu; ++u) init(x, u) /= z;
        }
      }
      DecOutcome cand = dec_solve_from(inst, cfg, slope, std::move(init));
      res.max_objective_increase =
          std::max(res.max_objective_increase, cand.max_objective_increase);
      if (cand.objective < best.objective) best = std::move(cand);
    }
    res.points.push_back(
        {slope, best.rate, best.distortion, best.iterations, best.converged});
    res.channels.push_back(std::move(best.state.pu_given_x));
    res.recon_maps.push_back(std::move(best.state.recon));
  }
  return res;
}

}  // namespace

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::None: return "NONE";
    case Scenario::Dec: return "DEC";
    case Scenario::Enc: return "ENC";
    case Scenario::Both: return "BOTH";
  }
  return "?";
}

std::vector<double> SolverConfig::default_slopes(std::size_t count, double lo,
                                                 double hi) {
  std::vector<double> g(count);
  const double step = count > 1 ? std::log(hi / lo) / (count - 1) : 0.0;
  for (std::size_t i = 0; i < count; ++i) g[i] = lo * std::exp(step * i);
  return g;
}

void SolverConfig::validate() const {
  if (slope_grid.empty()) throw std::invalid_argument("solver: empty slope grid");
  double prev = 0.0;
  for (double s : slope_grid) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("solver: slopes must be strictly positive");
    }
    if (s <= prev) throw std::invalid_argument("solver: slopes must be ascending");
    prev = s;
  }
  if (!(rel_tolerance > 0.0) || rel_tolerance > 1e-3) {
    throw std::invalid_argument("solver: rel_tolerance must lie in (0, 1e-3]");
  }
  if (max_iterations <= 0) throw std::invalid_argument("solver: max_iterations must be positive");
}

bool ScenarioResult::all_converged() const {
  for (const auto& p : points) {
    if (!p.converged) return false;
  }
  return true;
}

ScenarioResult solve_scenario(const DiscreteInstance& instance, Scenario s,
                              const SolverConfig& config) {
  config.validate();
  switch (s) {
    case Scenario::None: return solve_none(instance, config);
    case Scenario::Both: return solve_both(instance, config);
    case Scenario::Enc: return solve_enc(instance, config);
    case Scenario::Dec: return solve_dec(instance, config);
  }
  throw std::invalid_argument("unknown scenario");
}

double lossless_rate(const DiscreteInstance& instance, Scenario s,
                     const SolverConfig& config) {
  SolverConfig cfg = config;
  cfg.slope_grid = {1.0};  // unused; validation only
  cfg.validate();
  const auto run_masked = [&](const std::vector<double>& w, const Matrix& d) {
    Matrix support(d.rows, d.cols, 0.0);
    for (std::size_t a = 0; a < d.rows; ++a) {
      bool any = false;
      for (std::size_t b = 0; b < d.cols; ++b) {
        if (d(a, b) <= 0.0) {
          support(a, b) = 1.0;
          any = true;
        }
      }
      if (!any && w[a] > 0.0) return kInf;
    }
    for (std::size_t a = 0; a < d.rows; ++a) {
      // Unreachable rows get full support to keep the iteration defined.
      if (w[a] <= 0.0) {
        bool any = false;
        for (std::size_t b = 0; b < d.cols; ++b) any = any || support(a, b) > 0.0;
        if (!any) {
          for (std::size_t b = 0; b < d.cols; ++b) support(a, b) = 1.0;
        }
      }
    }
    return blahut_arimoto(w, d, 0.0, cfg, &support).rate;
  };
  switch (s) {
    case Scenario::None:
      return run_masked(instance.source_law(), instance.averaged_distortion());
    case Scenario::Enc:
      return run_masked(super_source_weights(instance),
                        super_source_distortion(instance));
    case Scenario::Both: {
      double total = 0.0;
      const std::size_t nx = instance.source_size();
      const std::size_t nxh = instance.recon_size();
      for (std::size_t q = 0; q < instance.side_size(); ++q) {
        if (instance.pq(q) <= 0.0) continue;
        Matrix dq(nx, nxh);
        for (std::size_t x = 0; x < nx; ++x) {
          for (std::size_t xh = 0; xh < nxh; ++xh) dq(x, xh) = instance.d(x, xh, q);
        }
        const double r = run_masked(instance.source_law(), dq);
        if (r == kInf) return kInf;
        total += instance.pq(q) * r;
      }
      return total;
    }
    case Scenario::Dec:
      throw std::invalid_argument("lossless rate is not provided for the decoder-side scenario");
  }
  throw std::invalid_argument("unknown scenario");
}

// ---- curve utilities ----

namespace {

std::vector<RdPoint> sorted_by_distortion(std::vector<RdPoint> pts) {
  std::sort(pts.begin(), pts.end(), [](const RdPoint& a, const RdPoint& b) {
    return a.distortion < b.distortion;
  });
  return pts;
}

}  // namespace

bool curve_distortion_in_range(const std::vector<RdPoint>& points, double d) {
  if (points.empty()) return false;
  double lo = kInf, hi = -kInf;
  for (const auto& p : points) {
    lo = std::min(lo, p.distortion);
    hi = std::max(hi, p.distortion);
  }
  return d >= lo && d <= hi;
}

double curve_rate_at(const std::vector<RdPoint>& points, double d) {
  if (points.empty()) throw std::invalid_argument("curve_rate_at: empty curve");
  const auto pts = sorted_by_distortion(points);
  if (d < pts.front().distortion || d > pts.back().distortion) {
    throw std::invalid_argument("curve_rate_at: distortion outside curve range");
  }
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (d <= pts[i + 1].distortion) {
      const double dd = pts[i + 1].distortion - pts[i].distortion;
      if (dd <= 1e-300) return std::min(pts[i].rate, pts[i + 1].rate);
      const double t = (d - pts[i].distortion) / dd;
      return pts[i].rate + t * (pts[i + 1].rate - pts[i].rate);
    }
  }
  return pts.back().rate;
}

bool curve_rates_non_increasing(const std::vector<RdPoint>& points, double slack) {
  const auto pts = sorted_by_distortion(points);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1].rate > pts[i].rate + slack) return false;
  }
  return true;
}

bool curve_is_convex(const std::vector<RdPoint>& points, double slack) {
  auto pts = sorted_by_distortion(points);
  // Collapse numerically coincident points; solver noise otherwise yields
  // meaningless noise-over-noise chord slopes.
  std::vector<RdPoint> merged;
  for (const auto& p : pts) {
    if (!merged.empty() &&
        std::abs(p.distortion - merged.back().distortion) <=
            1e-7 * std::max(1.0, std::abs(p.distortion)) &&
        std::abs(p.rate - merged.back().rate) <= 1e-6) {
      continue;
    }
    merged.push_back(p);
  }
  double prev_slope = -kInf;
  for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
    const double dd = merged[i + 1].distortion - merged[i].distortion;
    if (dd <= 1e-12) continue;
    const double s = (merged[i + 1].rate - merged[i].rate) / dd;
    if (s < prev_slope - slack) return false;
    prev_slope = s;
  }
  return true;
}

GapReport max_matched_rate_gap(const std::vector<RdPoint>& a,
                               const std::vector<RdPoint>& b) {
  GapReport rep;
  const auto scan = [&rep](const std::vector<RdPoint>& pts,
                           const std::vector<RdPoint>& other) {
    for (const auto& p : pts) {
      if (!curve_distortion_in_range(other, p.distortion)) continue;
      const double gap = std::abs(p.rate - curve_rate_at(other, p.distortion));
      if (gap > rep.max_gap) {
        rep.max_gap = gap;
        rep.slope_at_max = p.slope;
        rep.distortion_at_max = p.distortion;
      }
    }
  };
  scan(a, b);
  scan(b, a);
  return rep;
}

double max_ordering_violation(const std::vector<RdPoint>& lower,
                              const std::vector<RdPoint>& upper) {
  double worst = -kInf;
  for (const auto& p : lower) {
    if (!curve_distortion_in_range(upper, p.distortion)) continue;
    worst = std::max(worst, p.rate - curve_rate_at(upper, p.distortion));
  }
  return worst;
}

// ---- equality checks ----

EqualityReport check_theorem1(const DiscreteInstance& instance,
                              const GroupTable& group,
                              const SolverConfig& config) {
  if (instance.source_size() != group.size() ||
      instance.recon_size() != group.size()) {
    throw std::invalid_argument("encoder-equality check: alphabets must match the group order");
  }
  for (std::size_t x = 0; x < instance.source_size(); ++x) {
    if (std::abs(instance.px(x) - 1.0 / instance.source_size()) > 1e-12) {
      throw std::invalid_argument("encoder-equality check: source law must be uniform");
    }
  }
  if (!is_group_difference_distortion(instance.distortion(), group, 1e-12)) {
    throw std::invalid_argument(
        "encoder-equality check: distortion is not a group-difference measure");
  }
  EqualityReport rep;
  rep.lhs = solve_scenario(instance, Scenario::Enc, config);
  rep.rhs = solve_scenario(instance, Scenario::Both, config);
  const GapReport gap = max_matched_rate_gap(rep.lhs.points, rep.rhs.points);
  rep.max_gap = gap.max_gap;
  rep.slope_at_max = gap.slope_at_max;
  for (double leak : rep.lhs.side_leakage) {
    rep.max_side_leakage = std::max(rep.max_side_leakage, leak);
  }
  return rep;
}

EqualityReport check_theorem3(const DiscreteInstance& instance,
                              const SolverConfig& config) {
  split_scaled_distortion(instance.distortion(), nullptr, nullptr);
  EqualityReport rep;
  rep.lhs = solve_scenario(instance, Scenario::Dec, config);
  rep.rhs = solve_scenario(instance, Scenario::None, config);
  const GapReport gap = max_matched_rate_gap(rep.lhs.points, rep.rhs.points);
  rep.max_gap = gap.max_gap;
  rep.slope_at_max = gap.slope_at_max;
  rep.recon_constant_in_side = true;
  const std::size_t nq = instance.side_size();
  for (std::size_t i = 0; i < rep.lhs.points.size(); ++i) {
    const Matrix& pu = rep.lhs.channels[i];
    const auto& recon = rep.lhs.recon_maps[i];
    for (std::size_t u = 0; u < pu.cols; ++u) {
      double mass = 0.0;
      for (std::size_t x = 0; x < pu.rows; ++x) mass += instance.px(x) * pu(x, u);
      if (mass <= 1e-9) continue;
      for (std::size_t q = 1; q < nq; ++q) {
        if (recon[u * nq + q] != recon[u * nq]) rep.recon_constant_in_side = false;
      }
    }
  }
  return rep;
}

}  // namespace dsi
