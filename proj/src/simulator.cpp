#include "mmwcache/simulator.hpp"

#include "mmwcache/rng.hpp"
#include "mmwcache/units.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mmwcache {

namespace {

// Uniform grid over the inactive users for nearest-cacher queries. The cell
// size is at least the largest query radius, so a 3x3 block always covers the
// search disk.
class CacherGrid {
 public:
  CacherGrid(const Topology& topo, double cell_size)
      : topo_(topo),
        cell_(std::max(cell_size, 1.0)),
        origin_(-topo.window_radius),
        nx_(std::max<int>(1, static_cast<int>(std::ceil(2.0 * topo.window_radius / cell_)))) {
    std::vector<int> count(static_cast<size_t>(nx_) * nx_, 0);
    for (size_t m = 0; m < topo.mu.size(); ++m)
      if (!topo.active[m]) ++count[cell_of(topo.mu[m])];
    offsets_.assign(count.size() + 1, 0);
    for (size_t c = 0; c < count.size(); ++c) offsets_[c + 1] = offsets_[c] + count[c];
    items_.resize(offsets_.back());
    std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
    for (size_t m = 0; m < topo.mu.size(); ++m)
      if (!topo.active[m]) items_[fill[cell_of(topo.mu[m])]++] = static_cast<int>(m);
  }

  // Closest inactive cacher of `file` within `radius` of p; equidistant
  // candidates resolve to the lowest user index.
  std::optional<std::pair<double, int>> nearest_cacher(Vec2 p, int file, double radius) const {
    const double r2 = radius * radius;
    const int cx = static_cast<int>((p.x - origin_) / cell_);
    const int cy = static_cast<int>((p.y - origin_) / cell_);
    double best_d2 = std::numeric_limits<double>::infinity();
    int best = -1;
    for (int gx = std::max(cx - 1, 0); gx <= std::min(cx + 1, nx_ - 1); ++gx) {
      for (int gy = std::max(cy - 1, 0); gy <= std::min(cy + 1, nx_ - 1); ++gy) {
        const size_t c = static_cast<size_t>(gx) * nx_ + gy;
        for (size_t k = offsets_[c]; k < offsets_[c + 1]; ++k) {
          const int m = items_[k];
          if (!topo_.mu_caches_file(m, file)) continue;
          const double dx = topo_.mu[m].x - p.x;
          const double dy = topo_.mu[m].y - p.y;
          const double d2 = dx * dx + dy * dy;
          if (d2 > r2) continue;
          if (d2 < best_d2 || (d2 == best_d2 && m < best)) {
            best_d2 = d2;
            best = m;
          }
        }
      }
    }
    if (best < 0) return std::nullopt;
    return std::make_pair(std::sqrt(best_d2), best);
  }

 private:
  size_t cell_of(Vec2 p) const {
    int ix = static_cast<int>((p.x - origin_) / cell_);
    int iy = static_cast<int>((p.y - origin_) / cell_);
    ix = std::clamp(ix, 0, nx_ - 1);
    iy = std::clamp(iy, 0, nx_ - 1);
    return static_cast<size_t>(ix) * nx_ + iy;
  }

  const Topology& topo_;
  double cell_;
  double origin_;
  int nx_;
  std::vector<size_t> offsets_;
  std::vector<int> items_;
};

std::vector<double> request_cdf(const ContentLibrary& lib) {
  std::vector<double> cdf = zipf_popularity(lib.n_files, lib.zipf_epsilon);
  for (size_t i = 1; i < cdf.size(); ++i) cdf[i] += cdf[i - 1];
  cdf.back() = 1.0;
  return cdf;
}

// Mean interference of the point process beyond the simulation window; the
// far field is effectively deterministic, so adding its mean removes the
// truncation bias of the finite window.
double far_field_mean(double density, double alpha, double window_radius) {
  return 2.0 * kPi * density * std::pow(window_radius, 2.0 - alpha) / (alpha - 2.0);
}

double sample_gain(const GainPmf& pmf, Rng& rng) {
  const double u = rng.uniform();
  if (u < pmf.prob[0]) return pmf.gain[0];
  if (u < pmf.prob[0] + pmf.prob[1]) return pmf.gain[1];
  return pmf.gain[2];
}

}  // namespace

DeliveryRule s1_delivery_rule(const AssociationThresholds& th, const NetworkConfig& cfg,
                              const ContentLibrary& lib) {
  DeliveryRule rule;
  rule.radius = th.search_radius;
  rule.los_radius = cfg.d_l;
  rule.edge_capacity = lib.m_e;
  return rule;
}

DeliveryRule s2_delivery_rule(const NetworkConfig& cfg, const ContentLibrary& lib) {
  DeliveryRule rule;
  rule.radius.assign(lib.n_files, cfg.d_r);
  rule.los_radius = cfg.d_l;
  rule.edge_capacity = lib.m_e;
  return rule;
}

std::vector<std::optional<DeliveryDecision>> resolve_associations(const Topology& topo,
                                                                  const DeliveryRule& rule,
                                                                  const ContentLibrary& lib,
                                                                  uint64_t seed) {
  if (static_cast<int>(rule.radius.size()) != topo.n_files || topo.n_files != lib.n_files)
    throw std::invalid_argument("resolve_associations: rule/topology/library dimensions disagree");
  const std::vector<double> cdf = request_cdf(lib);
  double max_radius = 0;
  for (double r : rule.radius) max_radius = std::max(max_radius, r);
  const CacherGrid grid(topo, max_radius);

  Rng rng(seed);
  std::vector<std::optional<DeliveryDecision>> decisions(topo.mu.size());
  for (size_t m = 0; m < topo.mu.size(); ++m) {
    if (!topo.active[m]) continue;
    const int file = rng.sample_cdf(cdf);
    const bool self_has = topo.mu_caches_file(static_cast<int>(m), file);
    const bool edge_has = file < rule.edge_capacity;
    auto nearest = [&](double radius) { return grid.nearest_cacher(topo.mu[m], file, radius); };
    decisions[m] =
        associate_within(file, self_has, edge_has, rule.radius[file], rule.los_radius, nearest);
  }
  return decisions;
}

TrialOutcome evaluate_typical_user(const Topology& topo,
                                   const std::vector<std::optional<DeliveryDecision>>& decisions,
                                   const NetworkConfig& cfg, const ContentLibrary& lib,
                                   uint64_t seed) {
  if (decisions.empty() || !decisions[0])
    throw std::invalid_argument("evaluate_typical_user: the typical user has no decision");
  Rng rng(seed);
  const DeliveryDecision& dec = *decisions[0];
  TrialOutcome out;
  out.decision = dec;
  out.file_index = dec.file_index;
  const double rate = lib.rate_bps[dec.file_index];

  if (dec.mode == DeliveryMode::SelfCache) {
    out.success = true;
    out.throughput_bps = rate;
    out.power_w = 0.0;
    return out;
  }

  const EffectiveNoise noise = effective_noise(cfg);

  if (is_d2d(dec.mode)) {
    const GainPmf pmf = interferer_gain_pmf(cfg.g_m, cfg.g_s, cfg.delta_theta);
    const double h0 = rng.exponential();
    // One contribution per serving relationship: a transmitter serving
    // several requests radiates once per request stream.
    double interference = 0;
    for (size_t m = 1; m < decisions.size(); ++m) {
      if (!decisions[m] || !is_d2d(decisions[m]->mode)) continue;
      const Vec2 server = topo.mu[decisions[m]->server_index];
      const double r = norm(server);
      const double alpha = r <= cfg.d_l ? cfg.alpha_l : cfg.alpha_n;
      interference += rng.exponential() * sample_gain(pmf, rng) * std::pow(r, -alpha);
    }
    const double d = dec.server_distance;
    const double alpha_serv = d <= cfg.d_l ? cfg.alpha_l : cfg.alpha_n;
    const double desired = cfg.g_m * cfg.g_m * h0 * std::pow(d, -alpha_serv);
    const double sinr = desired / (noise.d2d + interference);
    out.sinr = sinr;
    out.success = sinr >= rate_threshold(rate, cfg.b_d);
    out.power_w = cfg.p_d;
    out.throughput_bps = out.success ? rate : 0.0;
    return out;
  }

  // Cellular fallback: served by the nearest RRH; every other RRH interferes,
  // plus the mean far field beyond the window.
  out.power_w = dec.mode == DeliveryMode::CellularBackhaul ? cfg.p_c + cfg.p_b : cfg.p_c;
  int serving = -1;
  double serving_d2 = std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < topo.rrh.size(); ++j) {
    const double d2 = topo.rrh[j].x * topo.rrh[j].x + topo.rrh[j].y * topo.rrh[j].y;
    if (d2 < serving_d2) {
      serving_d2 = d2;
      serving = static_cast<int>(j);
    }
  }
  if (serving < 0) {
    out.sinr = 0.0;
    out.success = false;
    return out;
  }
  const double h0 = rng.exponential();
  double interference = far_field_mean(cfg.lambda_r, cfg.alpha_c, topo.window_radius);
  for (size_t j = 0; j < topo.rrh.size(); ++j) {
    if (static_cast<int>(j) == serving) continue;
    interference += rng.exponential() * std::pow(norm(topo.rrh[j]), -cfg.alpha_c);
  }
  const double sinr =
      h0 * std::pow(std::sqrt(serving_d2), -cfg.alpha_c) / (noise.cell + interference);
  out.sinr = sinr;
  out.success = sinr >= rate_threshold(rate, cfg.b_c);
  out.throughput_bps = out.success ? rate : 0.0;
  return out;
}

std::vector<TrialOutcome> run_trials(const NetworkConfig& cfg, const ContentLibrary& lib,
                                     std::span<const double> q, const DeliveryRule& rule,
                                     long trials, uint64_t base_seed, ExecMode mode) {
  if (trials < 1) throw std::invalid_argument("run_trials: need at least one trial");
  cfg.validate();
  lib.validate();
  std::vector<TrialOutcome> outcomes(trials);
  auto one_trial = [&](long t) {
    const uint64_t s = derive_seed(base_seed, static_cast<uint64_t>(t));
    Topology topo = generate_topology(cfg, derive_seed(s, 1));
    assign_caches(topo, q, derive_seed(s, 2));
    const auto decisions = resolve_associations(topo, rule, lib, derive_seed(s, 3));
    outcomes[t] = evaluate_typical_user(topo, decisions, cfg, lib, derive_seed(s, 4));
  };
  if (mode == ExecMode::Parallel) {
    // An exception must not escape the parallel region; capture the first one
    // and rethrow after the join.
    std::exception_ptr error;
    std::atomic<bool> failed{false};
#pragma omp parallel for schedule(dynamic, 8)
    for (long t = 0; t < trials; ++t) {
      if (failed.load(std::memory_order_relaxed)) continue;
      try {
        one_trial(t);
      } catch (...) {
#pragma omp critical
        {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (long t = 0; t < trials; ++t) one_trial(t);
  }
  return outcomes;
}

std::pair<std::optional<double>, std::optional<double>> energy_metrics(
    std::span<const TrialOutcome> outcomes, const NetworkConfig& cfg) {
  if (outcomes.empty()) throw std::invalid_argument("energy_metrics: no outcomes");
  double bits_total = 0, power_total = 0;
  double bits_d2d = 0, power_d2d = 0;
  for (const TrialOutcome& o : outcomes) {
    bits_total += o.throughput_bps;
    power_total += o.power_w;
    if (is_d2d(o.decision.mode)) {
      bits_d2d += o.throughput_bps;
      power_d2d += cfg.p_d;
    }
  }
  std::pair<std::optional<double>, std::optional<double>> ee;
  if (power_total > 0) ee.first = bits_total / power_total;
  if (power_d2d > 0) ee.second = bits_d2d / power_d2d;
  return ee;
}

MetricsReport summarize(std::span<const TrialOutcome> outcomes, const NetworkConfig& cfg) {
  MetricsReport rep;
  rep.trials = static_cast<long>(outcomes.size());
  if (outcomes.empty()) return rep;
  long n_success = 0, n_offload = 0, n_offload_success = 0, n_self = 0;
  for (const TrialOutcome& o : outcomes) {
    const bool offloaded = o.decision.mode == DeliveryMode::SelfCache || is_d2d(o.decision.mode);
    n_success += o.success;
    n_offload += offloaded;
    n_offload_success += offloaded && o.success;
    n_self += o.decision.mode == DeliveryMode::SelfCache;
  }
  const double n = static_cast<double>(rep.trials);
  auto estimate = [&](long count) {
    const double p = count / n;
    return ProbEstimate{p, 1.959963984540054 * std::sqrt(p * (1.0 - p) / n)};
  };
  rep.sp = estimate(n_success);
  rep.op_d = estimate(n_offload);
  rep.sop_d = estimate(n_offload_success);
  rep.self_hit = estimate(n_self);
  std::tie(rep.ee_total, rep.ee_d2d) = energy_metrics(outcomes, cfg);
  return rep;
}

MetricsReport run_campaign(const NetworkConfig& cfg, const ContentLibrary& lib,
                           const CachingPolicy& policy, System system, long trials,
                           uint64_t base_seed, ExecMode mode) {
  DeliveryRule rule;
  if (system == System::S1) {
    const DerivedConstants dc = derive_constants(cfg, lib);
    rule = s1_delivery_rule(association_thresholds(policy, dc, lib, cfg), cfg, lib);
  } else {
    rule = s2_delivery_rule(cfg, lib);
  }
  const auto outcomes = run_trials(cfg, lib, policy.q, rule, trials, base_seed, mode);
  return summarize(outcomes, cfg);
}

}  // namespace mmwcache
