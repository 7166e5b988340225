#include "mmwcache/analytic.hpp"

#include "mmwcache/quadrature.hpp"
#include "mmwcache/units.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace mmwcache {

namespace {

// The raw integrand does not vanish at infinity, so its tail is cut at a
// fixed radius to keep the transform usable for comparison.
constexpr double kRawIntegrandCapM = 1e7;

struct D2dLaplaceParams {
  double intensity = 0;  // density of simultaneously serving D2D transmitters
  GainPmf pmf;
  double g_m2 = 0;
  double alpha_l = 0, alpha_n = 0, d_l = 0;
  LaplaceIntegrand kind = LaplaceIntegrand::Normalized;
  quad::Options quad;
};

double laplace_d2d_core(double s, const D2dLaplaceParams& p) {
  if (p.intensity <= 0) return 1.0;
  if (s <= 0 && p.kind == LaplaceIntegrand::Normalized) return 1.0;
  double mean_area = 0;  // gain-averaged integral of the interference term
  for (int k = 0; k < 3; ++k) {
    const double g = p.pmf.gain[k];
    const double pk = p.pmf.prob[k];
    if (pk <= 0) continue;
    auto term = [&](double y) {
      const double alpha = y <= p.d_l ? p.alpha_l : p.alpha_n;
      const double w = g * s * std::pow(y, -alpha);
      if (p.kind == LaplaceIntegrand::Normalized) return y * (w / (p.g_m2 + w));
      return y * (1.0 - p.g_m2 / (1.0 + w));
    };
    double v = quad::integrate(term, 0.0, p.d_l, p.quad);
    const double y_cap = p.kind == LaplaceIntegrand::Normalized
                             ? std::numeric_limits<double>::infinity()
                             : kRawIntegrandCapM;
    v += quad::integrate_log_tail(term, p.d_l, p.quad, y_cap);
    mean_area += pk * v;
  }
  return std::exp(-2.0 * kPi * p.intensity * mean_area);
}

double laplace_cell_core(double s, double x, const NetworkConfig& cfg, const quad::Options& q) {
  if (cfg.lambda_r <= 0 || s <= 0) return 1.0;
  auto term = [&](double v) { return s * v / (std::pow(v, cfg.alpha_c) + s); };
  const double knee = std::pow(s, 1.0 / cfg.alpha_c);
  const double split = std::max({x, knee, 1.0});
  const double area = quad::integrate(term, x, split, q) + quad::integrate_log_tail(term, split, q);
  return std::exp(-2.0 * kPi * cfg.lambda_r * area);
}

double cell_success_core(double threshold, double noise_cell, const NetworkConfig& cfg,
                         const quad::Options& q) {
  if (cfg.lambda_r <= 0) return 0.0;  // no RRH to serve from
  if (threshold <= 0) return 1.0;
  const double lam = kPi * cfg.lambda_r;
  const double z_max = std::sqrt(34.5 / lam);
  auto integrand = [&](double z) {
    const double za = std::pow(z, cfg.alpha_c);
    return laplace_cell_core(threshold * za, z, cfg, q) * std::exp(-noise_cell * threshold * za) *
           2.0 * lam * z * std::exp(-lam * z * z);
  };
  // Split where the noise term turns over so a narrow support is not missed.
  const double knee = std::pow(1.0 / (noise_cell * threshold), 1.0 / cfg.alpha_c);
  if (knee < z_max)
    return quad::integrate(integrand, 0.0, knee, q) + quad::integrate(integrand, knee, z_max, q);
  return quad::integrate(integrand, 0.0, z_max, q);
}

double d2d_success_core(double q_i, double radius, double threshold, double noise_d2d,
                        const D2dLaplaceParams& lp, const NetworkConfig& cfg) {
  const double lam = kPi * cfg.lambda_u * (1.0 - cfg.rho) * q_i;
  if (lam <= 0 || radius <= 0) return 0.0;
  const double d1 = std::min({cfg.d_l, radius, cfg.d_r});
  const double d2 = std::max(cfg.d_l, std::min(radius, cfg.d_r));
  auto segment = [&](double lo, double hi, double alpha) {
    if (!(hi > lo)) return 0.0;
    auto integrand = [&](double z) {
      const double za = std::pow(z, alpha);
      return laplace_d2d_core(threshold * za, lp) *
             std::exp(-noise_d2d * threshold * za / lp.g_m2) * 2.0 * lam * z *
             std::exp(-lam * z * z);
    };
    return quad::integrate(integrand, lo, hi, lp.quad);
  };
  return segment(0.0, d1, cfg.alpha_l) + segment(cfg.d_l, d2, cfg.alpha_n);
}

D2dLaplaceParams make_d2d_params(double p_d, const NetworkConfig& cfg,
                                 const AnalyticOptions& opt) {
  D2dLaplaceParams lp;
  lp.intensity = cfg.rho * cfg.lambda_u * p_d;
  lp.pmf = interferer_gain_pmf(cfg.g_m, cfg.g_s, cfg.delta_theta);
  lp.g_m2 = cfg.g_m * cfg.g_m;
  lp.alpha_l = cfg.alpha_l;
  lp.alpha_n = cfg.alpha_n;
  lp.d_l = cfg.d_l;
  lp.kind = opt.integrand;
  lp.quad.rel_tol = opt.quad_rel_tol;
  return lp;
}

}  // namespace

double self_hit_prob(const CachingPolicy& policy, const ContentLibrary& lib) {
  if (static_cast<int>(policy.q.size()) != lib.n_files)
    throw std::invalid_argument("self_hit_prob: policy/library dimensions disagree");
  const std::vector<double> beta = zipf_popularity(lib.n_files, lib.zipf_epsilon);
  double p = 0;
  for (int i = 0; i < lib.n_files; ++i) p += beta[i] * policy.q[i];
  return p;
}

double d2d_delivery_prob(const CachingPolicy& policy, std::span<const double> search_radius,
                         const ContentLibrary& lib, const NetworkConfig& cfg) {
  if (static_cast<int>(policy.q.size()) != lib.n_files ||
      search_radius.size() != policy.q.size())
    throw std::invalid_argument("d2d_delivery_prob: dimensions disagree");
  const std::vector<double> beta = zipf_popularity(lib.n_files, lib.zipf_epsilon);
  const double intensity = kPi * cfg.lambda_u * (1.0 - cfg.rho);
  double p = 0;
  for (int i = 0; i < lib.n_files; ++i) {
    const double r = search_radius[i];
    p += beta[i] * (1.0 - policy.q[i]) * (-std::expm1(-intensity * policy.q[i] * r * r));
  }
  return p;
}

double d2d_delivery_prob(const CachingPolicy& policy, const AssociationThresholds& th,
                         const ContentLibrary& lib, const NetworkConfig& cfg) {
  return d2d_delivery_prob(policy, th.search_radius, lib, cfg);
}

double laplace_d2d_interference(double s, double p_d, const NetworkConfig& cfg,
                                const AnalyticOptions& opt) {
  if (!(s >= 0)) throw std::invalid_argument("laplace_d2d_interference: s must be nonnegative");
  if (!(p_d >= 0 && p_d <= 1))
    throw std::invalid_argument("laplace_d2d_interference: p_d must be within [0, 1]");
  return laplace_d2d_core(s, make_d2d_params(p_d, cfg, opt));
}

double laplace_cellular_interference(double s, double serving_distance_m,
                                     const NetworkConfig& cfg, const AnalyticOptions& opt) {
  if (!(s >= 0))
    throw std::invalid_argument("laplace_cellular_interference: s must be nonnegative");
  if (!(serving_distance_m >= 0))
    throw std::invalid_argument("laplace_cellular_interference: distance must be nonnegative");
  quad::Options q{opt.quad_rel_tol, 15};
  return laplace_cell_core(s, serving_distance_m, cfg, q);
}

double cellular_success_prob(int file, const NetworkConfig& cfg, const ContentLibrary& lib,
                             const AnalyticOptions& opt) {
  if (file < 0 || file >= lib.n_files)
    throw std::invalid_argument("cellular_success_prob: file index out of range");
  const EffectiveNoise n = effective_noise(cfg);
  quad::Options q{opt.quad_rel_tol, 15};
  return cell_success_core(rate_threshold(lib.rate_bps[file], cfg.b_c), n.cell, cfg, q);
}

double d2d_success_prob(int file, const CachingPolicy& policy, const AssociationThresholds& th,
                        double p_d, const NetworkConfig& cfg, const ContentLibrary& lib,
                        const AnalyticOptions& opt) {
  if (file < 0 || file >= lib.n_files)
    throw std::invalid_argument("d2d_success_prob: file index out of range");
  const EffectiveNoise n = effective_noise(cfg);
  const D2dLaplaceParams lp = make_d2d_params(p_d, cfg, opt);
  return d2d_success_core(policy.q[file], th.search_radius[file],
                          rate_threshold(lib.rate_bps[file], cfg.b_d), n.d2d, lp, cfg);
}

AnalyticReport overall_report(const CachingPolicy& policy, std::span<const double> search_radius,
                              const NetworkConfig& cfg, const ContentLibrary& lib,
                              const AnalyticOptions& opt) {
  if (static_cast<int>(policy.q.size()) != lib.n_files ||
      search_radius.size() != policy.q.size())
    throw std::invalid_argument("overall_report: dimensions disagree");
  const std::vector<double> beta = zipf_popularity(lib.n_files, lib.zipf_epsilon);
  const EffectiveNoise noise = effective_noise(cfg);
  const double intensity = kPi * cfg.lambda_u * (1.0 - cfg.rho);

  AnalyticReport rep;
  rep.p_s = self_hit_prob(policy, lib);
  rep.p_d = d2d_delivery_prob(policy, search_radius, lib, cfg);
  rep.op = rep.p_s + rep.p_d;

  const D2dLaplaceParams lp = make_d2d_params(rep.p_d, cfg, opt);
  quad::Options q{opt.quad_rel_tol, 15};
  std::map<double, double> cell_by_threshold;  // identical rate constraints share one integral

  rep.per_file.resize(lib.n_files);
  for (int i = 0; i < lib.n_files; ++i) {
    PerFileTerms& f = rep.per_file[i];
    f.q = policy.q[i];
    f.search_radius = search_radius[i];
    const double void_prob = std::exp(-intensity * f.q * f.search_radius * f.search_radius);
    f.p_d = (1.0 - f.q) * (1.0 - void_prob);
    const double t_d2d = rate_threshold(lib.rate_bps[i], cfg.b_d);
    f.sp_d2d = (1.0 - f.q) * d2d_success_core(f.q, f.search_radius, t_d2d, noise.d2d, lp, cfg);
    const double t_cell = rate_threshold(lib.rate_bps[i], cfg.b_c);
    auto it = cell_by_threshold.find(t_cell);
    if (it == cell_by_threshold.end())
      it = cell_by_threshold.emplace(t_cell, cell_success_core(t_cell, noise.cell, cfg, q)).first;
    f.sp_cell = (1.0 - f.q) * void_prob * it->second;

    rep.sp_d2d += beta[i] * f.sp_d2d;
    rep.sp_cell += beta[i] * f.sp_cell;
  }
  rep.sp_total = rep.p_s + rep.sp_d2d + rep.sp_cell;
  return rep;
}

AnalyticReport overall_report(const CachingPolicy& policy, const AssociationThresholds& th,
                              const NetworkConfig& cfg, const ContentLibrary& lib,
                              const AnalyticOptions& opt) {
  return overall_report(policy, th.search_radius, cfg, lib, opt);
}

}  // namespace mmwcache
