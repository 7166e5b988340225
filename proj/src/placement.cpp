#include "mmwcache/placement.hpp"

#include "mmwcache/units.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace mmwcache {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp01(double v) { return std::min(std::max(v, 0.0), 1.0); }

// Deterministic fallback when the cacher intensity is zero: the objective is
// flat in q, so fill the budget with the most popular files.
CachingPolicy greedy_top(int n, int m_d, PolicyKind kind) {
  CachingPolicy p;
  p.q.assign(n, 0.0);
  for (int i = 0; i < std::min(m_d, n); ++i) p.q[i] = 1.0;
  p.kind = kind;
  p.mu_star = 0.0;
  return p;
}

// Shared multiplier search: q_of(t) evaluates the clamped stationarity
// solution at multiplier exp(t) for one file. The per-file sum is continuous
// and nonincreasing in the multiplier, so bisection in log space brackets the
// storage budget.
CachingPolicy solve_kkt(int n, int m_d, double tol, int max_iter, PolicyKind kind,
                        const std::vector<char>& eligible,
                        const std::function<double(int, double)>& q_of,
                        const std::function<double(int)>& marginal_at_zero) {
  CachingPolicy policy;
  policy.kind = kind;
  policy.q.assign(n, 0.0);

  int n_eligible = 0;
  double mu_hi = 0;
  for (int i = 0; i < n; ++i) {
    if (!eligible[i]) continue;
    ++n_eligible;
    mu_hi = std::max(mu_hi, marginal_at_zero(i));
  }
  if (m_d <= 0 || n_eligible == 0) {
    policy.mu_star = mu_hi;
    return policy;
  }
  if (n_eligible <= m_d) {
    for (int i = 0; i < n; ++i)
      if (eligible[i]) policy.q[i] = 1.0;
    policy.mu_star = 0.0;
    return policy;
  }

  auto sum_q = [&](double t) {
    double s = 0;
    for (int i = 0; i < n; ++i)
      if (eligible[i]) s += q_of(i, t);
    return s;
  };

  double t_hi = std::log(mu_hi);       // forces every q to zero
  double t_lo = std::log(1e-300);      // forces every eligible q to one
  if (sum_q(t_lo) < m_d - tol) {
    // Expand downward before giving up; the budget must be reachable.
    for (int k = 0; k < 4 && sum_q(t_lo) < m_d - tol; ++k) t_lo -= 300.0;
    if (sum_q(t_lo) < m_d - tol)
      throw std::runtime_error("optimize_caching: no multiplier bracket contains the budget");
  }

  double t_mid = t_hi, s_mid = 0;
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    t_mid = 0.5 * (t_lo + t_hi);
    s_mid = sum_q(t_mid);
    if (std::fabs(s_mid - m_d) <= tol) {
      converged = true;
      break;
    }
    if (s_mid > m_d)
      t_lo = t_mid;
    else
      t_hi = t_mid;
  }
  if (!converged)
    throw std::runtime_error("optimize_caching: bisection did not reach tolerance " +
                             std::to_string(tol) + " within " + std::to_string(max_iter) +
                             " iterations (residual " + std::to_string(s_mid - m_d) + ")");

  for (int i = 0; i < n; ++i)
    if (eligible[i]) policy.q[i] = q_of(i, t_mid);
  policy.mu_star = std::exp(t_mid);
  return policy;
}

}  // namespace

PlacementGeometry placement_distances(const DerivedConstants& dc, const NetworkConfig& cfg,
                                      const ContentLibrary& lib) {
  PlacementGeometry g;
  const int n = lib.n_files;
  g.worst_case_range.resize(n);
  g.coverage_radius.resize(n);
  const double denom_base = dc.worst_avg_interference + dc.noise_d2d;
  for (int i = 0; i < n; ++i) {
    const double t = dc.threshold_d2d[i];
    double range;
    if (t <= 0) {
      range = kInf;  // no SINR requirement: any discoverable LoS server works
    } else {
      range = std::pow(cfg.g_m * cfg.g_m / (t * denom_base), 1.0 / cfg.alpha_l);
    }
    g.worst_case_range[i] = range;
    g.coverage_radius[i] = std::min({range, cfg.d_l, cfg.d_r});
  }
  return g;
}

double slp_closed_form(double q_i, double coverage_radius_m, const NetworkConfig& cfg) {
  const double a = kPi * cfg.lambda_u * (1.0 - cfg.rho) * coverage_radius_m * coverage_radius_m;
  return -std::expm1(-a * q_i);
}

double aslp(std::span<const double> q, const PlacementGeometry& geom, const ContentLibrary& lib,
            const NetworkConfig& cfg) {
  if (q.size() != geom.coverage_radius.size() ||
      static_cast<int>(q.size()) != lib.n_files)
    throw std::invalid_argument("aslp: policy/geometry/library dimensions disagree");
  const std::vector<double> beta = zipf_popularity(lib.n_files, lib.zipf_epsilon);
  double total = 0;
  for (int i = 0; i < lib.n_files; ++i)
    total += beta[i] * slp_closed_form(q[i], geom.coverage_radius[i], cfg);
  return total;
}

double hitmax_objective(std::span<const double> q, const ContentLibrary& lib,
                        const NetworkConfig& cfg) {
  if (static_cast<int>(q.size()) != lib.n_files)
    throw std::invalid_argument("hitmax_objective: policy/library dimensions disagree");
  const std::vector<double> beta = zipf_popularity(lib.n_files, lib.zipf_epsilon);
  const double c = kPi * cfg.lambda_u * (1.0 - cfg.rho) * cfg.d_r * cfg.d_r;
  double total = 0;
  for (int i = 0; i < lib.n_files; ++i)
    total += beta[i] * (1.0 - (1.0 - q[i]) * std::exp(-c * q[i]));
  return total;
}

std::vector<double> q_of_mu(double mu, const PlacementGeometry& geom, const ContentLibrary& lib,
                            const NetworkConfig& cfg) {
  if (!(mu > 0)) throw std::invalid_argument("q_of_mu: multiplier must be strictly positive");
  const std::vector<double> beta = zipf_popularity(lib.n_files, lib.zipf_epsilon);
  const double intensity = kPi * cfg.lambda_u * (1.0 - cfg.rho);
  const double log_mu = std::log(mu);
  std::vector<double> q(lib.n_files, 0.0);
  for (int i = 0; i < lib.n_files; ++i) {
    const double r = geom.coverage_radius[i];
    const double a = intensity * r * r;
    if (!(a > 0)) continue;  // a file that cannot be served in LoS stays uncached
    q[i] = clamp01((std::log(beta[i] * a) - log_mu) / a);
  }
  return q;
}

CachingPolicy optimize_caching(const PlacementGeometry& geom, const ContentLibrary& lib,
                               const NetworkConfig& cfg, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("optimize_caching: tolerance must be positive");
  if (static_cast<int>(geom.coverage_radius.size()) != lib.n_files)
    throw std::invalid_argument("optimize_caching: geometry/library dimensions disagree");
  const int n = lib.n_files;
  if (lib.m_d <= 0) {
    CachingPolicy p;
    p.q.assign(n, 0.0);
    p.kind = PolicyKind::AslpOptimal;
    return p;
  }

  const double intensity = kPi * cfg.lambda_u * (1.0 - cfg.rho);
  if (!(intensity > 0)) return greedy_top(n, lib.m_d, PolicyKind::AslpOptimal);

  const std::vector<double> beta = zipf_popularity(n, lib.zipf_epsilon);
  std::vector<double> a(n);
  std::vector<char> eligible(n);
  for (int i = 0; i < n; ++i) {
    const double r = geom.coverage_radius[i];
    a[i] = intensity * r * r;
    eligible[i] = a[i] > 0;
  }

  auto q_of = [&](int i, double t) { return clamp01((std::log(beta[i] * a[i]) - t) / a[i]); };
  auto marginal0 = [&](int i) { return beta[i] * a[i]; };
  return solve_kkt(n, lib.m_d, tol, 200, PolicyKind::AslpOptimal, eligible, q_of, marginal0);
}

CachingPolicy baseline_hitmax_caching(const ContentLibrary& lib, const NetworkConfig& cfg) {
  const int n = lib.n_files;
  if (lib.m_d <= 0) {
    CachingPolicy p;
    p.q.assign(n, 0.0);
    p.kind = PolicyKind::HitMaxBaseline;
    return p;
  }
  const double c = kPi * cfg.lambda_u * (1.0 - cfg.rho) * cfg.d_r * cfg.d_r;
  if (!(c > 0)) return greedy_top(n, lib.m_d, PolicyKind::HitMaxBaseline);

  const std::vector<double> beta = zipf_popularity(n, lib.zipf_epsilon);
  // Hit-probability marginal for one file: beta * exp(-c q) * (1 + c (1 - q)),
  // strictly decreasing on [0, 1]; inverted numerically.
  auto marginal = [&](int i, double q) {
    return beta[i] * std::exp(-c * q) * (1.0 + c * (1.0 - q));
  };
  auto q_of = [&](int i, double t) {
    const double mu = std::exp(t);
    if (mu >= marginal(i, 0.0)) return 0.0;
    if (mu <= marginal(i, 1.0)) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (marginal(i, mid) > mu ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  auto marginal0 = [&](int i) { return marginal(i, 0.0); };
  const std::vector<char> eligible(n, 1);
  return solve_kkt(n, lib.m_d, 1e-10, 200, PolicyKind::HitMaxBaseline, eligible, q_of, marginal0);
}

}  // namespace mmwcache
