#include "mmwcache/association.hpp"

#include "mmwcache/units.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mmwcache {

double gamma_los_d2d(const CachingPolicy& policy, const ContentLibrary& lib,
                     const NetworkConfig& cfg) {
  if (static_cast<int>(policy.q.size()) != lib.n_files)
    throw std::invalid_argument("gamma_los_d2d: policy/library dimensions disagree");
  const std::vector<double> beta = zipf_popularity(lib.n_files, lib.zipf_epsilon);
  const double a = kPi * cfg.lambda_u * (1.0 - cfg.rho) * cfg.d_l * cfg.d_l;
  double gamma = 0;
  for (int i = 0; i < lib.n_files; ++i)
    gamma += beta[i] * (1.0 - policy.q[i]) * (-std::expm1(-a * policy.q[i]));
  return gamma;
}

AssociationThresholds association_thresholds(const CachingPolicy& policy,
                                             const DerivedConstants& dc,
                                             const ContentLibrary& lib,
                                             const NetworkConfig& cfg) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  AssociationThresholds th;
  th.interference_scale = gamma_los_d2d(policy, lib, cfg);
  const int n = lib.n_files;
  th.range_los.resize(n);
  th.range_nlos.resize(n);
  th.search_radius.resize(n);
  const double denom_base = th.interference_scale * dc.worst_avg_interference + dc.noise_d2d;
  const double g2 = cfg.g_m * cfg.g_m;
  for (int i = 0; i < n; ++i) {
    const double t = dc.threshold_d2d[i];
    if (t <= 0) {
      th.range_los[i] = kInf;
      th.range_nlos[i] = kInf;
    } else {
      const double base = g2 / (t * denom_base);
      th.range_los[i] = std::pow(base, 1.0 / cfg.alpha_l);
      th.range_nlos[i] = std::pow(base, 1.0 / cfg.alpha_n);
    }
    th.search_radius[i] =
        std::min({th.range_los[i], std::max(th.range_nlos[i], cfg.d_l), cfg.d_r});
  }
  return th;
}

DeliveryDecision associate(int file, const std::vector<int>& self_cache,
                           const std::vector<NeighborCache>& neighbors,
                           const std::vector<int>& edge_cloud, const AssociationThresholds& th,
                           const NetworkConfig& cfg) {
  if (file < 0 || file >= static_cast<int>(th.search_radius.size()))
    throw std::invalid_argument("associate: file index out of range");
  auto contains = [](const std::vector<int>& set, int f) {
    return std::find(set.begin(), set.end(), f) != set.end();
  };
  auto nearest = [&](double radius) -> std::optional<std::pair<double, int>> {
    std::optional<std::pair<double, int>> best;
    for (int k = 0; k < static_cast<int>(neighbors.size()); ++k) {
      const NeighborCache& nb = neighbors[k];
      if (nb.distance > radius || !contains(nb.files, file)) continue;
      if (!best || nb.distance < best->first) best = {nb.distance, k};
    }
    return best;
  };
  return associate_within(file, contains(self_cache, file), contains(edge_cloud, file),
                          th.search_radius[file], cfg.d_l, nearest);
}

}  // namespace mmwcache
