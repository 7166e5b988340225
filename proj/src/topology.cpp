#include "mmwcache/topology.hpp"

#include "mmwcache/rng.hpp"
#include "mmwcache/units.hpp"

#include <cmath>
#include <stdexcept>

namespace mmwcache {

Topology generate_topology(const NetworkConfig& cfg, uint64_t seed) {
  cfg.validate();
  if (!(cfg.sim_radius > cfg.d_r + cfg.d_l))
    throw std::invalid_argument("sim_radius must exceed d_r + d_l so D2D discovery around the "
                                "typical user is unaffected by the window edge");
  Rng rng(seed);
  Topology topo;
  topo.window_radius = cfg.sim_radius;
  topo.seed = seed;
  const double area = kPi * cfg.sim_radius * cfg.sim_radius;

  auto sample_point = [&]() {
    const double r = cfg.sim_radius * std::sqrt(rng.uniform());
    const double phi = 2.0 * kPi * rng.uniform();
    return Vec2{r * std::cos(phi), r * std::sin(phi)};
  };

  const long n_rrh = rng.poisson(cfg.lambda_r * area);
  topo.rrh.reserve(n_rrh);
  for (long i = 0; i < n_rrh; ++i) topo.rrh.push_back(sample_point());

  // Typical user at the origin, always requesting; the rest of the process is
  // unaffected by conditioning on it.
  topo.mu.push_back({0.0, 0.0});
  topo.active.push_back(1);
  const long n_mu = rng.poisson(cfg.lambda_u * area);
  topo.mu.reserve(n_mu + 1);
  topo.active.reserve(n_mu + 1);
  for (long i = 0; i < n_mu; ++i) {
    topo.mu.push_back(sample_point());
    topo.active.push_back(rng.bernoulli(cfg.rho) ? 1 : 0);
  }
  return topo;
}

void assign_caches(Topology& topo, std::span<const double> q, uint64_t seed) {
  for (double qi : q)
    if (!(qi >= 0.0 && qi <= 1.0))
      throw std::invalid_argument("assign_caches: caching probabilities must be within [0, 1]");
  Rng rng(seed);
  topo.n_files = static_cast<int>(q.size());
  topo.cache_words = (topo.n_files + 63) / 64;
  topo.cache.assign(topo.mu.size() * topo.cache_words, 0);

  // Only files with a nonzero probability can land in a cache.
  std::vector<int> carried;
  for (int i = 0; i < topo.n_files; ++i)
    if (q[i] > 0) carried.push_back(i);

  for (size_t m = 0; m < topo.mu.size(); ++m) {
    uint64_t* words = &topo.cache[m * topo.cache_words];
    for (int f : carried)
      if (rng.bernoulli(q[f])) words[f / 64] |= uint64_t{1} << (f % 64);
  }
}

}  // namespace mmwcache
