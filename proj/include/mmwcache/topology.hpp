#pragma once

#include "mmwcache/config.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace mmwcache {

struct Vec2 {
  double x = 0;
  double y = 0;
};

inline double norm(Vec2 v) { return std::sqrt(v.x * v.x + v.y * v.y); }
inline double dist(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

// One sampled network realization. The typical user sits at the origin as
// mu[0], always active; caches are stored as per-user bitmasks.
struct Topology {
  std::vector<Vec2> rrh;
  std::vector<Vec2> mu;
  std::vector<uint8_t> active;
  int n_files = 0;
  int cache_words = 0;
  std::vector<uint64_t> cache;
  double window_radius = 0;
  uint64_t seed = 0;

  bool mu_caches_file(int mu_index, int file) const {
    return (cache[static_cast<size_t>(mu_index) * cache_words + file / 64] >>
            (file % 64)) & 1u;
  }
};

// Samples RRH and user point processes in a disk around the typical user.
Topology generate_topology(const NetworkConfig& cfg, uint64_t seed);

// Populates every user's cache; file i is cached independently with
// probability q[i] (the storage constraint holds on average).
void assign_caches(Topology& topo, std::span<const double> q, uint64_t seed);

}  // namespace mmwcache
