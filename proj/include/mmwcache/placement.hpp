#pragma once

#include "mmwcache/model.hpp"

#include <optional>
#include <span>

namespace mmwcache {

// Per-file distance ranges used by the caching optimizer.
struct PlacementGeometry {
  // Distance up to which the worst-case average SINR still meets the file's
  // rate threshold (+inf when the threshold is zero).
  std::vector<double> worst_case_range;
  // The above capped by the LoS ball and the discovery range.
  std::vector<double> coverage_radius;
};

enum class PolicyKind { AslpOptimal, HitMaxBaseline, Custom };

struct CachingPolicy {
  std::vector<double> q;  // per-file caching probability
  PolicyKind kind = PolicyKind::Custom;
  std::optional<double> mu_star;  // multiplier at the optimum, when solved via KKT
};

PlacementGeometry placement_distances(const DerivedConstants& dc, const NetworkConfig& cfg,
                                      const ContentLibrary& lib);

// Probability that the nearest cacher of a file with caching probability q_i
// lies within the file's coverage radius.
double slp_closed_form(double q_i, double coverage_radius_m, const NetworkConfig& cfg);

// Popularity-weighted success probability of LoS delivery under policy q.
double aslp(std::span<const double> q, const PlacementGeometry& geom, const ContentLibrary& lib,
            const NetworkConfig& cfg);

// Cache-hit probability (self cache or any cacher within the discovery range).
double hitmax_objective(std::span<const double> q, const ContentLibrary& lib,
                        const NetworkConfig& cfg);

// Stationarity solution for a given multiplier, clamped to [0, 1] per file.
// Files with zero coverage radius are excluded and pinned to zero.
std::vector<double> q_of_mu(double mu, const PlacementGeometry& geom, const ContentLibrary& lib,
                            const NetworkConfig& cfg);

// Caching probabilities maximizing the LoS delivery objective subject to the
// box and average-storage constraints; bisection on the multiplier.
CachingPolicy optimize_caching(const PlacementGeometry& geom, const ContentLibrary& lib,
                               const NetworkConfig& cfg, double tol = 1e-10);

// Baseline placement maximizing the cache-hit probability within the
// discovery range (delivery radius independent of rate thresholds).
CachingPolicy baseline_hitmax_caching(const ContentLibrary& lib, const NetworkConfig& cfg);

}  // namespace mmwcache
