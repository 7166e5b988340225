#pragma once

#include "mmwcache/placement.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace mmwcache {

// Distance thresholds of the interference-aware user-association scheme.
struct AssociationThresholds {
  double interference_scale = 0;  // fraction of the worst-case interference that is active
  std::vector<double> range_los;   // max distance at which a LoS server meets the rate
  std::vector<double> range_nlos;  // same for an NLoS server
  std::vector<double> search_radius;  // D2D search radius actually used per file
};

// Probability that a request is served by a D2D transmitter inside the LoS
// ball under policy q; used to scale the worst-case interference.
double gamma_los_d2d(const CachingPolicy& policy, const ContentLibrary& lib,
                     const NetworkConfig& cfg);

AssociationThresholds association_thresholds(const CachingPolicy& policy,
                                             const DerivedConstants& dc,
                                             const ContentLibrary& lib,
                                             const NetworkConfig& cfg);

enum class DeliveryMode { SelfCache, D2dLos, D2dNlos, CellularFronthaul, CellularBackhaul };

inline bool is_d2d(DeliveryMode m) {
  return m == DeliveryMode::D2dLos || m == DeliveryMode::D2dNlos;
}

struct DeliveryDecision {
  DeliveryMode mode = DeliveryMode::CellularBackhaul;
  double server_distance = 0;  // meaningful for the D2D modes only
  int file_index = -1;
  int server_index = -1;  // neighbor/device index of the server, -1 when none
};

// Core decision rule, shared by the explicit-list form below and by the
// simulator. `nearest(r)` returns the closest cacher of the file within r
// as (distance, index), or nothing. A server inside the LoS ball is LoS.
template <class NearestFn>
DeliveryDecision associate_within(int file, bool self_has, bool edge_has, double search_radius,
                                  double los_radius, NearestFn&& nearest) {
  if (self_has) return {DeliveryMode::SelfCache, 0.0, file, -1};
  if (search_radius > 0) {
    if (auto hit = nearest(search_radius)) {
      const DeliveryMode mode =
          hit->first <= los_radius ? DeliveryMode::D2dLos : DeliveryMode::D2dNlos;
      return {mode, hit->first, file, hit->second};
    }
  }
  if (edge_has) return {DeliveryMode::CellularFronthaul, 0.0, file, -1};
  return {DeliveryMode::CellularBackhaul, 0.0, file, -1};
}

struct NeighborCache {
  double distance = 0;
  std::vector<int> files;
};

// Resolve a single request against an explicit neighbor list. Equidistant
// candidates are broken by lowest neighbor index. Throws on a bad file index.
DeliveryDecision associate(int file, const std::vector<int>& self_cache,
                           const std::vector<NeighborCache>& neighbors,
                           const std::vector<int>& edge_cloud, const AssociationThresholds& th,
                           const NetworkConfig& cfg);

}  // namespace mmwcache
