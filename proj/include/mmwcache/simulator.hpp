#pragma once

#include "mmwcache/association.hpp"
#include "mmwcache/topology.hpp"

#include <optional>

namespace mmwcache {

enum class System { S1, S2 };

inline const char* system_name(System s) { return s == System::S1 ? "S-1" : "S-2"; }

// Per-file D2D search radii plus the LoS labeling radius and edge-cloud size.
struct DeliveryRule {
  std::vector<double> radius;
  double los_radius = 0;
  int edge_capacity = 0;
};

// Interference-aware delivery: per-file radii from the association thresholds.
DeliveryRule s1_delivery_rule(const AssociationThresholds& th, const NetworkConfig& cfg,
                              const ContentLibrary& lib);
// Baseline delivery: nearest cacher within the discovery range, for every file.
DeliveryRule s2_delivery_rule(const NetworkConfig& cfg, const ContentLibrary& lib);

// Draws a request for every active user and resolves it. Entries for
// inactive users stay empty; server_index refers into topo.mu.
std::vector<std::optional<DeliveryDecision>> resolve_associations(const Topology& topo,
                                                                  const DeliveryRule& rule,
                                                                  const ContentLibrary& lib,
                                                                  uint64_t seed);

struct TrialOutcome {
  DeliveryDecision decision;
  std::optional<double> sinr;  // absent for self-cache service
  bool success = false;
  double throughput_bps = 0;
  double power_w = 0;
  int file_index = -1;
};

// Realizes fading and interference for the typical user's request. The
// interferers are the serving D2D transmitters of all other users; the
// typical user's own server does not interfere with itself.
TrialOutcome evaluate_typical_user(const Topology& topo,
                                   const std::vector<std::optional<DeliveryDecision>>& decisions,
                                   const NetworkConfig& cfg, const ContentLibrary& lib,
                                   uint64_t seed);

struct ProbEstimate {
  double value = 0;
  double ci = 0;  // 95% half-width, normal approximation
};

struct MetricsReport {
  ProbEstimate sp;        // delivered without violating the rate constraint
  ProbEstimate op_d;      // offloaded (self cache or D2D)
  ProbEstimate sop_d;     // offloaded and successful
  ProbEstimate self_hit;  // served from the device's own cache
  std::optional<double> ee_total;  // bit/J over all requests
  std::optional<double> ee_d2d;    // bit/J over attempted D2D requests
  long trials = 0;

  bool operator==(const MetricsReport&) const = default;
};

inline bool operator==(const ProbEstimate& a, const ProbEstimate& b) {
  return a.value == b.value && a.ci == b.ci;
}

enum class ExecMode { Serial, Parallel };

// Independent trials; trial t uses streams derived from (base_seed, t), and
// aggregation runs in trial order, so Serial and Parallel agree bit-for-bit.
std::vector<TrialOutcome> run_trials(const NetworkConfig& cfg, const ContentLibrary& lib,
                                     std::span<const double> q, const DeliveryRule& rule,
                                     long trials, uint64_t base_seed,
                                     ExecMode mode = ExecMode::Parallel);

std::pair<std::optional<double>, std::optional<double>> energy_metrics(
    std::span<const TrialOutcome> outcomes, const NetworkConfig& cfg);

MetricsReport summarize(std::span<const TrialOutcome> outcomes, const NetworkConfig& cfg);

MetricsReport run_campaign(const NetworkConfig& cfg, const ContentLibrary& lib,
                           const CachingPolicy& policy, System system, long trials,
                           uint64_t base_seed, ExecMode mode = ExecMode::Parallel);

}  // namespace mmwcache
