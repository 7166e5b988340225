#pragma once

#include "mmwcache/config.hpp"

#include <array>
#include <vector>

namespace mmwcache {

// Distribution of the composite antenna gain on an interfering mmWave link
// (both ends in the main lobe, both in the side lobe, or mixed).
struct GainPmf {
  std::array<double, 3> gain = {0, 0, 0};
  std::array<double, 3> prob = {0, 0, 0};

  double mean() const {
    return gain[0] * prob[0] + gain[1] * prob[1] + gain[2] * prob[2];
  }
};

struct EffectiveNoise {
  double d2d = 0;   // effective noise of a mmWave link in the normalized path-loss model
  double cell = 0;  // effective noise of a cellular link
};

// Deterministic quantities derived from a configuration and content library.
struct DerivedConstants {
  double noise_d2d = 0;
  double noise_cell = 0;
  double worst_avg_interference = 0;
  std::vector<double> threshold_d2d;   // per-file SINR threshold on the mmWave bandwidth
  std::vector<double> threshold_cell;  // per-file SINR threshold on the cellular bandwidth
  GainPmf gain_pmf;
};

// Request probability of each file (most popular first); sums to one.
std::vector<double> zipf_popularity(int n_files, double epsilon);

// Linear SINR threshold required to sustain `rate_bps` over `bandwidth_hz`.
double rate_threshold(double rate_bps, double bandwidth_hz);

GainPmf interferer_gain_pmf(double g_m, double g_s, double delta_theta);

EffectiveNoise effective_noise(const NetworkConfig& cfg);

// Mean interference seen from the full population of potential D2D
// transmitters under a bounded path-loss law; closed form via Campbell's
// theorem. Requires both mmWave exponents above two.
double worst_case_avg_interference(const NetworkConfig& cfg);

DerivedConstants derive_constants(const NetworkConfig& cfg, const ContentLibrary& lib);

}  // namespace mmwcache
