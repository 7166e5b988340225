#pragma once

#include "mmwcache/association.hpp"

#include <span>

namespace mmwcache {

// Interference term inside the D2D Laplace transform. The normalized form
// divides the interfering gain by the squared main-lobe gain, matching the
// normalization of the desired signal (and making L(0) = 1); the raw form
// keeps the main-lobe gain as a bare factor and does not decay at infinity,
// so its tail is cut at a fixed radius.
enum class LaplaceIntegrand { Normalized, Raw };

struct AnalyticOptions {
  double quad_rel_tol = 1e-8;
  LaplaceIntegrand integrand = LaplaceIntegrand::Normalized;
};

struct PerFileTerms {
  double q = 0;
  double search_radius = 0;
  double p_d = 0;      // probability the request is served over D2D
  double sp_d2d = 0;   // joint probability of D2D service and SINR success
  double sp_cell = 0;  // probability of cellular fallback and SINR success
};

struct AnalyticReport {
  double p_s = 0;       // self-cache hit probability
  double p_d = 0;       // D2D delivery probability
  double op = 0;        // offloading probability (p_s + p_d)
  double sp_d2d = 0;
  double sp_cell = 0;
  double sp_total = 0;  // p_s + sp_d2d + sp_cell
  std::vector<PerFileTerms> per_file;
};

double self_hit_prob(const CachingPolicy& policy, const ContentLibrary& lib);

double d2d_delivery_prob(const CachingPolicy& policy, const AssociationThresholds& th,
                         const ContentLibrary& lib, const NetworkConfig& cfg);
double d2d_delivery_prob(const CachingPolicy& policy, std::span<const double> search_radius,
                         const ContentLibrary& lib, const NetworkConfig& cfg);

// Laplace transform of the D2D interference (normalized by the squared
// main-lobe gain) at argument s, for serving fraction p_d.
double laplace_d2d_interference(double s, double p_d, const NetworkConfig& cfg,
                                const AnalyticOptions& opt = {});

// Laplace transform of the cellular interference seen past the serving RRH
// at distance x.
double laplace_cellular_interference(double s, double serving_distance_m,
                                     const NetworkConfig& cfg, const AnalyticOptions& opt = {});

// Probability that a cellular link to the nearest RRH meets the file's rate.
double cellular_success_prob(int file, const NetworkConfig& cfg, const ContentLibrary& lib,
                             const AnalyticOptions& opt = {});

// Joint probability that the nearest cacher is inside the file's search
// radius and the D2D link meets the rate.
double d2d_success_prob(int file, const CachingPolicy& policy, const AssociationThresholds& th,
                        double p_d, const NetworkConfig& cfg, const ContentLibrary& lib,
                        const AnalyticOptions& opt = {});

AnalyticReport overall_report(const CachingPolicy& policy, const AssociationThresholds& th,
                              const NetworkConfig& cfg, const ContentLibrary& lib,
                              const AnalyticOptions& opt = {});
// Same, with an explicit per-file delivery radius (used for the fixed-radius
// baseline delivery rule).
AnalyticReport overall_report(const CachingPolicy& policy, std::span<const double> search_radius,
                              const NetworkConfig& cfg, const ContentLibrary& lib,
                              const AnalyticOptions& opt = {});

}  // namespace mmwcache
