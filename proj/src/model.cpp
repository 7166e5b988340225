#include "mmwcache/model.hpp"

#include "mmwcache/units.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mmwcache {

std::vector<double> zipf_popularity(int n_files, double epsilon) {
  if (n_files < 1)
    throw std::invalid_argument("zipf_popularity: n_files must be at least 1");
  if (!(epsilon >= 0))
    throw std::invalid_argument("zipf_popularity: epsilon must be nonnegative");
  std::vector<double> beta(n_files);
  double norm = 0;
  for (int i = 0; i < n_files; ++i) {
    beta[i] = std::pow(static_cast<double>(i + 1), -epsilon);
    norm += beta[i];
  }
  for (double& b : beta) b /= norm;
  return beta;
}

double rate_threshold(double rate_bps, double bandwidth_hz) {
  if (!(bandwidth_hz > 0))
    throw std::invalid_argument("rate_threshold: bandwidth must be strictly positive");
  if (!(rate_bps >= 0))
    throw std::invalid_argument("rate_threshold: rate must be nonnegative");
  return std::exp2(rate_bps / bandwidth_hz) - 1.0;
}

GainPmf interferer_gain_pmf(double g_m, double g_s, double delta_theta) {
  if (!(delta_theta > 0 && delta_theta <= 2 * kPi))
    throw std::invalid_argument("interferer_gain_pmf: delta_theta must be within (0, 2*pi]");
  const double main_frac = delta_theta / (2 * kPi);
  const double side_frac = 1.0 - main_frac;
  GainPmf pmf;
  pmf.gain = {g_m * g_m, g_s * g_s, g_m * g_s};
  pmf.prob = {main_frac * main_frac, side_frac * side_frac, 2.0 * main_frac * side_frac};
  return pmf;
}

EffectiveNoise effective_noise(const NetworkConfig& cfg) {
  const double w_d = wavelength_m(cfg.f_c_mm);
  const double w_c = wavelength_m(cfg.f_c_cell);
  EffectiveNoise n;
  n.d2d = 16.0 * kPi * kPi * cfg.n_o * cfg.f_n * cfg.b_d / (cfg.p_d * w_d * w_d);
  n.cell = 16.0 * kPi * kPi * cfg.n_o * cfg.f_n * cfg.b_c / (cfg.g_t * cfg.g_r * cfg.p_c * w_c * w_c);
  return n;
}

double worst_case_avg_interference(const NetworkConfig& cfg) {
  if (!(cfg.alpha_l > 2 && cfg.alpha_n > 2))
    throw std::invalid_argument(
        "worst_case_avg_interference: path-loss exponents must exceed 2, the mean "
        "interference integral diverges otherwise");
  const double beam = cfg.g_m * cfg.delta_theta + cfg.g_s * (2 * kPi - cfg.delta_theta);
  const double radial = (cfg.alpha_l - 2.0 * std::pow(cfg.d_l, 2.0 - cfg.alpha_l)) / (cfg.alpha_l - 2.0) +
                        2.0 * std::pow(cfg.d_l, 2.0 - cfg.alpha_n) / (cfg.alpha_n - 2.0);
  return cfg.lambda_u * cfg.rho / (4 * kPi) * beam * beam * radial;
}

DerivedConstants derive_constants(const NetworkConfig& cfg, const ContentLibrary& lib) {
  cfg.validate();
  lib.validate();
  DerivedConstants dc;
  const EffectiveNoise n = effective_noise(cfg);
  dc.noise_d2d = n.d2d;
  dc.noise_cell = n.cell;
  dc.worst_avg_interference = worst_case_avg_interference(cfg);
  dc.gain_pmf = interferer_gain_pmf(cfg.g_m, cfg.g_s, cfg.delta_theta);
  dc.threshold_d2d.resize(lib.n_files);
  dc.threshold_cell.resize(lib.n_files);
  for (int i = 0; i < lib.n_files; ++i) {
    dc.threshold_d2d[i] = rate_threshold(lib.rate_bps[i], cfg.b_d);
    dc.threshold_cell[i] = rate_threshold(lib.rate_bps[i], cfg.b_c);
  }
  return dc;
}

}  // namespace mmwcache
