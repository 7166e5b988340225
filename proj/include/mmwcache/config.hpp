#pragma once

#include "mmwcache/units.hpp"

#include <vector>

namespace mmwcache {

// Physical and topological parameters. Everything is stored in linear/SI
// units; dB-valued inputs are converted at load time. Defaults are the
// reference setup (densities per m^2, powers in W, distances in m).
struct NetworkConfig {
  double lambda_r = 10e-6;                    // RRH density [1/m^2]
  double lambda_u = 500e-6;                   // user density [1/m^2]
  double rho = 0.5;                           // probability a user is actively requesting
  double p_c = 0.1;                           // RRH transmit power [W]
  double p_d = 2e-3;                          // device transmit power [W]
  double p_b = 1.0;                           // backhaul power per request [W]
  double f_c_cell = 1e9;                      // cellular carrier [Hz]
  double f_c_mm = 28e9;                       // mmWave carrier [Hz]
  double b_c = 20e6;                          // cellular bandwidth [Hz]
  double b_d = 1e9;                           // mmWave bandwidth [Hz]
  double alpha_c = 2.5;                       // cellular path-loss exponent
  double alpha_l = 2.1;                       // mmWave LoS path-loss exponent
  double alpha_n = 4.0;                       // mmWave NLoS path-loss exponent
  double d_l = 75.0;                          // LoS ball radius [m]
  double d_r = 150.0;                         // max D2D discovery distance [m]
  double g_m = db_to_linear(9.0);             // main lobe gain (linear)
  double g_s = db_to_linear(-9.0);            // side lobe gain (linear)
  double delta_theta = deg_to_rad(30.0);      // main lobe beamwidth [rad]
  double g_t = 1.0;                           // RRH antenna gain (linear)
  double g_r = 1.0;                           // user cellular antenna gain (linear)
  double n_o = dbm_per_hz_to_w_per_hz(-178);  // noise power spectral density [W/Hz]
  double f_n = db_to_linear(10.0);            // receiver noise figure (linear)
  double sim_radius = 2000.0;                 // simulation window radius [m]

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Content library: file popularity follows a Zipf law; each file carries its
// own rate constraint.
struct ContentLibrary {
  int n_files = 100;
  double zipf_epsilon = 1.2;
  std::vector<double> rate_bps = std::vector<double>(100, 1e9);
  int m_d = 2;   // device cache capacity [files]
  int m_e = 50;  // edge cloud cache capacity [files]

  void validate() const;

  static ContentLibrary uniform_rate(int n_files, double zipf_epsilon, double rate_bps,
                                     int m_d, int m_e);
};

}  // namespace mmwcache
