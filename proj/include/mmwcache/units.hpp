#pragma once

#include <cmath>
#include <numbers>

namespace mmwcache {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_per_hz_to_w_per_hz(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double wavelength_m(double carrier_hz) { return kSpeedOfLight / carrier_hz; }

}  // namespace mmwcache
