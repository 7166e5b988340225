#include "mmwcache/config.hpp"

#include <stdexcept>
#include <string>

namespace mmwcache {

namespace {

void fail(const std::string& field, const std::string& why, double got) {
  throw std::invalid_argument(field + " " + why + " (got " + std::to_string(got) + ")");
}

void require_positive(const std::string& field, double v) {
  if (!(v > 0)) fail(field, "must be strictly positive", v);
}

void require_nonnegative(const std::string& field, double v) {
  if (!(v >= 0)) fail(field, "must be nonnegative", v);
}

}  // namespace

void NetworkConfig::validate() const {
  // Zero densities are accepted: they model the degenerate networks used in
  // limiting cases (no interferers, no RRHs).
  require_nonnegative("lambda_r", lambda_r);
  require_nonnegative("lambda_u", lambda_u);
  if (!(rho >= 0 && rho <= 1)) fail("rho", "must be within [0, 1]", rho);
  require_positive("p_c", p_c);
  require_positive("p_d", p_d);
  require_positive("p_b", p_b);
  require_positive("f_c_cell", f_c_cell);
  require_positive("f_c_mm", f_c_mm);
  require_positive("b_c", b_c);
  require_positive("b_d", b_d);
  if (!(alpha_c > 2)) fail("alpha_c", "must exceed 2 for a finite interference field", alpha_c);
  if (!(alpha_l > 2)) fail("alpha_l", "must exceed 2 for a finite interference field", alpha_l);
  if (!(alpha_n > 2)) fail("alpha_n", "must exceed 2 for a finite interference field", alpha_n);
  if (!(alpha_l < alpha_n)) fail("alpha_l", "must be smaller than alpha_n", alpha_l);
  require_positive("d_l", d_l);
  require_positive("d_r", d_r);
  require_positive("g_m", g_m);
  require_positive("g_s", g_s);
  if (!(delta_theta > 0 && delta_theta <= 2 * kPi))
    fail("delta_theta", "must be within (0, 2*pi]", delta_theta);
  require_positive("g_t", g_t);
  require_positive("g_r", g_r);
  require_positive("n_o", n_o);
  require_positive("f_n", f_n);
  require_positive("sim_radius", sim_radius);
}

void ContentLibrary::validate() const {
  if (n_files < 1) fail("n_files", "must be at least 1", n_files);
  require_nonnegative("zipf_epsilon", zipf_epsilon);
  if (static_cast<int>(rate_bps.size()) != n_files)
    throw std::invalid_argument("rate_bps must hold one rate per file (have " +
                                std::to_string(rate_bps.size()) + ", need " +
                                std::to_string(n_files) + ")");
  for (double r : rate_bps)
    if (!(r > 0)) fail("rate_bps", "must be strictly positive", r);
  if (!(m_d > 0 && m_d <= n_files)) fail("m_d", "must be within (0, n_files]", m_d);
  if (!(m_e >= 0 && m_e <= n_files)) fail("m_e", "must be within [0, n_files]", m_e);
}

ContentLibrary ContentLibrary::uniform_rate(int n_files, double zipf_epsilon, double rate_bps,
                                            int m_d, int m_e) {
  ContentLibrary lib;
  lib.n_files = n_files;
  lib.zipf_epsilon = zipf_epsilon;
  lib.rate_bps.assign(n_files, rate_bps);
  lib.m_d = m_d;
  lib.m_e = m_e;
  return lib;
}

}  // namespace mmwcache
