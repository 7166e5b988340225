#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mmwcache::quad {

struct Options {
  double rel_tol = 1e-8;
  unsigned max_depth = 15;
};

class IntegrationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Adaptive Gauss-Kronrod on a finite interval. Throws when the error
// estimate does not meet the requested tolerance.
template <class F>
double integrate(F&& f, double a, double b, const Options& opt = {}) {
  if (!(b > a)) return 0.0;
  // A sliver interval leaves the error estimate at rounding level; the
  // midpoint rule is exact to that same level and cannot misreport.
  if (b - a <= 1e-12 * std::max({std::fabs(a), std::fabs(b), 1.0}))
    return (b - a) * f(0.5 * (a + b));
  double err = 0.0, l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, opt.max_depth, opt.rel_tol, &err, &l1);
  if (!(err <= std::max(100.0 * opt.rel_tol * std::max(std::fabs(v), l1), 1e-10))) {
    throw IntegrationError("quadrature did not converge on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]: estimate=" + std::to_string(v) +
                           " error=" + std::to_string(err) + " L1=" + std::to_string(l1));
  }
  return v;
}

// Tail integral over [a, inf) via the substitution y = a*exp(u), which keeps
// slowly decaying integrands resolvable at the requested tolerance. The
// transformed integrand is truncated once it falls below `floor` (probed at a
// few points per doubling so a hump past the first probe is not missed);
// `y_cap` bounds the radius for integrands that do not decay.
template <class F>
double integrate_log_tail(F&& f, double a, const Options& opt = {},
                          double y_cap = std::numeric_limits<double>::infinity(),
                          double floor = 1e-14) {
  if (!(a > 0.0)) throw IntegrationError("log-tail integral requires a positive lower limit");
  auto g = [&](double u) {
    const double y = a * std::exp(u);
    return f(y) * y;
  };
  double u_cap = std::log(1e290 / a);
  if (std::isfinite(y_cap)) u_cap = std::min(u_cap, std::log(y_cap / a));
  if (u_cap <= 0.0) return 0.0;
  double u_max = std::min(2.0, u_cap);
  while (u_max < u_cap) {
    const double probe = std::max({std::fabs(g(u_max)), std::fabs(g(0.75 * u_max)),
                                   std::fabs(g(0.5 * u_max))});
    if (probe < floor) break;
    u_max = std::min(2.0 * u_max, u_cap);
  }
  return integrate(g, 0.0, u_max, opt);
}

}  // namespace mmwcache::quad
