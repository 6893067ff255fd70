#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qe::detail {

/// Adaptive 15-point Gauss-Kronrod over [a, b], relative tolerance `tol`.
///
/// The integrand is first mapped onto [-1, 1]. Boost compares the error of
/// each panel, measured on [-1, 1], against a tolerance in the original
/// units, so a short interval could never meet a tight tolerance and always
/// bisected to max_depth.
template <class F>
double integrate_gk(F&& f, double a, double b, unsigned max_depth, double tol,
                    double* l1 = nullptr) {
  if (a == b) {
    if (l1) *l1 = 0.0;
    return 0.0;
  }
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double error = 0.0;
  double l1_local = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      [&](double x) { return half * f(mid + half * x); }, -1.0, 1.0, max_depth, tol, &error,
      &l1_local);
  if (l1) *l1 = l1_local;
  return value;
}

}  // namespace qe::detail
