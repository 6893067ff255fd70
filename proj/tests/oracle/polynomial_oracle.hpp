#pragma once

// Exact alpha for integer m >= 2 by polynomial antidifferentiation in r.
// Every factor beta_i = A (r + k0)^2 - q^2/(4A) is expanded in r, so the
// antiderivative starts at r = 0 without cancellation.

#include <cmath>
#include <vector>

#include "qe/closed_form.hpp"

namespace qe::test::oracle {

using Poly = std::vector<double>;  // coefficients of r^0, r^1, ...

inline Poly multiply(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline double horner(const Poly& p, double r) {
  double acc = 0.0;
  for (std::size_t k = p.size(); k-- > 0;) acc = acc * r + p[k];
  return acc;
}

/// Integrand V(r) (r + k0)^(m-2) (E + eps/2 (r + k0)^2) as a polynomial in r.
inline Poly integrand_poly(const BundleSpec& spec, const SolutionParams& p) {
  const double k0 = p.kappa0;
  Poly out{1.0};
  for (std::size_t i = 0; i < spec.factors.size(); ++i) {
    const double A = p.A[i], q = spec.factors[i].q;
    const Poly beta{A * k0 * k0 - q * q / (4.0 * A), 2.0 * A * k0, A};
    for (int k = 0; k < spec.factors[i].n; ++k) out = multiply(out, beta);
  }
  const Poly x{k0, 1.0};
  for (int k = 0; k < static_cast<int>(spec.m) - 2; ++k) out = multiply(out, x);
  const double E = p.mu / (p.kappa1 * p.kappa1);
  return multiply(out, Poly{E + 0.5 * spec.epsilon * k0 * k0, spec.epsilon * k0, 0.5 * spec.epsilon});
}

inline double exact_alpha(const BundleSpec& spec, const SolutionParams& p, double s) {
  const Poly f = integrand_poly(spec, p);
  Poly F(f.size() + 1, 0.0);
  for (std::size_t k = 0; k < f.size(); ++k) F[k + 1] = f[k] / double(k + 1);
  Poly V{1.0};
  for (std::size_t i = 0; i < spec.factors.size(); ++i) {
    const double A = p.A[i], q = spec.factors[i].q;
    const Poly beta{A * p.kappa0 * p.kappa0 - q * q / (4.0 * A), 2.0 * A * p.kappa0, A};
    for (int k = 0; k < spec.factors[i].n; ++k) V = multiply(V, beta);
  }
  return horner(F, s) / (horner(V, s) * std::pow(s + p.kappa0, spec.m - 1.0));
}

}  // namespace qe::test::oracle
