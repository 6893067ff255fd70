#include "qe/closed_form.hpp"

#include <cmath>
#include <string>

#include "qe/error.hpp"

namespace qe {

double endpoint_quadratic(double x, double E, int n_end) noexcept {
  return 0.5 * x * x + 2.0 * (n_end + 1) * x - E;
}

QuadraticRoots endpoint_quadratic_roots(double E, int n_end) {
  const double b = 2.0 * (n_end + 1);
  const double disc = b * b + 2.0 * E;
  if (!(disc >= 0.0)) {
    throw Error(ErrorCode::NegativeDiscriminant,
                "endpoint quadratic has discriminant " + std::to_string(disc) + " < 0");
  }
  const double root = std::sqrt(disc);
  // -b + root without cancellation when E is small
  return {-b - root, 2.0 * E / (b + root)};
}

double energy_from_kappa0(double kappa0, int n_left) noexcept {
  return 0.5 * kappa0 * kappa0 + 2.0 * (n_left + 1) * kappa0;
}

double right_end_position(double E, int n_right) {
  return -endpoint_quadratic_roots(E, n_right).small;
}

EndpointGeometry kappa0_and_sstar(double E, const BundleSpec& spec) {
  const double kappa0 = endpoint_quadratic_roots(E, spec.left_end_dimension()).large;
  if (!(kappa0 > 0.0)) {
    throw Error(ErrorCode::NonPositiveKappa0,
                "large root of the left endpoint quadratic is " + std::to_string(kappa0) +
                    " (E = " + std::to_string(E) + ")");
  }
  return {kappa0, right_end_position(E, spec.right_end_dimension()) - kappa0};
}

double consistency_energy(double A, const FactorSpec& factor, double epsilon) noexcept {
  const double q2 = double(factor.q) * factor.q;
  return (8.0 * A * factor.p - epsilon * q2) / (8.0 * A * A);
}

std::vector<double> coefficients_A(double E, double kappa0, double s_star,
                                   const BundleSpec& spec,
                                   std::span<const RootBranch> branches) {
  std::vector<double> A(spec.rank());
  for (std::size_t i = 0; i < spec.rank(); ++i) {
    if (spec.is_left_blowdown_factor(i)) {
      A[i] = 1.0 / (2.0 * kappa0);
      continue;
    }
    if (spec.is_right_blowdown_factor(i)) {
      A[i] = -1.0 / (2.0 * (s_star + kappa0));
      continue;
    }
    const auto& f = spec.factors[i];
    const double p = f.p;
    const double q2 = double(f.q) * f.q;
    // 8E A^2 - 8p A + eps q^2 = 0  =>  A = (p -+ root) / (2E)
    const double root = std::sqrt(p * p - 0.5 * E * spec.epsilon * q2);
    const RootBranch branch = i < branches.size() ? branches[i] : kDefaultBranch;
    A[i] = branch == RootBranch::Positive ? (p + root) / (2.0 * E)
                                          : spec.epsilon * q2 / (4.0 * (p + root));
  }
  return A;
}

SolutionParams params_from_kappa0(const BundleSpec& spec, double kappa0, double kappa1,
                                  std::span<const RootBranch> branches) {
  SolutionParams params;
  params.kappa0 = kappa0;
  params.kappa1 = kappa1;
  params.E = energy_from_kappa0(kappa0, spec.left_end_dimension());
  params.mu = params.E * kappa1 * kappa1;
  params.s_star = right_end_position(params.E, spec.right_end_dimension()) - kappa0;
  params.A = coefficients_A(params.E, kappa0, params.s_star, spec, branches);
  return params;
}

Jet beta(const BundleSpec& spec, const SolutionParams& params, std::size_t i, double s) {
  const double A = params.A[i];
  const double x = s + params.kappa0;
  double value;
  if (spec.is_left_blowdown_factor(i)) {
    value = A * s * (s + 2.0 * params.kappa0);
  } else if (spec.is_right_blowdown_factor(i)) {
    value = A * (s - params.s_star) * (s + params.s_star + 2.0 * params.kappa0);
  } else {
    const double q2 = double(spec.factors[i].q) * spec.factors[i].q;
    value = A * x * x - q2 / (4.0 * A);
  }
  return {value, 2.0 * A * x, 2.0 * A};
}

Jet phi(const SolutionParams& params, double s) noexcept {
  return {params.kappa1 * (s + params.kappa0), params.kappa1, 0.0};
}

double volume(const BundleSpec& spec, const SolutionParams& params, double s) {
  double v = 1.0;
  for (std::size_t i = 0; i < spec.rank(); ++i) {
    v *= std::pow(beta(spec, params, i, s).value, spec.factors[i].n);
  }
  return v;
}

namespace {

Jet checked_beta(const BundleSpec& spec, const SolutionParams& params, std::size_t i, double s) {
  const Jet b = beta(spec, params, i, s);
  if (!(b.value > 0.0)) {
    throw Error(ErrorCode::SingularV, "beta_" + std::to_string(i + 1) + "(" + std::to_string(s) +
                                          ") = " + std::to_string(b.value) + " <= 0");
  }
  return b;
}

}  // namespace

double logV_prime(const BundleSpec& spec, const SolutionParams& params, double s) {
  double sum = 0.0;
  for (std::size_t i = 0; i < spec.rank(); ++i) {
    const Jet b = checked_beta(spec, params, i, s);
    sum += spec.factors[i].n * b.first / b.value;
  }
  return sum;
}

double logV_second(const BundleSpec& spec, const SolutionParams& params, double s) {
  double sum = 0.0;
  for (std::size_t i = 0; i < spec.rank(); ++i) {
    const Jet b = checked_beta(spec, params, i, s);
    const double ratio = b.first / b.value;
    sum += spec.factors[i].n * (b.second / b.value - ratio * ratio);
  }
  return sum;
}

double ansatz_residual(const BundleSpec& spec, const SolutionParams& params, std::size_t i,
                       double s) {
  const Jet b = beta(spec, params, i, s);
  const double q2 = double(spec.factors[i].q) * spec.factors[i].q;
  const double a = b.value * b.second;
  const double c = 0.5 * b.first * b.first;
  const double d = 0.5 * q2;
  return (a - c + d) / (std::abs(a) + c + d);
}

}  // namespace qe
