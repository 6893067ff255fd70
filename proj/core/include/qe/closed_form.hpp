#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qe/spec_model.hpp"

namespace qe {

/// Roots of 1/2 x^2 + 2(n+1) x - E, small <= large.
struct QuadraticRoots {
  double small = 0.0;
  double large = 0.0;
};

/// Value of the endpoint quadratic 1/2 x^2 + 2(n_end+1) x - E.
double endpoint_quadratic(double x, double E, int n_end) noexcept;

/// Both roots of the endpoint quadratic. n_end is the dimension of the factor
/// that collapses at that end (0 for a smooth collapse of the circle alone).
/// Throws NegativeDiscriminant when 4(n_end+1)^2 + 2E < 0.
QuadraticRoots endpoint_quadratic_roots(double E, int n_end);

/// E as a function of kappa0: the left endpoint quadratic solved for E.
double energy_from_kappa0(double kappa0, int n_left) noexcept;

/// s* + kappa0 = -(small root of the right endpoint quadratic).
double right_end_position(double E, int n_right);

struct EndpointGeometry {
  double kappa0 = 0.0;
  double s_star = 0.0;
};

/// kappa0 is the large root of the left quadratic, s* + kappa0 minus the small
/// root of the right one. Throws NonPositiveKappa0 when the large root is <= 0.
EndpointGeometry kappa0_and_sstar(double E, const BundleSpec& spec);

/// Which root of 8E A^2 - 8p A + eps q^2 = 0 to use for a factor that is not
/// pinned by a blowdown. With eps = -1 the roots have opposite signs.
enum class RootBranch { Negative, Positive };

/// The branch used when no override is given. The negative root keeps every
/// beta_i positive on [0, s*] for the specs that admit a solution.
inline constexpr RootBranch kDefaultBranch = RootBranch::Negative;

/// (8 A p - eps q^2) / (8 A^2): the E implied by one warping coefficient.
double consistency_energy(double A, const FactorSpec& factor, double epsilon) noexcept;

/// Warping coefficients A_i. Blowdown factors are pinned (A_1 = 1/(2 kappa0),
/// A_r = -1/(2(s* + kappa0))); the rest solve the E-identity on the branch
/// given by `branches[i]` (kDefaultBranch when `branches` is empty).
std::vector<double> coefficients_A(double E, double kappa0, double s_star,
                                   const BundleSpec& spec,
                                   std::span<const RootBranch> branches = {});

/// Solved scalars. Together with the BundleSpec they fix every profile.
struct SolutionParams {
  double kappa0 = 0.0;
  double kappa1 = 1.0;
  double E = 0.0;
  double mu = 0.0;  ///< E * kappa1^2
  double s_star = 0.0;
  std::vector<double> A;

  friend bool operator==(const SolutionParams&, const SolutionParams&) = default;
};

/// Assembles SolutionParams from kappa0 for a given spec: E from the left
/// quadratic, s* from the right one, then A_i and mu.
SolutionParams params_from_kappa0(const BundleSpec& spec, double kappa0, double kappa1 = 1.0,
                                  std::span<const RootBranch> branches = {});

/// Value and first two derivatives of a profile function in s.
struct Jet {
  double value = 0.0;
  double first = 0.0;
  double second = 0.0;
};

/// beta_i(s) = A_i (s + kappa0)^2 - q_i^2 / (4 A_i).
///
/// A blown-down factor is evaluated in factored form, A_i (x - c)(x + c) with
/// x - c written as s (left end) or s - s* (right end), so that it vanishes
/// exactly at its end instead of through cancellation.
Jet beta(const BundleSpec& spec, const SolutionParams& params, std::size_t i, double s);

/// phi(s) = kappa1 (s + kappa0); phi'' = 0.
Jet phi(const SolutionParams& params, double s) noexcept;

/// V(s) = prod beta_i^{n_i}.
double volume(const BundleSpec& spec, const SolutionParams& params, double s);

/// (log V)' = sum n_i beta_i' / beta_i. Throws SingularV if some beta_i <= 0.
double logV_prime(const BundleSpec& spec, const SolutionParams& params, double s);

/// (log V)'' = sum n_i (beta_i'' beta_i - beta_i'^2) / beta_i^2.
double logV_second(const BundleSpec& spec, const SolutionParams& params, double s);

/// Polynomial form of the ansatz, beta beta'' - 1/2 beta'^2 + q^2/2, divided by
/// the magnitude of its terms. Vanishes identically for the quadratic beta.
double ansatz_residual(const BundleSpec& spec, const SolutionParams& params, std::size_t i,
                       double s);

}  // namespace qe
