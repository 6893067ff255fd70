#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qe/profile_solver.hpp"

namespace qe {

/// Every quantity entering the reduced equations at one value of s.
struct ProfileSample {
  double s = 0.0;
  double alpha = 0.0;
  double alpha_prime = 0.0;
  double alpha_second = 0.0;
  std::vector<double> beta, beta_prime, beta_second;
  double phi = 0.0;
  double phi_prime = 0.0;
  double phi_second = 0.0;
  double V = 0.0;
  double logV_prime = 0.0;
  double logV_second = 0.0;
};

/// Requires beta_i(s) > 0 for all i (throws SingularV otherwise).
ProfileSample sample_at(const ProfileEvaluator& ev, double s);

// Residuals are LHS - eps/2 of the reduced equations (LHS - mu for the
// first integral). phi'' is taken from the sample, so linear phi enters as 0.
double residual_fiber(const ProfileSample& x, const BundleSpec& spec);
double residual_fiber_twist(const ProfileSample& x, const BundleSpec& spec);
double residual_base(const ProfileSample& x, std::size_t i, const BundleSpec& spec);
/// Left-hand side of the first integral; constant mu on a solution.
double mu_of_s(const ProfileSample& x, const BundleSpec& spec);

/// Tolerances a report is certified against. Each check is held to the
/// precision of its weakest ingredient.
struct Tolerances {
  double algebraic = 1e-12;      // roots, ansatz, blowdown normalisation
  double residual = 1e-8;        // reduced equations and mu constancy
  double alpha_end = 1e-10;      // alpha(s*) scaled
  double slope = 1e-6;           // extrapolated alpha' at both ends
  double finite_difference = 1e-6;
  double t_system = 1e-4;

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct BoundaryDefects {
  double alpha_at_0 = 0.0;
  double alpha_at_sstar = 0.0;  ///< scaled, see ProfileEvaluator::alpha_at_sstar_scaled
  bool alpha_at_sstar_is_defect = false;  ///< right blowdown: the scaled defect stands in
  double slope_at_0_minus_2 = 0.0;
  double slope_at_sstar_plus_2 = 0.0;
  /// Residuals of kappa0 and -(s*+kappa0) in their endpoint quadratics,
  /// divided by max(1, E).
  double left_quadratic = 0.0;
  double right_quadratic = 0.0;
  // Blowdown normalisation, generic (unfactored) formulas:
  // beta_1(0) = A kappa0^2 - q^2/(4A), beta_1'(0) - 1, and the mirror at s*.
  std::optional<double> left_beta_at_0;
  std::optional<double> left_slope_minus_1;
  std::optional<double> right_beta_at_sstar;
  std::optional<double> right_slope_plus_1;

  friend bool operator==(const BoundaryDefects&, const BoundaryDefects&) = default;
};

struct CertificationFlags {
  bool quadratic_roots = false;
  bool ansatz = false;
  bool residuals = false;
  bool mu_constant = false;
  bool boundary = false;
  bool blowdown = false;
  bool positivity = false;
  bool finite_difference = false;

  bool all() const noexcept {
    return quadratic_roots && ansatz && residuals && mu_constant && boundary && blowdown &&
           positivity && finite_difference;
  }
  friend bool operator==(const CertificationFlags&, const CertificationFlags&) = default;
};

struct TSystemCheck {
  double max_residual = 0.0;   ///< max |LHS - eps/2| of the t-form f equation
  double max_ds_dt_error = 0.0;  ///< max relative error of ds/dt against sqrt(alpha)
  std::size_t points = 0;

  friend bool operator==(const TSystemCheck&, const TSystemCheck&) = default;
};

struct ResidualReport {
  std::vector<double> grid;
  std::vector<double> res_fiber;
  std::vector<double> res_fiber_twist;
  std::vector<std::vector<double>> res_base;  ///< [sample][factor]
  std::vector<double> mu_samples;
  double mu = 0.0;      ///< E kappa1^2
  double mu_dev = 0.0;  ///< max |mu_sample - mu| / max(1, |mu|)
  std::vector<std::vector<double>> ansatz_res;  ///< [sample][factor]
  BoundaryDefects boundary;
  bool positivity_ok = true;
  std::optional<std::pair<double, int>> first_violation;  ///< (s, factor); factor -1 is alpha
  double fd_check = 0.0;
  std::optional<TSystemCheck> t_system;
  Tolerances tolerances;
  CertificationFlags flags;
  bool certified = false;

  double max_abs_res_fiber() const;
  double max_abs_res_fiber_twist() const;
  double max_abs_res_base() const;
  double max_abs_ansatz() const;

  friend bool operator==(const ResidualReport&, const ResidualReport&) = default;
};

/// Evaluates every check on a Chebyshev grid of `grid_size` points over
/// [delta, s* - delta], delta = delta_frac * s*. Positivity failures are
/// recorded in the report (residuals at those samples are NaN).
ResidualReport verify(const SolvedProfile& profile, std::size_t grid_size = 512,
                      double delta_frac = 1e-3, const Tolerances& tol = {});

/// Recomputes flags and `certified` from the stored values, including the
/// t-system check when present.
void certify(ResidualReport& report);

/// Throws qe::Error(CertificationFailure) (or PositivityError) when the
/// report is not certified.
void require_certified(const ResidualReport& report);

/// Spot check of the t-coordinate equation for f on the reconstructed
/// t-parameterisation, using five-point differences in t.
TSystemCheck verify_t_system(const SolvedProfile& profile, std::size_t grid_size = 64,
                             double delta_frac = 1e-2);

}  // namespace qe
