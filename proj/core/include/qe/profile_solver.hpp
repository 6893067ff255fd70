#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qe/closed_form.hpp"
#include "qe/error.hpp"
#include "qe/spec_model.hpp"

namespace qe {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  unsigned max_depth = 15;  ///< maximum bisection depth of the adaptive rule
};

struct SolverConfig {
  double kappa_lo = 1e-3;
  double kappa_hi = 1e3;
  int scan_points = 64;
  double root_tol = 1e-12;  ///< on kappa0, relative to max(1, kappa0)
  double quad_rel_tol = 1e-10;
  unsigned max_subdivisions = 15;
  double kappa1 = 1.0;
  /// Per-factor root branch for the unpinned A_i; empty means kDefaultBranch.
  std::vector<RootBranch> branches;

  QuadratureOptions quadrature() const { return {quad_rel_tol, max_subdivisions}; }

  /// Throws qe::Error(InvalidSpec) on an unusable configuration.
  void check() const;

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

/// Integrand of the closed-form alpha: V(r) (r+kappa0)^{m-2} (E + eps/2 (r+kappa0)^2).
double alpha_integrand(double r, const SolutionParams& params, const BundleSpec& spec);

/// alpha and its derivatives for one fixed set of parameters.
///
/// alpha(s) = V^{-1} (s+kappa0)^{1-m} I(s) with I(s) the integral of
/// alpha_integrand over [0, s]. On the right half of the interval I(s) is
/// taken as I(s*) minus the tail integral, so alpha near s* does not depend on
/// cancellation inside a long integral. alpha' and alpha'' come from the
/// first-order equation, not from differencing. When the right end blows
/// down, the right half uses the tail integral alone (alpha(s*) = 0 imposed).
class ProfileEvaluator {
 public:
  ProfileEvaluator(BundleSpec spec, SolutionParams params, QuadratureOptions quad = {});

  const BundleSpec& spec() const noexcept { return spec_; }
  const SolutionParams& params() const noexcept { return params_; }
  const QuadratureOptions& quadrature() const noexcept { return quad_; }

  double integrand(double r) const;
  /// Integral of the integrand over [a, b], adaptive Gauss-Kronrod.
  double integrate(double a, double b, double* l1 = nullptr) const;

  /// D = I(s*): the boundary defect of this parameter set.
  double total_integral() const noexcept { return total_; }
  /// Integral of |integrand| over [0, s*]; the natural scale of D.
  double total_l1() const noexcept { return total_l1_; }
  /// D / l1, dimensionless.
  double scaled_defect() const noexcept { return total_l1_ > 0 ? total_ / total_l1_ : 0.0; }

  double alpha(double s) const;

  /// alpha on the right half computed from the tail integral alone, i.e. with
  /// alpha(s*) = 0 imposed. Used where the residual defect must not leak in.
  double alpha_anchored_right(double s) const;
  /// The same as a function of d = s* - s, free of rounding in s* - d.
  double alpha_anchored_from_end(double d) const;

  /// Right-hand side and coefficient of alpha' + P alpha = RHS.
  double rhs(double s) const noexcept;
  double rhs_prime(double s) const noexcept;
  double coefficient(double s) const;
  double coefficient_prime(double s) const;

  double alpha_prime(double s) const;
  double alpha_second(double s) const;

  /// One-sided limits of alpha' at s = 0 and s = s*: Richardson extrapolation
  /// from interior samples at delta*{1,2,4}, delta = delta_frac * s*.
  double alpha_prime_left_limit(double delta_frac = 1e-6) const;
  double alpha_prime_right_limit(double delta_frac = 1e-6) const;

  /// alpha(s*) divided by max(1, |alpha(s*/2)|). Under a right blowdown
  /// V(s*) = 0, alpha(s*) = 0 is equivalent to D = 0, and the scaled defect
  /// is returned instead.
  double alpha_at_sstar_scaled() const;

 private:
  double prefactor(double s) const;  // V(s) (s + kappa0)^{m-1}
  double volume_from_end(double d) const;  // V(s* - d)
  double alpha_from_integral(double s, double integral) const;

  BundleSpec spec_;
  SolutionParams params_;
  QuadratureOptions quad_;
  double total_ = 0.0;
  double total_l1_ = 0.0;
};

/// Free-function forms, each building a temporary evaluator.
double alpha(double s, const SolutionParams& params, const BundleSpec& spec,
             const QuadratureOptions& quad = {});
double alpha_prime(double s, const SolutionParams& params, const BundleSpec& spec,
                   const QuadratureOptions& quad = {});
double alpha_second(double s, const SolutionParams& params, const BundleSpec& spec,
                    const QuadratureOptions& quad = {});

struct DefectEvaluation {
  double kappa0 = 0.0;
  double value = 0.0;   ///< D(kappa0)
  double l1 = 0.0;      ///< integral of |integrand|
  bool positive = true; ///< beta_i > 0 at every interior check point
  std::optional<std::pair<double, int>> violation;  ///< first (s, factor) with beta <= 0
};

/// D(kappa0) = integral of alpha_integrand over [0, s*] for the parameters
/// generated from kappa0. Positivity failures are reported, not thrown.
DefectEvaluation boundary_defect(double kappa0, const BundleSpec& spec, const SolverConfig& config);

struct ScanRow {
  double kappa0;
  double defect;
  bool positive;
};

struct SolvedProfile {
  BundleSpec spec;
  SolutionParams params;
  SolverConfig config;
  double defect_at_root = 0.0;  ///< |D| / l1 at the returned root
  std::pair<double, double> bracket_used;
  std::vector<std::pair<double, double>> all_sign_changes;
  std::vector<double> roots;  ///< bisected root of every sign change, ascending

  friend bool operator==(const SolvedProfile&, const SolvedProfile&) = default;
};

/// The defect never changed sign over the scan; carries the scan table.
class NoSignChangeError : public Error {
 public:
  NoSignChangeError(std::vector<ScanRow> scan, const std::string& what)
      : Error(ErrorCode::NoSignChange, what), scan_(std::move(scan)) {}
  const std::vector<ScanRow>& scan() const noexcept { return scan_; }

 private:
  std::vector<ScanRow> scan_;
};

/// Log-uniform scan of D over the bracket; returns every sample.
std::vector<ScanRow> scan_defect(const BundleSpec& spec, const SolverConfig& config);

/// Locates the compactifying kappa0: scan, bisect each sign change, return
/// the smallest root. Throws InvalidSpec, NoSignChangeError, PositivityError.
SolvedProfile solve(const BundleSpec& spec, const SolverConfig& config = {});

/// Rebuilds a SolvedProfile for an explicitly chosen kappa0 without solving.
SolvedProfile profile_at(const BundleSpec& spec, double kappa0, const SolverConfig& config = {});

/// Chebyshev-Gauss-Lobatto nodes on [a, b], ascending.
std::vector<double> chebyshev_grid(std::size_t count, double a, double b);

}  // namespace qe
