#pragma once

#include <string>
#include <vector>

#include "qe/profile_solver.hpp"

namespace qe {

/// Arc length t(s) = integral of ds / sqrt(alpha) from 0.
///
/// alpha vanishes linearly at both ends, so each half of the interval is
/// integrated in w with s = w^2 (left) or s = s* - w^2 (right); the integrand
/// 2w / sqrt(alpha) is then bounded. The right half uses alpha anchored at
/// alpha(s*) = 0.
class ArcLength {
 public:
  explicit ArcLength(const ProfileEvaluator& ev);

  double t(double s) const;
  double total() const noexcept { return total_; }

  /// t at every node of an ascending grid, accumulated piecewise.
  std::vector<double> t_values(const std::vector<double>& s_sorted) const;

  /// Integral of ds / sqrt(alpha) over [a, b] for a, b strictly interior.
  double between(double a, double b) const;

  /// s with t(s) - t(s0) = dt, by Newton iteration on `between`.
  double invert_from(double s0, double dt) const;

 private:
  double left_piece(double w_lo, double w_hi) const;
  double right_piece(double w_lo, double w_hi) const;
  double alpha_checked(double x, bool from_end) const;  // x is s, or s* - s if from_end

  const ProfileEvaluator& ev_;
  double mid_;
  double total_;
};

struct MetricSample {
  double t = 0.0;
  double s = 0.0;
  double f = 0.0;
  std::vector<double> g;
  double v = 0.0;
  double u = 0.0;
};

inline constexpr const char* kPotentialConvention = "u = -m log(v)";

/// Geometry in the t-coordinate: f = sqrt(alpha), g_i = sqrt(beta_i), v = phi.
struct MetricProfile {
  std::vector<MetricSample> samples;
  double total_length_l = 0.0;
  double m = 0.0;
  std::string u_convention = kPotentialConvention;
};

/// Samples the metric on `grid_size` Chebyshev-Lobatto nodes of [0, s*].
/// Throws NonPositiveAlpha if alpha <= 0 at an interior node.
MetricProfile reconstruct_t(const SolvedProfile& profile, std::size_t grid_size = 256);

}  // namespace qe
