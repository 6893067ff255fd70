#include "qe/metric_profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "quadrature.hpp"

namespace qe {

namespace {

constexpr double kArcTol = 1e-13;

template <class F>
double gk(F&& f, double a, double b) {
  return detail::integrate_gk(f, a, b, 12, kArcTol);
}

}  // namespace

ArcLength::ArcLength(const ProfileEvaluator& ev) : ev_(ev), mid_(0.5 * ev.params().s_star) {
  const double w_mid = std::sqrt(mid_);
  total_ = left_piece(0.0, w_mid) + right_piece(0.0, std::sqrt(ev_.params().s_star - mid_));
}

double ArcLength::alpha_checked(double x, bool from_end) const {
  const double a = from_end ? ev_.alpha_anchored_from_end(x) : ev_.alpha(x);
  if (!(a > 0.0)) {
    std::ostringstream msg;
    msg << "alpha(" << (from_end ? ev_.params().s_star - x : x) << ") = " << a
        << " <= 0 while reconstructing t";
    throw Error(ErrorCode::NonPositiveAlpha, msg.str());
  }
  return a;
}

double ArcLength::left_piece(double w_lo, double w_hi) const {
  return gk([this](double w) { return 2.0 * w / std::sqrt(alpha_checked(w * w, false)); }, w_lo,
            w_hi);
}

double ArcLength::right_piece(double w_lo, double w_hi) const {
  return gk([this](double w) { return 2.0 * w / std::sqrt(alpha_checked(w * w, true)); }, w_lo,
            w_hi);
}

double ArcLength::t(double s) const {
  const double s_star = ev_.params().s_star;
  if (s <= 0.0) return 0.0;
  if (s >= s_star) return total_;
  if (s <= mid_) return left_piece(0.0, std::sqrt(s));
  return total_ - right_piece(0.0, std::sqrt(s_star - s));
}

std::vector<double> ArcLength::t_values(const std::vector<double>& s_sorted) const {
  const double s_star = ev_.params().s_star;
  std::vector<double> out(s_sorted.size());
  // Left half accumulates upward from s = 0, right half downward from s*.
  double acc = 0.0;
  double w_prev = 0.0;
  std::size_t k = 0;
  for (; k < s_sorted.size() && s_sorted[k] <= mid_; ++k) {
    const double w = std::sqrt(std::max(0.0, s_sorted[k]));
    acc += left_piece(w_prev, w);
    w_prev = w;
    out[k] = acc;
  }
  acc = 0.0;
  w_prev = 0.0;
  for (std::size_t j = s_sorted.size(); j-- > k;) {
    const double w = std::sqrt(std::max(0.0, s_star - s_sorted[j]));
    acc += right_piece(w_prev, w);
    w_prev = w;
    out[j] = total_ - acc;
  }
  return out;
}

double ArcLength::between(double a, double b) const {
  return gk([this](double s) { return 1.0 / std::sqrt(alpha_checked(s, false)); }, a, b);
}

double ArcLength::invert_from(double s0, double dt) const {
  double s = s0 + dt * std::sqrt(alpha_checked(s0, false));
  double last = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 30; ++iter) {
    const double step = (between(s0, s) - dt) * std::sqrt(alpha_checked(s, false));
    // Quadratic convergence stalls at rounding level; stop once steps stop shrinking.
    if (std::abs(step) >= 0.5 * last) break;
    s -= step;
    last = std::abs(step);
    if (last <= 1e-15 * std::max(1.0, std::abs(s))) break;
  }
  return s;
}

MetricProfile reconstruct_t(const SolvedProfile& profile, std::size_t grid_size) {
  const auto& spec = profile.spec;
  const auto& params = profile.params;
  const ProfileEvaluator ev(spec, params, profile.config.quadrature());
  const ArcLength arc(ev);
  const auto grid = chebyshev_grid(std::max<std::size_t>(grid_size, 2), 0.0, params.s_star);
  const auto ts = arc.t_values(grid);

  MetricProfile out;
  out.m = spec.m;
  out.total_length_l = arc.total();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    MetricSample x;
    x.s = grid[k];
    x.t = ts[k];
    const bool interior = k > 0 && k + 1 < grid.size();
    double a = interior ? ev.alpha(x.s) : 0.0;
    if (interior && !(a > 0.0)) {
      std::ostringstream msg;
      msg << "alpha(" << x.s << ") = " << a << " <= 0";
      throw Error(ErrorCode::NonPositiveAlpha, msg.str());
    }
    x.f = std::sqrt(a);
    for (std::size_t i = 0; i < spec.rank(); ++i) {
      x.g.push_back(std::sqrt(std::max(0.0, beta(spec, params, i, x.s).value)));
    }
    x.v = phi(params, x.s).value;
    x.u = -spec.m * std::log(x.v);
    out.samples.push_back(std::move(x));
  }
  return out;
}

}  // namespace qe
