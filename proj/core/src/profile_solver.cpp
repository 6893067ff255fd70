#include "qe/profile_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "quadrature.hpp"

namespace qe {

namespace {

// Extrapolates f(0) from f(h), f(2h), f(4h) assuming f = c0 + c1 h + c2 h^2 + ...
double richardson_to_zero(double f1, double f2, double f4) {
  return (8.0 * f1 - 6.0 * f2 + f4) / 3.0;
}

}  // namespace

void SolverConfig::check() const {
  std::string problem;
  if (!(kappa_lo > 0.0)) problem = "bracket lower end must be > 0";
  else if (!(kappa_lo < kappa_hi)) problem = "bracket must satisfy lo < hi";
  else if (scan_points < 2) problem = "scan_points must be >= 2";
  else if (!(root_tol > 0.0)) problem = "root_tol must be > 0";
  else if (!(quad_rel_tol > 0.0)) problem = "quad_rel_tol must be > 0";
  else if (max_subdivisions < 1) problem = "max_subdivisions must be >= 1";
  else if (!(kappa1 > 0.0)) problem = "kappa1 must be > 0";
  if (!problem.empty()) throw Error(ErrorCode::InvalidSpec, "solver config: " + problem);
}

std::vector<double> chebyshev_grid(std::size_t count, double a, double b) {
  std::vector<double> nodes(count);
  if (count == 1) {
    nodes[0] = 0.5 * (a + b);
    return nodes;
  }
  const double n = static_cast<double>(count - 1);
  for (std::size_t j = 0; j < count; ++j) {
    const double t = -std::cos(std::numbers::pi * static_cast<double>(j) / n);
    nodes[j] = 0.5 * (a + b) + 0.5 * (b - a) * t;
  }
  nodes.front() = a;
  nodes.back() = b;
  return nodes;
}

double alpha_integrand(double r, const SolutionParams& params, const BundleSpec& spec) {
  const double x = r + params.kappa0;
  const double energy = params.mu / (params.kappa1 * params.kappa1);
  return volume(spec, params, r) * std::pow(x, spec.m - 2.0) *
         (energy + 0.5 * spec.epsilon * x * x);
}

ProfileEvaluator::ProfileEvaluator(BundleSpec spec, SolutionParams params, QuadratureOptions quad)
    : spec_(std::move(spec)), params_(std::move(params)), quad_(quad) {
  total_ = integrate(0.0, params_.s_star, &total_l1_);
}

double ProfileEvaluator::integrand(double r) const { return alpha_integrand(r, params_, spec_); }

double ProfileEvaluator::integrate(double a, double b, double* l1) const {
  return detail::integrate_gk([this](double r) { return integrand(r); }, a, b, quad_.max_depth,
                              quad_.rel_tol, l1);
}

double ProfileEvaluator::prefactor(double s) const {
  return volume(spec_, params_, s) * std::pow(s + params_.kappa0, spec_.m - 1.0);
}

double ProfileEvaluator::alpha_from_integral(double s, double integral) const {
  const double pre = prefactor(s);
  if (!(pre > 0.0)) {
    std::ostringstream msg;
    msg << "V(s) (s + kappa0)^(m-1) = " << pre << " at s = " << s;
    throw Error(ErrorCode::SingularPrefactor, msg.str());
  }
  return integral / pre;
}

double ProfileEvaluator::alpha(double s) const {
  if (s <= 0.0) return 0.0;
  const double s_star = params_.s_star;
  if (s <= 0.5 * s_star) return alpha_from_integral(s, integrate(0.0, s));
  // With V(s*) = 0 any leftover defect D would enter as D / V; anchor at s* instead.
  if (spec_.right == EndpointType::Blowdown) return alpha_anchored_from_end(s_star - s);
  return alpha_from_integral(s, total_ - integrate(s, s_star));
}

double ProfileEvaluator::volume_from_end(double d) const {
  const double s = params_.s_star - d;
  double v = 1.0;
  for (std::size_t i = 0; i < spec_.rank(); ++i) {
    double b;
    if (spec_.is_right_blowdown_factor(i)) {
      b = params_.A[i] * -d * (2.0 * (params_.s_star + params_.kappa0) - d);
    } else {
      b = beta(spec_, params_, i, s).value;
    }
    v *= std::pow(b, spec_.factors[i].n);
  }
  return v;
}

double ProfileEvaluator::alpha_anchored_from_end(double d) const {
  if (d <= 0.0) return 0.0;
  const double x_end = params_.s_star + params_.kappa0;
  const double energy = params_.mu / (params_.kappa1 * params_.kappa1);
  auto tail = [&](double u) {
    const double x = x_end - u;
    return volume_from_end(u) * std::pow(x, spec_.m - 2.0) * (energy + 0.5 * spec_.epsilon * x * x);
  };
  const double integral = detail::integrate_gk(tail, 0.0, d, quad_.max_depth, quad_.rel_tol);
  const double pre = volume_from_end(d) * std::pow(x_end - d, spec_.m - 1.0);
  if (!(pre > 0.0)) {
    std::ostringstream msg;
    msg << "V(s) (s + kappa0)^(m-1) = " << pre << " at s* - " << d;
    throw Error(ErrorCode::SingularPrefactor, msg.str());
  }
  return -integral / pre;
}

double ProfileEvaluator::alpha_anchored_right(double s) const {
  return alpha_anchored_from_end(params_.s_star - s);
}

double ProfileEvaluator::rhs(double s) const noexcept {
  const double x = s + params_.kappa0;
  const double energy = params_.mu / (params_.kappa1 * params_.kappa1);
  return 0.5 * spec_.epsilon * x + energy / x;
}

double ProfileEvaluator::rhs_prime(double s) const noexcept {
  const double x = s + params_.kappa0;
  const double energy = params_.mu / (params_.kappa1 * params_.kappa1);
  return 0.5 * spec_.epsilon - energy / (x * x);
}

double ProfileEvaluator::coefficient(double s) const {
  return logV_prime(spec_, params_, s) + (spec_.m - 1.0) / (s + params_.kappa0);
}

double ProfileEvaluator::coefficient_prime(double s) const {
  const double x = s + params_.kappa0;
  return logV_second(spec_, params_, s) - (spec_.m - 1.0) / (x * x);
}

double ProfileEvaluator::alpha_prime(double s) const {
  return rhs(s) - coefficient(s) * alpha(s);
}

double ProfileEvaluator::alpha_second(double s) const {
  const double a = alpha(s);
  const double p = coefficient(s);
  const double a1 = rhs(s) - p * a;
  return rhs_prime(s) - coefficient_prime(s) * a - p * a1;
}

double ProfileEvaluator::alpha_prime_left_limit(double delta_frac) const {
  const double d = delta_frac * params_.s_star;
  return richardson_to_zero(alpha_prime(d), alpha_prime(2 * d), alpha_prime(4 * d));
}

double ProfileEvaluator::alpha_prime_right_limit(double delta_frac) const {
  const double d = delta_frac * params_.s_star;
  const double s = params_.s_star;
  return richardson_to_zero(alpha_prime(s - d), alpha_prime(s - 2 * d), alpha_prime(s - 4 * d));
}

double ProfileEvaluator::alpha_at_sstar_scaled() const {
  const double s_star = params_.s_star;
  if (spec_.right == EndpointType::Blowdown) return scaled_defect();
  return alpha_from_integral(s_star, total_) / std::max(1.0, std::abs(alpha(0.5 * s_star)));
}

double alpha(double s, const SolutionParams& params, const BundleSpec& spec,
             const QuadratureOptions& quad) {
  return ProfileEvaluator(spec, params, quad).alpha(s);
}

double alpha_prime(double s, const SolutionParams& params, const BundleSpec& spec,
                   const QuadratureOptions& quad) {
  return ProfileEvaluator(spec, params, quad).alpha_prime(s);
}

double alpha_second(double s, const SolutionParams& params, const BundleSpec& spec,
                    const QuadratureOptions& quad) {
  return ProfileEvaluator(spec, params, quad).alpha_second(s);
}

namespace {

constexpr int kPositivityChecks = 33;

std::optional<std::pair<double, int>> first_nonpositive_beta(const BundleSpec& spec,
                                                            const SolutionParams& params) {
  for (int k = 1; k < kPositivityChecks; ++k) {
    const double s = params.s_star * k / kPositivityChecks;
    for (std::size_t i = 0; i < spec.rank(); ++i) {
      if (!(beta(spec, params, i, s).value > 0.0)) return std::pair{s, static_cast<int>(i)};
    }
  }
  return std::nullopt;
}

}  // namespace

DefectEvaluation boundary_defect(double kappa0, const BundleSpec& spec, const SolverConfig& config) {
  const auto params = params_from_kappa0(spec, kappa0, config.kappa1, config.branches);
  DefectEvaluation out;
  out.kappa0 = kappa0;
  out.violation = first_nonpositive_beta(spec, params);
  out.positive = !out.violation.has_value();
  const ProfileEvaluator ev(spec, params, config.quadrature());
  out.value = ev.total_integral();
  out.l1 = ev.total_l1();
  return out;
}

std::vector<ScanRow> scan_defect(const BundleSpec& spec, const SolverConfig& config) {
  std::vector<ScanRow> rows;
  rows.reserve(config.scan_points);
  const double ratio = std::log(config.kappa_hi / config.kappa_lo);
  for (int k = 0; k < config.scan_points; ++k) {
    double kappa0 = config.kappa_lo * std::exp(ratio * k / (config.scan_points - 1));
    if (k == config.scan_points - 1) kappa0 = config.kappa_hi;
    const auto d = boundary_defect(kappa0, spec, config);
    rows.push_back({kappa0, d.value, d.positive});
  }
  return rows;
}

namespace {

double bisect(const BundleSpec& spec, const SolverConfig& config, double lo, double hi,
              double d_lo) {
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= config.root_tol * std::max(1.0, mid) || mid <= lo || mid >= hi) break;
    const double d_mid = boundary_defect(mid, spec, config).value;
    if (d_mid == 0.0) return mid;
    if ((d_mid < 0.0) == (d_lo < 0.0)) {
      lo = mid;
      d_lo = d_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

SolvedProfile assemble(const BundleSpec& spec, const SolverConfig& config, double kappa0) {
  SolvedProfile out;
  out.spec = spec;
  out.config = config;
  out.params = params_from_kappa0(spec, kappa0, config.kappa1, config.branches);
  const ProfileEvaluator ev(spec, out.params, config.quadrature());
  out.defect_at_root = std::abs(ev.scaled_defect());
  return out;
}

void check_interior_positivity(const SolvedProfile& profile) {
  const ProfileEvaluator ev(profile.spec, profile.params, profile.config.quadrature());
  const double s_star = profile.params.s_star;
  for (double s : chebyshev_grid(64, 1e-3 * s_star, (1.0 - 1e-3) * s_star)) {
    for (std::size_t i = 0; i < profile.spec.rank(); ++i) {
      const double b = beta(profile.spec, profile.params, i, s).value;
      if (!(b > 0.0)) {
        std::ostringstream msg;
        msg << "beta_" << (i + 1) << "(" << s << ") = " << b << " <= 0 at kappa0 = "
            << profile.params.kappa0;
        throw PositivityError(s, static_cast<int>(i), msg.str());
      }
    }
    const double a = ev.alpha(s);
    if (!(a > 0.0)) {
      std::ostringstream msg;
      msg << "alpha(" << s << ") = " << a << " <= 0 at kappa0 = " << profile.params.kappa0;
      throw PositivityError(s, -1, msg.str());
    }
  }
}

}  // namespace

SolvedProfile solve(const BundleSpec& spec, const SolverConfig& config) {
  require_valid(spec);
  config.check();

  const auto scan = scan_defect(spec, config);
  std::vector<std::pair<double, double>> changes;
  std::vector<double> roots;
  for (std::size_t k = 0; k + 1 < scan.size(); ++k) {
    const auto& a = scan[k];
    const auto& b = scan[k + 1];
    if (!a.positive || !b.positive) continue;
    if (a.defect == 0.0) {
      changes.emplace_back(a.kappa0, a.kappa0);
      roots.push_back(a.kappa0);
    } else if ((a.defect < 0.0) != (b.defect < 0.0) && b.defect != 0.0) {
      changes.emplace_back(a.kappa0, b.kappa0);
      roots.push_back(bisect(spec, config, a.kappa0, b.kappa0, a.defect));
    }
  }
  if (roots.empty()) {
    std::ostringstream msg;
    msg << "boundary defect has no sign change for kappa0 in [" << config.kappa_lo << ", "
        << config.kappa_hi << "] (" << config.scan_points << " samples)";
    throw NoSignChangeError(scan, msg.str());
  }

  auto out = assemble(spec, config, roots.front());
  out.bracket_used = changes.front();
  out.all_sign_changes = std::move(changes);
  out.roots = std::move(roots);
  check_interior_positivity(out);
  return out;
}

SolvedProfile profile_at(const BundleSpec& spec, double kappa0, const SolverConfig& config) {
  auto out = assemble(spec, config, kappa0);
  out.bracket_used = {kappa0, kappa0};
  out.roots = {kappa0};
  return out;
}

}  // namespace qe
