#include "qe/verifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "qe/metric_profile.hpp"

namespace qe {

ProfileSample sample_at(const ProfileEvaluator& ev, double s) {
  const auto& spec = ev.spec();
  const auto& params = ev.params();
  ProfileSample x;
  x.s = s;
  for (std::size_t i = 0; i < spec.rank(); ++i) {
    const Jet b = beta(spec, params, i, s);
    x.beta.push_back(b.value);
    x.beta_prime.push_back(b.first);
    x.beta_second.push_back(b.second);
  }
  const Jet p = phi(params, s);
  x.phi = p.value;
  x.phi_prime = p.first;
  x.phi_second = p.second;
  x.V = volume(spec, params, s);
  x.logV_prime = logV_prime(spec, params, s);
  x.logV_second = logV_second(spec, params, s);

  x.alpha = ev.alpha(s);
  const double coeff = x.logV_prime + (spec.m - 1.0) / (s + params.kappa0);
  const double coeff_prime =
      x.logV_second - (spec.m - 1.0) / ((s + params.kappa0) * (s + params.kappa0));
  x.alpha_prime = ev.rhs(s) - coeff * x.alpha;
  x.alpha_second = ev.rhs_prime(s) - coeff_prime * x.alpha - coeff * x.alpha_prime;
  return x;
}

double residual_fiber(const ProfileSample& x, const BundleSpec& spec) {
  double sum = 0.0;
  for (std::size_t i = 0; i < spec.rank(); ++i) {
    const double r = x.beta_prime[i] / x.beta[i];
    sum += spec.factors[i].n * (x.beta_second[i] / x.beta[i] - 0.5 * r * r);
  }
  const double lhs = 0.5 * x.alpha_second + 0.5 * x.alpha_prime * x.logV_prime + x.alpha * sum +
                     spec.m * (x.alpha * x.phi_second / x.phi +
                               x.alpha_prime * x.phi_prime / (2.0 * x.phi));
  return lhs - 0.5 * spec.epsilon;
}

double residual_fiber_twist(const ProfileSample& x, const BundleSpec& spec) {
  double sum = 0.0;
  for (std::size_t i = 0; i < spec.rank(); ++i) {
    const double q2 = double(spec.factors[i].q) * spec.factors[i].q;
    sum += spec.factors[i].n * q2 / (2.0 * x.beta[i] * x.beta[i]);
  }
  const double lhs = 0.5 * x.alpha_second + 0.5 * x.alpha_prime * x.logV_prime - x.alpha * sum +
                     spec.m * x.alpha_prime * x.phi_prime / (2.0 * x.phi);
  return lhs - 0.5 * spec.epsilon;
}

double residual_base(const ProfileSample& x, std::size_t i, const BundleSpec& spec) {
  const auto& f = spec.factors[i];
  const double q2 = double(f.q) * f.q;
  const double b = x.beta[i];
  const double r = x.beta_prime[i] / b;
  const double lhs = 0.5 * x.alpha_prime * r +
                     0.5 * x.alpha * (x.beta_second[i] / b - r * r) +
                     0.5 * x.alpha * r * x.logV_prime - f.p / b + q2 * x.alpha / (2.0 * b * b) +
                     spec.m * 0.5 * x.alpha * r * x.phi_prime / x.phi;
  return lhs - 0.5 * spec.epsilon;
}

double mu_of_s(const ProfileSample& x, const BundleSpec& spec) {
  return x.phi * (x.phi_second * x.alpha + 0.5 * x.phi_prime * x.alpha_prime) +
         x.phi * x.phi_prime * (0.5 * x.alpha_prime + x.logV_prime * x.alpha) +
         (spec.m - 1.0) * x.phi_prime * x.phi_prime * x.alpha -
         0.5 * spec.epsilon * x.phi * x.phi;
}

namespace {

double max_abs(const std::vector<double>& v) {
  double out = 0.0;
  for (double x : v) {
    if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
    out = std::max(out, std::abs(x));
  }
  return out;
}

double max_abs(const std::vector<std::vector<double>>& v) {
  double out = 0.0;
  for (const auto& row : v) {
    const double m = max_abs(row);
    if (std::isnan(m)) return m;
    out = std::max(out, m);
  }
  return out;
}

// NaN compares false, so a NaN value never passes.
bool below(double value, double tol) { return std::abs(value) < tol; }

/// Fourth-order central difference.
double central_difference(auto&& f, double s, double h) {
  return (8.0 * (f(s + h) - f(s - h)) - (f(s + 2 * h) - f(s - 2 * h))) / (12.0 * h);
}

double relative_gap(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max(1.0, std::abs(analytic));
}

}  // namespace

double ResidualReport::max_abs_res_fiber() const { return max_abs(res_fiber); }
double ResidualReport::max_abs_res_fiber_twist() const { return max_abs(res_fiber_twist); }
double ResidualReport::max_abs_res_base() const { return max_abs(res_base); }
double ResidualReport::max_abs_ansatz() const { return max_abs(ansatz_res); }

ResidualReport verify(const SolvedProfile& profile, std::size_t grid_size, double delta_frac,
                      const Tolerances& tol) {
  if (grid_size < 16) throw Error(ErrorCode::InvalidSpec, "verify: grid_size must be >= 16");
  if (!(delta_frac > 0.0 && delta_frac < 0.1)) {
    throw Error(ErrorCode::InvalidSpec, "verify: delta_frac must lie in (0, 0.1)");
  }
  const auto& spec = profile.spec;
  const auto& params = profile.params;
  const ProfileEvaluator ev(spec, params, profile.config.quadrature());
  const double s_star = params.s_star;
  const double delta = delta_frac * s_star;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::size_t r = spec.rank();

  ResidualReport rep;
  rep.tolerances = tol;
  rep.mu = params.E * params.kappa1 * params.kappa1;
  rep.grid = chebyshev_grid(grid_size, delta, s_star - delta);

  auto log_volume = [&](double s) {
    double sum = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
      sum += spec.factors[i].n * std::log(beta(spec, params, i, s).value);
    }
    return sum;
  };

  for (double s : rep.grid) {
    std::vector<double> ansatz(r);
    bool betas_positive = true;
    for (std::size_t i = 0; i < r; ++i) {
      ansatz[i] = ansatz_residual(spec, params, i, s);
      if (!(beta(spec, params, i, s).value > 0.0)) {
        betas_positive = false;
        if (rep.positivity_ok) rep.first_violation = std::pair{s, static_cast<int>(i)};
        rep.positivity_ok = false;
      }
    }
    rep.ansatz_res.push_back(std::move(ansatz));
    if (!betas_positive) {
      rep.res_fiber.push_back(nan);
      rep.res_fiber_twist.push_back(nan);
      rep.res_base.emplace_back(r, nan);
      rep.mu_samples.push_back(nan);
      rep.fd_check = nan;
      continue;
    }

    const ProfileSample x = sample_at(ev, s);
    if (!(x.alpha > 0.0) && rep.positivity_ok) {
      rep.positivity_ok = false;
      rep.first_violation = std::pair{s, -1};
    }
    rep.res_fiber.push_back(residual_fiber(x, spec));
    rep.res_fiber_twist.push_back(residual_fiber_twist(x, spec));
    std::vector<double> base(r);
    for (std::size_t i = 0; i < r; ++i) base[i] = residual_base(x, i, spec);
    rep.res_base.push_back(std::move(base));
    rep.mu_samples.push_back(mu_of_s(x, spec));

    if (std::isnan(rep.fd_check)) continue;
    // Step relative to the distance to the nearer end, where log V may be singular.
    const double h = 1e-3 * std::min(s, s_star - s);
    const double gaps[] = {
        relative_gap(x.alpha_prime, central_difference([&](double t) { return ev.alpha(t); }, s, h)),
        relative_gap(x.alpha_second,
                     central_difference([&](double t) { return ev.alpha_prime(t); }, s, h)),
        relative_gap(x.logV_prime, central_difference(log_volume, s, h)),
        relative_gap(x.logV_second,
                     central_difference([&](double t) { return logV_prime(spec, params, t); }, s, h)),
    };
    for (double g : gaps) rep.fd_check = std::max(rep.fd_check, g);
  }

  rep.mu_dev = 0.0;
  for (double m : rep.mu_samples) {
    const double dev = std::abs(m - rep.mu) / std::max(1.0, std::abs(rep.mu));
    rep.mu_dev = std::isnan(dev) ? nan : std::max(rep.mu_dev, dev);
    if (std::isnan(dev)) break;
  }

  auto& bd = rep.boundary;
  const double energy_scale = std::max(1.0, std::abs(params.E));
  bd.left_quadratic =
      endpoint_quadratic(params.kappa0, params.E, spec.left_end_dimension()) / energy_scale;
  bd.right_quadratic = endpoint_quadratic(-(s_star + params.kappa0), params.E,
                                          spec.right_end_dimension()) /
                       energy_scale;
  if (spec.left == EndpointType::Blowdown) {
    const double A = params.A.front();
    const double q2 = double(spec.factors.front().q) * spec.factors.front().q;
    bd.left_beta_at_0 = A * params.kappa0 * params.kappa0 - q2 / (4.0 * A);
    bd.left_slope_minus_1 = 2.0 * A * params.kappa0 - 1.0;
  }
  if (spec.right == EndpointType::Blowdown) {
    const double A = params.A.back();
    const double q2 = double(spec.factors.back().q) * spec.factors.back().q;
    const double x = s_star + params.kappa0;
    bd.right_beta_at_sstar = A * x * x - q2 / (4.0 * A);
    bd.right_slope_plus_1 = 2.0 * A * x + 1.0;
  }

  // The end limits need alpha to be well defined near both ends.
  if (rep.positivity_ok) {
    try {
      bd.alpha_at_0 = ev.alpha(0.0);
      bd.alpha_at_sstar = ev.alpha_at_sstar_scaled();
      bd.alpha_at_sstar_is_defect = spec.right == EndpointType::Blowdown;
      bd.slope_at_0_minus_2 = ev.alpha_prime_left_limit() - 2.0;
      bd.slope_at_sstar_plus_2 = ev.alpha_prime_right_limit() + 2.0;
    } catch (const Error&) {
      bd.alpha_at_sstar = bd.slope_at_0_minus_2 = bd.slope_at_sstar_plus_2 = nan;
    }
  } else {
    bd.alpha_at_sstar = bd.slope_at_0_minus_2 = bd.slope_at_sstar_plus_2 = nan;
  }

  certify(rep);
  return rep;
}

void certify(ResidualReport& rep) {
  const auto& tol = rep.tolerances;
  const auto& bd = rep.boundary;
  auto& f = rep.flags;
  f.quadratic_roots = below(bd.left_quadratic, tol.algebraic) &&
                      below(bd.right_quadratic, tol.algebraic);
  f.ansatz = below(rep.max_abs_ansatz(), tol.algebraic);
  f.residuals = below(rep.max_abs_res_fiber(), tol.residual) &&
                below(rep.max_abs_res_fiber_twist(), tol.residual) &&
                below(rep.max_abs_res_base(), tol.residual);
  f.mu_constant = below(rep.mu_dev, tol.residual);
  f.boundary = bd.alpha_at_0 == 0.0 && below(bd.alpha_at_sstar, tol.alpha_end) &&
               below(bd.slope_at_0_minus_2, tol.slope) &&
               below(bd.slope_at_sstar_plus_2, tol.slope);
  f.blowdown = true;
  for (const auto& v : {bd.left_beta_at_0, bd.left_slope_minus_1, bd.right_beta_at_sstar,
                        bd.right_slope_plus_1}) {
    if (v && !below(*v, tol.algebraic)) f.blowdown = false;
  }
  f.positivity = rep.positivity_ok;
  f.finite_difference = below(rep.fd_check, tol.finite_difference);
  rep.certified = f.all();
  if (rep.t_system) {
    rep.certified = rep.certified && below(rep.t_system->max_residual, tol.t_system) &&
                    below(rep.t_system->max_ds_dt_error, tol.finite_difference);
  }
}

void require_certified(const ResidualReport& rep) {
  if (rep.certified) return;
  if (!rep.positivity_ok && rep.first_violation) {
    const auto [s, i] = *rep.first_violation;
    std::ostringstream msg;
    msg << (i < 0 ? std::string("alpha") : "beta_" + std::to_string(i + 1)) << " <= 0 at s = " << s;
    throw PositivityError(s, i, msg.str());
  }
  const auto& f = rep.flags;
  std::string failed;
  auto add = [&](bool ok, const char* name) {
    if (!ok) failed += std::string(failed.empty() ? "" : ", ") + name;
  };
  add(f.quadratic_roots, "quadratic-roots");
  add(f.ansatz, "ansatz");
  add(f.residuals, "residuals");
  add(f.mu_constant, "mu-constant");
  add(f.boundary, "boundary");
  add(f.blowdown, "blowdown");
  add(f.finite_difference, "finite-difference");
  if (failed.empty()) failed = "t-system";
  throw Error(ErrorCode::CertificationFailure, "profile not certified: " + failed);
}

TSystemCheck verify_t_system(const SolvedProfile& profile, std::size_t grid_size,
                             double delta_frac) {
  const auto& spec = profile.spec;
  const auto& params = profile.params;
  const ProfileEvaluator ev(spec, params, profile.config.quadrature());
  const ArcLength arc(ev);
  const double s_star = params.s_star;
  const double length = arc.total();

  TSystemCheck out;
  for (double s0 : chebyshev_grid(grid_size, delta_frac * s_star, (1.0 - delta_frac) * s_star)) {
    const double t0 = arc.t(s0);
    const double h = std::min(1e-3 * length, 0.2 * std::min(t0, length - t0));

    // s at t0 + k h for k = -2..2
    double s_at[5];
    for (int k = -2; k <= 2; ++k) s_at[k + 2] = k == 0 ? s0 : arc.invert_from(s0, k * h);

    auto d1 = [h](const double* y) { return (-y[4] + 8 * y[3] - 8 * y[1] + y[0]) / (12 * h); };
    auto d2 = [h](const double* y) {
      return (-y[4] + 16 * y[3] - 30 * y[2] + 16 * y[1] - y[0]) / (12 * h * h);
    };

    double f[5], v[5];
    std::vector<std::array<double, 5>> g(spec.rank());
    for (int k = 0; k < 5; ++k) {
      f[k] = std::sqrt(ev.alpha(s_at[k]));
      v[k] = phi(params, s_at[k]).value;
      for (std::size_t i = 0; i < spec.rank(); ++i) {
        g[i][k] = std::sqrt(beta(spec, params, i, s_at[k]).value);
      }
    }
    const double fd = d1(f), fdd = d2(f), vd = d1(v);
    double lhs = fdd / f[2] + spec.m * fd * vd / (f[2] * v[2]);
    for (std::size_t i = 0; i < spec.rank(); ++i) {
      const double n = spec.factors[i].n;
      const double q2 = double(spec.factors[i].q) * spec.factors[i].q;
      const double gi = g[i][2];
      lhs += 2.0 * n * fd * d1(g[i].data()) / (f[2] * gi) -
             0.5 * n * q2 * f[2] * f[2] / (gi * gi * gi * gi);
    }
    out.max_residual = std::max(out.max_residual, std::abs(lhs - 0.5 * spec.epsilon));
    out.max_ds_dt_error =
        std::max(out.max_ds_dt_error, std::abs(d1(s_at) - f[2]) / std::max(f[2], 1e-300));
    ++out.points;
  }
  return out;
}

}  // namespace qe
