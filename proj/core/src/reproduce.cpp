#include "qe/reproduce.hpp"

#include <algorithm>
#include <cmath>

#include "qe/closed_form.hpp"
#include "qe/error.hpp"

namespace qe {

namespace {

constexpr double kTol = 1e-12;

ReproductionRow row(std::string label, double computed, double expected, double tol = kTol) {
  const double error = std::abs(computed - expected) / std::max(1.0, std::abs(expected));
  return {std::move(label), computed, expected, error, tol, error < tol};
}

std::string num(double x) {
  std::string s = std::to_string(x);
  s.erase(s.find_last_not_of('0') + 1);
  if (s.back() == '.') s.pop_back();
  return s;
}

ReproductionTable no_blowdown_length() {
  ReproductionTable t{"no-blowdown-length", {}};
  BundleSpec spec;
  spec.factors = {{2, 3, 1}};
  for (double E : {0.1, 1.0, 10.0, 100.0}) {
    const auto geo = kappa0_and_sstar(E, spec);
    t.rows.push_back(row("s* at E=" + num(E), geo.s_star, 4.0));
  }
  return t;
}

BundleSpec both_blowdown(int n_left, int n_right) {
  BundleSpec spec;
  spec.factors = {{n_left, n_left + 1, 1}, {1, 2, 1}, {n_right, n_right + 1, 1}};
  spec.left = spec.right = EndpointType::Blowdown;
  return spec;
}

ReproductionTable hall_interval_formula() {
  ReproductionTable t{"hall-interval-formula", {}};
  for (double k0 : {0.5, 1.0, 2.0, 5.0}) {
    for (int n1 : {0, 1, 2}) {
      for (int nr : {0, 1, 2}) {
        const auto spec = both_blowdown(n1, nr);
        const double E = energy_from_kappa0(k0, n1);
        const auto geo = kappa0_and_sstar(E, spec);
        const std::string tag = "k0=" + num(k0) + " n1=" + std::to_string(n1) +
                                " nr=" + std::to_string(nr);
        t.rows.push_back(row("s* " + tag, geo.s_star, literal_interval_length(k0, n1, nr)));
      }
    }
  }
  return t;
}

ReproductionTable blowdown_consistency() {
  ReproductionTable t{"blowdown-consistency", {}};
  t.rows.push_back(row("E at k0=2 n1=0", energy_from_kappa0(2.0, 0), 6.0));
  for (double k0 : {0.5, 1.0, 2.0, 5.0}) {
    for (int n1 : {0, 1, 2}) {
      BundleSpec spec;
      spec.factors = {{n1, n1 + 1, 1}, {1, 3, 1}};
      spec.left = EndpointType::Blowdown;
      const std::string tag = " k0=" + num(k0) + " n1=" + std::to_string(n1);
      const double E = energy_from_kappa0(k0, n1);
      t.rows.push_back(row("E formula" + tag, E, 0.5 * k0 * (4.0 * (n1 + 1) + k0)));
      t.rows.push_back(row("k0 round trip" + tag, endpoint_quadratic_roots(E, n1).large, k0));
      const auto params = params_from_kappa0(spec, k0);
      const double A1 = params.A.front();
      t.rows.push_back(row("2 A1 k0" + tag, 2.0 * A1 * k0, 1.0));
      t.rows.push_back(row("q1^2 forced" + tag, 4.0 * A1 * A1 * k0 * k0, 1.0));
      t.rows.push_back(
          row("E from A1" + tag, consistency_energy(A1, spec.factors.front(), spec.epsilon), E));
    }
  }
  return t;
}

}  // namespace

bool ReproductionTable::all_pass() const noexcept {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; });
}

const std::vector<std::string>& reproduction_cases() {
  static const std::vector<std::string> cases = {"no-blowdown-length", "hall-interval-formula",
                                                 "blowdown-consistency"};
  return cases;
}

double literal_interval_length(double kappa0, int n_left, int n_right) noexcept {
  const double a = 4.0 * (n_left + 1);
  const double b = 2.0 * (n_right + 1);
  return std::sqrt(kappa0 * (a + kappa0) + b * b) - kappa0 + b;
}

ReproductionTable run_reproduce(std::string_view name) {
  if (name == "no-blowdown-length") return no_blowdown_length();
  if (name == "hall-interval-formula") return hall_interval_formula();
  if (name == "blowdown-consistency") return blowdown_consistency();
  throw Error(ErrorCode::InvalidSpec, "unknown reproduction case \"" + std::string(name) + "\"");
}

}  // namespace qe
