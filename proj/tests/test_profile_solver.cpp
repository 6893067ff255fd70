#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracle/polynomial_oracle.hpp"
#include "oracle/simpson_oracle.hpp"
#include "qe/profile_solver.hpp"
#include "reference_values.hpp"
#include "support.hpp"

namespace qe {
namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

TEST(Integrand, SignChangeInsideCollapseInterval) {
  const auto spec = test::reference_spec();
  for (double k0 : {0.1, 1.0, 10.0, 100.0}) {
    const auto p = params_from_kappa0(spec, k0);
    const double root = std::sqrt(2.0 * p.E) - k0;
    EXPECT_GT(root, 0.0);
    EXPECT_LT(root, 4.0);
    EXPECT_GT(alpha_integrand(0.5 * root, p, spec), 0.0);
    EXPECT_LT(alpha_integrand(0.5 * (root + 4.0), p, spec), 0.0);
  }
}

TEST(Integrand, VanishesAtBlowdownEnd) {
  const auto spec = test::left_blowdown_spec();
  EXPECT_EQ(alpha_integrand(0.0, params_from_kappa0(spec, 3.0), spec), 0.0);
}

TEST(Defect, NegativeNearZeroForCollapse) {
  for (double m : {1.5, 2.0, 4.0}) {
    EXPECT_LT(boundary_defect(1e-3, test::reference_spec(m), {}).value, 0.0);
  }
}

TEST(Defect, ContinuousInKappa0) {
  const auto spec = test::reference_spec();
  const SolverConfig cfg;
  for (double k0 : {2.0, 8.0, 30.0}) {
    const auto a = boundary_defect(k0, spec, cfg);
    const auto b = boundary_defect(k0 * (1 + 1e-9), spec, cfg);
    EXPECT_LT(std::abs(a.value - b.value), 1e-6 * a.l1);
  }
}

TEST(Defect, MatchesSimpsonOracle) {
  for (const auto& spec : {test::reference_spec(), test::reference_spec(3.7),
                           test::left_blowdown_spec(), test::right_blowdown_spec()}) {
    for (double k0 : {0.7, 5.0, 19.0}) {
      const auto d = boundary_defect(k0, spec, {});
      EXPECT_NEAR(d.value, test::oracle::defect(spec, k0), 1e-9 * d.l1) << k0;
    }
  }
}

TEST(Solve, ReferenceMatchesFrozenOracle) {
  const auto sol = solve(test::reference_spec());
  EXPECT_NEAR(sol.params.kappa0, test::frozen::kKappa0RefM2, 1e-10);
  EXPECT_NEAR(sol.params.s_star, 4.0, 1e-12);
  EXPECT_LT(sol.defect_at_root, 1e-10);
  ASSERT_EQ(sol.roots.size(), 1u);
  EXPECT_EQ(sol.all_sign_changes.size(), 1u);
  EXPECT_LE(sol.bracket_used.first, sol.params.kappa0);
  EXPECT_GE(sol.bracket_used.second, sol.params.kappa0);
}

TEST(Solve, ReferenceMatchesLiveSimpsonOracle) {
  const auto spec = test::reference_spec();
  const auto root = test::oracle::first_root(spec);
  ASSERT_TRUE(root.has_value());
  EXPECT_NEAR(solve(spec).params.kappa0, *root, 1e-10);
}

TEST(Solve, MSweepMatchesFrozenOracle) {
  const std::pair<double, double> cases[] = {{1.5, test::frozen::kKappa0RefM15},
                                             {4.0, test::frozen::kKappa0RefM4},
                                             {8.0, test::frozen::kKappa0RefM8},
                                             {32.0, test::frozen::kKappa0RefM32}};
  for (auto [m, k0] : cases) {
    const auto sol = solve(test::reference_spec(m));
    EXPECT_LT(rel(sol.params.kappa0, k0), 1e-10) << m;
    EXPECT_NEAR(sol.params.s_star, 4.0, 1e-12) << m;
  }
}

TEST(Solve, BlowdownSpecsMatchFrozenOracle) {
  EXPECT_LT(rel(solve(test::left_blowdown_spec()).params.kappa0, test::frozen::kKappa0LeftBlowdown),
            1e-10);
  EXPECT_LT(
      rel(solve(test::right_blowdown_spec()).params.kappa0, test::frozen::kKappa0RightBlowdown),
      1e-10);
  const auto both = solve(test::both_blowdown_spec());
  EXPECT_LT(rel(both.params.kappa0, test::frozen::kKappa0BothBlowdown), 1e-10);
  EXPECT_NEAR(both.params.s_star, 8.0, 1e-12);
}

TEST(Solve, Kappa1DoesNotMoveTheRoot) {
  SolverConfig scaled;
  scaled.kappa1 = 3.5;
  const auto a = solve(test::reference_spec());
  const auto b = solve(test::reference_spec(), scaled);
  EXPECT_EQ(a.params.kappa0, b.params.kappa0);
  EXPECT_EQ(a.params.s_star, b.params.s_star);
  EXPECT_EQ(a.params.A, b.params.A);
  EXPECT_DOUBLE_EQ(b.params.mu, a.params.E * 3.5 * 3.5);
}

TEST(Solve, PositiveBranchHasNoRoot) {
  SolverConfig cfg;
  cfg.branches = {RootBranch::Positive};
  try {
    solve(test::reference_spec(), cfg);
    FAIL();
  } catch (const NoSignChangeError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoSignChange);
    EXPECT_EQ(e.scan().size(), 64u);
  }
}

TEST(Solve, InvalidSpecRejected) {
  BundleSpec s;
  s.factors = {{1, 2, 2}};
  try {
    solve(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidSpec);
  }
}

TEST(Solve, BadConfigRejected) {
  SolverConfig cfg;
  cfg.kappa_lo = 5.0;
  cfg.kappa_hi = 1.0;
  EXPECT_THROW(solve(test::reference_spec(), cfg), Error);
}

TEST(Solve, NarrowBracketWithoutRoot) {
  SolverConfig cfg;
  cfg.kappa_lo = 20.0;
  cfg.kappa_hi = 30.0;
  EXPECT_THROW(solve(test::reference_spec(), cfg), NoSignChangeError);
}

TEST(Alpha, VanishesAtZero) {
  for (const auto& spec : {test::reference_spec(), test::left_blowdown_spec()}) {
    const auto sol = solve(spec);
    EXPECT_EQ(alpha(0.0, sol.params, spec), 0.0);
  }
}

TEST(Alpha, LinearNearCollapseEnd) {
  const auto sol = solve(test::reference_spec());
  const double d = 1e-6 * sol.params.s_star;
  EXPECT_LT(std::abs(alpha(d, sol.params, sol.spec) / d - 2.0), 1e-4);
}

TEST(Alpha, MatchesPolynomialAntiderivative) {
  std::mt19937_64 rng(2024);
  for (int m : {2, 3, 4}) {
    for (const auto& spec : {test::reference_spec(m), test::left_blowdown_spec(m)}) {
      const auto sol = solve(spec);
      const ProfileEvaluator ev(spec, sol.params, sol.config.quadrature());
      std::uniform_real_distribution<double> u(0.0, sol.params.s_star);
      for (int k = 0; k < 20; ++k) {
        const double s = u(rng);
        const double exact = test::oracle::exact_alpha(spec, sol.params, s);
        EXPECT_LT(std::abs(ev.alpha(s) - exact) / std::abs(exact), 1e-10) << m << ' ' << s;
      }
    }
  }
}

TEST(Alpha, DerivativesMatchFiniteDifferences) {
  const auto sol = solve(test::reference_spec());
  const ProfileEvaluator ev(sol.spec, sol.params);
  const double h = 1e-6 * sol.params.s_star;
  for (int k = 1; k <= 10; ++k) {
    const double s = sol.params.s_star * k / 11.0;
    EXPECT_NEAR((ev.alpha(s + h) - ev.alpha(s - h)) / (2 * h), ev.alpha_prime(s), 1e-6);
    EXPECT_NEAR((ev.alpha_prime(s + h) - ev.alpha_prime(s - h)) / (2 * h), ev.alpha_second(s), 1e-6);
  }
}

TEST(Alpha, FreeFunctionsAgreeWithEvaluator) {
  const auto sol = solve(test::reference_spec());
  const ProfileEvaluator ev(sol.spec, sol.params);
  EXPECT_EQ(alpha(1.3, sol.params, sol.spec), ev.alpha(1.3));
  EXPECT_EQ(alpha_prime(1.3, sol.params, sol.spec), ev.alpha_prime(1.3));
  EXPECT_EQ(alpha_second(2.9, sol.params, sol.spec), ev.alpha_second(2.9));
}

TEST(Alpha, BoundarySlopesEmerge) {
  for (const auto& spec : {test::reference_spec(), test::reference_spec(8.0),
                           test::left_blowdown_spec(), test::right_blowdown_spec(),
                           test::both_blowdown_spec()}) {
    const auto sol = solve(spec);
    const ProfileEvaluator ev(spec, sol.params);
    EXPECT_NEAR(ev.alpha_prime_left_limit(), 2.0, 1e-6);
    EXPECT_NEAR(ev.alpha_prime_right_limit(), -2.0, 1e-6);
    EXPECT_LT(std::abs(ev.alpha_at_sstar_scaled()), 1e-10);
  }
}

TEST(Alpha, AnchoredFormsAgreeAtRoot) {
  const auto sol = solve(test::reference_spec());
  const ProfileEvaluator ev(sol.spec, sol.params);
  for (double f : {0.6, 0.8, 0.99}) {
    const double s = f * sol.params.s_star;
    EXPECT_NEAR(ev.alpha_anchored_right(s), ev.alpha(s), 1e-10);
    EXPECT_EQ(ev.alpha_anchored_right(s), ev.alpha_anchored_from_end(sol.params.s_star - s));
  }
}

TEST(ProfileAt, RebuildsSolvedParams) {
  const auto sol = solve(test::reference_spec());
  const auto again = profile_at(sol.spec, sol.params.kappa0);
  EXPECT_EQ(again.params, sol.params);
}

TEST(ChebyshevGrid, EndpointsAndOrder) {
  const auto g = chebyshev_grid(9, 1.0, 3.0);
  EXPECT_EQ(g.front(), 1.0);
  EXPECT_EQ(g.back(), 3.0);
  EXPECT_NEAR(g[4], 2.0, 1e-15);
  for (std::size_t k = 1; k < g.size(); ++k) EXPECT_LT(g[k - 1], g[k]);
}

}  // namespace
}  // namespace qe
