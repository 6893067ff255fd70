#include <gtest/gtest.h>

#include <cmath>

#include "qe/metric_profile.hpp"
#include "support.hpp"

namespace qe {
namespace {

TEST(ArcLength, SquareRootBehaviourAtCollapseEnd) {
  const auto sol = solve(test::reference_spec());
  const ProfileEvaluator ev(sol.spec, sol.params);
  const ArcLength arc(ev);
  const double ratio = arc.t(1e-8) / std::sqrt(2e-8);
  EXPECT_GE(ratio, 0.99);
  EXPECT_LE(ratio, 1.01);
}

TEST(ArcLength, PiecewiseAndDirectAgree) {
  const auto sol = solve(test::reference_spec());
  const ProfileEvaluator ev(sol.spec, sol.params);
  const ArcLength arc(ev);
  const auto grid = chebyshev_grid(33, 0.0, sol.params.s_star);
  const auto ts = arc.t_values(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) EXPECT_NEAR(ts[k], arc.t(grid[k]), 1e-11);
  EXPECT_NEAR(arc.between(1.0, 2.5), arc.t(2.5) - arc.t(1.0), 1e-11);
  const double s = arc.invert_from(1.0, 0.1);
  EXPECT_NEAR(arc.between(1.0, s), 0.1, 1e-13);
}

TEST(Reconstruct, MonotoneAndConsistent) {
  for (const auto& spec : {test::reference_spec(), test::left_blowdown_spec(),
                           test::right_blowdown_spec()}) {
    const auto sol = solve(spec);
    const auto metric = reconstruct_t(sol, 128);
    ASSERT_EQ(metric.samples.size(), 128u);
    EXPECT_EQ(metric.samples.front().t, 0.0);
    EXPECT_EQ(metric.samples.back().t, metric.total_length_l);
    EXPECT_TRUE(std::isfinite(metric.total_length_l));
    EXPECT_EQ(metric.u_convention, "u = -m log(v)");
    const ProfileEvaluator ev(sol.spec, sol.params);
    for (std::size_t k = 1; k < metric.samples.size(); ++k) {
      const auto& x = metric.samples[k];
      EXPECT_GT(x.t, metric.samples[k - 1].t);
      if (k + 1 < metric.samples.size()) EXPECT_DOUBLE_EQ(x.f * x.f, ev.alpha(x.s));
      EXPECT_DOUBLE_EQ(x.v, phi(sol.params, x.s).value);
      EXPECT_DOUBLE_EQ(x.u, -spec.m * std::log(x.v));
      for (std::size_t i = 0; i < spec.rank(); ++i) {
        EXPECT_NEAR(x.g[i] * x.g[i], beta(spec, sol.params, i, x.s).value, 1e-12);
      }
    }
  }
}

TEST(Reconstruct, NonPositiveAlphaRejected) {
  SolverConfig cfg;
  cfg.branches = {RootBranch::Positive};
  const auto sol = solve(test::reference_spec());
  const auto wrong = profile_at(sol.spec, sol.params.kappa0, cfg);
  try {
    reconstruct_t(wrong, 64);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveAlpha);
  }
}

}  // namespace
}  // namespace qe
