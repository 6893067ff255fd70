#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "qe/serialization.hpp"
#include "support.hpp"

namespace qe {
namespace {

const SolvedProfile& reference() {
  static const SolvedProfile sol = solve(test::reference_spec());
  return sol;
}

void expect_parse_error(const std::string& text) {
  try {
    spec_from_json(json::parse(text));
    FAIL() << text;
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse) << text;
  }
}

TEST(SpecJson, RoundTrip) {
  for (const auto& s : {test::reference_spec(2.5), test::left_blowdown_spec(),
                        test::right_blowdown_spec(), test::both_blowdown_spec()}) {
    EXPECT_EQ(spec_from_json(spec_to_json(s)), s);
  }
}

TEST(SpecJson, ParsesDocumentedForm) {
  const auto s = spec_from_json(json::parse(
      R"({"factors":[{"n":1,"p":2,"q":1},{"n":1,"p":3,"q":-1}],"m":3,"left":"blowdown","right":"collapse"})"));
  ASSERT_EQ(s.rank(), 2u);
  EXPECT_EQ(s.factors[1].q, -1);
  EXPECT_EQ(s.m, 3.0);
  EXPECT_EQ(s.left, EndpointType::Blowdown);
  EXPECT_EQ(s.right, EndpointType::SmoothCollapse);
}

TEST(SpecJson, StrictParsing) {
  expect_parse_error(R"({"factors":[],"m":2,"left":"collapse","right":"collapse","eps":-1})");
  expect_parse_error(R"({"factors":[{"n":1,"p":2,"q":1,"x":0}],"m":2,"left":"collapse","right":"collapse"})");
  expect_parse_error(R"({"factors":[{"n":1.5,"p":2,"q":1}],"m":2,"left":"collapse","right":"collapse"})");
  expect_parse_error(R"({"factors":[{"n":1,"p":2,"q":1}],"left":"collapse","right":"collapse"})");
  expect_parse_error(R"({"factors":[{"n":1,"p":2,"q":1}],"m":"2","left":"collapse","right":"collapse"})");
  expect_parse_error(R"({"factors":[{"n":1,"p":2,"q":1}],"m":2,"left":"smooth","right":"collapse"})");
  expect_parse_error(R"([1,2])");
}

TEST(SolutionJson, RoundTripIsExact) {
  const auto j = solution_to_json(reference());
  EXPECT_EQ(solution_from_json(j), reference());
  EXPECT_EQ(solution_from_json(json::parse(j.dump())), reference());
  for (const char* key : {"kappa0", "E", "s_star", "A", "defect", "bracket"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST(SolutionJson, RoundTripKeepsBranchOverrides) {
  SolverConfig cfg;
  cfg.branches = {RootBranch::Negative, RootBranch::Negative};
  cfg.kappa1 = 0.5;
  const auto sol = solve(test::left_blowdown_spec(), cfg);
  EXPECT_EQ(solution_from_json(json::parse(solution_to_json(sol).dump())), sol);
}

TEST(SolutionJson, RejectsForeignFormat) {
  auto j = solution_to_json(reference());
  j["format"] = "something-else";
  EXPECT_THROW(solution_from_json(j), Error);
  j = solution_to_json(reference());
  j["extra"] = 1;
  EXPECT_THROW(solution_from_json(j), Error);
}

TEST(ReportJson, RoundTripIsExact) {
  auto rep = verify(reference(), 64);
  rep.t_system = verify_t_system(reference(), 16);
  certify(rep);
  EXPECT_EQ(report_from_json(json::parse(report_to_json(rep).dump())), rep);
}

TEST(ReportJson, NonFiniteBecomesNull) {
  SolverConfig cfg;
  cfg.branches = {RootBranch::Positive};
  const auto wrong = profile_at(reference().spec, reference().params.kappa0, cfg);
  auto rep = verify(wrong, 32);
  ASSERT_FALSE(rep.positivity_ok);
  rep.fd_check = std::numeric_limits<double>::quiet_NaN();
  const auto j = report_to_json(rep);
  EXPECT_TRUE(j["fd_check"].is_null());
  const auto back = report_from_json(json::parse(j.dump()));
  EXPECT_TRUE(std::isnan(back.fd_check));
  EXPECT_EQ(back.first_violation, rep.first_violation);
  EXPECT_EQ(back.positivity_ok, false);
}

TEST(Output, Deterministic) {
  const auto a = solution_to_json(solve(test::reference_spec())).dump(2);
  const auto b = solution_to_json(solve(test::reference_spec())).dump(2);
  EXPECT_EQ(a, b);
  EXPECT_EQ(report_to_json(verify(reference(), 64)).dump(), report_to_json(verify(reference(), 64)).dump());
}

TEST(FormatDouble, SeventeenDigitsRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 8.277821245768493, 1e-300, -2.5e17}) {
    const auto s = format_double(x);
    EXPECT_EQ(std::strtod(s.c_str(), nullptr), x);
  }
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(ProfileCsv, HeaderAndRoundTrip) {
  EXPECT_EQ(profile_csv_header(2), "s,alpha,alpha_prime,beta_1,beta_2,phi,V,t,f,g_1,g_2,v,u");
  const auto sol = solve(test::left_blowdown_spec());
  const auto rows = profile_table(sol, 40);
  ASSERT_EQ(rows.size(), 40u);
  std::stringstream ss;
  write_profile_csv(ss, rows, 2);
  const auto text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), profile_csv_header(2));
  EXPECT_EQ(read_profile_csv(ss), rows);
}

TEST(ProfileCsv, EndRowsCarryBoundaryValues) {
  const auto rows = profile_table(reference(), 32);
  EXPECT_EQ(rows.front().alpha, 0.0);
  EXPECT_EQ(rows.front().t, 0.0);
  EXPECT_NEAR(rows.front().alpha_prime, 2.0, 1e-6);
  EXPECT_EQ(rows.back().alpha, 0.0);
  EXPECT_NEAR(rows.back().alpha_prime, -2.0, 1e-6);
  EXPECT_EQ(rows.back().s, reference().params.s_star);
}

TEST(ProfileCsv, RejectsBadHeader) {
  std::stringstream ss("s,alpha\n1,2\n");
  EXPECT_THROW(read_profile_csv(ss), Error);
}

TEST(ProfileSvg, ContainsCurves) {
  const auto rows = profile_table(reference(), 32);
  std::stringstream ss;
  write_profile_svg(ss, rows, verify(reference(), 32));
  const auto svg = ss.str();
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find(">alpha<"), std::string::npos);
  EXPECT_NE(svg.find(">beta_1<"), std::string::npos);
  EXPECT_EQ(std::count(svg.begin(), svg.end(), '\n') > 10, true);
}

TEST(MetricJson, CarriesConvention) {
  const auto j = metric_to_json(reconstruct_t(reference(), 16));
  EXPECT_EQ(j["convention"], "u = -m log(v)");
  EXPECT_EQ(j["samples"].size(), 16u);
}

}  // namespace
}  // namespace qe
