#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qe/reproduce.hpp"
#include "qe/serialization.hpp"

namespace {

enum Exit { kOk = 0, kInternal = 1, kInvalid = 2, kNoRoot = 3, kNotCertified = 4 };

int exit_code(qe::ErrorCode code) {
  switch (code) {
    case qe::ErrorCode::InvalidSpec:
    case qe::ErrorCode::Parse:
      return kInvalid;
    case qe::ErrorCode::NoSignChange:
    case qe::ErrorCode::NonPositiveKappa0:
    case qe::ErrorCode::NegativeDiscriminant:
      return kNoRoot;
    case qe::ErrorCode::PositivityFailure:
    case qe::ErrorCode::NonPositiveAlpha:
    case qe::ErrorCode::CertificationFailure:
      return kNotCertified;
    default:
      return kInternal;
  }
}

void print_scan(const std::vector<qe::ScanRow>& scan) {
  std::fprintf(stderr, "%-24s %-24s %s\n", "kappa0", "defect", "positive");
  for (const auto& r : scan) {
    std::fprintf(stderr, "%-24.17g %-24.17g %s\n", r.kappa0, r.defect, r.positive ? "yes" : "no");
  }
}

std::pair<double, double> parse_bracket(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw qe::Error(qe::ErrorCode::InvalidSpec, "--bracket expects lo:hi");
  try {
    std::size_t used_lo = 0, used_hi = 0;
    const std::string lo = text.substr(0, colon), hi = text.substr(colon + 1);
    const double a = std::stod(lo, &used_lo), b = std::stod(hi, &used_hi);
    if (used_lo != lo.size() || used_hi != hi.size()) throw std::invalid_argument(text);
    return {a, b};
  } catch (const std::logic_error&) {
    throw qe::Error(qe::ErrorCode::InvalidSpec, "--bracket expects lo:hi, got \"" + text + "\"");
  }
}

struct SolveArgs {
  std::string spec_path;
  std::optional<double> m;
  std::string bracket;
  std::optional<double> tol;
  std::optional<int> scan;
  std::optional<double> quad_tol;
  std::optional<double> kappa1;
  std::vector<std::size_t> positive_root;
  std::string out = "-";
};

int run_validate(const std::string& path, bool as_json) {
  const auto spec = qe::spec_from_json(qe::read_json_file(path));
  const auto report = qe::validate_spec(spec);
  if (as_json) {
    qe::json v = qe::json::array();
    for (const auto& x : report.violations) {
      v.push_back({{"clause", qe::to_string(x.clause)},
                   {"factor", x.factor ? qe::json(*x.factor) : qe::json(nullptr)},
                   {"message", x.message}});
    }
    std::cout << qe::json{{"valid", report.valid()}, {"violations", v}}.dump(2) << '\n';
  } else if (report.valid()) {
    std::cout << "valid\n";
  }
  for (const auto& x : report.violations) {
    std::cerr << "invalid [" << qe::to_string(x.clause) << "]: " << x.message << '\n';
  }
  return report.valid() ? kOk : kInvalid;
}

int run_solve(const SolveArgs& a) {
  auto spec = qe::spec_from_json(qe::read_json_file(a.spec_path));
  if (a.m) spec.m = *a.m;
  qe::SolverConfig config;
  if (!a.bracket.empty()) std::tie(config.kappa_lo, config.kappa_hi) = parse_bracket(a.bracket);
  if (a.tol) config.root_tol = *a.tol;
  if (a.scan) config.scan_points = *a.scan;
  if (a.quad_tol) config.quad_rel_tol = *a.quad_tol;
  if (a.kappa1) config.kappa1 = *a.kappa1;
  if (!a.positive_root.empty()) {
    config.branches.assign(spec.rank(), qe::kDefaultBranch);
    for (std::size_t i : a.positive_root) {
      if (i < 1 || i > spec.rank()) {
        throw qe::Error(qe::ErrorCode::InvalidSpec, "--positive-root expects a factor in 1..r");
      }
      config.branches[i - 1] = qe::RootBranch::Positive;
    }
  }
  try {
    qe::write_json_file(a.out, qe::solution_to_json(qe::solve(spec, config)));
  } catch (const qe::NoSignChangeError& e) {
    std::cerr << "no root: " << e.what() << '\n';
    print_scan(e.scan());
    return kNoRoot;
  }
  return kOk;
}

int run_verify(const std::string& path, std::size_t grid, double delta, std::size_t t_grid,
               const std::string& out) {
  const auto profile = qe::solution_from_json(qe::read_json_file(path));
  qe::require_valid(profile.spec);
  auto report = qe::verify(profile, grid, delta);
  if (t_grid > 0 && report.positivity_ok) {
    report.t_system = qe::verify_t_system(profile, t_grid);
    qe::certify(report);
  }
  qe::write_json_file(out, qe::report_to_json(report));
  if (!report.certified) {
    try {
      qe::require_certified(report);
    } catch (const qe::Error& e) {
      std::cerr << "not certified: " << e.what() << '\n';
    }
    return kNotCertified;
  }
  return kOk;
}

int run_profile(const std::string& path, const std::string& csv, const std::string& svg,
                std::size_t grid, std::size_t verify_grid) {
  const auto profile = qe::solution_from_json(qe::read_json_file(path));
  qe::require_valid(profile.spec);
  const auto report = qe::verify(profile, verify_grid);
  if (!report.positivity_ok) qe::require_certified(report);
  const auto rows = qe::profile_table(profile, grid);
  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw qe::Error(qe::ErrorCode::Parse, "cannot write " + csv);
    qe::write_profile_csv(out, rows, profile.spec.rank());
  }
  if (!svg.empty()) {
    std::ofstream out(svg);
    if (!out) throw qe::Error(qe::ErrorCode::Parse, "cannot write " + svg);
    qe::write_profile_svg(out, rows, report);
  }
  if (csv.empty() && svg.empty()) qe::write_profile_csv(std::cout, rows, profile.spec.rank());
  return kOk;
}

int run_reproduce(const std::string& name, bool as_json) {
  std::vector<std::string> names;
  if (name == "all") {
    names = qe::reproduction_cases();
  } else {
    names = {name};
  }
  bool ok = true;
  qe::json doc = qe::json::array();
  for (const auto& n : names) {
    const auto table = qe::run_reproduce(n);
    ok = ok && table.all_pass();
    if (as_json) {
      qe::json rows = qe::json::array();
      for (const auto& r : table.rows) {
        rows.push_back({{"label", r.label},
                        {"computed", r.computed},
                        {"expected", r.expected},
                        {"error", r.error},
                        {"tolerance", r.tolerance},
                        {"pass", r.pass}});
      }
      doc.push_back({{"case", table.name}, {"pass", table.all_pass()}, {"rows", rows}});
      continue;
    }
    std::printf("%s\n", table.name.c_str());
    for (const auto& r : table.rows) {
      std::printf("  %-4s %-32s computed=%-24.17g expected=%-24.17g err=%.3g\n",
                  r.pass ? "PASS" : "FAIL", r.label.c_str(), r.computed, r.expected, r.error);
    }
  }
  if (as_json) std::cout << doc.dump(2) << '\n';
  return ok ? kOk : kNotCertified;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-Einstein metrics on S^2-bundles: solve, verify, export"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");

  std::string validate_path;
  bool validate_json = false;
  auto* validate = app.add_subcommand("validate", "Check a spec against the existence hypotheses");
  validate->add_option("spec", validate_path, "Spec JSON")->required();
  validate->add_flag("--json", validate_json, "Print the violations as JSON");

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Locate kappa0 and write a solution");
  solve->add_option("spec", sa.spec_path, "Spec JSON")->required();
  solve->add_option("--m", sa.m, "Override m from the spec");
  solve->add_option("--bracket", sa.bracket, "kappa0 scan bracket lo:hi");
  solve->add_option("--tol", sa.tol, "Root tolerance on kappa0");
  solve->add_option("--scan", sa.scan, "Number of scan points");
  solve->add_option("--quad-tol", sa.quad_tol, "Relative tolerance of the adaptive quadrature");
  solve->add_option("--kappa1", sa.kappa1, "Scale of phi");
  solve->add_option("--positive-root", sa.positive_root,
                    "Use the positive root for factor i (1-based, repeatable)");
  solve->add_option("-o,--output", sa.out, "Output path, - for stdout");

  std::string verify_path, verify_out = "-";
  std::size_t verify_grid = 512, t_grid = 64;
  double delta = 1e-3;
  auto* verify = app.add_subcommand("verify", "Certify a solution");
  verify->add_option("solution", verify_path, "Solution JSON")->required();
  verify->add_option("--grid", verify_grid, "Chebyshev grid size")->check(CLI::PositiveNumber);
  verify->add_option("--delta", delta, "Endpoint exclusion as a fraction of s*")
      ->check(CLI::Range(0.0, 0.5));
  verify->add_option("--t-grid", t_grid, "Points for the t-coordinate check, 0 to skip");
  verify->add_option("-o,--output", verify_out, "Output path, - for stdout");

  std::string profile_path, csv, svg;
  std::size_t profile_grid = 256;
  auto* profile = app.add_subcommand("profile", "Export the profile as CSV and SVG");
  profile->add_option("solution", profile_path, "Solution JSON")->required();
  profile->add_option("--csv", csv, "CSV output path");
  profile->add_option("--svg", svg, "SVG output path");
  profile->add_option("--grid", profile_grid, "Sample count")->check(CLI::Range(2, 1 << 20));

  std::string case_name;
  bool reproduce_json = false;
  auto* reproduce = app.add_subcommand("reproduce", "Run a closed-form sanity check");
  std::vector<std::string> choices = qe::reproduction_cases();
  choices.push_back("all");
  reproduce->add_option("case", case_name, "Case name or all")
      ->required()
      ->check(CLI::IsMember(choices));
  reproduce->add_flag("--json", reproduce_json, "Print the table as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*validate) return run_validate(validate_path, validate_json);
    if (*solve) return run_solve(sa);
    if (*verify) return run_verify(verify_path, verify_grid, delta, t_grid, verify_out);
    if (*profile) return run_profile(profile_path, csv, svg, profile_grid, verify_grid);
    if (*reproduce) return run_reproduce(case_name, reproduce_json);
  } catch (const qe::Error& e) {
    std::cerr << "error (" << qe::to_string(e.code()) << "): " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
