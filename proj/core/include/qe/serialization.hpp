#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qe/metric_profile.hpp"
#include "qe/profile_solver.hpp"
#include "qe/verifier.hpp"

namespace qe {

using json = nlohmann::json;

inline constexpr const char* kSolutionFormat = "qe-solution/1";
inline constexpr const char* kReportFormat = "qe-report/1";

// Spec documents: {"factors": [{"n", "p", "q"}...], "m", "left", "right"}.
// Unknown keys and wrong types throw qe::Error(Parse).
BundleSpec spec_from_json(const json& j);
json spec_to_json(const BundleSpec& spec);

json solution_to_json(const SolvedProfile& profile);
SolvedProfile solution_from_json(const json& j);

/// Non-finite values are written as null and read back as NaN.
json report_to_json(const ResidualReport& report);
ResidualReport report_from_json(const json& j);

json metric_to_json(const MetricProfile& metric);

json read_json_file(const std::filesystem::path& path);
/// Writes `j` indented, with a trailing newline. "-" means standard output.
void write_json_file(const std::filesystem::path& path, const json& j);

/// One row of the exported profile table.
struct ProfileRow {
  double s = 0.0;
  double alpha = 0.0;
  double alpha_prime = 0.0;
  std::vector<double> beta;
  double phi = 0.0;
  double V = 0.0;
  double t = 0.0;
  double f = 0.0;
  std::vector<double> g;
  double v = 0.0;
  double u = 0.0;

  friend bool operator==(const ProfileRow&, const ProfileRow&) = default;
};

/// Samples alpha, beta_i, V and the t-geometry on `grid_size`
/// Chebyshev-Lobatto nodes of [0, s*]. alpha' at the two ends is the
/// extrapolated one-sided limit.
std::vector<ProfileRow> profile_table(const SolvedProfile& profile, std::size_t grid_size = 256);

/// Header: s,alpha,alpha_prime,beta_1..beta_r,phi,V,t,f,g_1..g_r,v,u
std::string profile_csv_header(std::size_t rank);
void write_profile_csv(std::ostream& out, const std::vector<ProfileRow>& rows, std::size_t rank);
std::vector<ProfileRow> read_profile_csv(std::istream& in);

/// Static plot: alpha and beta_i against s, and log10 of the largest
/// reduced-equation residual against s.
void write_profile_svg(std::ostream& out, const std::vector<ProfileRow>& rows,
                       const ResidualReport& residuals);

/// %.17g
std::string format_double(double x);

}  // namespace qe
