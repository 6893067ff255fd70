#include "qe/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

namespace qe {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::Parse, what); }

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  if (!j.is_object()) parse_error(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) parse_error(where + ": unknown key \"" + key + "\"");
  }
}

const json& field(const json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) parse_error(where + ": missing key \"" + key + "\"");
  return *it;
}

int int_field(const json& j, const char* key, const std::string& where) {
  const auto& v = field(j, key, where);
  if (!v.is_number_integer()) parse_error(where + "." + key + ": expected an integer");
  return v.get<int>();
}

double number(const json& v) {
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!v.is_number()) parse_error("expected a number, got " + v.dump());
  return v.get<double>();
}

double num_field(const json& j, const char* key, const std::string& where) {
  return number(field(j, key, where));
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json number_array(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(finite_or_null(x));
  return out;
}

std::vector<double> read_numbers(const json& j) {
  if (!j.is_array()) parse_error("expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(number(v));
  return out;
}

json matrix(const std::vector<std::vector<double>>& rows) {
  json out = json::array();
  for (const auto& r : rows) out.push_back(number_array(r));
  return out;
}

std::vector<std::vector<double>> read_matrix(const json& j) {
  if (!j.is_array()) parse_error("expected an array of arrays");
  std::vector<std::vector<double>> out;
  for (const auto& r : j) out.push_back(read_numbers(r));
  return out;
}

json optional_number(const std::optional<double>& v) {
  return v ? finite_or_null(*v) : json(nullptr);
}

std::optional<double> read_optional(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return number(*it);
}

std::string_view to_string(RootBranch b) { return b == RootBranch::Positive ? "positive" : "negative"; }

RootBranch parse_branch(const json& j) {
  const auto s = j.get<std::string>();
  if (s == "positive") return RootBranch::Positive;
  if (s == "negative") return RootBranch::Negative;
  parse_error("unknown root branch \"" + s + "\"");
}

}  // namespace

BundleSpec spec_from_json(const json& j) {
  const std::string where = "spec";
  reject_unknown_keys(j, {"factors", "m", "left", "right"}, where);
  BundleSpec spec;
  const auto& factors = field(j, "factors", where);
  if (!factors.is_array()) parse_error("spec.factors: expected an array");
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const std::string fw = "spec.factors[" + std::to_string(i) + "]";
    reject_unknown_keys(factors[i], {"n", "p", "q"}, fw);
    spec.factors.push_back(
        {int_field(factors[i], "n", fw), int_field(factors[i], "p", fw), int_field(factors[i], "q", fw)});
  }
  const auto& m = field(j, "m", where);
  if (!m.is_number()) parse_error("spec.m: expected a number");
  spec.m = m.get<double>();
  for (const char* key : {"left", "right"}) {
    const auto& v = field(j, key, where);
    const auto type = v.is_string() ? parse_endpoint(v.get<std::string>()) : std::nullopt;
    if (!type) parse_error(std::string("spec.") + key + ": expected \"collapse\" or \"blowdown\"");
    (std::string_view(key) == "left" ? spec.left : spec.right) = *type;
  }
  return spec;
}

json spec_to_json(const BundleSpec& spec) {
  json factors = json::array();
  for (const auto& f : spec.factors) factors.push_back({{"n", f.n}, {"p", f.p}, {"q", f.q}});
  return {{"factors", factors},
          {"m", spec.m},
          {"left", to_string(spec.left)},
          {"right", to_string(spec.right)}};
}

json solution_to_json(const SolvedProfile& profile) {
  const auto& p = profile.params;
  const auto& c = profile.config;
  json changes = json::array();
  for (const auto& [lo, hi] : profile.all_sign_changes) changes.push_back({lo, hi});
  json branches = json::array();
  for (auto b : c.branches) branches.push_back(to_string(b));
  return {
      {"format", kSolutionFormat},
      {"spec", spec_to_json(profile.spec)},
      {"kappa0", p.kappa0},
      {"kappa1", p.kappa1},
      {"E", p.E},
      {"mu", p.mu},
      {"s_star", p.s_star},
      {"A", number_array(p.A)},
      {"defect", profile.defect_at_root},
      {"bracket", {profile.bracket_used.first, profile.bracket_used.second}},
      {"sign_changes", changes},
      {"roots", number_array(profile.roots)},
      {"solver",
       {{"bracket", {c.kappa_lo, c.kappa_hi}},
        {"scan_points", c.scan_points},
        {"root_tol", c.root_tol},
        {"quad_rel_tol", c.quad_rel_tol},
        {"max_subdivisions", c.max_subdivisions},
        {"kappa1", c.kappa1},
        {"branches", branches}}},
  };
}

SolvedProfile solution_from_json(const json& j) {
  const std::string where = "solution";
  reject_unknown_keys(j, {"format", "spec", "kappa0", "kappa1", "E", "mu", "s_star", "A", "defect",
                          "bracket", "sign_changes", "roots", "solver"},
                      where);
  if (field(j, "format", where) != kSolutionFormat) parse_error("solution: unsupported format");
  SolvedProfile out;
  out.spec = spec_from_json(field(j, "spec", where));
  auto& p = out.params;
  p.kappa0 = num_field(j, "kappa0", where);
  p.kappa1 = num_field(j, "kappa1", where);
  p.E = num_field(j, "E", where);
  p.mu = num_field(j, "mu", where);
  p.s_star = num_field(j, "s_star", where);
  p.A = read_numbers(field(j, "A", where));
  if (p.A.size() != out.spec.rank()) parse_error("solution.A: one coefficient per factor expected");
  out.defect_at_root = num_field(j, "defect", where);
  const auto bracket = read_numbers(field(j, "bracket", where));
  if (bracket.size() != 2) parse_error("solution.bracket: expected [lo, hi]");
  out.bracket_used = {bracket[0], bracket[1]};
  for (const auto& pair : field(j, "sign_changes", where)) {
    const auto v = read_numbers(pair);
    if (v.size() != 2) parse_error("solution.sign_changes: expected [lo, hi] pairs");
    out.all_sign_changes.emplace_back(v[0], v[1]);
  }
  out.roots = read_numbers(field(j, "roots", where));

  const auto& s = field(j, "solver", where);
  const std::string sw = "solution.solver";
  reject_unknown_keys(s, {"bracket", "scan_points", "root_tol", "quad_rel_tol", "max_subdivisions",
                          "kappa1", "branches"},
                      sw);
  auto& c = out.config;
  const auto cb = read_numbers(field(s, "bracket", sw));
  if (cb.size() != 2) parse_error("solution.solver.bracket: expected [lo, hi]");
  c.kappa_lo = cb[0];
  c.kappa_hi = cb[1];
  c.scan_points = int_field(s, "scan_points", sw);
  c.root_tol = num_field(s, "root_tol", sw);
  c.quad_rel_tol = num_field(s, "quad_rel_tol", sw);
  c.max_subdivisions = static_cast<unsigned>(int_field(s, "max_subdivisions", sw));
  c.kappa1 = num_field(s, "kappa1", sw);
  for (const auto& b : field(s, "branches", sw)) c.branches.push_back(parse_branch(b));
  return out;
}

json report_to_json(const ResidualReport& r) {
  const auto& b = r.boundary;
  const auto& t = r.tolerances;
  const auto& f = r.flags;
  json violation = nullptr;
  if (r.first_violation) {
    violation = {{"s", r.first_violation->first}, {"factor", r.first_violation->second}};
  }
  json tsys = nullptr;
  if (r.t_system) {
    tsys = {{"max_residual", finite_or_null(r.t_system->max_residual)},
            {"max_ds_dt_error", finite_or_null(r.t_system->max_ds_dt_error)},
            {"points", r.t_system->points}};
  }
  return {
      {"format", kReportFormat},
      {"grid", number_array(r.grid)},
      {"res_fiber", number_array(r.res_fiber)},
      {"res_fiber_twist", number_array(r.res_fiber_twist)},
      {"res_base", matrix(r.res_base)},
      {"mu_samples", number_array(r.mu_samples)},
      {"mu", finite_or_null(r.mu)},
      {"mu_dev", finite_or_null(r.mu_dev)},
      {"ansatz_res", matrix(r.ansatz_res)},
      {"boundary",
       {{"alpha_at_0", finite_or_null(b.alpha_at_0)},
        {"alpha_at_sstar", finite_or_null(b.alpha_at_sstar)},
        {"alpha_at_sstar_is_defect", b.alpha_at_sstar_is_defect},
        {"slope_at_0_minus_2", finite_or_null(b.slope_at_0_minus_2)},
        {"slope_at_sstar_plus_2", finite_or_null(b.slope_at_sstar_plus_2)},
        {"left_quadratic", finite_or_null(b.left_quadratic)},
        {"right_quadratic", finite_or_null(b.right_quadratic)},
        {"left_beta_at_0", optional_number(b.left_beta_at_0)},
        {"left_slope_minus_1", optional_number(b.left_slope_minus_1)},
        {"right_beta_at_sstar", optional_number(b.right_beta_at_sstar)},
        {"right_slope_plus_1", optional_number(b.right_slope_plus_1)}}},
      {"positivity_ok", r.positivity_ok},
      {"first_violation", violation},
      {"fd_check", finite_or_null(r.fd_check)},
      {"t_system", tsys},
      {"tolerances",
       {{"algebraic", t.algebraic},
        {"residual", t.residual},
        {"alpha_end", t.alpha_end},
        {"slope", t.slope},
        {"finite_difference", t.finite_difference},
        {"t_system", t.t_system}}},
      {"flags",
       {{"quadratic_roots", f.quadratic_roots},
        {"ansatz", f.ansatz},
        {"residuals", f.residuals},
        {"mu_constant", f.mu_constant},
        {"boundary", f.boundary},
        {"blowdown", f.blowdown},
        {"positivity", f.positivity},
        {"finite_difference", f.finite_difference}}},
      {"certified", r.certified},
      {"summary",
       {{"max_abs_res_fiber", finite_or_null(r.max_abs_res_fiber())},
        {"max_abs_res_fiber_twist", finite_or_null(r.max_abs_res_fiber_twist())},
        {"max_abs_res_base", finite_or_null(r.max_abs_res_base())},
        {"max_abs_ansatz", finite_or_null(r.max_abs_ansatz())}}},
  };
}

ResidualReport report_from_json(const json& j) {
  const std::string w = "report";
  reject_unknown_keys(j, {"format", "grid", "res_fiber", "res_fiber_twist", "res_base", "mu_samples", "mu",
                          "mu_dev", "ansatz_res", "boundary", "positivity_ok", "first_violation",
                          "fd_check", "t_system", "tolerances", "flags", "certified", "summary"},
                      w);
  if (field(j, "format", w) != kReportFormat) parse_error("report: unsupported format");
  ResidualReport r;
  r.grid = read_numbers(field(j, "grid", w));
  r.res_fiber = read_numbers(field(j, "res_fiber", w));
  r.res_fiber_twist = read_numbers(field(j, "res_fiber_twist", w));
  r.res_base = read_matrix(field(j, "res_base", w));
  r.mu_samples = read_numbers(field(j, "mu_samples", w));
  r.mu = num_field(j, "mu", w);
  r.mu_dev = num_field(j, "mu_dev", w);
  r.ansatz_res = read_matrix(field(j, "ansatz_res", w));

  const auto& b = field(j, "boundary", w);
  const std::string bw = "report.boundary";
  auto& bd = r.boundary;
  bd.alpha_at_0 = num_field(b, "alpha_at_0", bw);
  bd.alpha_at_sstar = num_field(b, "alpha_at_sstar", bw);
  bd.alpha_at_sstar_is_defect = field(b, "alpha_at_sstar_is_defect", bw).get<bool>();
  bd.slope_at_0_minus_2 = num_field(b, "slope_at_0_minus_2", bw);
  bd.slope_at_sstar_plus_2 = num_field(b, "slope_at_sstar_plus_2", bw);
  bd.left_quadratic = num_field(b, "left_quadratic", bw);
  bd.right_quadratic = num_field(b, "right_quadratic", bw);
  bd.left_beta_at_0 = read_optional(b, "left_beta_at_0");
  bd.left_slope_minus_1 = read_optional(b, "left_slope_minus_1");
  bd.right_beta_at_sstar = read_optional(b, "right_beta_at_sstar");
  bd.right_slope_plus_1 = read_optional(b, "right_slope_plus_1");

  r.positivity_ok = field(j, "positivity_ok", w).get<bool>();
  if (const auto& v = field(j, "first_violation", w); !v.is_null()) {
    r.first_violation = std::pair{num_field(v, "s", w), int_field(v, "factor", w)};
  }
  r.fd_check = num_field(j, "fd_check", w);
  if (const auto& t = field(j, "t_system", w); !t.is_null()) {
    r.t_system = TSystemCheck{num_field(t, "max_residual", w), num_field(t, "max_ds_dt_error", w),
                              field(t, "points", w).get<std::size_t>()};
  }
  const auto& t = field(j, "tolerances", w);
  r.tolerances = {num_field(t, "algebraic", w),         num_field(t, "residual", w),
                  num_field(t, "alpha_end", w),         num_field(t, "slope", w),
                  num_field(t, "finite_difference", w), num_field(t, "t_system", w)};
  const auto& f = field(j, "flags", w);
  auto flag = [&](const char* k) { return field(f, k, w).get<bool>(); };
  r.flags = {flag("quadratic_roots"), flag("ansatz"),   flag("residuals"),  flag("mu_constant"),
             flag("boundary"),        flag("blowdown"), flag("positivity"), flag("finite_difference")};
  r.certified = field(j, "certified", w).get<bool>();
  return r;
}

json metric_to_json(const MetricProfile& metric) {
  json samples = json::array();
  for (const auto& x : metric.samples) {
    samples.push_back({{"t", x.t},
                       {"s", x.s},
                       {"f", x.f},
                       {"g", number_array(x.g)},
                       {"v", x.v},
                       {"u", finite_or_null(x.u)}});
  }
  return {{"total_length_l", metric.total_length_l},
          {"m", metric.m},
          {"convention", metric.u_convention},
          {"samples", samples}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    parse_error(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  if (path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Parse, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<ProfileRow> profile_table(const SolvedProfile& profile, std::size_t grid_size) {
  const auto metric = reconstruct_t(profile, grid_size);
  const ProfileEvaluator ev(profile.spec, profile.params, profile.config.quadrature());
  const auto& spec = profile.spec;
  const auto& params = profile.params;
  std::vector<ProfileRow> rows;
  rows.reserve(metric.samples.size());
  for (std::size_t k = 0; k < metric.samples.size(); ++k) {
    const auto& m = metric.samples[k];
    ProfileRow row;
    row.s = m.s;
    row.alpha = m.f * m.f;
    if (k == 0) {
      row.alpha_prime = ev.alpha_prime_left_limit();
    } else if (k + 1 == metric.samples.size()) {
      row.alpha_prime = ev.alpha_prime_right_limit();
    } else {
      row.alpha = ev.alpha(m.s);
      row.alpha_prime = ev.alpha_prime(m.s);
    }
    for (std::size_t i = 0; i < spec.rank(); ++i) row.beta.push_back(beta(spec, params, i, m.s).value);
    row.phi = phi(params, m.s).value;
    row.V = volume(spec, params, m.s);
    row.t = m.t;
    row.f = m.f;
    row.g = m.g;
    row.v = m.v;
    row.u = m.u;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string profile_csv_header(std::size_t rank) {
  std::string h = "s,alpha,alpha_prime";
  for (std::size_t i = 1; i <= rank; ++i) h += ",beta_" + std::to_string(i);
  h += ",phi,V,t,f";
  for (std::size_t i = 1; i <= rank; ++i) h += ",g_" + std::to_string(i);
  h += ",v,u";
  return h;
}

void write_profile_csv(std::ostream& out, const std::vector<ProfileRow>& rows, std::size_t rank) {
  out << profile_csv_header(rank) << '\n';
  for (const auto& r : rows) {
    out << format_double(r.s) << ',' << format_double(r.alpha) << ',' << format_double(r.alpha_prime);
    for (double b : r.beta) out << ',' << format_double(b);
    out << ',' << format_double(r.phi) << ',' << format_double(r.V) << ',' << format_double(r.t)
        << ',' << format_double(r.f);
    for (double g : r.g) out << ',' << format_double(g);
    out << ',' << format_double(r.v) << ',' << format_double(r.u) << '\n';
  }
}

std::vector<ProfileRow> read_profile_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) parse_error("profile csv: empty input");
  std::size_t columns = 1;
  for (char c : line) columns += c == ',';
  if (columns < 11 || (columns - 9) % 2 != 0) parse_error("profile csv: bad header");
  const std::size_t rank = (columns - 9) / 2;
  if (line != profile_csv_header(rank)) parse_error("profile csv: bad header");

  std::vector<ProfileRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::strtod(cell.c_str(), nullptr));
    if (v.size() != columns) parse_error("profile csv: wrong number of cells");
    ProfileRow r;
    std::size_t k = 0;
    r.s = v[k++];
    r.alpha = v[k++];
    r.alpha_prime = v[k++];
    for (std::size_t i = 0; i < rank; ++i) r.beta.push_back(v[k++]);
    r.phi = v[k++];
    r.V = v[k++];
    r.t = v[k++];
    r.f = v[k++];
    for (std::size_t i = 0; i < rank; ++i) r.g.push_back(v[k++]);
    r.v = v[k++];
    r.u = v[k++];
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace qe
