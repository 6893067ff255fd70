#include "qe/spec_model.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "qe/error.hpp"

namespace qe {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::NegativeDiscriminant: return "NegativeDiscriminant";
    case ErrorCode::NonPositiveKappa0: return "NonPositiveKappa0";
    case ErrorCode::SingularV: return "SingularV";
    case ErrorCode::SingularPrefactor: return "SingularPrefactor";
    case ErrorCode::PositivityFailure: return "PositivityFailure";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::NonPositiveAlpha: return "NonPositiveAlpha";
    case ErrorCode::CertificationFailure: return "CertificationFailure";
  }
  return "Unknown";
}

std::string_view to_string(EndpointType type) {
  return type == EndpointType::Blowdown ? "blowdown" : "collapse";
}

std::optional<EndpointType> parse_endpoint(std::string_view text) {
  if (text == "collapse") return EndpointType::SmoothCollapse;
  if (text == "blowdown") return EndpointType::Blowdown;
  return std::nullopt;
}

std::string_view to_string(Clause clause) {
  switch (clause) {
    case Clause::Structure: return "structure";
    case Clause::Parameter: return "parameter";
    case Clause::CollapseBothEnds: return "collapse-both-ends";
    case Clause::LeftBlowdown: return "left-blowdown-factor";
    case Clause::RightBlowdown: return "right-blowdown-factor";
    case Clause::BlowdownOneEnd: return "blowdown-one-end";
  }
  return "unknown";
}

namespace {

std::string factor_label(std::size_t i) { return "factor " + std::to_string(i + 1); }

void check_blowdown_factor(const FactorSpec& f, std::size_t i, Clause clause,
                           std::vector<Violation>& out) {
  if (f.p != f.n + 1) {
    out.push_back({clause, i,
                   factor_label(i) + ": blowdown needs CP^n with p = n + 1, got p = " +
                       std::to_string(f.p) + ", n = " + std::to_string(f.n)});
  }
  if (std::abs(f.q) != 1) {
    out.push_back({clause, i,
                   factor_label(i) + ": blowdown needs |q| = 1, got q = " +
                       std::to_string(f.q)});
  }
}

}  // namespace

ValidationReport validate_spec(const BundleSpec& spec) {
  ValidationReport report;
  auto& out = report.violations;

  if (spec.factors.empty()) {
    out.push_back({Clause::Structure, std::nullopt, "at least one factor is required"});
    return report;
  }
  bool factors_ok = true;
  for (std::size_t i = 0; i < spec.rank(); ++i) {
    const auto& f = spec.factors[i];
    if (f.n < 1 || f.p < 1 || f.q == 0) {
      factors_ok = false;
      out.push_back({Clause::Structure, i,
                     factor_label(i) + ": need n >= 1, p >= 1, q != 0"});
    }
  }
  if (!(std::isfinite(spec.m) && spec.m > 1.0)) {
    out.push_back({Clause::Parameter, std::nullopt, "m must be a finite real > 1"});
  }
  if (spec.epsilon != -1.0) {
    out.push_back({Clause::Parameter, std::nullopt, "epsilon is fixed to -1"});
  }
  if (!factors_ok) return report;

  const bool left_bd = spec.left == EndpointType::Blowdown;
  const bool right_bd = spec.right == EndpointType::Blowdown;

  if (left_bd && right_bd && spec.rank() < 2) {
    out.push_back({Clause::Structure, std::nullopt,
                   "blowdowns at both ends need two distinct end factors (r >= 2)"});
    return report;
  }

  if (!left_bd && !right_bd) {
    for (std::size_t i = 0; i < spec.rank(); ++i) {
      const auto& f = spec.factors[i];
      if (!(std::abs(f.q) < f.p)) {
        out.push_back({Clause::CollapseBothEnds, i,
                       factor_label(i) + ": need 0 < |q| < p, got |q| = " +
                           std::to_string(std::abs(f.q)) + ", p = " + std::to_string(f.p)});
      }
    }
    return report;
  }

  if (left_bd) check_blowdown_factor(spec.factors.front(), 0, Clause::LeftBlowdown, out);
  if (right_bd) {
    check_blowdown_factor(spec.factors.back(), spec.rank() - 1, Clause::RightBlowdown, out);
  }

  // One blown-down end: the remaining factors satisfy |q_i|(n_end + 1) < p_i.
  // Blowdowns at both ends only carry the structural rules above.
  if (left_bd != right_bd) {
    const int n_end = left_bd ? spec.factors.front().n : spec.factors.back().n;
    const std::size_t first = left_bd ? 1 : 0;
    const std::size_t last = left_bd ? spec.rank() : spec.rank() - 1;
    for (std::size_t i = first; i < last; ++i) {
      const auto& f = spec.factors[i];
      if (!(std::abs(f.q) * (n_end + 1) < f.p)) {
        std::ostringstream msg;
        msg << factor_label(i) << ": need |q|(n_end + 1) < p, got " << std::abs(f.q)
            << " * " << (n_end + 1) << " >= " << f.p;
        out.push_back({Clause::BlowdownOneEnd, i, msg.str()});
      }
    }
  }
  return report;
}

void require_valid(const BundleSpec& spec) {
  const auto report = validate_spec(spec);
  if (report.valid()) return;
  std::string msg = "invalid spec:";
  for (const auto& v : report.violations) msg += "\n  [" + std::string(to_string(v.clause)) + "] " + v.message;
  throw Error(ErrorCode::InvalidSpec, msg);
}

}  // namespace qe
