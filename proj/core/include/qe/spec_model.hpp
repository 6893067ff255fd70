#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qe/error.hpp"

namespace qe {

/// One Fano Kahler-Einstein factor M_i of the base.
struct FactorSpec {
  int n = 1;  ///< complex dimension
  int p = 1;  ///< Fano index, c1(M_i) = p * alpha_i
  int q = 1;  ///< twisting of the circle bundle over this factor

  friend bool operator==(const FactorSpec&, const FactorSpec&) = default;
};

enum class EndpointType { SmoothCollapse, Blowdown };

std::string_view to_string(EndpointType type);
std::optional<EndpointType> parse_endpoint(std::string_view text);

/// Problem statement: the base factors, the quasi-Einstein parameter m and
/// how each end of the interval is closed up.
struct BundleSpec {
  std::vector<FactorSpec> factors;
  double m = 2.0;
  double epsilon = -1.0;
  EndpointType left = EndpointType::SmoothCollapse;
  EndpointType right = EndpointType::SmoothCollapse;

  std::size_t rank() const noexcept { return factors.size(); }

  bool is_left_blowdown_factor(std::size_t i) const noexcept {
    return left == EndpointType::Blowdown && i == 0;
  }
  bool is_right_blowdown_factor(std::size_t i) const noexcept {
    return right == EndpointType::Blowdown && !factors.empty() &&
           i + 1 == factors.size();
  }

  /// n_L: dimension of the factor collapsing at s = 0, zero for a smooth
  /// collapse of the circle fibre alone.
  int left_end_dimension() const noexcept {
    return left == EndpointType::Blowdown && !factors.empty() ? factors.front().n : 0;
  }
  /// n_R, same convention at s = s*.
  int right_end_dimension() const noexcept {
    return right == EndpointType::Blowdown && !factors.empty() ? factors.back().n : 0;
  }

  friend bool operator==(const BundleSpec&, const BundleSpec&) = default;
};

enum class Clause {
  Structure,         ///< malformed data (r = 0, n < 1, q = 0, ...)
  Parameter,         ///< m <= 1 or epsilon != -1
  CollapseBothEnds,  ///< 0 < |q_i| < p_i when neither end blows down
  LeftBlowdown,      ///< factor 1 must be CP^{n_1} with |q_1| = 1
  RightBlowdown,     ///< factor r must be CP^{n_r} with |q_r| = 1
  BlowdownOneEnd,    ///< |q_i|(n_end + 1) < p_i on the remaining factors
};

std::string_view to_string(Clause clause);

struct Violation {
  Clause clause;
  std::optional<std::size_t> factor;  ///< zero-based index, if factor-specific
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool valid() const noexcept { return violations.empty(); }
  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

/// Checks the structural rules and the existence hypotheses for the chosen
/// endpoint configuration. Violations are returned as data, never thrown.
ValidationReport validate_spec(const BundleSpec& spec);

/// Throws qe::Error(InvalidSpec) listing every violation.
void require_valid(const BundleSpec& spec);

}  // namespace qe
