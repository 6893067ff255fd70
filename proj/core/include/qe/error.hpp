#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qe {

enum class ErrorCode {
  InvalidSpec,
  Parse,
  NegativeDiscriminant,
  NonPositiveKappa0,
  SingularV,
  SingularPrefactor,
  PositivityFailure,
  NoSignChange,
  NonPositiveAlpha,
  CertificationFailure,
};

std::string_view to_string(ErrorCode code);

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// beta_i(s) <= 0 (or alpha(s) <= 0) at an interior point that has to be
/// positive. `factor` is -1 when the offending quantity is alpha.
class PositivityError : public Error {
 public:
  PositivityError(double s, int factor, const std::string& what)
      : Error(ErrorCode::PositivityFailure, what), s_(s), factor_(factor) {}

  double s() const noexcept { return s_; }
  int factor() const noexcept { return factor_; }

 private:
  double s_;
  int factor_;
};

}  // namespace qe
