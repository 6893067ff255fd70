#pragma once

#include "qe/spec_model.hpp"

namespace qe::test {

/// CP^2 base, circle twisted by q = 1, collapsing at both ends.
inline BundleSpec reference_spec(double m = 2.0) {
  BundleSpec s;
  s.factors = {{2, 3, 1}};
  s.m = m;
  return s;
}

/// CP^1 x CP^1 with the first factor blown down at s = 0.
inline BundleSpec left_blowdown_spec(double m = 2.0) {
  BundleSpec s;
  s.factors = {{1, 2, 1}, {1, 3, 1}};
  s.m = m;
  s.left = EndpointType::Blowdown;
  return s;
}

/// Mirror of left_blowdown_spec: the last factor is blown down at s*.
inline BundleSpec right_blowdown_spec(double m = 2.0) {
  BundleSpec s;
  s.factors = {{1, 3, 1}, {1, 2, 1}};
  s.m = m;
  s.right = EndpointType::Blowdown;
  return s;
}

inline BundleSpec both_blowdown_spec(double m = 2.0) {
  BundleSpec s;
  s.factors = {{1, 2, 1}, {1, 3, 1}, {1, 2, 1}};
  s.m = m;
  s.left = s.right = EndpointType::Blowdown;
  return s;
}

}  // namespace qe::test
