#pragma once

// Roots of the boundary defect from tests/oracle/simpson_oracle.py
// (uniform Simpson, 2^16 panels, bisection to machine precision).
namespace qe::test::frozen {

inline constexpr double kKappa0RefM15 = 6.566820245574188;
inline constexpr double kKappa0RefM2 = 8.277821245768493;
inline constexpr double kKappa0RefM4 = 14.661814895260704;
inline constexpr double kKappa0RefM8 = 26.774611654544074;
inline constexpr double kKappa0RefM32 = 97.54394353371038;
inline constexpr double kKappa0LeftBlowdown = 20.842223363326028;
inline constexpr double kKappa0RightBlowdown = 17.934777125832824;
inline constexpr double kKappa0BothBlowdown = 23.620999022006146;

}  // namespace qe::test::frozen
