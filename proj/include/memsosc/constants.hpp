#pragma once

#include <numbers>

namespace memsosc {

/// Vacuum permittivity [F/m], rounded to the four digits used throughout the
/// design tables.
inline constexpr double kEpsilon0 = 8.854e-12;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Conversion helpers; everything internal is SI.
inline constexpr double kMicro = 1e-6;
inline constexpr double kNano = 1e-9;
inline constexpr double kPico = 1e-12;
inline constexpr double kFemto = 1e-15;
inline constexpr double kAtto = 1e-18;

}  // namespace memsosc
