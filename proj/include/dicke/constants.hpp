#pragma once

#include <numbers>

namespace dicke::constants {

inline constexpr double hbar = 1.0545718e-34;  // J s
inline constexpr double pi = std::numbers::pi;
inline constexpr double nm = 1e-9;

}  // namespace dicke::constants
