#pragma once

#include <numbers>

// Single source of physical constants (exact SI values).
namespace refrig::constants {

inline constexpr double boltzmann_k = 1.380649e-23;  // J/K
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double pi = std::numbers::pi;

} // namespace refrig::constants
