#pragma once

// Thermal statistics of a single harmonic mode.
//
// A quenched Boltzmann state is fully described by eta = <n> + 1; its level
// populations are p_n = (1/eta) (1 - 1/eta)^n.

#include <cmath>
#include <limits>
#include <string>

#include "refrig/error.hpp"

namespace refrig::thermo {

/// Bose-Einstein occupation. `underflow` is set when e^theta overflows and the
/// occupation has been flushed to zero.
struct Occupation {
    double value{};
    bool underflow{false};
};

struct QuenchedState {
    double eta{};

    double mean_n() const noexcept { return eta - 1.0; }
    /// Geometric ratio p_{n+1}/p_n.
    double level_ratio() const noexcept { return 1.0 - 1.0 / eta; }
    double population(unsigned n) const { return std::pow(level_ratio(), n) / eta; }

    bool operator==(const QuenchedState&) const = default;
};

struct BathSpec {
    double theta{};  // hbar omega / k_B T at one instant
};

inline constexpr double ground_state_epsilon = 1e-12;

namespace detail {
inline const double max_exp_argument = std::log(std::numeric_limits<double>::max());
}

inline Occupation nu_of(double theta) {
    refrig::detail::require(std::isfinite(theta) && theta > 0.0,
                            "theta must be > 0, got " + std::to_string(theta));
    if (theta >= detail::max_exp_argument) return {0.0, true};
    return {1.0 / std::expm1(theta), false};
}

inline Occupation nu_of(BathSpec bath) { return nu_of(bath.theta); }

/// Equilibrium with the bath at the current frequency: eta = nu + 1.
inline QuenchedState thermal_state(double theta) {
    const auto nu = nu_of(theta);
    if (nu.underflow) return {1.0};
    // nu + 1 = 1 / (1 - e^-theta), without the cancellation of adding 1
    return {-1.0 / std::expm1(-theta)};
}

/// Effective temperature T(t)/T of a quenched state, measured against the
/// spectrum at theta_now, by matching the Boltzmann exponent:
/// log[nu/(nu+1)] / log[1 - 1/eta]. The numerator is exactly -theta_now.
inline double temperature_ratio(const QuenchedState& s, double theta_now) {
    refrig::detail::require(std::isfinite(theta_now) && theta_now > 0.0,
                            "theta_now must be > 0");
    if (!(s.eta - 1.0 > ground_state_epsilon)) {
        throw Error(ErrorKind::solver, "state at or below quantum ground-state limit (eta=" +
                                           std::to_string(s.eta) + ")");
    }
    return -theta_now / std::log1p(-1.0 / s.eta);
}

/// Instantaneous-opening limit T*/T = omega0/omega1.
inline double ideal_cooling_limit(double freq_ratio_r) {
    refrig::detail::require(std::isfinite(freq_ratio_r) && freq_ratio_r >= 1.0,
                            "frequency ratio must be >= 1");
    return 1.0 / freq_ratio_r;
}

/// Relative temperature drop 1 - omega0/omega1.
inline double ideal_cooling_drop(double freq_ratio_r) {
    return 1.0 - ideal_cooling_limit(freq_ratio_r);
}

} // namespace refrig::thermo
