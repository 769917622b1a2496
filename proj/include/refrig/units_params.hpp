#pragma once

// Physical and dimensionless parameters of the two-lip cavity model, the
// normal-mode reduction to the relative coordinate, and SI conversions.
//
// Only three dimensionless groups enter the dynamics:
//   theta0 = hbar*omega0 / (k_B T)
//   r      = omega1 / omega0
//   g      = gamma * tau_open
// Masses and spring constants set an overall scale that the solvers never see.

#include <cmath>
#include <sstream>
#include <string>

#include "refrig/constants.hpp"
#include "refrig/error.hpp"

namespace refrig::units {

struct PhysicalParams {
    double mass_m{};              // kg, each lip
    double spring_kappa{};        // N/m, each lip
    double coupling_kappa_max{};  // N/m, contracted coupling
    double bath_temperature_T{};  // K
    double relaxation_gamma{};    // 1/s
    double tau_open{};            // s

    bool operator==(const PhysicalParams&) const = default;
};

/// Center-of-mass and relative-mode constants for equal masses and springs.
///
/// The center-of-mass pair (X_cm, P_cm) oscillates with kappa_cm / M_total and
/// does not deform the cavity, so it is kept here for the record only.
struct NormalModeDecomposition {
    double M_total{};
    double mu_reduced{};
    double kappa_cm{};
    double kappa_rel{};

    bool operator==(const NormalModeDecomposition&) const = default;
};

struct DimensionlessParams {
    double theta0{0.032};
    double freq_ratio_r{2.0};
    double gamma_tau_g{1.0};

    bool operator==(const DimensionlessParams&) const = default;
};

inline void validate(const PhysicalParams& p) {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    refrig::detail::require(positive(p.mass_m), "mass_m must be > 0");
    refrig::detail::require(positive(p.spring_kappa), "spring_kappa must be > 0");
    refrig::detail::require(std::isfinite(p.coupling_kappa_max) && p.coupling_kappa_max >= 0.0,
                    "coupling_kappa_max must be >= 0");
    refrig::detail::require(positive(p.bath_temperature_T), "bath_temperature_T must be > 0");
    refrig::detail::require(std::isfinite(p.relaxation_gamma) && p.relaxation_gamma >= 0.0,
                    "relaxation_gamma must be >= 0");
    refrig::detail::require(positive(p.tau_open), "tau_open must be > 0");
}

inline void validate(const DimensionlessParams& d) {
    refrig::detail::require(std::isfinite(d.theta0) && d.theta0 > 0.0, "theta0 must be > 0");
    refrig::detail::require(std::isfinite(d.freq_ratio_r) && d.freq_ratio_r >= 1.0,
                    "freq_ratio_r must be >= 1");
    refrig::detail::require(std::isfinite(d.gamma_tau_g) && d.gamma_tau_g >= 0.0,
                    "gamma_tau_g must be >= 0");
}

inline NormalModeDecomposition reduce_to_relative_mode(const PhysicalParams& p) {
    validate(p);
    return {.M_total = 2.0 * p.mass_m,
            .mu_reduced = 0.5 * p.mass_m,
            .kappa_cm = 2.0 * p.spring_kappa,
            .kappa_rel = 0.5 * p.spring_kappa};
}

/// omega = sqrt((kappa_rel + kappa_t) / mu), in rad/s.
inline double omega_from_kappa(double kappa_rel, double kappa_t, double mu) {
    refrig::detail::require(std::isfinite(mu) && mu > 0.0, "reduced mass must be > 0");
    refrig::detail::require(std::isfinite(kappa_rel) && kappa_rel > 0.0, "kappa_rel must be > 0");
    refrig::detail::require(std::isfinite(kappa_t) && kappa_t >= 0.0, "kappa(t) must be >= 0");
    return std::sqrt((kappa_rel + kappa_t) / mu);
}

inline DimensionlessParams to_dimensionless(const PhysicalParams& p) {
    const auto modes = reduce_to_relative_mode(p);
    const double omega0 = omega_from_kappa(modes.kappa_rel, 0.0, modes.mu_reduced);
    const double omega1 =
        omega_from_kappa(modes.kappa_rel, p.coupling_kappa_max, modes.mu_reduced);
    return {.theta0 = constants::hbar * omega0 / (constants::boltzmann_k * p.bath_temperature_T),
            .freq_ratio_r = omega1 / omega0,
            .gamma_tau_g = p.relaxation_gamma * p.tau_open};
}

/// The scale left free by the dimensionless groups. Any positive choice
/// reproduces the same DimensionlessParams.
struct SIScale {
    double mass_m{1e-25};     // kg
    double tau_open{100e-12}; // s
};

struct SIQuantities {
    double omega0{};         // rad/s
    double omega1{};         // rad/s
    double tau_osc{};        // s, 2 pi / omega0
    double tau_osc_prime{};  // s, 2 pi / omega1
    double gamma{};          // 1/s
    PhysicalParams physical;
};

inline SIQuantities si_roundtrip(const DimensionlessParams& d, double temperature_K,
                                 const SIScale& scale = {}) {
    validate(d);
    refrig::detail::require(std::isfinite(temperature_K) && temperature_K > 0.0,
                    "temperature must be > 0");
    refrig::detail::require(scale.mass_m > 0.0 && scale.tau_open > 0.0, "SI scale must be positive");

    SIQuantities q;
    q.omega0 = d.theta0 * constants::boltzmann_k * temperature_K / constants::hbar;
    q.omega1 = d.freq_ratio_r * q.omega0;
    q.tau_osc = 2.0 * constants::pi / q.omega0;
    q.tau_osc_prime = 2.0 * constants::pi / q.omega1;
    q.gamma = d.gamma_tau_g / scale.tau_open;

    // omega0^2 = kappa_rel/mu = kappa/m; omega1^2 = (kappa_rel + kappa_max)/mu
    const double m = scale.mass_m;
    q.physical = {.mass_m = m,
                  .spring_kappa = m * q.omega0 * q.omega0,
                  .coupling_kappa_max = 0.5 * m * (q.omega1 * q.omega1 - q.omega0 * q.omega0),
                  .bath_temperature_T = temperature_K,
                  .relaxation_gamma = q.gamma,
                  .tau_open = scale.tau_open};
    return q;
}

inline std::string describe(const DimensionlessParams& d) {
    std::ostringstream os;
    os.precision(12);
    os << "theta0=" << d.theta0 << " r=" << d.freq_ratio_r << " g=" << d.gamma_tau_g;
    return os.str();
}

} // namespace refrig::units
