#pragma once

// Evolution of eta = <n> + 1 for a thermally damped oscillator whose frequency
// follows a slow schedule. In units s = t / tau_open,
//
//   d eta / ds = -g eta + g [nu(theta(s)) + 1],   theta(s) = theta0 r omega(s)/omega1
//
// Two independent routes are provided: fixed-step RK4 on the ODE, and
// adaptive quadrature of the exact variation-of-constants solution.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "refrig/constants.hpp"
#include "refrig/error.hpp"
#include "refrig/frequency_profile.hpp"
#include "refrig/numerics.hpp"
#include "refrig/oscillator_thermo.hpp"
#include "refrig/units_params.hpp"

namespace refrig::adiabatic {

using units::DimensionlessParams;

struct Sample {
    double s{};
    double omega_over_omega1{};
    double eta{};
    double mean_n{};
    double T_ratio{};

    bool operator==(const Sample&) const = default;
};

enum class Method { rk4_ode, closed_form };

inline const char* method_name(Method m) {
    return m == Method::rk4_ode ? "rk4_ode" : "closed_form";
}

struct SolverInfo {
    Method method{Method::closed_form};
    double step{};     // RK4 step in s (ODE route)
    double abs_tol{};  // quadrature tolerance on eta per sample (closed-form route)
    std::size_t samples_per_tau{};
    std::vector<std::string> warnings;
};

struct EtaTrajectory {
    DimensionlessParams params;
    FrequencyProfile profile;
    std::vector<Sample> samples;
    SolverInfo info;

    double horizon() const { return samples.empty() ? 0.0 : samples.back().s; }
};

struct OdeOptions {
    double step{1e-4};
    std::size_t samples_per_tau{2000};
    /// omega0 * tau_open, when known from SI inputs; enables the adiabaticity warning.
    std::optional<double> omega0_tau_open;
};

struct QuadratureOptions {
    double abs_tol{1e-12};
    std::size_t samples_per_tau{2000};
    std::optional<double> omega0_tau_open;
};

/// Fewer than ten oscillation periods per opening.
inline constexpr double min_adiabatic_omega0_tau = 20.0 * constants::pi;

inline double theta_at(const DimensionlessParams& d, const FrequencyProfile& p, double s) {
    return d.theta0 * d.freq_ratio_r * omega_at(p, s);
}

/// d eta / ds.
inline double eta_rate(const DimensionlessParams& d, const FrequencyProfile& p, double s,
                       double eta) {
    return d.gamma_tau_g * (thermo::thermal_state(theta_at(d, p, s)).eta - eta);
}

/// Output grid: s_k = k / samples_per_tau, with the horizon appended when it is
/// not on the grid.
inline std::vector<double> sample_grid(double horizon, std::size_t samples_per_tau) {
    refrig::detail::require(std::isfinite(horizon) && horizon > 0.0, "horizon must be > 0");
    refrig::detail::require(samples_per_tau > 0, "samples_per_tau must be > 0");
    const double spt = static_cast<double>(samples_per_tau);
    const auto whole = static_cast<std::size_t>(std::floor(horizon * spt + 1e-9));
    std::vector<double> grid;
    grid.reserve(whole + 2);
    for (std::size_t k = 0; k <= whole; ++k) grid.push_back(static_cast<double>(k) / spt);
    if (horizon - grid.back() > 1e-12) grid.push_back(horizon);
    else grid.back() = std::min(grid.back(), horizon);
    return grid;
}

namespace detail {

inline void validate_run(const DimensionlessParams& d, const FrequencyProfile& p, double eta0,
                         double horizon) {
    units::validate(d);
    validate(p);
    refrig::detail::require(p.freq_ratio_r == d.freq_ratio_r,
                            "profile frequency ratio does not match parameters");
    refrig::detail::require(std::isfinite(eta0) && eta0 > 1.0, "initial eta must be > 1");
    refrig::detail::require(std::isfinite(horizon) && horizon > 0.0, "horizon must be > 0");
}

inline std::vector<std::string> adiabatic_warnings(std::optional<double> omega0_tau_open) {
    std::vector<std::string> out;
    if (omega0_tau_open && *omega0_tau_open < min_adiabatic_omega0_tau) {
        std::ostringstream os;
        os << "adiabaticity: omega0*tau_open = " << *omega0_tau_open
           << " < 20*pi; opening spans fewer than 10 oscillation periods";
        out.push_back(os.str());
    }
    return out;
}

/// Split [a, b] at any kinks strictly inside.
inline std::vector<double> split_points(double a, double b, const std::vector<double>& kinks) {
    std::vector<double> pts{a};
    for (double k : kinks)
        if (k > a && k < b) pts.push_back(k);
    pts.push_back(b);
    return pts;
}

inline Sample make_sample(const DimensionlessParams& d, const FrequencyProfile& p, double s,
                          double eta) {
    if (!(std::isfinite(eta) && eta > 1.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "model violation: eta=" << eta << " <= 1 at s=" << s;
        throw Error(ErrorKind::solver, os.str());
    }
    const double w = omega_at(p, s);
    const double ratio = thermo::temperature_ratio({eta}, d.theta0 * d.freq_ratio_r * w);
    if (!std::isfinite(ratio)) {
        throw Error(ErrorKind::solver, "non-finite temperature ratio at s=" + std::to_string(s));
    }
    return {s, w, eta, eta - 1.0, ratio};
}

} // namespace detail

/// Exact propagation of eta from s_a to s_b:
/// eta(b) = e^{-g(b-a)} eta(a) + g * int_a^b e^{-g(b-u)} / (1 - e^{-theta(u)}) du.
inline double advance_eta_closed_form(const DimensionlessParams& d, const FrequencyProfile& p,
                                      double s_a, double eta_a, double s_b,
                                      double abs_tol = 1e-12,
                                      const std::vector<double>& kinks = {}) {
    const double g = d.gamma_tau_g;
    const double decayed = std::exp(-g * (s_b - s_a)) * eta_a;
    if (g == 0.0 || s_b == s_a) return decayed;

    const auto pts = detail::split_points(s_a, s_b, kinks);
    const double piece_tol = abs_tol / (g * static_cast<double>(pts.size() - 1));
    auto integrand = [&](double u) {
        return std::exp(-g * (s_b - u)) * thermo::thermal_state(theta_at(d, p, u)).eta;
    };
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        integral += numerics::adaptive_simpson(integrand, pts[i], pts[i + 1],
                                               {.abs_tol = piece_tol, .max_depth = 48});
    }
    return decayed + g * integral;
}

inline EtaTrajectory evolve_eta_ode(const DimensionlessParams& d, const FrequencyProfile& p,
                                    double eta0, double horizon, const OdeOptions& opt = {}) {
    detail::validate_run(d, p, eta0, horizon);
    if (!(std::isfinite(opt.step) && opt.step >= 1e-12 && opt.step <= horizon)) {
        std::ostringstream os;
        os << "RK4 step-size underflow or invalid step: step=" << opt.step
           << " (allowed [1e-12, horizon=" << horizon << "])";
        throw Error(ErrorKind::solver, os.str());
    }

    EtaTrajectory traj{d, p, {}, {Method::rk4_ode, opt.step, 0.0, opt.samples_per_tau,
                                  detail::adiabatic_warnings(opt.omega0_tau_open)}};
    const auto grid = sample_grid(horizon, opt.samples_per_tau);
    const auto kinks = refrig::kinks(p, horizon);
    traj.samples.reserve(grid.size());

    auto rate = [&](double s, double eta) { return eta_rate(d, p, s, eta); };
    double eta = eta0;
    traj.samples.push_back(detail::make_sample(d, p, 0.0, eta));
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const auto pts = detail::split_points(grid[k - 1], grid[k], kinks);
        for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
            const double span = pts[j + 1] - pts[j];
            const auto n = static_cast<std::size_t>(std::ceil(span / opt.step - 1e-9));
            const double h = span / static_cast<double>(std::max<std::size_t>(n, 1));
            for (std::size_t i = 0; i < std::max<std::size_t>(n, 1); ++i) {
                const double s = pts[j] + static_cast<double>(i) * h;
                if (s + h == s) {
                    throw Error(ErrorKind::solver,
                                "RK4 step-size underflow at s=" + std::to_string(s));
                }
                eta = numerics::rk4_step(rate, s, eta, h);
            }
        }
        traj.samples.push_back(detail::make_sample(d, p, grid[k], eta));
    }
    return traj;
}

inline EtaTrajectory evolve_eta_closed_form(const DimensionlessParams& d,
                                            const FrequencyProfile& p, double eta0,
                                            double horizon, const QuadratureOptions& opt = {}) {
    detail::validate_run(d, p, eta0, horizon);
    refrig::detail::require(opt.abs_tol > 0.0, "quadrature tolerance must be > 0");

    EtaTrajectory traj{d, p, {}, {Method::closed_form, 0.0, opt.abs_tol, opt.samples_per_tau,
                                  detail::adiabatic_warnings(opt.omega0_tau_open)}};
    const auto grid = sample_grid(horizon, opt.samples_per_tau);
    const auto kinks = refrig::kinks(p, horizon);
    traj.samples.reserve(grid.size());

    double eta = eta0;
    traj.samples.push_back(detail::make_sample(d, p, 0.0, eta));
    for (std::size_t k = 1; k < grid.size(); ++k) {
        eta = advance_eta_closed_form(d, p, grid[k - 1], eta, grid[k], opt.abs_tol, kinks);
        traj.samples.push_back(detail::make_sample(d, p, grid[k], eta));
    }
    return traj;
}

/// Default start: thermalized in the closed configuration, eta = nu(theta0 r) + 1.
inline double closed_equilibrium_eta(const DimensionlessParams& d) {
    return thermo::thermal_state(d.theta0 * d.freq_ratio_r).eta;
}

struct Extremum {
    double value{};
    double s{};
    std::size_t index{};
};

inline Extremum min_temperature(const EtaTrajectory& traj) {
    refrig::detail::require(!traj.samples.empty(), "empty trajectory");
    std::size_t best = 0;
    for (std::size_t i = 1; i < traj.samples.size(); ++i)
        if (traj.samples[i].T_ratio < traj.samples[best].T_ratio) best = i;
    return {traj.samples[best].T_ratio, traj.samples[best].s, best};
}

struct Recovery {
    bool recovered{false};
    double s{};        // crossing time when recovered
    double horizon{};  // end of the trajectory searched
};

/// First s after the temperature minimum with T_ratio >= target. The crossing
/// is bracketed by samples and refined by bisection on the exact solution.
inline Recovery recovery_time(const EtaTrajectory& traj, double target_ratio,
                              double bisection_tol = 1e-12) {
    const auto lo = min_temperature(traj);
    const auto& xs = traj.samples;
    const double horizon = traj.horizon();
    if (xs[lo.index].T_ratio >= target_ratio) return {true, xs[lo.index].s, horizon};

    std::size_t j = lo.index + 1;
    while (j < xs.size() && xs[j].T_ratio < target_ratio) ++j;
    if (j == xs.size()) return {false, horizon, horizon};

    const auto& d = traj.params;
    const auto& p = traj.profile;
    const auto kinks = refrig::kinks(p, horizon);
    const double s0 = xs[j - 1].s;
    const double eta0 = xs[j - 1].eta;
    auto ratio_at = [&](double s) {
        const double eta = advance_eta_closed_form(d, p, s0, eta0, s, 1e-13, kinks);
        return thermo::temperature_ratio({eta}, theta_at(d, p, s));
    };

    double a = s0;
    double b = xs[j].s;
    while (b - a > bisection_tol) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        if (ratio_at(m) >= target_ratio) b = m;
        else a = m;
    }
    return {true, b, horizon};
}

} // namespace refrig::adiabatic
