#pragma once

// Frequency schedules omega(s)/omega1 with s = t / tau_open.

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "refrig/constants.hpp"
#include "refrig/error.hpp"

namespace refrig {

/// omega1 -> omega0 along a quarter sine over `duration`, then omega0.
struct SineOpening {
    double duration{1.0};
    bool operator==(const SineOpening&) const = default;
};

struct ConstantFrequency {
    double omega_over_omega1{1.0};
    bool operator==(const ConstantFrequency&) const = default;
};

struct Breakpoint {
    double s{};
    double omega_over_omega1{};
    bool operator==(const Breakpoint&) const = default;
};

/// Linear interpolation between breakpoints, held constant after the last one.
/// The first breakpoint must sit at s = 0.
struct PiecewiseLinear {
    std::vector<Breakpoint> points;
    bool operator==(const PiecewiseLinear&) const = default;
};

/// Time reverse of SineOpening: omega0 -> omega1 over `duration`, then omega1.
struct ReversedSineClosing {
    double duration{1.0};
    bool operator==(const ReversedSineClosing&) const = default;
};

using ProfileShape = std::variant<SineOpening, ConstantFrequency, PiecewiseLinear, ReversedSineClosing>;

struct FrequencyProfile {
    double freq_ratio_r{2.0};
    ProfileShape shape{SineOpening{}};

    static FrequencyProfile sine_opening(double r, double duration = 1.0) {
        return {r, SineOpening{duration}};
    }
    static FrequencyProfile constant(double r, double omega_over_omega1 = 1.0) {
        return {r, ConstantFrequency{omega_over_omega1}};
    }
    static FrequencyProfile reversed_sine_closing(double r, double duration = 1.0) {
        return {r, ReversedSineClosing{duration}};
    }
    static FrequencyProfile piecewise_linear(double r, std::vector<Breakpoint> points) {
        return {r, PiecewiseLinear{std::move(points)}};
    }

    bool operator==(const FrequencyProfile&) const = default;
};

inline void validate(const FrequencyProfile& p) {
    refrig::detail::require(std::isfinite(p.freq_ratio_r) && p.freq_ratio_r >= 1.0,
                    "profile frequency ratio must be >= 1");
    std::visit(
        [](const auto& sh) {
            using T = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<T, SineOpening> || std::is_same_v<T, ReversedSineClosing>) {
                refrig::detail::require(std::isfinite(sh.duration) && sh.duration > 0.0,
                                "profile duration must be > 0");
            } else if constexpr (std::is_same_v<T, ConstantFrequency>) {
                refrig::detail::require(std::isfinite(sh.omega_over_omega1) && sh.omega_over_omega1 > 0.0,
                                "constant profile level must be > 0");
            } else {
                refrig::detail::require(!sh.points.empty(), "piecewise profile needs breakpoints");
                refrig::detail::require(sh.points.front().s == 0.0, "first breakpoint must be at s=0");
                for (std::size_t i = 0; i < sh.points.size(); ++i) {
                    const auto& b = sh.points[i];
                    refrig::detail::require(std::isfinite(b.omega_over_omega1) && b.omega_over_omega1 > 0.0,
                                    "breakpoint levels must be > 0");
                    if (i > 0) {
                        refrig::detail::require(b.s > sh.points[i - 1].s,
                                        "breakpoints must be strictly increasing in s");
                    }
                }
            }
        },
        p.shape);
}

/// omega(s)/omega1.
inline double omega_at(const FrequencyProfile& p, double s) {
    const double low = 1.0 / p.freq_ratio_r;
    s = std::max(s, 0.0);
    return std::visit(
        [&](const auto& sh) -> double {
            using T = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<T, SineOpening>) {
                if (s >= sh.duration) return low;
                return 1.0 + (low - 1.0) * std::sin(0.5 * constants::pi * s / sh.duration);
            } else if constexpr (std::is_same_v<T, ReversedSineClosing>) {
                if (s >= sh.duration) return 1.0;
                return 1.0 + (low - 1.0) * std::cos(0.5 * constants::pi * s / sh.duration);
            } else if constexpr (std::is_same_v<T, ConstantFrequency>) {
                return sh.omega_over_omega1;
            } else {
                const auto& pts = sh.points;
                if (s >= pts.back().s) return pts.back().omega_over_omega1;
                auto hi = std::upper_bound(pts.begin(), pts.end(), s,
                                           [](double v, const Breakpoint& b) { return v < b.s; });
                auto lo = std::prev(hi);
                const double w = (s - lo->s) / (hi->s - lo->s);
                return lo->omega_over_omega1 + w * (hi->omega_over_omega1 - lo->omega_over_omega1);
            }
        },
        p.shape);
}

/// Points in (0, horizon) where omega(s) is not smooth. Integrators split there.
inline std::vector<double> kinks(const FrequencyProfile& p, double horizon) {
    std::vector<double> out;
    std::visit(
        [&](const auto& sh) {
            using T = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<T, SineOpening> || std::is_same_v<T, ReversedSineClosing>) {
                if (sh.duration < horizon) out.push_back(sh.duration);
            } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
                for (const auto& b : sh.points)
                    if (b.s > 0.0 && b.s < horizon) out.push_back(b.s);
            }
        },
        p.shape);
    return out;
}

/// Minimum of omega(s)/omega1 over [0, horizon].
inline double min_omega_over(const FrequencyProfile& p, double horizon) {
    double lo = std::min(omega_at(p, 0.0), omega_at(p, horizon));
    for (double k : kinks(p, horizon)) lo = std::min(lo, omega_at(p, k));
    return lo;
}

inline std::string shape_name(const FrequencyProfile& p) {
    return std::visit(
        [](const auto& sh) -> std::string {
            using T = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<T, SineOpening>) return "sine_opening";
            else if constexpr (std::is_same_v<T, ConstantFrequency>) return "constant";
            else if constexpr (std::is_same_v<T, PiecewiseLinear>) return "piecewise_linear";
            else return "reversed_sine_closing";
        },
        p.shape);
}

} // namespace refrig
