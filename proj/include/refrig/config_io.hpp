#pragma once

// Flat key-value configuration files for CycleConfig.
//
//   # comment
//   [dimensionless]
//   theta0 = 0.032
//   freq_ratio_r = 2
//   gamma_tau_g = 1
//   [profile]
//   shape = sine_opening        # constant | piecewise_linear | reversed_sine_closing
//   duration = 1                # sine shapes
//   level = 1                   # constant: omega/omega1
//   breakpoints = 0:1 1:0.5     # piecewise_linear: s:omega/omega1 pairs
//   [init_mode]
//   mode = thermal_closed       # or finite_dwell
//   d_close = 0
//   [run]
//   horizon = 10
//   with_oracle = false
//   samples_per_tau = 2000
//   ode_step = 0.0001
//   quadrature_tol = 1e-12
//   oracle_step = 0.0001
//   omega0_tau_open = 125.66    # optional
//   [output]
//   path = out
//   format = csv
//
// The profile's frequency ratio is always freq_ratio_r.

#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include "refrig/cycle_engine.hpp"
#include "refrig/error.hpp"
#include "refrig/output.hpp"

namespace refrig::config {

using cycle::CycleConfig;

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

[[noreturn]] inline void fail(std::size_t line, const std::string& msg) {
    throw Error(ErrorKind::validation, "config line " + std::to_string(line) + ": " + msg);
}

inline bool parse_bool(const std::string& v, std::size_t line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(line, "expected boolean, got '" + v + "'");
}

inline std::vector<Breakpoint> parse_breakpoints(const std::string& v, std::size_t line) {
    std::vector<Breakpoint> pts;
    std::istringstream is(v);
    std::string tok;
    while (is >> tok) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos) fail(line, "breakpoint '" + tok + "' is not s:level");
        pts.push_back({output::parse_double(tok.substr(0, colon)),
                       output::parse_double(tok.substr(colon + 1))});
    }
    return pts;
}

} // namespace detail

/// Key, value pairs keyed by "section.key".
using Entries = std::map<std::string, std::pair<std::string, std::size_t>>;

inline Entries parse_entries(std::string_view text) {
    Entries out;
    std::string section;
    std::size_t line_no = 0;
    std::istringstream is{std::string(text)};
    std::string raw;
    while (std::getline(is, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const auto line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') detail::fail(line_no, "unterminated section header");
            section = detail::trim(std::string_view(line).substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) detail::fail(line_no, "expected key = value");
        if (section.empty()) detail::fail(line_no, "key outside of a section");
        const auto key = section + "." + detail::trim(std::string_view(line).substr(0, eq));
        if (out.count(key)) detail::fail(line_no, "duplicate key '" + key + "'");
        out[key] = {detail::trim(std::string_view(line).substr(eq + 1)), line_no};
    }
    return out;
}

/// Applies entries on top of `cfg`. Unknown keys are rejected.
inline CycleConfig apply_entries(CycleConfig cfg, const Entries& entries) {
    static const std::set<std::string> known{
        "dimensionless.theta0", "dimensionless.freq_ratio_r", "dimensionless.gamma_tau_g",
        "profile.shape", "profile.duration", "profile.level", "profile.breakpoints",
        "init_mode.mode", "init_mode.d_close", "run.horizon", "run.with_oracle",
        "run.samples_per_tau", "run.ode_step", "run.quadrature_tol", "run.oracle_step",
        "run.omega0_tau_open", "output.path", "output.format"};
    for (const auto& [key, val] : entries) {
        if (!known.count(key)) detail::fail(val.second, "unknown key '" + key + "'");
    }
    auto get = [&](const std::string& key) -> const std::pair<std::string, std::size_t>* {
        const auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };
    auto num = [&](const std::pair<std::string, std::size_t>& v) {
        try {
            return output::parse_double(v.first);
        } catch (const Error&) {
            detail::fail(v.second, "expected a number, got '" + v.first + "'");
        }
    };

    if (auto v = get("dimensionless.theta0")) cfg.dimensionless.theta0 = num(*v);
    if (auto v = get("dimensionless.freq_ratio_r")) cfg.dimensionless.freq_ratio_r = num(*v);
    if (auto v = get("dimensionless.gamma_tau_g")) cfg.dimensionless.gamma_tau_g = num(*v);

    if (auto v = get("profile.shape")) {
        const auto& shape = v->first;
        if (shape == "sine_opening") cfg.profile.shape = SineOpening{};
        else if (shape == "reversed_sine_closing") cfg.profile.shape = ReversedSineClosing{};
        else if (shape == "constant") cfg.profile.shape = ConstantFrequency{};
        else if (shape == "piecewise_linear") cfg.profile.shape = PiecewiseLinear{};
        else detail::fail(v->second, "unknown profile shape '" + shape + "'");
    }
    if (auto v = get("profile.duration")) {
        if (auto* s = std::get_if<SineOpening>(&cfg.profile.shape)) s->duration = num(*v);
        else if (auto* c = std::get_if<ReversedSineClosing>(&cfg.profile.shape)) c->duration = num(*v);
        else detail::fail(v->second, "duration applies to sine shapes only");
    }
    if (auto v = get("profile.level")) {
        auto* c = std::get_if<ConstantFrequency>(&cfg.profile.shape);
        if (!c) detail::fail(v->second, "level applies to the constant shape only");
        c->omega_over_omega1 = num(*v);
    }
    if (auto v = get("profile.breakpoints")) {
        auto* pw = std::get_if<PiecewiseLinear>(&cfg.profile.shape);
        if (!pw) detail::fail(v->second, "breakpoints apply to piecewise_linear only");
        pw->points = detail::parse_breakpoints(v->first, v->second);
    }
    cfg.profile.freq_ratio_r = cfg.dimensionless.freq_ratio_r;

    if (auto v = get("init_mode.mode")) {
        if (v->first == "thermal_closed") cfg.init_mode = cycle::ThermalClosed{};
        else if (v->first == "finite_dwell") cfg.init_mode = cycle::FiniteDwell{};
        else detail::fail(v->second, "unknown init mode '" + v->first + "'");
    }
    if (auto v = get("init_mode.d_close")) {
        auto* fd = std::get_if<cycle::FiniteDwell>(&cfg.init_mode);
        if (!fd) detail::fail(v->second, "d_close requires mode = finite_dwell");
        fd->d_close = num(*v);
    }

    if (auto v = get("run.horizon")) cfg.horizon = num(*v);
    if (auto v = get("run.with_oracle")) cfg.with_oracle = detail::parse_bool(v->first, v->second);
    if (auto v = get("run.samples_per_tau")) {
        const double x = num(*v);
        if (!(x >= 1.0 && x == std::floor(x))) detail::fail(v->second, "samples_per_tau must be a positive integer");
        cfg.samples_per_tau = static_cast<std::size_t>(x);
    }
    if (auto v = get("run.ode_step")) cfg.ode_step = num(*v);
    if (auto v = get("run.quadrature_tol")) cfg.quadrature_tol = num(*v);
    if (auto v = get("run.oracle_step")) cfg.oracle_step = num(*v);
    if (auto v = get("run.omega0_tau_open")) cfg.omega0_tau_open = num(*v);
    if (auto v = get("output.path")) cfg.output.path = v->first;
    if (auto v = get("output.format")) cfg.output.format = v->first;
    return cfg;
}

inline CycleConfig parse_config(std::string_view text, CycleConfig base = {}) {
    return apply_entries(std::move(base), parse_entries(text));
}

inline CycleConfig load_config(const std::filesystem::path& path, CycleConfig base = {}) {
    return parse_config(output::read_file(path), std::move(base));
}

inline std::string serialize_config(const CycleConfig& cfg) {
    using output::format_roundtrip;
    std::ostringstream os;
    os << "[dimensionless]\n"
       << "theta0 = " << format_roundtrip(cfg.dimensionless.theta0) << '\n'
       << "freq_ratio_r = " << format_roundtrip(cfg.dimensionless.freq_ratio_r) << '\n'
       << "gamma_tau_g = " << format_roundtrip(cfg.dimensionless.gamma_tau_g) << "\n\n";

    os << "[profile]\nshape = " << shape_name(cfg.profile) << '\n';
    std::visit(
        [&](const auto& sh) {
            using T = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<T, SineOpening> || std::is_same_v<T, ReversedSineClosing>) {
                os << "duration = " << format_roundtrip(sh.duration) << '\n';
            } else if constexpr (std::is_same_v<T, ConstantFrequency>) {
                os << "level = " << format_roundtrip(sh.omega_over_omega1) << '\n';
            } else {
                os << "breakpoints =";
                for (const auto& b : sh.points)
                    os << ' ' << format_roundtrip(b.s) << ':' << format_roundtrip(b.omega_over_omega1);
                os << '\n';
            }
        },
        cfg.profile.shape);

    os << "\n[init_mode]\n";
    if (const auto* fd = std::get_if<cycle::FiniteDwell>(&cfg.init_mode)) {
        os << "mode = finite_dwell\nd_close = " << format_roundtrip(fd->d_close) << '\n';
    } else {
        os << "mode = thermal_closed\n";
    }

    os << "\n[run]\n"
       << "horizon = " << format_roundtrip(cfg.horizon) << '\n'
       << "with_oracle = " << (cfg.with_oracle ? "true" : "false") << '\n'
       << "samples_per_tau = " << cfg.samples_per_tau << '\n'
       << "ode_step = " << format_roundtrip(cfg.ode_step) << '\n'
       << "quadrature_tol = " << format_roundtrip(cfg.quadrature_tol) << '\n'
       << "oracle_step = " << format_roundtrip(cfg.oracle_step) << '\n';
    if (cfg.omega0_tau_open) os << "omega0_tau_open = " << format_roundtrip(*cfg.omega0_tau_open) << '\n';

    os << "\n[output]\npath = " << cfg.output.path << "\nformat = " << cfg.output.format << '\n';
    return os.str();
}

} // namespace refrig::config
