#pragma once

// Refrigeration-cycle runs, one-axis parameter sweeps and the Fig.-4-style
// reference run.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "refrig/adiabatic_solver.hpp"
#include "refrig/error.hpp"
#include "refrig/frequency_profile.hpp"
#include "refrig/master_equation_oracle.hpp"
#include "refrig/oscillator_thermo.hpp"
#include "refrig/output.hpp"
#include "refrig/units_params.hpp"

namespace refrig::cycle {

using adiabatic::EtaTrajectory;
using output::TimeSeriesRecord;
using units::DimensionlessParams;

/// Start thermalized at omega1.
struct ThermalClosed {
    bool operator==(const ThermalClosed&) const = default;
};

/// Start thermalized at omega0, close along the reversed sine over one
/// tau_open, hold closed for d_close, then open. Not part of the reference
/// model; flagged in run summaries.
struct FiniteDwell {
    double d_close{0.0};
    bool operator==(const FiniteDwell&) const = default;
};

using InitMode = std::variant<ThermalClosed, FiniteDwell>;

struct OutputSpec {
    std::string path{"out"};
    std::string format{"csv"};
    bool operator==(const OutputSpec&) const = default;
};

struct CycleConfig {
    DimensionlessParams dimensionless{};
    FrequencyProfile profile{FrequencyProfile::sine_opening(2.0)};
    InitMode init_mode{ThermalClosed{}};
    double horizon{10.0};
    bool with_oracle{false};
    OutputSpec output{};

    std::size_t samples_per_tau{2000};
    double ode_step{1e-4};
    double quadrature_tol{1e-12};
    double oracle_step{1e-4};
    std::optional<double> omega0_tau_open;

    bool operator==(const CycleConfig&) const = default;
};

inline constexpr double solver_agreement_tol = 1e-6;
inline constexpr double oracle_agreement_tol = 1e-3;
inline constexpr double recovery_target = 0.997;

/// Sets the frequency ratio on both the parameters and the profile.
inline void set_ratio(CycleConfig& cfg, double r) {
    cfg.dimensionless.freq_ratio_r = r;
    cfg.profile.freq_ratio_r = r;
}

inline void validate(const CycleConfig& cfg) {
    units::validate(cfg.dimensionless);
    refrig::validate(cfg.profile);
    refrig::detail::require(cfg.profile.freq_ratio_r == cfg.dimensionless.freq_ratio_r,
                    "profile frequency ratio does not match freq_ratio_r");
    refrig::detail::require(std::isfinite(cfg.horizon) && cfg.horizon >= 1.0, "horizon must be >= 1");
    if (const auto* fd = std::get_if<FiniteDwell>(&cfg.init_mode)) {
        refrig::detail::require(std::isfinite(fd->d_close) && fd->d_close >= 0.0, "d_close must be >= 0");
    }
    refrig::detail::require(cfg.samples_per_tau > 0, "samples_per_tau must be > 0");
    refrig::detail::require(cfg.ode_step > 0.0 && cfg.oracle_step > 0.0 && cfg.quadrature_tol > 0.0,
                    "solver steps and tolerances must be > 0");
    refrig::detail::require(cfg.output.format == "csv", "only csv output is supported");
}

struct CycleSummary {
    double min_T_ratio{};
    double argmin_s{};
    adiabatic::Recovery recovery;
    double final_eta{};
    double eta_at_opening{};
    bool finite_dwell_extension{false};

    bool operator==(const CycleSummary& o) const {
        return min_T_ratio == o.min_T_ratio && argmin_s == o.argmin_s &&
               recovery.recovered == o.recovery.recovered && recovery.s == o.recovery.s &&
               recovery.horizon == o.recovery.horizon && final_eta == o.final_eta &&
               eta_at_opening == o.eta_at_opening &&
               finite_dwell_extension == o.finite_dwell_extension;
    }
};

struct CycleResult {
    TimeSeriesRecord record;
    CycleSummary summary;
    EtaTrajectory trajectory;  // closed-form route, full precision
    double ode_max_rel_dev{};
    std::optional<double> oracle_max_rel_dev;
    std::vector<std::string> notes;
};

namespace detail {

inline double max_rel_dev(const EtaTrajectory& a, const EtaTrajectory& b) {
    if (a.samples.size() != b.samples.size()) {
        throw Error(ErrorKind::cross_check, "solver cross-check failed: sample grids differ");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        worst = std::max(worst, std::abs(a.samples[i].eta - b.samples[i].eta) / b.samples[i].eta);
    }
    return worst;
}

inline oracle::PopulationVector run_oracle_prephase(const CycleConfig& cfg,
                                                    const FrequencyProfile& closing,
                                                    double span) {
    const auto& d = cfg.dimensionless;
    const auto start = thermo::thermal_state(d.theta0);
    const auto n_max = oracle::truncation_level(d, closing, span, start.mean_n());
    oracle::PopulationVector last;
    oracle::evolve_populations(d, closing, oracle::populations_from_quenched(start, n_max), span,
                               {.step = cfg.oracle_step, .samples_per_tau = cfg.samples_per_tau},
                               [&](double, const oracle::PopulationVector& pv) { last = pv; });
    return last;
}

} // namespace detail

inline CycleResult run_cycle(const CycleConfig& cfg) {
    validate(cfg);
    const auto& d = cfg.dimensionless;
    const adiabatic::QuadratureOptions qopt{cfg.quadrature_tol, cfg.samples_per_tau,
                                            cfg.omega0_tau_open};
    const adiabatic::OdeOptions oopt{cfg.ode_step, cfg.samples_per_tau, cfg.omega0_tau_open};

    CycleResult res;
    double eta0 = adiabatic::closed_equilibrium_eta(d);
    const auto* dwell = std::get_if<FiniteDwell>(&cfg.init_mode);
    const auto closing = FrequencyProfile::reversed_sine_closing(d.freq_ratio_r, 1.0);
    const double closing_span = dwell ? 1.0 + dwell->d_close : 0.0;
    if (dwell) {
        const auto pre = adiabatic::evolve_eta_closed_form(
            d, closing, thermo::thermal_state(d.theta0).eta, closing_span, qopt);
        eta0 = pre.samples.back().eta;
        res.notes.push_back("extension: finite closed dwell (reversed-sine closing over 1 tau_open, "
                            "dwell " +
                            output::format_roundtrip(dwell->d_close) + " tau_open) precedes s=0");
    }

    res.trajectory = adiabatic::evolve_eta_closed_form(d, cfg.profile, eta0, cfg.horizon, qopt);
    const auto ode = adiabatic::evolve_eta_ode(d, cfg.profile, eta0, cfg.horizon, oopt);
    res.ode_max_rel_dev = detail::max_rel_dev(ode, res.trajectory);
    if (res.ode_max_rel_dev > solver_agreement_tol) {
        std::ostringstream os;
        os << "solver cross-check failed: ODE vs closed form relative deviation "
           << res.ode_max_rel_dev << " > " << solver_agreement_tol;
        throw Error(ErrorKind::cross_check, os.str());
    }
    for (const auto& w : res.trajectory.info.warnings) res.notes.push_back("warning: " + w);

    if (cfg.with_oracle) {
        oracle::PopulationVector init;
        if (dwell) {
            init = detail::run_oracle_prephase(cfg, closing, closing_span);
        } else {
            const auto start = thermo::thermal_state(d.theta0 * d.freq_ratio_r);
            init = oracle::populations_from_quenched(
                start, oracle::truncation_level(d, cfg.profile, cfg.horizon, start.mean_n()));
        }
        const auto pops = oracle::evolve_populations(
            d, cfg.profile, init, cfg.horizon,
            {.step = cfg.oracle_step, .samples_per_tau = cfg.samples_per_tau});
        double worst = 0.0;
        for (std::size_t i = 0; i < pops.samples.size(); ++i) {
            const double eta = res.trajectory.samples[i].eta;
            worst = std::max(worst, std::abs(pops.samples[i].mean_n + 1.0 - eta) / eta);
        }
        res.oracle_max_rel_dev = worst;
        if (worst > oracle_agreement_tol) {
            std::ostringstream os;
            os << "solver cross-check failed: population oracle vs closed form relative deviation "
               << worst << " > " << oracle_agreement_tol;
            throw Error(ErrorKind::cross_check, os.str());
        }
    }

    res.record = TimeSeriesRecord::from(res.trajectory);
    const auto lo = adiabatic::min_temperature(res.trajectory);
    res.summary = {.min_T_ratio = lo.value,
                   .argmin_s = lo.s,
                   .recovery = adiabatic::recovery_time(res.trajectory, recovery_target),
                   .final_eta = res.trajectory.samples.back().eta,
                   .eta_at_opening = eta0,
                   .finite_dwell_extension = dwell != nullptr};
    return res;
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepAxis { theta0, freq_ratio_r, gamma_tau_g };

inline const char* axis_column(SweepAxis a) {
    switch (a) {
    case SweepAxis::theta0: return "theta0";
    case SweepAxis::freq_ratio_r: return "freq_ratio_r";
    case SweepAxis::gamma_tau_g: return "gamma_tau_g";
    }
    return "?";
}

struct ValueRange {
    double min{};
    double max{};
    std::size_t count{};
    bool log{false};
};

struct SweepSpec {
    SweepAxis axis{SweepAxis::freq_ratio_r};
    std::variant<std::vector<double>, ValueRange> values;
    CycleConfig base;
};

inline std::vector<double> expand_values(const SweepSpec& spec) {
    std::vector<double> out;
    if (const auto* list = std::get_if<std::vector<double>>(&spec.values)) {
        out = *list;
    } else {
        const auto& r = std::get<ValueRange>(spec.values);
        refrig::detail::require(r.count >= 1, "sweep range needs count >= 1");
        refrig::detail::require(std::isfinite(r.min) && std::isfinite(r.max) && r.max >= r.min,
                        "sweep range needs min <= max");
        refrig::detail::require(!r.log || r.min > 0.0, "log sweep range needs min > 0");
        for (std::size_t i = 0; i < r.count; ++i) {
            const double f = r.count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(r.count - 1);
            out.push_back(r.log ? std::exp(std::log(r.min) + f * (std::log(r.max) - std::log(r.min)))
                                : r.min + f * (r.max - r.min));
        }
    }
    refrig::detail::require(!out.empty(), "sweep needs at least one value");
    return out;
}

inline CycleConfig apply_axis(CycleConfig cfg, SweepAxis axis, double value) {
    switch (axis) {
    case SweepAxis::theta0: cfg.dimensionless.theta0 = value; break;
    case SweepAxis::freq_ratio_r: set_ratio(cfg, value); break;
    case SweepAxis::gamma_tau_g: cfg.dimensionless.gamma_tau_g = value; break;
    }
    return cfg;
}

struct SweepRow {
    double value{};
    std::optional<CycleSummary> summary;
    std::string error;  // set when the row's run failed
};

/// One row per value, in input order. Rows are independent and may run on
/// up to `threads` workers; results do not depend on the thread count.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, std::size_t threads = 1) {
    const auto values = expand_values(spec);
    for (double v : values) {
        validate(apply_axis(spec.base, spec.axis, v));
    }
    std::vector<SweepRow> rows(values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            rows[i].value = values[i];
            try {
                rows[i].summary = run_cycle(apply_axis(spec.base, spec.axis, values[i])).summary;
            } catch (const std::exception& e) {
                rows[i].error = e.what();
            }
        }
    };
    threads = std::clamp<std::size_t>(threads, 1, values.size());
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    return rows;
}

inline std::string sweep_to_csv(const std::vector<SweepRow>& rows, SweepAxis axis) {
    std::string out = std::string(axis_column(axis)) + ",min_T_ratio,argmin_s,recovery_s,status\n";
    for (const auto& r : rows) {
        out += output::format_double(r.value);
        if (r.summary) {
            const auto& s = *r.summary;
            out += ',' + output::format_double(s.min_T_ratio) + ',' +
                   output::format_double(s.argmin_s) + ',';
            if (s.recovery.recovered) out += output::format_double(s.recovery.s) + ",ok\n";
            else out += ",not_recovered\n";
        } else {
            out += ",,,," + output::csv_field("error: " + r.error) + '\n';
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reference run

inline constexpr double fig4_min_expected = 0.65;
inline constexpr double fig4_min_tol = 0.05;
inline constexpr double fig4_recovery_expected = 6.0;
inline constexpr double fig4_recovery_tol = 1.0;

/// theta0 = 0.032, r = 2, g = 1, thermal start at omega1, 10 tau_open.
inline CycleConfig fig4_config() {
    CycleConfig cfg;
    cfg.dimensionless = {.theta0 = 0.032, .freq_ratio_r = 2.0, .gamma_tau_g = 1.0};
    cfg.profile = FrequencyProfile::sine_opening(2.0);
    cfg.horizon = 10.0;
    return cfg;
}

struct Fig4Report {
    CycleResult result;
    bool min_ok{};
    bool recovery_ok{};
    bool passed() const { return min_ok && recovery_ok; }
};

inline Fig4Report reproduce_fig4(bool with_oracle = false) {
    auto cfg = fig4_config();
    cfg.with_oracle = with_oracle;
    Fig4Report rep{run_cycle(cfg), false, false};
    const auto& s = rep.result.summary;
    rep.min_ok = std::abs(s.min_T_ratio - fig4_min_expected) <= fig4_min_tol;
    rep.recovery_ok = s.recovery.recovered &&
                      std::abs(s.recovery.s - fig4_recovery_expected) <= fig4_recovery_tol;
    return rep;
}

/// Writes trajectory.csv and plot_trajectory.py into `dir`.
inline void write_cycle_outputs(const CycleResult& res, const std::filesystem::path& dir) {
    const auto csv = dir / "trajectory.csv";
    output::emit_csv(res.record, csv);
    output::emit_plot_script(res.record, csv, dir / "plot_trajectory.py");
}

inline void write_sweep_outputs(const std::vector<SweepRow>& rows, SweepAxis axis, bool log_axis,
                                const std::filesystem::path& dir) {
    output::write_file(dir / "sweep.csv", sweep_to_csv(rows, axis));
    output::write_file(dir / "plot_sweep.py",
                       output::sweep_plot_script("sweep.csv", axis_column(axis), "plot_sweep.png",
                                                 log_axis));
}

} // namespace refrig::cycle
