// refrig: command-line front end for cooling-cycle runs, sweeps, unit
// conversion and the reference Fig.-4-style reproduction.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "refrig/refrig.hpp"

namespace {

using namespace refrig;
namespace fs = std::filesystem;

struct RunFlags {
    std::string config_file;
    double theta0{};
    double ratio{};
    double gamma_tau{};
    double horizon{};
    bool with_oracle{false};
    std::string init_mode;
    double d_close{};
    std::size_t samples_per_tau{};
    double omega0_tau_open{};

    CLI::Option* o_theta0{};
    CLI::Option* o_ratio{};
    CLI::Option* o_gamma{};
    CLI::Option* o_horizon{};
    CLI::Option* o_init{};
    CLI::Option* o_dclose{};
    CLI::Option* o_spt{};
    CLI::Option* o_w0t{};

    void add_to(CLI::App& app) {
        app.add_option("--config", config_file, "Configuration file (flags override it)");
        o_theta0 = app.add_option("--theta0", theta0, "hbar*omega0/(k_B T)");
        o_ratio = app.add_option("--ratio", ratio, "omega1/omega0");
        o_gamma = app.add_option("--gamma-tau", gamma_tau, "gamma*tau_open");
        o_horizon = app.add_option("--horizon", horizon, "Run length in units of tau_open");
        app.add_flag("--with-oracle", with_oracle, "Cross-check against the population oracle");
        o_init = app.add_option("--init-mode", init_mode, "thermal_closed | finite_dwell")
                     ->check(CLI::IsMember({"thermal_closed", "finite_dwell"}));
        o_dclose = app.add_option("--d-close", d_close, "Closed dwell in units of tau_open");
        o_spt = app.add_option("--samples-per-tau", samples_per_tau, "Output samples per tau_open");
        o_w0t = app.add_option("--omega0-tau-open", omega0_tau_open,
                               "omega0*tau_open, enables the adiabaticity warning");
    }

    cycle::CycleConfig build() const {
        cycle::CycleConfig cfg = config_file.empty() ? cycle::CycleConfig{}
                                                     : config::load_config(config_file);
        if (*o_theta0) cfg.dimensionless.theta0 = theta0;
        if (*o_ratio) cycle::set_ratio(cfg, ratio);
        if (*o_gamma) cfg.dimensionless.gamma_tau_g = gamma_tau;
        if (*o_horizon) cfg.horizon = horizon;
        if (with_oracle) cfg.with_oracle = true;
        if (*o_init) {
            if (init_mode == "thermal_closed") cfg.init_mode = cycle::ThermalClosed{};
            else cfg.init_mode = cycle::FiniteDwell{};
        }
        if (*o_dclose) {
            auto* fd = std::get_if<cycle::FiniteDwell>(&cfg.init_mode);
            if (!fd) throw Error(ErrorKind::validation, "--d-close requires --init-mode finite_dwell");
            fd->d_close = d_close;
        }
        if (*o_spt) cfg.samples_per_tau = samples_per_tau;
        if (*o_w0t) cfg.omega0_tau_open = omega0_tau_open;
        return cfg;
    }
};

void print_summary(const cycle::CycleResult& res) {
    const auto& s = res.summary;
    std::printf("min_T_ratio    %s\n", output::format_double(s.min_T_ratio).c_str());
    std::printf("argmin_s       %s\n", output::format_double(s.argmin_s).c_str());
    if (s.recovery.recovered)
        std::printf("recovery_s     %s  (T/T >= %.3f)\n", output::format_double(s.recovery.s).c_str(),
                    cycle::recovery_target);
    else
        std::printf("recovery_s     not recovered within %s\n",
                    output::format_double(s.recovery.horizon).c_str());
    std::printf("eta_at_opening %s\n", output::format_double(s.eta_at_opening).c_str());
    std::printf("final_eta      %s\n", output::format_double(s.final_eta).c_str());
    std::printf("ode_max_rel_dev    %.3e\n", res.ode_max_rel_dev);
    if (res.oracle_max_rel_dev) std::printf("oracle_max_rel_dev %.3e\n", *res.oracle_max_rel_dev);
    for (const auto& n : res.notes) std::fprintf(stderr, "%s\n", n.c_str());
}

cycle::ValueRange parse_range(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == ':') {
            parts.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    if (parts.size() < 3 || parts.size() > 4 || (parts.size() == 4 && parts[3] != "log"))
        throw Error(ErrorKind::validation, "--range expects min:max:count[:log], got '" + text + "'");
    const double count = output::parse_double(parts[2]);
    if (!(count >= 1.0 && count == static_cast<double>(static_cast<std::size_t>(count))))
        throw Error(ErrorKind::validation, "--range count must be a positive integer");
    return {output::parse_double(parts[0]), output::parse_double(parts[1]),
            static_cast<std::size_t>(count), parts.size() == 4};
}

int cmd_cycle(const RunFlags& flags, const std::string& out_dir, bool out_given) {
    auto cfg = flags.build();
    if (out_given) cfg.output.path = out_dir;
    const auto res = cycle::run_cycle(cfg);
    print_summary(res);
    const fs::path dir = cfg.output.path;
    cycle::write_cycle_outputs(res, dir);
    output::write_file(dir / "config.ini", config::serialize_config(cfg));
    std::printf("wrote %s\n", (dir / "trajectory.csv").string().c_str());
    return 0;
}

int cmd_sweep(const RunFlags& flags, const std::string& axis, const std::vector<double>& values,
              const std::string& range, std::size_t threads, const std::string& out_dir) {
    cycle::SweepSpec spec;
    spec.base = flags.build();
    spec.axis = axis == "theta0"  ? cycle::SweepAxis::theta0
              : axis == "ratio"   ? cycle::SweepAxis::freq_ratio_r
                                  : cycle::SweepAxis::gamma_tau_g;
    bool log_axis = false;
    if (!range.empty()) {
        const auto r = parse_range(range);
        log_axis = r.log;
        spec.values = r;
    } else {
        spec.values = values;
    }
    const auto rows = cycle::run_sweep(spec, threads);
    std::fputs(cycle::sweep_to_csv(rows, spec.axis).c_str(), stdout);
    cycle::write_sweep_outputs(rows, spec.axis, log_axis, out_dir);
    return 0;
}

int cmd_reproduce(const std::string& out_dir, bool with_oracle) {
    const auto rep = cycle::reproduce_fig4(with_oracle);
    const auto& s = rep.result.summary;
    std::printf("parameters: %s\n", units::describe(rep.result.trajectory.params).c_str());
    std::printf("[%s] min T(t)/T = %.4f (expected %.2f +/- %.2f)\n", rep.min_ok ? "PASS" : "FAIL",
                s.min_T_ratio, cycle::fig4_min_expected, cycle::fig4_min_tol);
    if (s.recovery.recovered)
        std::printf("[%s] recovery to T/T >= %.3f at s = %.4f (expected %.0f +/- %.0f)\n",
                    rep.recovery_ok ? "PASS" : "FAIL", cycle::recovery_target, s.recovery.s,
                    cycle::fig4_recovery_expected, cycle::fig4_recovery_tol);
    else
        std::printf("[FAIL] no recovery to T/T >= %.3f within the horizon\n", cycle::recovery_target);
    if (!out_dir.empty()) {
        cycle::write_cycle_outputs(rep.result, out_dir);
        std::printf("wrote %s\n", (fs::path(out_dir) / "trajectory.csv").string().c_str());
    }
    return rep.passed() ? 0 : 3;
}

struct ConvertFlags {
    double theta0{0.032};
    double ratio{2.0};
    double gamma_tau{1.0};
    double temperature{300.0};
    double tau_open_ps{100.0};
    double mass_kg{1e-25};
    bool from_si{false};
    double spring{};
    double coupling_max{};
    double gamma{};
};

int cmd_convert(const ConvertFlags& f) {
    if (f.from_si) {
        const units::PhysicalParams p{.mass_m = f.mass_kg,
                                      .spring_kappa = f.spring,
                                      .coupling_kappa_max = f.coupling_max,
                                      .bath_temperature_T = f.temperature,
                                      .relaxation_gamma = f.gamma,
                                      .tau_open = f.tau_open_ps * 1e-12};
        const auto modes = units::reduce_to_relative_mode(p);
        const auto d = units::to_dimensionless(p);
        std::printf("M_total      %s kg\nmu_reduced   %s kg\nkappa_cm     %s N/m\nkappa_rel    %s N/m\n",
                    output::format_double(modes.M_total).c_str(),
                    output::format_double(modes.mu_reduced).c_str(),
                    output::format_double(modes.kappa_cm).c_str(),
                    output::format_double(modes.kappa_rel).c_str());
        std::printf("theta0       %s\nfreq_ratio_r %s\ngamma_tau_g  %s\n",
                    output::format_double(d.theta0).c_str(),
                    output::format_double(d.freq_ratio_r).c_str(),
                    output::format_double(d.gamma_tau_g).c_str());
        return 0;
    }
    const units::DimensionlessParams d{f.theta0, f.ratio, f.gamma_tau};
    const auto q = units::si_roundtrip(d, f.temperature, {f.mass_kg, f.tau_open_ps * 1e-12});
    std::printf("omega0          %s rad/s\n", output::format_double(q.omega0).c_str());
    std::printf("omega1          %s rad/s\n", output::format_double(q.omega1).c_str());
    std::printf("tau_osc         %s ps\n", output::format_double(q.tau_osc * 1e12).c_str());
    std::printf("tau_osc_prime   %s ps\n", output::format_double(q.tau_osc_prime * 1e12).c_str());
    std::printf("gamma           %s 1/s  (tau_open = %s ps)\n", output::format_double(q.gamma).c_str(),
                output::format_roundtrip(f.tau_open_ps).c_str());
    const double w0t = q.omega0 * q.physical.tau_open;
    std::printf("omega0*tau_open %s\n", output::format_double(w0t).c_str());
    std::printf("spring_kappa    %s N/m  (mass %s kg)\n",
                output::format_double(q.physical.spring_kappa).c_str(),
                output::format_roundtrip(f.mass_kg).c_str());
    std::printf("coupling_max    %s N/m\n", output::format_double(q.physical.coupling_kappa_max).c_str());
    if (w0t < adiabatic::min_adiabatic_omega0_tau)
        std::fprintf(stderr, "warning: omega0*tau_open < 20*pi, outside the adiabatic regime\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Molecular refrigeration by conformational frequency changes"};
    app.require_subcommand(1);

    auto* cyc = app.add_subcommand("cycle", "Run one close/open cooling cycle");
    RunFlags cycle_flags;
    cycle_flags.add_to(*cyc);
    std::string cycle_out = "out";
    auto* cycle_out_opt = cyc->add_option("--out", cycle_out, "Output directory");

    auto* swp = app.add_subcommand("sweep", "Sweep one dimensionless parameter");
    RunFlags sweep_flags;
    sweep_flags.add_to(*swp);
    std::string axis;
    std::vector<double> values;
    std::string range;
    std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
    std::string sweep_out = "out";
    swp->add_option("--axis", axis, "Swept parameter")
        ->required()
        ->check(CLI::IsMember({"theta0", "ratio", "gamma-tau"}));
    auto* vals = swp->add_option("--values", values, "Explicit values");
    auto* rng = swp->add_option("--range", range, "min:max:count[:log]");
    vals->excludes(rng);
    swp->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    swp->add_option("--out", sweep_out, "Output directory");

    auto* conv = app.add_subcommand("convert-units", "Dimensionless groups <-> SI at temperature T");
    ConvertFlags cf;
    conv->add_option("--theta0", cf.theta0, "hbar*omega0/(k_B T)");
    conv->add_option("--ratio", cf.ratio, "omega1/omega0");
    conv->add_option("--gamma-tau", cf.gamma_tau, "gamma*tau_open");
    conv->add_option("--temperature-kelvin", cf.temperature, "Bath temperature");
    conv->add_option("--tau-open-ps", cf.tau_open_ps, "Opening time in ps");
    conv->add_option("--mass-kg", cf.mass_kg, "Lip mass in kg");
    conv->add_flag("--from-si", cf.from_si, "Convert SI inputs to dimensionless groups");
    conv->add_option("--spring-n-per-m", cf.spring, "Lip spring constant (with --from-si)");
    conv->add_option("--coupling-max-n-per-m", cf.coupling_max, "Contracted coupling (with --from-si)");
    conv->add_option("--gamma-per-s", cf.gamma, "Relaxation rate (with --from-si)");

    auto* fig = app.add_subcommand("reproduce-fig4", "Reference run with both anchors checked");
    std::string fig_out;
    bool fig_oracle = false;
    fig->add_option("--out", fig_out, "Output directory");
    fig->add_flag("--with-oracle", fig_oracle, "Also run the population oracle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*cyc) return cmd_cycle(cycle_flags, cycle_out, cycle_out_opt->count() > 0);
        if (*swp) {
            if (values.empty() && range.empty())
                throw Error(ErrorKind::validation, "sweep needs --values or --range");
            return cmd_sweep(sweep_flags, axis, values, range, threads, sweep_out);
        }
        if (*conv) return cmd_convert(cf);
        if (*fig) return cmd_reproduce(fig_out, fig_oracle);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
