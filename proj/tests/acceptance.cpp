// Acceptance gate: one PASS/FAIL line per criterion, with wall-clock budgets.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "refrig/refrig.hpp"

using namespace refrig;

namespace {

struct Outcome {
    bool ok{};
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> check;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// Tolerances
constexpr double closed_vs_ode_tol = 1e-8;
constexpr double oracle_vs_eta_tol = 1e-4;
constexpr double geometric_tol = 1e-6;
constexpr double equilibrium_ratio_tol = 1e-12;
constexpr double fixed_point_tol = 1e-10;
constexpr double ideal_limit_tol = 1e-3;
constexpr double si_rel_tol = 0.005;
constexpr double grid_horizon = 3.0;

Outcome fig4_minimum() {
    const auto rep = cycle::reproduce_fig4();
    const double m = rep.result.summary.min_T_ratio;
    return {std::abs(m - 0.65) <= 0.05, fmt("min T/T = %.5f at s = %.4f (want 0.65 +/- 0.05)", m,
                                            rep.result.summary.argmin_s)};
}

Outcome fig4_recovery() {
    const auto rep = cycle::reproduce_fig4();
    const auto& r = rep.result.summary.recovery;
    return {r.recovered && std::abs(r.s - 6.0) <= 1.0,
            r.recovered ? fmt("T/T >= 0.997 first at s = %.5f (want 6 +/- 1)", r.s)
                        : std::string("not recovered within horizon")};
}

Outcome ideal_limit() {
    auto cfg = cycle::fig4_config();
    cfg.dimensionless.gamma_tau_g = 1e-4;
    const auto res = cycle::run_cycle(cfg);
    const double m = res.summary.min_T_ratio;
    return {std::abs(m - 0.5) <= ideal_limit_tol, fmt("min T/T = %.6f (want 0.500 +/- 0.001)", m)};
}

Outcome solver_triangle() {
    double worst_ode = 0.0;
    double worst_oracle = 0.0;
    for (double th : {0.01, 0.032, 0.1})
        for (double r : {1.5, 2.0, 3.0})
            for (double g : {0.1, 1.0, 10.0}) {
                const units::DimensionlessParams d{th, r, g};
                const auto p = FrequencyProfile::sine_opening(r);
                const auto start = thermo::thermal_state(th * r);
                const auto cf = adiabatic::evolve_eta_closed_form(d, p, start.eta, grid_horizon);
                const auto ode = adiabatic::evolve_eta_ode(d, p, start.eta, grid_horizon);
                const auto init = oracle::populations_from_quenched(
                    start, oracle::truncation_level(d, p, grid_horizon, start.mean_n()));
                const auto pops = oracle::evolve_populations(d, p, init, grid_horizon);
                for (std::size_t i = 0; i < cf.samples.size(); ++i) {
                    const double eta = cf.samples[i].eta;
                    worst_ode = std::max(worst_ode, std::abs(ode.samples[i].eta - eta) / eta);
                    worst_oracle =
                        std::max(worst_oracle, std::abs(pops.samples[i].mean_n + 1.0 - eta) / eta);
                }
            }
    return {worst_ode <= closed_vs_ode_tol && worst_oracle <= oracle_vs_eta_tol,
            fmt("27 points: closed-form vs ODE %.2e (tol 1e-8), oracle vs eta %.2e (tol 1e-4)",
                worst_ode, worst_oracle)};
}

Outcome quenched_form() {
    const auto cfg = cycle::fig4_config();
    const auto& d = cfg.dimensionless;
    const auto start = thermo::thermal_state(d.theta0 * d.freq_ratio_r);
    const auto init = oracle::populations_from_quenched(
        start, oracle::truncation_level(d, cfg.profile, cfg.horizon, start.mean_n()));
    double worst = 0.0;
    oracle::evolve_populations(d, cfg.profile, init, cfg.horizon, {},
                               [&](double, const oracle::PopulationVector& pv) {
                                   worst = std::max(worst, oracle::geometric_deviation(pv, 0, 50));
                               });
    return {worst <= geometric_tol, fmt("max level-ratio deviation over n in [0,50]: %.2e (tol 1e-6)", worst)};
}

Outcome fixed_points() {
    double worst_ratio = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double th = 1e-3 * std::pow(1e4, i / 400.0);
        worst_ratio = std::max(worst_ratio,
                               std::abs(thermo::temperature_ratio(thermo::thermal_state(th), th) - 1.0));
    }
    const units::DimensionlessParams d{0.032, 2.0, 1.0};
    const auto p = FrequencyProfile::constant(2.0, 1.0);
    const double eq = adiabatic::closed_equilibrium_eta(d);
    const auto t = adiabatic::evolve_eta_ode(d, p, eq, 100.0, {.step = 1e-3, .samples_per_tau = 10});
    double worst_eta = 0.0;
    for (const auto& x : t.samples) worst_eta = std::max(worst_eta, std::abs(x.eta - eq) / eq);
    return {worst_ratio <= equilibrium_ratio_tol && worst_eta <= fixed_point_tol,
            fmt("|T/T - 1| max %.2e (tol 1e-12); constant-omega eta drift %.2e (tol 1e-10)",
                worst_ratio, worst_eta)};
}

Outcome si_anchor() {
    const auto q = units::si_roundtrip({0.032, 2.0, 1.0}, 300.0);
    const double t0 = q.tau_osc * 1e12;
    const double t1 = q.tau_osc_prime * 1e12;
    return {std::abs(t0 / 5.0 - 1.0) <= si_rel_tol && std::abs(t1 / 2.5 - 1.0) <= si_rel_tol,
            fmt("tau_osc = %.4f ps, tau_osc' = %.4f ps (want 5.0, 2.5 +/- 0.5%%)", t0, t1)};
}

Outcome monotonicity() {
    cycle::SweepSpec spec{cycle::SweepAxis::freq_ratio_r, std::vector<double>{1.5, 2.0, 3.0},
                          cycle::fig4_config()};
    const auto by_r = cycle::run_sweep(spec);
    spec.axis = cycle::SweepAxis::gamma_tau_g;
    spec.values = std::vector<double>{0.1, 1.0, 10.0};
    const auto by_g = cycle::run_sweep(spec);
    auto m = [](const std::vector<cycle::SweepRow>& rows, std::size_t i) {
        return rows[i].summary ? rows[i].summary->min_T_ratio : NAN;
    };
    const bool r_dec = m(by_r, 0) > m(by_r, 1) && m(by_r, 1) > m(by_r, 2);
    const bool g_inc = m(by_g, 0) < m(by_g, 1) && m(by_g, 1) < m(by_g, 2);

    bool tail_ok = true;
    for (double g : {0.1, 1.0, 10.0}) {
        auto cfg = cycle::fig4_config();
        cfg.dimensionless.gamma_tau_g = g;
        double prev = 0.0;
        for (const auto& x : cycle::run_cycle(cfg).trajectory.samples) {
            if (x.s < 1.0) continue;
            if (x.T_ratio < prev) tail_ok = false;
            prev = x.T_ratio;
        }
    }
    std::string detail = fmt("min T/T over r {1.5,2,3}: %.4f %.4f %.4f; ", m(by_r, 0), m(by_r, 1), m(by_r, 2));
    detail += fmt("over g {0.1,1,10}: %.4f %.4f %.4f; ", m(by_g, 0), m(by_g, 1), m(by_g, 2));
    detail += tail_ok ? "post-opening nondecreasing" : "post-opening NOT monotone";
    return {r_dec && g_inc && tail_ok, detail};
}

Outcome determinism() {
    const auto a = output::to_csv(cycle::reproduce_fig4().result.record);
    const auto b = output::to_csv(cycle::reproduce_fig4().result.record);
    cycle::SweepSpec spec{cycle::SweepAxis::gamma_tau_g, cycle::ValueRange{0.1, 10.0, 5, true},
                          cycle::fig4_config()};
    const auto s1 = cycle::sweep_to_csv(cycle::run_sweep(spec, 1), spec.axis);
    const auto s4 = cycle::sweep_to_csv(cycle::run_sweep(spec, 4), spec.axis);
    return {a == b && s1 == s4 && !a.empty(),
            std::string("reproduce CSV ") + (a == b ? "identical" : "DIFFERS") + " across runs; sweep CSV " +
                (s1 == s4 ? "identical" : "DIFFERS") + " for 1 vs 4 threads"};
}

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "reference minimum", 1.0, fig4_minimum},
        {2, "recovery anchor", 1.0, fig4_recovery},
        {3, "ideal-limit convergence", 5.0, ideal_limit},
        {4, "solver triangle", 120.0, solver_triangle},
        {5, "quenched-form preservation", 30.0, quenched_form},
        {6, "equilibrium fixed points", 1.0, fixed_points},
        {7, "SI anchor", 0.1, si_anchor},
        {8, "monotonicity", 10.0, monotonicity},
        {9, "determinism", 0.0, determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.check();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_budget = c.budget_s <= 0.0 || secs <= c.budget_s;
        const bool ok = out.ok && in_budget;
        if (!ok) ++failures;
        std::printf("[%s] %d. %s: %s; %.3f s", ok ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(), secs);
        if (c.budget_s > 0.0) std::printf(" (budget %.1f s%s)", c.budget_s, in_budget ? "" : ", EXCEEDED");
        std::printf("\n");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
