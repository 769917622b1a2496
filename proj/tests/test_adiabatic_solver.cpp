#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "refrig/adiabatic_solver.hpp"

using namespace refrig;
using namespace refrig::adiabatic;

namespace {

const DimensionlessParams fig4{0.032, 2.0, 1.0};
const auto fig4_profile = FrequencyProfile::sine_opening(2.0);

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const Sample& at(const EtaTrajectory& t, double s) {
    for (const auto& x : t.samples)
        if (std::abs(x.s - s) < 1e-12) return x;
    throw std::runtime_error("no sample at s");
}

} // namespace

TEST(SampleGrid, IncludesHorizonAndOpeningEnd) {
    const auto g = sample_grid(10.0, 2000);
    EXPECT_EQ(g.size(), 20001u);
    EXPECT_EQ(g[2000], 1.0);
    EXPECT_EQ(g.back(), 10.0);
    const auto h = sample_grid(1.00025, 2000);
    EXPECT_EQ(h.back(), 1.00025);
    EXPECT_THROW(sample_grid(0.0, 10), Error);
}

TEST(EvolveEtaOde, NoDissipationFreezesEta) {
    const DimensionlessParams d{0.032, 2.0, 0.0};
    const auto t = evolve_eta_ode(d, fig4_profile, 12.5, 3.0);
    for (const auto& x : t.samples) EXPECT_EQ(x.eta, 12.5);
}

TEST(EvolveEtaOde, ConstantFrequencyFixedPoint) {
    const DimensionlessParams d{0.032, 2.0, 1.0};
    const auto p = FrequencyProfile::constant(2.0, 1.0);
    const double eq = closed_equilibrium_eta(d);
    const auto t = evolve_eta_ode(d, p, eq, 100.0, {.step = 1e-3, .samples_per_tau = 10});
    for (const auto& x : t.samples) {
        EXPECT_NEAR(x.eta, eq, 1e-10 * eq);
        EXPECT_NEAR(x.T_ratio, 1.0, 1e-12);
    }
}

TEST(EvolveEtaOde, ConstantFrequencyRelaxesExponentially) {
    const DimensionlessParams d{0.1, 2.0, 2.0};
    const auto p = FrequencyProfile::constant(2.0, 0.5);
    const double eq = thermo::thermal_state(0.1).eta;
    const double eta0 = 3.0;
    const auto t = evolve_eta_ode(d, p, eta0, 4.0, {.samples_per_tau = 100});
    for (const auto& x : t.samples) {
        const double expect = std::exp(-2.0 * x.s) * eta0 + (1.0 - std::exp(-2.0 * x.s)) * eq;
        EXPECT_NEAR(x.eta, expect, 1e-12 * expect);
    }
}

TEST(EvolveEtaOde, FigureMinimumAboutSixtyFivePercent) {
    const auto t = evolve_eta_ode(fig4, fig4_profile, closed_equilibrium_eta(fig4), 10.0);
    const auto lo = min_temperature(t);
    EXPECT_NEAR(lo.value, 0.65, 0.05);
    EXPECT_GT(lo.s, 0.0);
    EXPECT_LT(lo.s, 1.0);
}

TEST(EvolveEtaOde, Errors) {
    EXPECT_THROW(evolve_eta_ode(fig4, fig4_profile, 1.0, 1.0), Error);
    EXPECT_THROW(evolve_eta_ode(fig4, fig4_profile, 5.0, 0.0), Error);
    try {
        evolve_eta_ode(fig4, fig4_profile, 5.0, 1.0, {.step = 1e-14});
        FAIL() << "expected step-size underflow";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::solver);
        EXPECT_NE(std::string(e.what()).find("step"), std::string::npos);
    }
    EXPECT_THROW(evolve_eta_ode(fig4, FrequencyProfile::sine_opening(3.0), 5.0, 1.0), Error);
}

TEST(EvolveEtaOde, StepHalvingConverged) {
    for (double g : {0.1, 1.0, 10.0}) {
        const DimensionlessParams d{0.032, 2.0, g};
        const double eta0 = closed_equilibrium_eta(d);
        const auto a = evolve_eta_ode(d, fig4_profile, eta0, 5.0, {.step = 1e-4});
        const auto b = evolve_eta_ode(d, fig4_profile, eta0, 5.0, {.step = 5e-5});
        ASSERT_EQ(a.samples.size(), b.samples.size());
        for (std::size_t i = 0; i < a.samples.size(); ++i)
            EXPECT_LT(rel(a.samples[i].eta, b.samples[i].eta), 1e-9);
    }
}

TEST(EvolveEtaClosedForm, ConstantFrequencyElementary) {
    const DimensionlessParams d{0.05, 1.5, 0.7};
    const auto p = FrequencyProfile::constant(1.5, 0.8);
    const double c = thermo::thermal_state(0.05 * 1.5 * 0.8).eta;
    const double eta0 = 4.0;
    const auto t = evolve_eta_closed_form(d, p, eta0, 6.0, {.samples_per_tau = 50});
    for (const auto& x : t.samples) {
        const double expect = std::exp(-0.7 * x.s) * eta0 + (1.0 - std::exp(-0.7 * x.s)) * c;
        EXPECT_NEAR(x.eta, expect, 1e-12 * expect);
    }
}

TEST(EvolveEtaClosedForm, FastThermalizationTracksEquilibrium) {
    const DimensionlessParams d{0.032, 2.0, 1e4};
    const auto t = evolve_eta_closed_form(d, fig4_profile, closed_equilibrium_eta(d), 2.0,
                                          {.samples_per_tau = 200});
    for (const auto& x : t.samples) {
        const double eq = thermo::thermal_state(theta_at(d, fig4_profile, x.s)).eta;
        EXPECT_LT(rel(x.eta, eq), 2e-4);
        EXPECT_NEAR(x.T_ratio, 1.0, 2e-4);
    }
}

// Values from a 40-digit quadrature of eta(s) = e^{-gs} eta0 + g int_0^s ...,
// integrated in one piece from s = 0.
TEST(EvolveEtaClosedForm, MatchesHighPrecisionQuadrature) {
    const auto t = evolve_eta_closed_form(fig4, fig4_profile, closed_equilibrium_eta(fig4), 6.0);
    EXPECT_NEAR(at(t, 0.5).eta, 17.803467064758401, 1e-11 * 17.8);
    EXPECT_NEAR(at(t, 1.0).eta, 22.367131820821490, 1e-11 * 22.4);
    EXPECT_NEAR(at(t, 2.0).eta, 28.299921323714236, 1e-11 * 28.3);
    EXPECT_NEAR(at(t, 6.0).eta, 31.689427385113935, 1e-11 * 31.7);
    EXPECT_NEAR(at(t, 0.5).T_ratio, 0.71568983300768446, 1e-11);
    EXPECT_NEAR(at(t, 1.0).T_ratio, 0.69962625263416667, 1e-11);
    EXPECT_NEAR(at(t, 6.0).T_ratio, 0.99797617140524625, 1e-11);
}

TEST(EvolveEtaClosedForm, AgreesWithOdeOnGrid) {
    for (double th : {0.01, 0.032, 0.1})
        for (double r : {1.5, 2.0, 3.0})
            for (double g : {0.1, 1.0, 10.0}) {
                const DimensionlessParams d{th, r, g};
                const auto p = FrequencyProfile::sine_opening(r);
                const double eta0 = closed_equilibrium_eta(d);
                const auto a = evolve_eta_ode(d, p, eta0, 3.0);
                const auto b = evolve_eta_closed_form(d, p, eta0, 3.0);
                for (std::size_t i = 0; i < a.samples.size(); ++i)
                    ASSERT_LT(rel(a.samples[i].eta, b.samples[i].eta), 1e-8)
                        << th << ' ' << r << ' ' << g << " s=" << a.samples[i].s;
            }
}

TEST(EvolveEtaClosedForm, PiecewiseProfileSplitsAtKinks) {
    const DimensionlessParams d{0.05, 2.0, 1.5};
    const auto p = FrequencyProfile::piecewise_linear(2.0, {{0.0, 1.0}, {0.3333, 0.7}, {1.0, 0.5}});
    const double eta0 = closed_equilibrium_eta(d);
    const auto a = evolve_eta_ode(d, p, eta0, 3.0, {.samples_per_tau = 100});
    const auto b = evolve_eta_closed_form(d, p, eta0, 3.0, {.samples_per_tau = 100});
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        EXPECT_LT(rel(a.samples[i].eta, b.samples[i].eta), 1e-10);
}

TEST(IdealLimit, SlowThermalizationApproachesInverseRatio) {
    for (double r : {1.5, 2.0, 3.0}) {
        const DimensionlessParams d{0.032, r, 1e-4};
        const auto t = evolve_eta_closed_form(d, FrequencyProfile::sine_opening(r),
                                              closed_equilibrium_eta(d), 2.0);
        EXPECT_NEAR(min_temperature(t).value, thermo::ideal_cooling_limit(r), 1e-3) << r;
    }
}

TEST(Trajectory, PostOpeningMonotoneAndReturnsToBath) {
    for (double g : {0.1, 1.0, 10.0}) {
        const DimensionlessParams d{0.032, 2.0, g};
        const double horizon = 20.0 / g + 1.0;
        const auto t = evolve_eta_closed_form(d, fig4_profile, closed_equilibrium_eta(d), horizon,
                                              {.samples_per_tau = 200});
        double prev = 0.0;
        for (const auto& x : t.samples) {
            EXPECT_GT(x.eta, 1.0);
            if (x.s >= 1.0) {
                EXPECT_GE(x.T_ratio, prev);
                prev = x.T_ratio;
            }
        }
        EXPECT_NEAR(t.samples.back().T_ratio, 1.0, 1e-6) << g;
    }
}

TEST(Trajectory, CoolingDeepensWithStiffness) {
    double prev = 1.0;
    for (double r : {1.5, 2.0, 3.0}) {
        const DimensionlessParams d{0.032, r, 1.0};
        const auto t = evolve_eta_closed_form(d, FrequencyProfile::sine_opening(r),
                                              closed_equilibrium_eta(d), 3.0);
        const double m = min_temperature(t).value;
        EXPECT_LT(m, prev) << r;
        prev = m;
    }
}

TEST(Trajectory, AdiabaticityWarning) {
    const auto slow = evolve_eta_closed_form(fig4, fig4_profile, 10.0, 1.0,
                                             {.samples_per_tau = 10, .omega0_tau_open = 125.7});
    EXPECT_TRUE(slow.info.warnings.empty());
    const auto fast = evolve_eta_closed_form(fig4, fig4_profile, 10.0, 1.0,
                                             {.samples_per_tau = 10, .omega0_tau_open = 20.0});
    ASSERT_EQ(fast.info.warnings.size(), 1u);
    EXPECT_NE(fast.info.warnings[0].find("adiabaticity"), std::string::npos);
}

TEST(RecoveryTime, FigureAnchor) {
    const auto t = evolve_eta_closed_form(fig4, fig4_profile, closed_equilibrium_eta(fig4), 10.0);
    const auto rec = recovery_time(t, 0.997);
    ASSERT_TRUE(rec.recovered);
    EXPECT_NEAR(rec.s, 6.0, 1.0);
    // Bisection lands on the crossing of the exact solution.
    const double eta = advance_eta_closed_form(fig4, fig4_profile, 0.0,
                                               closed_equilibrium_eta(fig4), rec.s, 1e-13, {1.0});
    EXPECT_NEAR(thermo::temperature_ratio({eta}, theta_at(fig4, fig4_profile, rec.s)), 0.997, 1e-10);
}

TEST(RecoveryTime, TargetAtMinimumReturnsArgmin) {
    const auto t = evolve_eta_closed_form(fig4, fig4_profile, closed_equilibrium_eta(fig4), 3.0);
    const auto lo = min_temperature(t);
    const auto rec = recovery_time(t, lo.value);
    ASSERT_TRUE(rec.recovered);
    EXPECT_EQ(rec.s, lo.s);
}

TEST(RecoveryTime, FasterThermalizationRecoversSooner) {
    const DimensionlessParams fast{0.032, 2.0, 10.0};
    const auto a = evolve_eta_closed_form(fig4, fig4_profile, closed_equilibrium_eta(fig4), 10.0);
    const auto b = evolve_eta_closed_form(fast, fig4_profile, closed_equilibrium_eta(fast), 10.0);
    const auto ra = recovery_time(a, 0.997);
    const auto rb = recovery_time(b, 0.997);
    ASSERT_TRUE(ra.recovered && rb.recovered);
    EXPECT_LT(rb.s, ra.s);
}

TEST(RecoveryTime, NotRecoveredWithinHorizon) {
    const auto t = evolve_eta_closed_form(fig4, fig4_profile, closed_equilibrium_eta(fig4), 2.0);
    const auto rec = recovery_time(t, 0.997);
    EXPECT_FALSE(rec.recovered);
    EXPECT_EQ(rec.horizon, 2.0);
}
