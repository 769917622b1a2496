#pragma once

// Truncated Fock-level populations under the thermal dissipator.
//
// H(t) = hbar omega(t) (n + 1/2) is diagonal in the instantaneous number basis
// and the dissipator maps diagonal operators to diagonal operators (it only
// involves a rho a^dag, a^dag rho a and n rho + rho n), so a diagonal initial
// state stays diagonal and the populations obey a closed birth-death system:
//
//   dp_n/ds = g(nu+1)[(n+1) p_{n+1} - n p_n] + g nu [n p_{n-1} - (n+1) p_n]
//
// This module never assumes the geometric (quenched Boltzmann) form; it is the
// independent check on the eta solvers.
//
// Level N_max is absorbing for upward jumps: the flux g nu (N_max+1) p_{N_max}
// is moved into tail_bound, so sum(p) + tail_bound is conserved.
//
// The generator has eigenvalues down to about -4 g nu N_max, far too stiff for
// an explicit scheme at useful steps. Time stepping is the implicit trapezoidal
// rule (tridiagonal solve per step), run at h and h/2 and combined by global
// Richardson extrapolation, giving a fourth-order A-stable method.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "refrig/adiabatic_solver.hpp"
#include "refrig/error.hpp"
#include "refrig/frequency_profile.hpp"
#include "refrig/oscillator_thermo.hpp"
#include "refrig/units_params.hpp"

namespace refrig::oracle {

using units::DimensionlessParams;

inline constexpr double default_tail_threshold = 1e-10;
inline constexpr double negative_population_limit = -1e-14;

struct PopulationVector {
    std::vector<double> p;    // levels 0..n_max
    double tail_bound{};      // probability mass above n_max

    std::size_t n_max() const { return p.empty() ? 0 : p.size() - 1; }
    double total() const { return std::accumulate(p.begin(), p.end(), 0.0); }
};

inline PopulationVector populations_from_quenched(const thermo::QuenchedState& s,
                                                  std::size_t n_max,
                                                  double tail_threshold = default_tail_threshold) {
    refrig::detail::require(std::isfinite(s.eta) && s.eta > 1.0, "quenched state needs eta > 1");
    const double q = s.level_ratio();
    PopulationVector pv;
    pv.p.resize(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) pv.p[n] = std::pow(q, static_cast<double>(n)) / s.eta;
    pv.tail_bound = std::pow(q, static_cast<double>(n_max + 1));
    if (pv.tail_bound > tail_threshold) {
        std::ostringstream os;
        os << "truncation too small: tail mass " << pv.tail_bound << " above threshold "
           << tail_threshold << " at N_max=" << n_max << " (eta=" << s.eta
           << "); increase N_max";
        throw Error(ErrorKind::solver, os.str());
    }
    return pv;
}

/// sum n p_n over the retained levels.
inline double mean_occupation(const PopulationVector& pv) {
    double m = 0.0;
    for (std::size_t n = 0; n < pv.p.size(); ++n) m += static_cast<double>(n) * pv.p[n];
    return m;
}

/// Bound on the mean carried by the truncated tail, assuming it continues
/// geometrically with the ratio of the last two retained levels.
inline double mean_tail_bound(const PopulationVector& pv) {
    const std::size_t n = pv.n_max();
    double q = 0.0;
    if (n >= 1 && pv.p[n - 1] > 0.0) q = std::clamp(pv.p[n] / pv.p[n - 1], 0.0, 1.0 - 1e-15);
    return pv.tail_bound * (static_cast<double>(n + 1) + q / (1.0 - q));
}

/// max over n in [n_lo, n_hi) of |(p_{n+1}/p_n) / (p_{n_lo+1}/p_{n_lo}) - 1|.
inline double geometric_deviation(const PopulationVector& pv, std::size_t n_lo = 0,
                                  std::size_t n_hi = 50) {
    refrig::detail::require(n_hi > n_lo && n_hi + 1 <= pv.p.size(), "geometric window outside truncation");
    const double q0 = pv.p[n_lo + 1] / pv.p[n_lo];
    double worst = 0.0;
    for (std::size_t n = n_lo; n < n_hi; ++n)
        worst = std::max(worst, std::abs(pv.p[n + 1] / pv.p[n] / q0 - 1.0));
    return worst;
}

/// N_max = ceil(factor * max nu over the schedule), also covering the initial mean.
inline std::size_t truncation_level(const DimensionlessParams& d, const FrequencyProfile& p,
                                    double horizon, double initial_mean = 0.0,
                                    double factor = 40.0) {
    const double theta_min = d.theta0 * d.freq_ratio_r * min_omega_over(p, horizon);
    const double nu_max = thermo::nu_of(theta_min).value;
    const double n = std::ceil(factor * std::max(nu_max, initial_mean));
    return std::max<std::size_t>(static_cast<std::size_t>(n), 64);
}

struct OracleOptions {
    double step{1e-4};
    std::size_t samples_per_tau{2000};
    double tail_threshold{default_tail_threshold};
    /// Keep full population snapshots every this many samples (0: none).
    std::size_t snapshot_every{0};
};

struct OracleSample {
    double s{};
    double mean_n{};
    double total{};       // sum of retained populations
    double tail_bound{};
    double richardson_delta{};  // |mean(h/2) - mean(h)| / mean(h/2)
};

struct PopulationTrajectory {
    std::vector<OracleSample> samples;
    std::vector<std::pair<double, PopulationVector>> snapshots;
    std::size_t n_max{};
    double step{};
    double max_conservation_error{};
};

using Observer = std::function<void(double s, const PopulationVector&)>;

namespace detail {

/// Trapezoidal stepper for the truncated generator. Work arrays are reused.
class TrapezoidStepper {
public:
    TrapezoidStepper(const DimensionlessParams& d, const FrequencyProfile& p, std::size_t n_max)
        : d_(d), p_(p), n_max_(n_max), rhs_(n_max + 1), cprime_(n_max + 1) {}

    void step(std::vector<double>& pops, double& tail, double s, double h) {
        const double g = d_.gamma_tau_g;
        if (g == 0.0) return;
        const double nu0 = nu_at(s);
        const double nu1 = nu_at(s + h);
        const std::size_t N = n_max_;
        const double half = 0.5 * h * g;

        // rhs = (I + h/2 A(s)) p
        for (std::size_t n = 0; n <= N; ++n) {
            const double dn = static_cast<double>(n);
            double a = -((nu0 + 1.0) * dn + nu0 * (dn + 1.0)) * pops[n];
            if (n < N) a += (nu0 + 1.0) * (dn + 1.0) * pops[n + 1];
            if (n > 0) a += nu0 * dn * pops[n - 1];
            rhs_[n] = pops[n] + half * a;
        }
        const double leak_old = nu0 * static_cast<double>(N + 1) * pops[N];

        // (I - h/2 A(s+h)) p_new = rhs, Thomas algorithm. The matrix is a
        // column diagonally dominant M-matrix, so no pivoting is needed.
        auto diag = [&](std::size_t n) {
            const double dn = static_cast<double>(n);
            return 1.0 + half * ((nu1 + 1.0) * dn + nu1 * (dn + 1.0));
        };
        auto upper = [&](std::size_t n) { return -half * (nu1 + 1.0) * static_cast<double>(n + 1); };
        auto lower = [&](std::size_t n) { return -half * nu1 * static_cast<double>(n); };

        double b = diag(0);
        cprime_[0] = N > 0 ? upper(0) / b : 0.0;
        rhs_[0] /= b;
        for (std::size_t n = 1; n <= N; ++n) {
            const double a = lower(n);
            b = diag(n) - a * cprime_[n - 1];
            cprime_[n] = n < N ? upper(n) / b : 0.0;
            rhs_[n] = (rhs_[n] - a * rhs_[n - 1]) / b;
        }
        pops[N] = rhs_[N];
        for (std::size_t n = N; n-- > 0;) pops[n] = rhs_[n] - cprime_[n] * pops[n + 1];

        const double leak_new = nu1 * static_cast<double>(N + 1) * pops[N];
        tail += half * (leak_old + leak_new);
    }

private:
    double nu_at(double s) const {
        return thermo::nu_of(adiabatic::theta_at(d_, p_, s)).value;
    }

    DimensionlessParams d_;
    FrequencyProfile p_;
    std::size_t n_max_;
    std::vector<double> rhs_;
    std::vector<double> cprime_;
};

} // namespace detail

inline PopulationTrajectory evolve_populations(const DimensionlessParams& d,
                                               const FrequencyProfile& profile,
                                               const PopulationVector& init, double horizon,
                                               const OracleOptions& opt = {},
                                               const Observer& observer = {}) {
    units::validate(d);
    validate(profile);
    refrig::detail::require(profile.freq_ratio_r == d.freq_ratio_r,
                            "profile frequency ratio does not match parameters");
    refrig::detail::require(init.p.size() >= 2, "population vector needs at least two levels");
    refrig::detail::require(std::isfinite(opt.step) && opt.step > 0.0, "oracle step must be > 0");
    refrig::detail::require(init.tail_bound <= opt.tail_threshold,
                            "initial truncation tail above threshold");

    const std::size_t N = init.n_max();
    const auto grid = adiabatic::sample_grid(horizon, opt.samples_per_tau);
    const auto kinks = refrig::kinks(profile, horizon);

    PopulationTrajectory out;
    out.n_max = N;
    out.step = opt.step;
    out.samples.reserve(grid.size());

    std::vector<double> coarse = init.p;
    std::vector<double> fine = init.p;
    double tail_coarse = init.tail_bound;
    double tail_fine = init.tail_bound;
    const double invariant = init.total() + init.tail_bound;

    detail::TrapezoidStepper stepper_coarse(d, profile, N);
    detail::TrapezoidStepper stepper_fine(d, profile, N);

    PopulationVector current;
    current.p.resize(N + 1);

    auto record = [&](std::size_t k, double s) {
        for (std::size_t n = 0; n <= N; ++n) current.p[n] = (4.0 * fine[n] - coarse[n]) / 3.0;
        current.tail_bound = (4.0 * tail_fine - tail_coarse) / 3.0;

        const auto worst = std::min_element(current.p.begin(), current.p.end());
        if (*worst < negative_population_limit) {
            std::ostringstream os;
            os << "integrator failure: population p_" << (worst - current.p.begin()) << " = "
               << *worst << " at s=" << s;
            throw Error(ErrorKind::solver, os.str());
        }
        if (current.tail_bound > opt.tail_threshold) {
            std::ostringstream os;
            os << "truncation too small: tail mass " << current.tail_bound << " at s=" << s
               << " exceeds " << opt.tail_threshold << " (N_max=" << N << ")";
            throw Error(ErrorKind::solver, os.str());
        }

        OracleSample smp;
        smp.s = s;
        smp.mean_n = mean_occupation(current);
        smp.total = current.total();
        smp.tail_bound = current.tail_bound;
        double mf = 0.0;
        double mc = 0.0;
        for (std::size_t n = 0; n <= N; ++n) {
            mf += static_cast<double>(n) * fine[n];
            mc += static_cast<double>(n) * coarse[n];
        }
        smp.richardson_delta = mf > 0.0 ? std::abs(mf - mc) / mf : std::abs(mf - mc);
        out.max_conservation_error =
            std::max(out.max_conservation_error, std::abs(smp.total + smp.tail_bound - invariant));
        out.samples.push_back(smp);

        if (opt.snapshot_every > 0 && k % opt.snapshot_every == 0) out.snapshots.emplace_back(s, current);
        if (observer) observer(s, current);
    };

    record(0, 0.0);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const auto pts = adiabatic::detail::split_points(grid[k - 1], grid[k], kinks);
        for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
            const double span = pts[j + 1] - pts[j];
            const auto n = std::max<std::size_t>(
                static_cast<std::size_t>(std::ceil(span / opt.step - 1e-9)), 1);
            const double h = span / static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double s = pts[j] + static_cast<double>(i) * h;
                stepper_coarse.step(coarse, tail_coarse, s, h);
                stepper_fine.step(fine, tail_fine, s, 0.5 * h);
                stepper_fine.step(fine, tail_fine, s + 0.5 * h, 0.5 * h);
            }
        }
        record(k, grid[k]);
    }
    return out;
}

} // namespace refrig::oracle
