#pragma once

// Small numerical kernels: classical RK4 for scalar ODEs and adaptive Simpson
// quadrature with Richardson correction.

#include <cmath>
#include <sstream>

#include "refrig/error.hpp"

namespace refrig::numerics {

/// One classical fourth-order Runge-Kutta step for dy/dx = f(x, y).
template <typename F>
double rk4_step(F&& f, double x, double y, double h) {
    const double k1 = f(x, y);
    const double k2 = f(x + 0.5 * h, y + 0.5 * h * k1);
    const double k3 = f(x + 0.5 * h, y + 0.5 * h * k2);
    const double k4 = f(x + h, y + h * k3);
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct SimpsonOptions {
    double abs_tol{1e-12};
    int max_depth{48};
};

namespace detail {

template <typename F>
double simpson_recurse(F& f, double a, double b, double fa, double fm, double fb, double whole,
                       double tol, int depth, const SimpsonOptions& opt) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= opt.max_depth || !(m > a && b > m) || !std::isfinite(delta)) {
        std::ostringstream os;
        os.precision(17);
        os << "adaptive Simpson did not converge on [" << a << ", " << b << "] (estimate change "
           << delta << ", tolerance " << tol << ")";
        throw Error(ErrorKind::solver, os.str());
    }
    return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, opt) +
           simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, opt);
}

} // namespace detail

/// Integral of f over [a, b] to absolute tolerance `opt.abs_tol`.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, const SimpsonOptions& opt = {}) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_recurse(f, a, b, fa, fm, fb, whole, opt.abs_tol, 0, opt);
}

} // namespace refrig::numerics
