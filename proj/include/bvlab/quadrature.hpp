#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace bvlab {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    int max_depth = 48;
};

namespace detail {

template <class F>
double simpson_rec(F& f, double a, double m, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson with Richardson correction; absolute tolerance.
template <class F>
double adaptive_simpson(F&& f, double a, double b, QuadratureOptions opt = {}) {
    if (!(a <= b)) throw std::invalid_argument("adaptive_simpson: inverted interval");
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, m, b, fa, fm, fb, whole, opt.abs_tol, opt.max_depth);
}

// Integrates over consecutive pairs of sorted breakpoints. The per-segment
// tolerance is divided evenly so the total honors opt.abs_tol.
template <class F>
double integrate_segmented(F&& f, const std::vector<double>& breakpoints,
                           QuadratureOptions opt = {}) {
    if (breakpoints.size() < 2)
        throw std::invalid_argument("integrate_segmented: need at least two breakpoints");
    QuadratureOptions per = opt;
    per.abs_tol = opt.abs_tol / static_cast<double>(breakpoints.size() - 1);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        total += adaptive_simpson(f, breakpoints[i], breakpoints[i + 1], per);
    return total;
}

}  // namespace bvlab
