#include "bvlab/boundary_effects.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bvlab/added_error.hpp"
#include "bvlab/quadrature.hpp"

namespace bvlab {

double systematic_effect_closed(double median, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("systematic_effect_closed: s must be positive");
    return 0.5 * s * median * median;
}

double variance_effect_closed(double mean, double variance, double median, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("variance_effect_closed: s must be positive");
    if (!(variance >= 0.0))
        throw std::invalid_argument("variance_effect_closed: negative variance");
    return 0.5 * s * (mean * mean + variance - median * median);
}

namespace {

struct NumericEffects {
    double se = 0.0;
    double ve = 0.0;
};

// Smallest x in [t1, t2] with cdf(x) >= 1/2, found by bisection on the
// monotone predicate. For step CDFs this lands exactly on the jump location.
double decision_switch_point(const BoundaryDistribution& d) {
    double lo = d.t1(), hi = d.t2();
    if (d.cdf(lo) >= 0.5) return lo;
    while (hi - lo > 0.0) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (d.cdf(mid) >= 0.5 ? hi : lo) = mid;
    }
    return hi;
}

// Both effect integrals in one sweep over the decision region. The region is
// cut at every point where an integrand can kink or jump: the boundary of the
// Bayes classes (0), the classifier's decision switch, CDF jumps, and eta
// knots. Inside each open segment the decided class is constant and, for
// discrete families, so is the CDF, which keeps every per-segment integrand
// smooth right up to its endpoints.
NumericEffects effects_numeric(const PosteriorScenario& scenario,
                               const BoundaryDistribution& d) {
    const double t1 = scenario.t1();
    const double t2 = scenario.t2();
    if (std::abs(d.t1() - t1) > 1e-12 * (1.0 + std::abs(t1)) ||
        std::abs(d.t2() - t2) > 1e-12 * (1.0 + std::abs(t2)))
        throw std::invalid_argument(
            "effects_numeric: scenario and boundary distribution regions differ");

    std::vector<double> cuts{t1, 0.0, t2, decision_switch_point(d)};
    for (double j : d.jump_points()) cuts.push_back(j);
    for (double k : d.density_kinks()) cuts.push_back(k);
    for (const auto& [a, e] : scenario.eta_knots())
        if (a > t1 && a < t2) cuts.push_back(a);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const bool stepwise = !d.has_density();
    const double seg_tol = 1e-9 / static_cast<double>(cuts.size());

    NumericEffects out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double u = cuts[i];
        const double v = cuts[i + 1];
        if (!(v > u)) continue;
        const double mid = 0.5 * (u + v);
        const double f_mid = d.cdf(mid);
        const std::size_t bayes = scenario.bayes_class_at(mid);
        std::size_t decided;
        if (f_mid > 0.5)
            decided = 1;
        else if (f_mid < 0.5)
            decided = 0;
        else
            decided = bayes;

        auto posterior_of = [&](std::size_t cls, const PosteriorTriple& p) {
            return cls == 1 ? p.right : p.left;
        };

        if (decided != bayes) {
            auto se_term = [&](double a) {
                const PosteriorTriple p = scenario.posteriors_at(a);
                return posterior_of(bayes, p) - posterior_of(decided, p);
            };
            out.se += adaptive_simpson(se_term, u, v, {.abs_tol = seg_tol});
        }

        auto ve_term = [&](double a) {
            const PosteriorTriple p = scenario.posteriors_at(a);
            const double f = stepwise ? f_mid : d.cdf(a);
            return posterior_of(decided, p) - (p.left * (1.0 - f) + p.right * f);
        };
        out.ve += adaptive_simpson(ve_term, u, v, {.abs_tol = seg_tol});
    }
    return out;
}

}  // namespace

double systematic_effect_numeric(const PosteriorScenario& scenario,
                                 const BoundaryDistribution& d) {
    return effects_numeric(scenario, d).se;
}

double variance_effect_numeric(const PosteriorScenario& scenario,
                               const BoundaryDistribution& d) {
    return effects_numeric(scenario, d).ve;
}

EffectsReport decompose_boundary_effects(const PosteriorScenario& scenario,
                                         const BoundaryDistribution& d) {
    EffectsReport r;
    r.moments = boundary_moments(d);
    const double s = scenario.s();
    r.se_closed = systematic_effect_closed(r.moments.median, s);
    r.ve_closed = variance_effect_closed(r.moments.mean, r.moments.variance, r.moments.median, s);
    const NumericEffects num = effects_numeric(scenario, d);
    r.se_numeric = num.se;
    r.ve_numeric = num.ve;
    r.se_delta = std::abs(r.se_closed - r.se_numeric);
    r.ve_delta = std::abs(r.ve_closed - r.ve_numeric);
    r.added_error = added_error_from_moments(r.moments.mean, r.moments.variance, s);
    r.checksum_residual = std::abs(r.se_closed + r.ve_closed - r.added_error);
    return r;
}

}  // namespace bvlab
