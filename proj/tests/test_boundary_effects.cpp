#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bvlab/boundary.hpp"
#include "bvlab/boundary_effects.hpp"

using namespace bvlab;

namespace {

// Midpoint-grid oracle for the numeric effects. Splits the region into many
// equal slices, decides each slice by the offset CDF against 1/2 (ties to the
// Bayes class), and accumulates the pattern-level effect definitions. Shares
// no code with the quadrature-based routes.
struct GridEffects {
    double se = 0.0;
    double ve = 0.0;
};

// SE integrand at a is p[bayes] - p[decided]; the VE integrand is
// p[decided] - sum_c p[c] * phat[c] where the predictor distribution at a is
// (1 - F(a), F(a)) over (left, right). Decision: F against 1/2, ties to Bayes.
GridEffects grid_oracle_direct(const PosteriorScenario& sc, const BoundaryDistribution& d,
                               std::size_t segments) {
    GridEffects out;
    const double t1 = sc.t1(), t2 = sc.t2();
    const double h = (t2 - t1) / static_cast<double>(segments);
    for (std::size_t i = 0; i < segments; ++i) {
        const double a = t1 + (static_cast<double>(i) + 0.5) * h;
        const PosteriorTriple p = sc.posteriors_at(a);
        const std::size_t bayes = sc.bayes_class_at(a);
        const double p_bayes = bayes == 0 ? p.left : p.right;

        const double f = d.cdf(a);  // P(predict right at a)
        const std::size_t decided = f > 0.5 ? 1 : (f < 0.5 ? 0 : bayes);
        const double p_decided = decided == 0 ? p.left : p.right;
        const double agree = p.left * (1.0 - f) + p.right * f;

        out.se += h * (p_bayes - p_decided);
        out.ve += h * (p_decided - agree);
    }
    return out;
}

}  // namespace

TEST_SUITE("boundary-effects") {

TEST_CASE("closed forms and their guards") {
    CHECK(systematic_effect_closed(0.1, 2.0) == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(systematic_effect_closed(-0.1, 2.0) == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(variance_effect_closed(0.1, 0.04, 0.1, 2.0) ==
          doctest::Approx(0.04).epsilon(1e-13));
    CHECK_THROWS_AS(systematic_effect_closed(0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(variance_effect_closed(0.1, -0.01, 0.1, 2.0), std::invalid_argument);
    // SE + VE telescopes to the added error for any (mean, var, median)
    const double se = systematic_effect_closed(0.07, 1.3);
    const double ve = variance_effect_closed(0.02, 0.05, 0.07, 1.3);
    CHECK(std::abs(se + ve - 0.5 * 1.3 * (0.05 + 0.02 * 0.02)) <= 1e-15);
}

TEST_CASE("two-point offsets: hand-worked split with a negative variance effect") {
    // mass 0.4 at 0 and 0.6 at 0.1, s = 1; median 0.1, mean 0.06, var 0.0024
    const PosteriorScenario sc(1.0, -0.5, 0.5, 0.0);
    const BoundaryDistribution d =
        BoundaryDistribution::atoms(-0.5, 0.5, {{0.0, 0.4}, {0.1, 0.6}});
    const EffectsReport r = decompose_boundary_effects(sc, d);
    CHECK(r.moments.median == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(r.se_closed == doctest::Approx(0.005).epsilon(1e-13));
    CHECK(r.ve_closed == doctest::Approx(-0.002).epsilon(1e-12));
    CHECK(r.added_error == doctest::Approx(0.003).epsilon(1e-13));
    CHECK(r.checksum_residual <= 1e-15);
    // numeric routes, which never see the closed forms, agree
    CHECK(std::abs(r.se_numeric - 0.005) <= 1e-9);
    CHECK(std::abs(r.ve_numeric + 0.002) <= 1e-9);
    CHECK(r.se_delta <= 1e-9);
    CHECK(r.ve_delta <= 1e-9);
    CHECK(r.ve_closed < 0.0);  // spread can help when the median overshoots
}

TEST_CASE("gaussian offsets: closed split checked by quadrature") {
    const PosteriorScenario sc(2.0, -0.45, 0.45, 0.0);
    const BoundaryDistribution d =
        BoundaryDistribution::gaussian(-0.45, 0.45, 0.1, 0.0025);
    const EffectsReport r = decompose_boundary_effects(sc, d);
    // symmetric truncation window shifts the median imperceptibly at 7 sigma
    CHECK(std::abs(r.moments.median - 0.1) <= 1e-10);
    CHECK(std::abs(r.se_closed - 0.01) <= 1e-9);
    CHECK(r.se_delta <= 1e-8);
    CHECK(r.ve_delta <= 1e-8);
    CHECK(r.checksum_residual <= 1e-12);
    CHECK(std::abs(r.se_closed + r.ve_closed - r.added_error) <= 1e-12);
}

TEST_CASE("uniform offsets: exact closed values") {
    // uniform on [0, 0.4], s = 1: median 0.2, mean 0.2, var 0.4^2/12
    const PosteriorScenario sc(1.0, -0.5, 0.5, 0.0);
    const BoundaryDistribution d = BoundaryDistribution::uniform(-0.5, 0.5, 0.0, 0.4);
    const EffectsReport r = decompose_boundary_effects(sc, d);
    CHECK(r.se_closed == doctest::Approx(0.02).epsilon(1e-13));
    CHECK(r.ve_closed == doctest::Approx(0.4 * 0.4 / 12.0 / 2.0).epsilon(1e-12));
    CHECK(r.se_delta <= 1e-8);
    CHECK(r.ve_delta <= 1e-8);
}

TEST_CASE("numeric routes survive a piecewise rest-mass profile") {
    const PosteriorScenario sc(2.0, -0.45, 0.45,
                               {{-0.45, 0.0}, {-0.1, 0.08}, {0.2, 0.02}, {0.45, 0.0}});
    const BoundaryDistribution d =
        BoundaryDistribution::gaussian(-0.45, 0.45, 0.05, 0.004);
    const EffectsReport r = decompose_boundary_effects(sc, d);
    // eta(a) cancels from both effect integrands, so the closed forms hold
    CHECK(r.se_delta <= 1e-8);
    CHECK(r.ve_delta <= 1e-8);
    CHECK(r.checksum_residual <= 1e-12);
}

TEST_CASE("independent midpoint grid confirms the numeric routes") {
    SUBCASE("gaussian") {
        const PosteriorScenario sc(2.0, -0.45, 0.45, 0.0);
        const BoundaryDistribution d =
            BoundaryDistribution::gaussian(-0.45, 0.45, 0.1, 0.0025);
        const GridEffects g = grid_oracle_direct(sc, d, 20000);
        const EffectsReport r = decompose_boundary_effects(sc, d);
        CHECK(std::abs(g.se - r.se_numeric) <= 1e-4);
        CHECK(std::abs(g.ve - r.ve_numeric) <= 1e-4);
    }
    SUBCASE("atoms") {
        const PosteriorScenario sc(1.0, -0.5, 0.5, 0.0);
        const BoundaryDistribution d =
            BoundaryDistribution::atoms(-0.5, 0.5, {{0.0, 0.4}, {0.1, 0.6}});
        const GridEffects g = grid_oracle_direct(sc, d, 40000);
        const EffectsReport r = decompose_boundary_effects(sc, d);
        CHECK(std::abs(g.se - r.se_numeric) <= 1e-5);
        CHECK(std::abs(g.ve - r.ve_numeric) <= 1e-5);
    }
}

TEST_CASE("scenario and distribution must share the decision region") {
    const PosteriorScenario sc(2.0, -0.45, 0.45, 0.0);
    const BoundaryDistribution d = BoundaryDistribution::gaussian(-0.4, 0.45, 0.0, 0.01);
    CHECK_THROWS_AS(decompose_boundary_effects(sc, d), std::invalid_argument);
    CHECK_THROWS_AS(systematic_effect_numeric(sc, d), std::invalid_argument);
    CHECK_THROWS_AS(variance_effect_numeric(sc, d), std::invalid_argument);
}

TEST_CASE("centered offsets add pure variance effect") {
    // median 0 kills the systematic term; everything lands in VE
    const PosteriorScenario sc(2.0, -0.45, 0.45, 0.0);
    const BoundaryDistribution d = BoundaryDistribution::uniform(-0.45, 0.45, -0.2, 0.2);
    const EffectsReport r = decompose_boundary_effects(sc, d);
    CHECK(r.se_closed == 0.0);
    CHECK(r.ve_closed == doctest::Approx(r.added_error).epsilon(1e-13));
    CHECK(std::abs(r.se_numeric) <= 1e-8);
}

}  // TEST_SUITE
