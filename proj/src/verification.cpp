#include "bvlab/verification.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bvlab/added_error.hpp"
#include "bvlab/boundary.hpp"
#include "bvlab/boundary_effects.hpp"
#include "bvlab/decomposition.hpp"
#include "bvlab/ensemble.hpp"
#include "bvlab/rng.hpp"

namespace bvlab {

namespace {

std::vector<double> random_simplex(RandomStream& rng, std::size_t k) {
    std::vector<double> p(k);
    double sum = 0.0;
    for (double& v : p) {
        v = -std::log(1.0 - rng.uniform01());
        sum += v;
    }
    for (double& v : p) v /= sum;
    return p;
}

void fold_residual(SweepResult& r, double delta) {
    r.max_residual = std::max(r.max_residual, std::abs(delta));
}

}  // namespace

SweepResult run_additive_identity_sweep(std::size_t cases, std::uint64_t seed) {
    SweepResult r;
    r.name = "zero-one additive identity";
    r.tolerance = 1e-12;
    RandomStream rng(seed);
    std::vector<PatternDecomposition> batch;
    for (std::size_t i = 0; i < cases; ++i) {
        const std::size_t k = 2 + rng.index(9);
        const LabelDistribution response(random_simplex(rng, k));
        const LabelDistribution predictor(random_simplex(rng, k));
        const PatternDecomposition d = decompose_zero_one(response, predictor);
        fold_residual(r, d.expected_loss -
                             (d.var_response + d.systematic_effect + d.variance_effect));
        batch.push_back(d);
        if (batch.size() == 3) {
            const AggregateDecomposition agg = aggregate(batch);
            fold_residual(r, agg.expected_loss - (agg.var_response + agg.systematic_effect +
                                                  agg.variance_effect));
            batch.clear();
        }
        ++r.cases;
    }
    r.pass = r.max_residual <= r.tolerance;
    return r;
}

SweepResult run_squared_error_sweep(std::size_t cases, std::uint64_t seed) {
    SweepResult r;
    r.name = "squared-error additive identity";
    r.tolerance = 1e-12;
    RandomStream rng(seed);
    for (std::size_t i = 0; i < cases; ++i) {
        const std::size_t n = 2 + rng.index(11);
        std::vector<double> estimates(n);
        for (double& e : estimates) e = rng.uniform(-2.0, 2.0);
        const double response_mean = rng.uniform(-1.0, 1.0);
        const double response_variance = rng.uniform(0.0, 0.5);
        const SquaredErrorDecomposition d =
            decompose_squared_error(estimates, response_mean, response_variance);
        double mse = 0.0;
        for (double e : estimates) mse += (e - response_mean) * (e - response_mean);
        mse = mse / static_cast<double>(n) + response_variance;
        fold_residual(r, (d.variance + d.bias_squared + d.noise) - mse);
        ++r.cases;
    }
    r.pass = r.max_residual <= r.tolerance;
    return r;
}

std::vector<SweepResult> run_bridge_sweep(const BridgeSweepOptions& opt) {
    SweepResult effects;
    effects.name = "boundary effects, closed vs numeric";
    effects.tolerance = opt.effect_tolerance;
    SweepResult checksum;
    checksum.name = "boundary effects checksum";
    checksum.tolerance = opt.checksum_tolerance;

    RandomStream rng(opt.seed);
    std::size_t negative_ve = 0;
    for (std::size_t i = 0; i < opt.cases; ++i) {
        const double s = rng.uniform(0.5, 4.0);
        const double bound = (1.0 - 0.1 - 0.02) / s;
        const double t2 = rng.uniform(0.3 * bound, bound);
        const double t1 = -rng.uniform(0.3 * bound, bound);

        PosteriorScenario scenario = [&] {
            if (i % 5 == 4) {
                std::vector<std::pair<double, double>> knots;
                for (double a : {t1, 0.3 * t1, 0.0, 0.4 * t2, t2})
                    knots.emplace_back(a, rng.uniform(0.0, 0.1));
                return PosteriorScenario(s, t1, t2, knots);
            }
            return PosteriorScenario(s, t1, t2, rng.uniform(0.0, 0.1));
        }();

        BoundaryDistribution dist = [&] {
            switch (i % 3) {
                case 0: {
                    const double mean = t1 + rng.uniform(0.35, 0.65) * (t2 - t1);
                    const double margin = std::min(t2 - mean, mean - t1);
                    const double sd = margin / 4.0 * rng.uniform(0.4, 1.0);
                    return BoundaryDistribution::gaussian(t1, t2, mean, sd * sd);
                }
                case 1: {
                    const double lo = t1 * rng.uniform(0.15, 0.85);
                    const double hi = t2 * rng.uniform(0.15, 0.85);
                    return BoundaryDistribution::uniform(t1, t2, lo, hi);
                }
                default: {
                    const std::size_t variant = (i / 3) % 3;
                    if (variant == 0) {
                        const double v2 = t2 * rng.uniform(0.3, 0.85);
                        const double q = rng.uniform(0.15, 0.45);
                        return BoundaryDistribution::atoms(t1, t2,
                                                           {{0.0, q}, {v2, 1.0 - q}});
                    }
                    if (variant == 1) {
                        const double v2 = t2 * rng.uniform(0.3, 0.85);
                        const double q = rng.uniform(0.55, 0.85);
                        return BoundaryDistribution::atoms(t1, t2,
                                                           {{0.0, q}, {v2, 1.0 - q}});
                    }
                    const double v1 = t1 * rng.uniform(0.3, 0.8);
                    const double v2 = t2 * rng.uniform(0.3, 0.8);
                    const double q = rng.uniform(0.55, 0.85);
                    return BoundaryDistribution::atoms(t1, t2, {{v1, q}, {v2, 1.0 - q}});
                }
            }
        }();

        const BoundaryMoments m = boundary_moments(dist);
        const double median = m.median + opt.fault_offset;
        const double se_closed = systematic_effect_closed(median, s);
        const double ve_closed = variance_effect_closed(m.mean, m.variance, median, s);
        const double se_numeric = systematic_effect_numeric(scenario, dist);
        const double ve_numeric = variance_effect_numeric(scenario, dist);
        fold_residual(effects, se_closed - se_numeric);
        fold_residual(effects, ve_closed - ve_numeric);
        fold_residual(checksum, se_closed + ve_closed -
                                    added_error_from_moments(m.mean, m.variance, s));
        if (ve_closed < 0.0) ++negative_ve;
        ++effects.cases;
        ++checksum.cases;
    }
    effects.detail = "negative variance-effect cases: " + std::to_string(negative_ve);
    effects.pass = effects.max_residual <= effects.tolerance && negative_ve > 0;
    checksum.pass = checksum.max_residual <= checksum.tolerance;
    return {effects, checksum};
}

SweepResult run_added_error_sweep(std::size_t cases, std::uint64_t seed,
                                  std::size_t monte_carlo_draws, Execution exec) {
    SweepResult r;
    r.name = "added-error route agreement";
    r.tolerance = 1e-8;
    RandomStream rng(seed);
    std::size_t mc_breaches = 0;
    for (std::size_t i = 0; i < cases; ++i) {
        const double s = rng.uniform(1.0, 3.0);
        NoiseModel noise;
        noise.bias_left = rng.uniform(-0.05, 0.05);
        noise.bias_right = rng.uniform(-0.05, 0.05);
        noise.variance_left = rng.uniform(5e-4, 5e-3);
        noise.variance_right = rng.uniform(5e-4, 5e-3);
        noise.covariance = rng.uniform(-0.9, 0.9) *
                           std::sqrt(noise.variance_left * noise.variance_right);
        const NoiseImpliedMoments m = noise_implied_moments(noise, s);
        // 7 sigma: the truncated and untruncated routes must agree to 1e-8
        const double half_width = std::abs(m.mean) + 7.0 * std::sqrt(m.variance);
        const BoundaryDistribution dist =
            BoundaryDistribution::gaussian(-half_width, half_width, m.mean, m.variance);

        const AddedErrorReport report = compare_added_error_routes(
            &dist, &noise, s, RouteSelection{}, monte_carlo_draws,
            derive_seed(seed, i + 1), 1e-8, 3.0, exec);
        for (const RouteAgreement& a : report.agreement) {
            if (a.route_a == "monte-carlo" || a.route_b == "monte-carlo") {
                if (!a.ok) ++mc_breaches;
            } else {
                fold_residual(r, a.delta);
            }
        }
        ++r.cases;
    }
    r.detail = "monte-carlo interval breaches: " + std::to_string(mc_breaches);
    r.pass = r.max_residual <= r.tolerance && mc_breaches == 0;
    return r;
}

SweepResult run_ensemble_sweep(std::size_t cases, std::uint64_t seed) {
    SweepResult r;
    r.name = "ensemble correlation model";
    r.tolerance = 1e-12;
    RandomStream rng(seed);
    std::size_t rejected = 0;
    bool bitwise_ok = true;
    for (std::size_t i = 0; i < cases; ++i) {
        // single member: moments must match the class-noise route bit for bit
        NoiseModel noise;
        noise.bias_left = rng.uniform(-0.05, 0.05);
        noise.bias_right = rng.uniform(-0.05, 0.05);
        noise.variance_left = rng.uniform(1e-3, 2e-2);
        noise.variance_right = rng.uniform(1e-3, 2e-2);
        noise.covariance = rng.uniform(-0.9, 0.9) *
                           std::sqrt(noise.variance_left * noise.variance_right);
        const double s = rng.uniform(0.5, 3.0);
        EnsembleNoiseProfile one;
        one.bias_left = {noise.bias_left};
        one.bias_right = {noise.bias_right};
        one.cov_ll = {noise.variance_left};
        one.cov_rr = {noise.variance_right};
        one.cov_lr = {noise.covariance};
        const NoiseImpliedMoments base = noise_implied_moments(noise, s);
        const NoiseImpliedMoments via_ensemble = ensemble_moments(one, s);
        if (base.mean != via_ensemble.mean || base.variance != via_ensemble.variance)
            bitwise_ok = false;

        // equal-variance members with a common pairwise correlation
        const std::size_t n = 2 + rng.index(7);
        const double vl = rng.uniform(2e-3, 2e-2);
        const double vr = rng.uniform(2e-3, 2e-2);
        const double lo = -1.0 / static_cast<double>(n - 1);
        const double delta = rng.uniform(0.9 * lo, 0.95);
        EnsembleNoiseProfile prof;
        prof.bias_left.assign(n, 0.0);
        prof.bias_right.assign(n, 0.0);
        prof.cov_ll.assign(n * n, 0.0);
        prof.cov_rr.assign(n * n, 0.0);
        prof.cov_lr.assign(n * n, 0.0);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                prof.cov_ll[a * n + b] = vl * (a == b ? 1.0 : delta);
                prof.cov_rr[a * n + b] = vr * (a == b ? 1.0 : delta);
            }
        NoiseModel member;
        member.variance_left = vl;
        member.variance_right = vr;
        const NoiseImpliedMoments mm = noise_implied_moments(member, s);
        const double single = added_error_from_moments(mm.mean, mm.variance, s);
        fold_residual(r, ensemble_added_error(prof, s) -
                             added_error_with_correlation(single, n, delta));

        // fully correlated members do not shrink the error even when biased
        EnsembleNoiseProfile same = prof;
        const double bias_l = rng.uniform(-0.05, 0.05);
        const double bias_r = rng.uniform(-0.05, 0.05);
        same.bias_left.assign(n, bias_l);
        same.bias_right.assign(n, bias_r);
        std::fill(same.cov_ll.begin(), same.cov_ll.end(), vl);
        std::fill(same.cov_rr.begin(), same.cov_rr.end(), vr);
        NoiseModel biased = member;
        biased.bias_left = bias_l;
        biased.bias_right = bias_r;
        const NoiseImpliedMoments bm = noise_implied_moments(biased, s);
        const double single_biased = added_error_from_moments(bm.mean, bm.variance, s);
        fold_residual(r, ensemble_added_error(same, s) - single_biased);

        // independent members split the single error n ways
        EnsembleNoiseProfile indep = prof;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                indep.cov_ll[a * n + b] = a == b ? vl : 0.0;
                indep.cov_rr[a * n + b] = a == b ? vr : 0.0;
            }
        fold_residual(r, ensemble_added_error(indep, s) -
                             single / static_cast<double>(n));

        // an impossible covariance layout must be rejected up front
        EnsembleNoiseProfile bad = indep;
        bad.cov_ll[0 * n + 1] = 1.5 * vl;
        bad.cov_ll[1 * n + 0] = 1.5 * vl;
        try {
            ensemble_added_error(bad, s);
        } catch (const std::invalid_argument&) {
            ++rejected;
        }
        ++r.cases;
    }
    r.detail = "indefinite profiles rejected: " + std::to_string(rejected) +
               ", single-member moments bitwise equal: " + (bitwise_ok ? "yes" : "no");
    r.pass = r.max_residual <= r.tolerance && rejected == r.cases && bitwise_ok;
    return r;
}

VerificationReport run_verification(std::uint64_t seed, double fault_offset,
                                    Execution exec) {
    VerificationReport report;
    report.results.push_back(run_additive_identity_sweep(2000, derive_seed(seed, 1)));
    report.results.push_back(run_squared_error_sweep(2000, derive_seed(seed, 2)));
    BridgeSweepOptions bridge;
    bridge.seed = derive_seed(seed, 3);
    bridge.fault_offset = fault_offset;
    for (SweepResult& r : run_bridge_sweep(bridge)) report.results.push_back(std::move(r));
    report.results.push_back(run_added_error_sweep(12, derive_seed(seed, 4), 50000, exec));
    report.results.push_back(run_ensemble_sweep(200, derive_seed(seed, 5)));
    report.pass = true;
    for (const SweepResult& r : report.results) report.pass = report.pass && r.pass;
    return report;
}

}  // namespace bvlab
