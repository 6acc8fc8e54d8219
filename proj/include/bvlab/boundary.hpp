#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "bvlab/exec.hpp"

namespace bvlab {

// True class posteriors around a one-dimensional decision boundary. The
// boundary pair is linear in the signed offset a from the ideal boundary:
// the "left" class dominates for a < 0, the "right" class for a > 0, their
// difference is s*a, and the lumped remaining classes carry mass eta(a).
// That fixes
//   P(left | a)  = (1 - eta(a) - s*a) / 2
//   P(right | a) = (1 - eta(a) + s*a) / 2
// and the pointwise Bayes error (1 + eta(a) - s*|a|) / 2 is derived, not a
// free parameter.
struct PosteriorTriple {
    double left = 0.0;
    double right = 0.0;
    double rest = 0.0;
};

class PosteriorScenario {
public:
    // Constant rest-mass profile.
    PosteriorScenario(double s, double t1, double t2, double eta);
    // Piecewise-linear profile through (a, eta) knots, clamped outside.
    PosteriorScenario(double s, double t1, double t2,
                      std::vector<std::pair<double, double>> eta_knots);

    double s() const { return s_; }
    double t1() const { return t1_; }
    double t2() const { return t2_; }

    double eta_at(double a) const;
    PosteriorTriple posteriors_at(double a) const;
    double bayes_error_at(double a) const;
    // 0 = left, 1 = right; the exact boundary point goes left.
    std::size_t bayes_class_at(double a) const;

    // Interior knot locations, for integrators that segment at eta kinks.
    const std::vector<std::pair<double, double>>& eta_knots() const { return knots_; }

private:
    void validate() const;

    double s_;
    double t1_;
    double t2_;
    std::vector<std::pair<double, double>> knots_;
};

// Zero-mean additive noise on the two boundary-class posteriors, plus fixed
// offsets. covariance couples the left and right noises of one classifier.
struct NoiseModel {
    double bias_left = 0.0;
    double bias_right = 0.0;
    double variance_left = 0.0;
    double variance_right = 0.0;
    double covariance = 0.0;
};

void validate_noise(const NoiseModel& noise);

struct NoiseImpliedMoments {
    double mean = 0.0;      // (bias_left - bias_right) / s
    double variance = 0.0;  // (var_left + var_right - 2 cov) / s^2
};

NoiseImpliedMoments noise_implied_moments(const NoiseModel& noise, double s);

// Distribution of the boundary offset b, restricted to the decision region
// [t1, t2] (t1 < 0 < t2) and renormalized. Whatever mass fell outside is
// recorded in truncated_mass(); constructions rejecting more than half the
// mass fail, since then the region no longer describes the classifier.
//
// Median convention everywhere: inf{ x : CDF(x) >= 1/2 } with the CDF
// right-continuous. An exact CDF plateau at 1/2 to the left of zero is the
// one degenerate shape for which the closed-form effect split is not defined;
// randomized generators in this repo avoid exact-half cumulative masses.
class BoundaryDistribution {
public:
    enum class Family { gaussian, uniform, atoms, empirical };

    static BoundaryDistribution gaussian(double t1, double t2, double mean, double variance);
    static BoundaryDistribution uniform(double t1, double t2, double lo, double hi);
    // Locations with positive weights summing to 1 within 1e-9.
    static BoundaryDistribution atoms(double t1, double t2,
                                      std::vector<std::pair<double, double>> atoms);
    // Raw draws; values outside [t1, t2] are dropped and counted.
    static BoundaryDistribution empirical(double t1, double t2, std::vector<double> samples);

    Family family() const { return family_; }
    double t1() const { return t1_; }
    double t2() const { return t2_; }
    double truncated_mass() const { return truncated_mass_; }

    // P(b <= x), right-continuous, 0 below t1 and 1 at t2.
    double cdf(double x) const;

    bool has_density() const { return family_ == Family::gaussian || family_ == Family::uniform; }
    double pdf(double x) const;  // analytic families only

    double mean() const;
    double variance() const;  // of the (truncated) distribution, population form
    double median() const;

    // Jump locations (atom positions / distinct sample values), sorted.
    // Empty for the analytic families.
    std::vector<double> jump_points() const;

    // Kinks of a continuous CDF (the uniform support edges). Quadrature over
    // the region must cut here, or an adaptive rule that only samples the
    // flat part converges to the wrong answer.
    std::vector<double> density_kinks() const;

    // atoms: (location, weight); empirical: (value, 1/n) with duplicates merged.
    const std::vector<std::pair<double, double>>& point_masses() const { return atoms_; }
    std::size_t sample_count() const { return sample_count_; }

private:
    BoundaryDistribution() = default;

    friend BoundaryDistribution sample_boundary(const NoiseModel&, const PosteriorScenario&,
                                                std::size_t, std::uint64_t, Execution);

    Family family_ = Family::atoms;
    double t1_ = 0.0, t2_ = 0.0;
    double truncated_mass_ = 0.0;

    // gaussian: untruncated parameters + cached normalization
    double g_mean_ = 0.0, g_sd_ = 0.0;
    double g_cdf_t1_ = 0.0, g_norm_ = 1.0;

    // uniform: support already intersected with the region
    double u_lo_ = 0.0, u_hi_ = 0.0;

    // atoms/empirical: sorted locations, weights, cumulative weights
    std::vector<std::pair<double, double>> atoms_;
    std::vector<double> cumulative_;
    std::size_t sample_count_ = 0;
};

struct BoundaryMoments {
    double mean = 0.0;
    double variance = 0.0;
    double median = 0.0;
};

BoundaryMoments boundary_moments(const BoundaryDistribution& d);

// Draws boundary offsets b = (bias_left - bias_right + n_left - n_right) / s
// under the noise model, rejecting draws outside the scenario's decision
// region, and returns the empirical distribution. Bit-reproducible for a
// fixed seed regardless of execution mode. Fails if the rejection rate
// exceeds 50% ("boundary distribution escapes the decision region").
BoundaryDistribution sample_boundary(const NoiseModel& noise,
                                     const PosteriorScenario& scenario,
                                     std::size_t n, std::uint64_t seed,
                                     Execution exec = Execution::parallel);

}  // namespace bvlab
