#pragma once

#include <cstddef>
#include <vector>

#include "bvlab/boundary.hpp"
#include "bvlab/exec.hpp"

namespace bvlab {

// Noise description of an N-member averaging ensemble around one boundary.
// Covariance blocks are N x N row-major; cov_ll and cov_rr must be symmetric,
// cov_lr(m,n) = Cov(left noise of member m, right noise of member n) need not
// be. Validation assembles the full 2N x 2N matrix and requires it positive
// semidefinite.
struct EnsembleNoiseProfile {
    std::vector<double> bias_left;
    std::vector<double> bias_right;
    std::vector<double> cov_ll;
    std::vector<double> cov_rr;
    std::vector<double> cov_lr;

    std::size_t size() const { return bias_left.size(); }
};

void validate_profile(const EnsembleNoiseProfile& profile);

// Mean and variance of the averaged boundary offset. For N = 1 this
// reproduces noise_implied_moments bit for bit.
NoiseImpliedMoments ensemble_moments(const EnsembleNoiseProfile& profile, double s);

// Added error of the posterior-averaging ensemble via the full covariance
// expansion of the averaged offset.
double ensemble_added_error(const EnsembleNoiseProfile& profile, double s);

// Reduction law for N unbiased members with equal added error and a common
// pairwise offset correlation c: single * (1 + c (N-1)) / N.
double added_error_with_correlation(double added_error_single, std::size_t n, double c);

using ErrorMatrix = std::vector<std::vector<double>>;  // rows = classifiers

struct CorrelationSummary {
    std::vector<double> per_class;  // mean pairwise correlation per class
    double overall = 0.0;           // prior-weighted mean of per_class
    std::size_t skipped_pairs = 0;  // pairs dropped for a zero-variance row
};

// Mean pairwise Pearson correlation of per-class error signals. One matrix
// per class, all with the same number of classifier rows; priors weight the
// per-class means into the overall value. Pairs where either row has zero
// variance are excluded and counted.
CorrelationSummary average_error_correlation(const std::vector<ErrorMatrix>& error_matrices,
                                             const std::vector<double>& priors,
                                             Execution exec = Execution::parallel);

}  // namespace bvlab
