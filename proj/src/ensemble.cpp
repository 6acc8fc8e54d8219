#include "bvlab/ensemble.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bvlab/linalg.hpp"
#include "bvlab/stats.hpp"

namespace bvlab {

void validate_profile(const EnsembleNoiseProfile& profile) {
    const std::size_t n = profile.size();
    if (n == 0) throw std::invalid_argument("EnsembleNoiseProfile: empty");
    if (profile.bias_right.size() != n || profile.cov_ll.size() != n * n ||
        profile.cov_rr.size() != n * n || profile.cov_lr.size() != n * n)
        throw std::invalid_argument("EnsembleNoiseProfile: inconsistent sizes");
    for (const double* block : {&profile.cov_ll[0], &profile.cov_rr[0]})
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (std::abs(block[i * n + j] - block[j * n + i]) >
                    1e-12 * (1.0 + std::abs(block[i * n + j])))
                    throw std::invalid_argument(
                        "EnsembleNoiseProfile: within-class covariance block not symmetric");

    // [[ll, lr], [lr^T, rr]] must be a covariance matrix
    const std::size_t m = 2 * n;
    std::vector<double> big(m * m, 0.0);
    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            big[i * m + j] = profile.cov_ll[i * n + j];
            big[(n + i) * m + (n + j)] = profile.cov_rr[i * n + j];
            big[i * m + (n + j)] = profile.cov_lr[i * n + j];
            big[(n + j) * m + i] = profile.cov_lr[i * n + j];
        }
        scale = std::max({scale, std::abs(profile.cov_ll[i * n + i]),
                          std::abs(profile.cov_rr[i * n + i])});
    }
    const std::vector<double> eig = symmetric_eigenvalues(big, m);
    if (eig.front() < -1e-9 * scale)
        throw std::invalid_argument(
            "EnsembleNoiseProfile: assembled covariance not positive semidefinite "
            "(min eigenvalue " +
            std::to_string(eig.front()) + ")");
}

NoiseImpliedMoments ensemble_moments(const EnsembleNoiseProfile& profile, double s) {
    validate_profile(profile);
    if (!(s > 0.0)) throw std::invalid_argument("ensemble_moments: s must be positive");
    const std::size_t n = profile.size();

    double sum_l = 0.0, sum_r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum_l += profile.bias_left[i];
        sum_r += profile.bias_right[i];
    }
    const double dn = static_cast<double>(n);

    // Var of (1/N) sum_m (n_l^m - n_r^m) / s, accumulated so the N = 1 case
    // evaluates the exact same expression as noise_implied_moments.
    double acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = 0; k < n; ++k) {
            if (m == k)
                acc += profile.cov_ll[m * n + k] + profile.cov_rr[m * n + k] -
                       2.0 * profile.cov_lr[m * n + k];
            else
                acc += profile.cov_ll[m * n + k] + profile.cov_rr[m * n + k] -
                       profile.cov_lr[m * n + k] - profile.cov_lr[k * n + m];
        }
    }

    NoiseImpliedMoments out;
    out.mean = (sum_l / dn - sum_r / dn) / s;
    out.variance = acc / ((dn * dn) * (s * s));
    return out;
}

double ensemble_added_error(const EnsembleNoiseProfile& profile, double s) {
    const NoiseImpliedMoments m = ensemble_moments(profile, s);
    return 0.5 * s * (m.mean * m.mean + m.variance);
}

double added_error_with_correlation(double added_error_single, std::size_t n, double c) {
    if (!(added_error_single >= 0.0))
        throw std::invalid_argument("added_error_with_correlation: negative added error");
    if (n == 0) throw std::invalid_argument("added_error_with_correlation: n must be >= 1");
    if (n > 1) {
        const double lo = -1.0 / static_cast<double>(n - 1);
        if (c < lo - 1e-9 || c > 1.0 + 1e-9)
            throw std::invalid_argument(
                "added_error_with_correlation: correlation outside [-1/(N-1), 1]");
    }
    const double dn = static_cast<double>(n);
    return added_error_single * (1.0 + c * (dn - 1.0)) / dn;
}

CorrelationSummary average_error_correlation(const std::vector<ErrorMatrix>& error_matrices,
                                             const std::vector<double>& priors,
                                             Execution exec) {
    const std::size_t k = error_matrices.size();
    if (k == 0) throw std::invalid_argument("average_error_correlation: no classes");
    if (priors.size() != k)
        throw std::invalid_argument("average_error_correlation: prior count mismatch");
    double prior_sum = 0.0;
    for (double p : priors) {
        if (!(p >= 0.0)) throw std::invalid_argument("average_error_correlation: negative prior");
        prior_sum += p;
    }
    if (std::abs(prior_sum - 1.0) > 1e-9)
        throw std::invalid_argument("average_error_correlation: priors sum to " +
                                    std::to_string(prior_sum));

    const std::size_t n = error_matrices.front().size();
    if (n < 2)
        throw std::invalid_argument("average_error_correlation: need at least two classifiers");
    for (const ErrorMatrix& mat : error_matrices) {
        if (mat.size() != n)
            throw std::invalid_argument("average_error_correlation: classifier count differs");
        for (const auto& row : mat)
            if (row.size() != mat.front().size() || row.size() < 2)
                throw std::invalid_argument("average_error_correlation: ragged error matrix");
    }

    const std::size_t pairs_per_class = n * (n - 1) / 2;
    const std::size_t total = k * pairs_per_class;
    std::vector<double> corr(total, 0.0);
    std::vector<unsigned char> used(total, 0);

    // flatten (class, pair) so the parallel path writes disjoint slots
    std::vector<std::pair<std::size_t, std::size_t>> pair_index;
    pair_index.reserve(pairs_per_class);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) pair_index.emplace_back(a, b);

    for_each_index(total, exec, [&](std::size_t t) {
        const std::size_t cls = t / pairs_per_class;
        const auto [a, b] = pair_index[t % pairs_per_class];
        const auto& ma = error_matrices[cls][a];
        const auto& mb = error_matrices[cls][b];
        if (zero_spread(ma) || zero_spread(mb)) return;
        corr[t] = pearson(ma, mb);
        used[t] = 1;
    });

    CorrelationSummary out;
    out.per_class.assign(k, 0.0);
    for (std::size_t cls = 0; cls < k; ++cls) {
        double sum = 0.0;
        std::size_t m = 0;
        for (std::size_t p = 0; p < pairs_per_class; ++p) {
            const std::size_t t = cls * pairs_per_class + p;
            if (used[t]) {
                sum += corr[t];
                ++m;
            } else {
                ++out.skipped_pairs;
            }
        }
        out.per_class[cls] = m > 0 ? sum / static_cast<double>(m) : 0.0;
        out.overall += priors[cls] * out.per_class[cls];
    }
    return out;
}

}  // namespace bvlab
