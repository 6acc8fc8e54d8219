#pragma once

#include <cstddef>
#include <vector>

namespace bvlab {

// Pearson correlation; throws on length mismatch, n < 2, or zero variance.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// True when every entry equals the first (pearson would be undefined).
bool zero_spread(const std::vector<double>& x);

// Posterior estimates of several classifiers over a pattern set.
// Layout: model-major, then pattern, then class.
struct PosteriorEstimateTensor {
    std::size_t models = 0;
    std::size_t patterns = 0;
    std::size_t classes = 0;
    std::vector<double> v;

    PosteriorEstimateTensor() = default;
    PosteriorEstimateTensor(std::size_t m, std::size_t p, std::size_t k)
        : models(m), patterns(p), classes(k), v(m * p * k, 0.0) {}

    double at(std::size_t m, std::size_t p, std::size_t c) const {
        return v[(m * patterns + p) * classes + c];
    }
    double& at(std::size_t m, std::size_t p, std::size_t c) {
        return v[(m * patterns + p) * classes + c];
    }

    // every (model, pattern) row must be a probability vector
    void validate(double row_tol = 1e-9) const;
};

// Per-class mean of (average estimate - 1{label == class}) over patterns.
std::vector<double> class_bias(const PosteriorEstimateTensor& t,
                               const std::vector<std::size_t>& labels);

// Per-class mean over patterns of the population variance across models.
std::vector<double> class_variance(const PosteriorEstimateTensor& t);

// class_variance averaged over classes: the scalar spread summary.
double posterior_variance_scalar(const PosteriorEstimateTensor& t);

}  // namespace bvlab
