#include "bvlab/stats.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bvlab {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("pearson: need at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0))
        throw std::invalid_argument("pearson: zero-variance input");
    return sxy / std::sqrt(sxx * syy);
}

bool zero_spread(const std::vector<double>& x) {
    for (double v : x)
        if (v != x.front()) return false;
    return true;
}

void PosteriorEstimateTensor::validate(double row_tol) const {
    if (v.size() != models * patterns * classes)
        throw std::invalid_argument("PosteriorEstimateTensor: size mismatch");
    for (std::size_t m = 0; m < models; ++m) {
        for (std::size_t p = 0; p < patterns; ++p) {
            double sum = 0.0;
            for (std::size_t c = 0; c < classes; ++c) {
                const double q = at(m, p, c);
                if (!(q >= 0.0 && q <= 1.0))
                    throw std::invalid_argument(
                        "PosteriorEstimateTensor: entry outside [0,1]");
                sum += q;
            }
            if (std::abs(sum - 1.0) > row_tol)
                throw std::invalid_argument(
                    "PosteriorEstimateTensor: row sums to " + std::to_string(sum));
        }
    }
}

std::vector<double> class_bias(const PosteriorEstimateTensor& t,
                               const std::vector<std::size_t>& labels) {
    if (labels.size() != t.patterns)
        throw std::invalid_argument("class_bias: label count mismatch");
    if (t.models == 0 || t.patterns == 0)
        throw std::invalid_argument("class_bias: empty tensor");
    std::vector<double> bias(t.classes, 0.0);
    for (std::size_t p = 0; p < t.patterns; ++p) {
        if (labels[p] >= t.classes) throw std::invalid_argument("class_bias: label out of range");
        for (std::size_t c = 0; c < t.classes; ++c) {
            double mean = 0.0;
            for (std::size_t m = 0; m < t.models; ++m) mean += t.at(m, p, c);
            mean /= static_cast<double>(t.models);
            bias[c] += mean - (labels[p] == c ? 1.0 : 0.0);
        }
    }
    for (double& b : bias) b /= static_cast<double>(t.patterns);
    return bias;
}

std::vector<double> class_variance(const PosteriorEstimateTensor& t) {
    if (t.models == 0 || t.patterns == 0)
        throw std::invalid_argument("class_variance: empty tensor");
    std::vector<double> var(t.classes, 0.0);
    for (std::size_t p = 0; p < t.patterns; ++p) {
        for (std::size_t c = 0; c < t.classes; ++c) {
            double mean = 0.0;
            for (std::size_t m = 0; m < t.models; ++m) mean += t.at(m, p, c);
            mean /= static_cast<double>(t.models);
            double ss = 0.0;
            for (std::size_t m = 0; m < t.models; ++m) {
                const double d = t.at(m, p, c) - mean;
                ss += d * d;
            }
            var[c] += ss / static_cast<double>(t.models);
        }
    }
    for (double& x : var) x /= static_cast<double>(t.patterns);
    return var;
}

double posterior_variance_scalar(const PosteriorEstimateTensor& t) {
    const std::vector<double> var = class_variance(t);
    double sum = 0.0;
    for (double x : var) sum += x;
    return sum / static_cast<double>(var.size());
}

}  // namespace bvlab
