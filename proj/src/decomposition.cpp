#include "bvlab/decomposition.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bvlab {

namespace {

constexpr double kSumTol = 1e-12;

void check_simplex(const std::vector<double>& p, const char* what) {
    if (p.empty()) throw std::invalid_argument(std::string(what) + ": empty distribution");
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument(std::string(what) + ": entry outside [0,1]");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTol)
        throw std::invalid_argument(std::string(what) + ": entries sum to " + std::to_string(sum));
}

}  // namespace

LabelDistribution::LabelDistribution(std::vector<double> probs) : p_(std::move(probs)) {
    check_simplex(p_, "LabelDistribution");
}

LabelDistribution LabelDistribution::point_mass(std::size_t label, std::size_t k) {
    if (label >= k) throw std::invalid_argument("point_mass: label out of range");
    std::vector<double> p(k, 0.0);
    p[label] = 1.0;
    return LabelDistribution(std::move(p));
}

std::size_t systematic_part(const LabelDistribution& p) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
        if (p[i] > p[best]) best = i;
    return best;
}

PatternDecomposition decompose_zero_one(const LabelDistribution& p,
                                        const LabelDistribution& phat) {
    if (p.size() != phat.size())
        throw std::invalid_argument("decompose_zero_one: label count mismatch");
    const std::size_t sy = systematic_part(p);
    const std::size_t syhat = systematic_part(phat);

    double overlap = 0.0;  // sum_i p[i] * phat[i] = P(agree)
    for (std::size_t i = 0; i < p.size(); ++i) overlap += p[i] * phat[i];

    PatternDecomposition d;
    d.response_class = sy;
    d.predictor_class = syhat;
    d.bias = (sy == syhat) ? 0.0 : 1.0;
    d.var_response = 1.0 - p[sy];
    d.var_predictor = 1.0 - phat[syhat];
    d.systematic_effect = p[sy] - p[syhat];
    d.variance_effect = p[syhat] - overlap;
    d.expected_loss = 1.0 - overlap;
    return d;
}

AggregateDecomposition aggregate(const std::vector<PatternDecomposition>& patterns,
                                 const std::vector<double>& weights) {
    if (patterns.empty()) throw std::invalid_argument("aggregate: no patterns");
    std::vector<double> w = weights;
    if (w.empty()) {
        w.assign(patterns.size(), 1.0 / static_cast<double>(patterns.size()));
    } else {
        if (w.size() != patterns.size())
            throw std::invalid_argument("aggregate: weight count mismatch");
        double sum = 0.0;
        for (double v : w) {
            if (!(v >= 0.0)) throw std::invalid_argument("aggregate: negative weight");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("aggregate: weights sum to " + std::to_string(sum));
    }
    AggregateDecomposition a;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        a.bias += w[i] * patterns[i].bias;
        a.var_response += w[i] * patterns[i].var_response;
        a.var_predictor += w[i] * patterns[i].var_predictor;
        a.systematic_effect += w[i] * patterns[i].systematic_effect;
        a.variance_effect += w[i] * patterns[i].variance_effect;
        a.expected_loss += w[i] * patterns[i].expected_loss;
    }
    return a;
}

LabelDistribution estimate_from_votes(const std::vector<std::size_t>& votes, std::size_t k) {
    if (votes.empty()) throw std::invalid_argument("estimate_from_votes: no votes");
    std::vector<double> counts(k, 0.0);
    for (std::size_t v : votes) {
        if (v >= k) throw std::invalid_argument("estimate_from_votes: vote out of range");
        counts[v] += 1.0;
    }
    for (double& c : counts) c /= static_cast<double>(votes.size());
    return LabelDistribution(std::move(counts));
}

LabelDistribution response_distribution(std::size_t true_label, std::size_t k,
                                        ResponseMode mode) {
    switch (mode) {
        case ResponseMode::point_mass:
            return LabelDistribution::point_mass(true_label, k);
    }
    throw std::invalid_argument("response_distribution: unknown mode");
}

SquaredErrorDecomposition decompose_squared_error(const std::vector<double>& estimates,
                                                  double response_mean,
                                                  double response_variance) {
    if (estimates.empty())
        throw std::invalid_argument("decompose_squared_error: no estimates");
    if (!(response_variance >= 0.0))
        throw std::invalid_argument("decompose_squared_error: negative response variance");
    const double n = static_cast<double>(estimates.size());
    double mean = 0.0;
    for (double e : estimates) mean += e;
    mean /= n;
    double var = 0.0;
    for (double e : estimates) var += (e - mean) * (e - mean);
    var /= n;
    SquaredErrorDecomposition d;
    d.variance = var;
    d.bias_squared = (mean - response_mean) * (mean - response_mean);
    d.noise = response_variance;
    return d;
}

}  // namespace bvlab
