#pragma once

#include <cstddef>
#include <vector>

namespace bvlab {

// Probability vector over k labels. Entries in [0,1], sum within 1e-12 of 1.
class LabelDistribution {
public:
    explicit LabelDistribution(std::vector<double> probs);

    static LabelDistribution point_mass(std::size_t label, std::size_t k);

    std::size_t size() const { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }
    const std::vector<double>& probs() const { return p_; }

private:
    std::vector<double> p_;
};

// argmax label; ties resolve to the lowest index.
std::size_t systematic_part(const LabelDistribution& p);

// Additive 0/1-loss decomposition of one pattern:
//   expected_loss = var_response + systematic_effect + variance_effect
// where var_response is the irreducible part, the systematic effect is the
// loss added (or removed) by the predictor's systematic disagreement with the
// response, and the variance effect is what the predictor's spread around its
// own systematic part contributes.
struct PatternDecomposition {
    std::size_t response_class = 0;   // systematic part of the response (Bayes class)
    std::size_t predictor_class = 0;  // systematic part of the predictor
    double bias = 0.0;                // 1 if the two disagree
    double var_response = 0.0;        // 1 - max p
    double var_predictor = 0.0;       // 1 - max phat
    double systematic_effect = 0.0;
    double variance_effect = 0.0;
    double expected_loss = 0.0;       // 1 - sum_i p[i] * phat[i]
};

PatternDecomposition decompose_zero_one(const LabelDistribution& p,
                                        const LabelDistribution& phat);

// Weighted means of the scalar fields. Weights must be nonnegative and sum to
// 1 within 1e-9; empty weights means uniform.
struct AggregateDecomposition {
    double bias = 0.0;
    double var_response = 0.0;
    double var_predictor = 0.0;
    double systematic_effect = 0.0;
    double variance_effect = 0.0;
    double expected_loss = 0.0;
};

AggregateDecomposition aggregate(const std::vector<PatternDecomposition>& patterns,
                                 const std::vector<double>& weights = {});

// Empirical predictor distribution from hard votes.
LabelDistribution estimate_from_votes(const std::vector<std::size_t>& votes, std::size_t k);

enum class ResponseMode { point_mass };

// Response distribution for observed-label data. point_mass puts all mass on
// the observed label, which makes var_response 0 and charges label noise to
// the effect terms; callers must say so in reported metadata.
LabelDistribution response_distribution(std::size_t true_label, std::size_t k,
                                        ResponseMode mode);

// Squared-error decomposition of a scalar estimator against a noisy response:
//   E[(y - yhat)^2] = variance + bias_squared + noise
struct SquaredErrorDecomposition {
    double variance = 0.0;      // spread of the estimates (population)
    double bias_squared = 0.0;  // (mean estimate - response mean)^2
    double noise = 0.0;         // response variance, passed through
};

SquaredErrorDecomposition decompose_squared_error(const std::vector<double>& estimates,
                                                  double response_mean,
                                                  double response_variance);

}  // namespace bvlab
