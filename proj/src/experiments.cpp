#include "bvlab/experiments.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>

#include "bvlab/decomposition.hpp"
#include "bvlab/ensemble.hpp"
#include "bvlab/rng.hpp"
#include "bvlab/stats.hpp"

namespace bvlab {

namespace {

std::size_t argmax_row(const double* p, std::size_t k) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < k; ++c)
        if (p[c] > p[best]) best = c;
    return best;
}

// Exceptions must not unwind out of an OpenMP region; the first one is
// stashed and rethrown after the loop.
template <class Fn>
void for_each_index_guarded(std::size_t count, Execution exec, Fn&& fn) {
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex mu;
    for_each_index(count, exec, [&](std::size_t i) {
        if (failed.load(std::memory_order_relaxed)) return;
        try {
            fn(i);
        } catch (...) {
            const std::lock_guard<std::mutex> lock(mu);
            if (!error) error = std::current_exception();
            failed.store(true, std::memory_order_relaxed);
        }
    });
    if (error) std::rethrow_exception(error);
}

double pearson_or_zero(const std::vector<double>& x, const std::vector<double>& y) {
    if (zero_spread(x) || zero_spread(y)) return 0.0;
    return pearson(x, y);
}

std::vector<std::size_t> test_labels(const Dataset& data) {
    std::vector<std::size_t> labels;
    labels.reserve(data.test_index.size());
    for (std::size_t r : data.test_index) labels.push_back(data.y[r]);
    return labels;
}

}  // namespace

GroupRecord summarize_group(const PosteriorEstimateTensor& tensor,
                            const std::vector<std::size_t>& labels) {
    const std::size_t models = tensor.models;
    const std::size_t patterns = tensor.patterns;
    const std::size_t k = tensor.classes;
    if (labels.size() != patterns)
        throw std::invalid_argument("summarize_group: label count mismatch");
    if (models < 2) throw std::invalid_argument("summarize_group: need at least two members");

    GroupRecord rec;

    // member votes -> predictor distribution -> 0/1-loss decomposition
    std::vector<PatternDecomposition> decomps;
    decomps.reserve(patterns);
    std::vector<std::size_t> votes(models);
    double mean_member_acc = 0.0;
    double aggregate_acc = 0.0;
    std::vector<double> mean_posterior(k);
    for (std::size_t p = 0; p < patterns; ++p) {
        for (std::size_t c = 0; c < k; ++c) mean_posterior[c] = 0.0;
        for (std::size_t m = 0; m < models; ++m) {
            votes[m] = argmax_row(&tensor.v[(m * patterns + p) * k], k);
            for (std::size_t c = 0; c < k; ++c) mean_posterior[c] += tensor.at(m, p, c);
            if (votes[m] == labels[p]) mean_member_acc += 1.0;
        }
        if (argmax_row(mean_posterior.data(), k) == labels[p]) aggregate_acc += 1.0;
        decomps.push_back(decompose_zero_one(
            response_distribution(labels[p], k, ResponseMode::point_mass),
            estimate_from_votes(votes, k)));
    }
    const AggregateDecomposition agg = aggregate(decomps);
    rec.error_rate = agg.expected_loss;
    rec.variance_effect = agg.variance_effect;
    mean_member_acc /= static_cast<double>(models * patterns);
    aggregate_acc /= static_cast<double>(patterns);
    rec.ensemble_gain = aggregate_acc - mean_member_acc;

    rec.posterior_variance = posterior_variance_scalar(tensor);

    // per-class error signals against the point-mass response (the same
    // truth reference the variance effect uses). Errors against the
    // across-member mean would cancel the shared component, and the shared
    // component is exactly what the correlation is supposed to measure.
    std::vector<ErrorMatrix> errors(k, ErrorMatrix(models, std::vector<double>(patterns)));
    for (std::size_t p = 0; p < patterns; ++p)
        for (std::size_t c = 0; c < k; ++c) {
            const double truth = labels[p] == c ? 1.0 : 0.0;
            for (std::size_t m = 0; m < models; ++m)
                errors[c][m][p] = tensor.at(m, p, c) - truth;
        }
    std::vector<double> priors(k, 0.0);
    for (std::size_t p = 0; p < patterns; ++p) priors[labels[p]] += 1.0;
    for (double& q : priors) q /= static_cast<double>(patterns);
    rec.correlation =
        average_error_correlation(errors, priors, Execution::serial).overall;
    return rec;
}

CaseOneResult run_case_one(const Dataset& data, const CaseOneConfig& cfg, Execution exec) {
    if (cfg.groups < 2) throw std::invalid_argument("run_case_one: need at least two groups");
    if (cfg.classifiers_per_group < 2)
        throw std::invalid_argument("run_case_one: need at least two classifiers per group");
    if (data.test_index.empty()) throw std::invalid_argument("run_case_one: empty test split");

    const std::size_t patterns = data.test_index.size();
    const std::size_t k = data.classes;
    const std::size_t total = cfg.groups * cfg.classifiers_per_group;

    std::vector<PosteriorEstimateTensor> tensors(cfg.groups);
    for (auto& t : tensors) t = PosteriorEstimateTensor(cfg.classifiers_per_group, patterns, k);

    for_each_index_guarded(total, exec, [&](std::size_t flat) {
        const std::size_t g = flat / cfg.classifiers_per_group;
        const std::size_t m = flat % cfg.classifiers_per_group;
        MlpConfig mc = cfg.base;
        mc.seed = derive_seed(cfg.seed, flat);
        const Mlp net = train_mlp(data, mc);
        const std::vector<double> rows = predict_posteriors(net, data, Split::test);
        std::copy(rows.begin(), rows.end(),
                  tensors[g].v.begin() + static_cast<std::ptrdiff_t>(m * patterns * k));
    });

    const std::vector<std::size_t> labels = test_labels(data);
    CaseOneResult result;
    result.groups.reserve(cfg.groups);
    for (const auto& tensor : tensors) result.groups.push_back(summarize_group(tensor, labels));

    std::vector<double> err, corr, pvar, ve, gain;
    for (const GroupRecord& r : result.groups) {
        err.push_back(r.error_rate);
        corr.push_back(r.correlation);
        pvar.push_back(r.posterior_variance);
        ve.push_back(r.variance_effect);
        gain.push_back(r.ensemble_gain);
    }
    result.corr_variance_vs_ve = pearson_or_zero(pvar, ve);
    result.corr_error_vs_variance = pearson_or_zero(err, pvar);
    result.corr_c_vs_gain = pearson_or_zero(corr, gain);
    return result;
}

CaseTwoResult run_case_two(const Dataset& data, const CaseTwoConfig& cfg, Execution exec) {
    if (cfg.ladder.empty()) throw std::invalid_argument("run_case_two: empty ladder");
    if (cfg.classifiers < 2)
        throw std::invalid_argument("run_case_two: need at least two classifiers");
    if (data.test_index.empty()) throw std::invalid_argument("run_case_two: empty test split");

    const std::size_t patterns = data.test_index.size();
    const std::size_t k = data.classes;
    const std::size_t total = cfg.ladder.size() * cfg.classifiers;

    std::vector<PosteriorEstimateTensor> tensors(cfg.ladder.size());
    for (auto& t : tensors) t = PosteriorEstimateTensor(cfg.classifiers, patterns, k);

    for_each_index_guarded(total, exec, [&](std::size_t flat) {
        const std::size_t rung = flat / cfg.classifiers;
        const std::size_t m = flat % cfg.classifiers;
        MlpConfig mc = cfg.base;
        mc.hidden_nodes = cfg.ladder[rung].hidden_nodes;
        mc.epochs = cfg.ladder[rung].epochs;
        mc.seed = derive_seed(cfg.seed, flat);
        const Mlp net = train_mlp(data, mc);
        const std::vector<double> rows = predict_posteriors(net, data, Split::test);
        std::copy(rows.begin(), rows.end(),
                  tensors[rung].v.begin() + static_cast<std::ptrdiff_t>(m * patterns * k));
    });

    const std::vector<std::size_t> labels = test_labels(data);
    CaseTwoResult result;
    for (std::size_t rung = 0; rung < cfg.ladder.size(); ++rung) {
        const GroupRecord rec = summarize_group(tensors[rung], labels);
        RungRecord rr;
        rr.rung = cfg.ladder[rung];
        rr.error_rate = rec.error_rate;
        rr.variance_effect = rec.variance_effect;
        rr.mean_member_accuracy = 1.0 - rec.error_rate;
        // variance effect under a point-mass response is exactly
        // plurality accuracy - mean member accuracy
        rr.aggregate_accuracy = rec.variance_effect + rr.mean_member_accuracy;
        result.rungs.push_back(rr);
    }
    return result;
}

}  // namespace bvlab
