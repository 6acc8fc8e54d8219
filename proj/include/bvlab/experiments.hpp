#pragma once

#include <cstdint>
#include <vector>

#include "bvlab/dataset.hpp"
#include "bvlab/exec.hpp"
#include "bvlab/mlp.hpp"

namespace bvlab {

// Per-group statistics over the test split. The variance effect uses the
// point-mass response convention (observed labels are the truth), and the
// correlation is estimated from posterior errors against that same one-hot
// response; both conventions are echoed in report metadata.
struct GroupRecord {
    double error_rate = 0.0;          // mean expected 0/1 loss of the members
    double correlation = 0.0;         // overall C of the member error signals
    double posterior_variance = 0.0;  // scalar spread of member posteriors
    double variance_effect = 0.0;     // aggregate variance effect
    double ensemble_gain = 0.0;       // averaged-posterior acc - mean member acc
};

GroupRecord summarize_group(const PosteriorEstimateTensor& tensor,
                            const std::vector<std::size_t>& labels);

struct CaseOneConfig {
    std::size_t groups = 200;
    std::size_t classifiers_per_group = 6;
    MlpConfig base;  // per-model seeds are derived from seed, not base.seed
    std::uint64_t seed = 7;
};

struct CaseOneResult {
    std::vector<GroupRecord> groups;
    double corr_variance_vs_ve = 0.0;     // posterior_variance vs variance_effect
    double corr_error_vs_variance = 0.0;  // error_rate vs posterior_variance
    double corr_c_vs_gain = 0.0;          // correlation vs ensemble_gain
};

CaseOneResult run_case_one(const Dataset& data, const CaseOneConfig& cfg,
                           Execution exec = Execution::parallel);

struct LadderRung {
    std::size_t hidden_nodes = 1;
    std::size_t epochs = 1;
};

struct RungRecord {
    LadderRung rung;
    double error_rate = 0.0;
    double variance_effect = 0.0;
    double aggregate_accuracy = 0.0;    // plurality vote
    double mean_member_accuracy = 0.0;
};

struct CaseTwoConfig {
    std::vector<LadderRung> ladder{{16, 32}, {8, 8}, {2, 4}, {1, 1}};
    std::size_t classifiers = 50;
    MlpConfig base;
    std::uint64_t seed = 11;
};

struct CaseTwoResult {
    std::vector<RungRecord> rungs;
};

CaseTwoResult run_case_two(const Dataset& data, const CaseTwoConfig& cfg,
                           Execution exec = Execution::parallel);

}  // namespace bvlab
