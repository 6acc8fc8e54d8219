#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bvlab/boundary.hpp"
#include "bvlab/exec.hpp"

namespace bvlab {

// Shortest decimal text that round-trips the exact double. Used for every
// number this project writes, so outputs are byte-stable.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Minimal CSV quoting: fields containing commas, quotes, or newlines are
// wrapped and inner quotes doubled.
std::string csv_escape(const std::string& field);

// --- scenario bundles ---
//
// JSON description of a boundary scenario:
// {
//   "schema_version": 1,
//   "slope_s": 2.0, "t1": -0.45, "t2": 0.45,
//   "eta": 0.05                       (or {"a": [...], "value": [...]})
//   "z": optional, same shapes; cross-checked against the derived profile
//   "noise": {"biases": [l, r], "variances": [l, r], "cov": 0.0}   (optional)
//   "boundary": {"family": "gaussian", "mean": m, "variance": v}   (optional)
//             | {"family": "uniform", "lo": a, "hi": b}
//             | {"family": "atoms", "locations": [...], "weights": [...]}
//             | {"family": "sampled", "n": 100000, "seed": 1}      (needs noise)
//             | {"family": "from-noise"}                           (needs noise)
// }
// Unknown keys anywhere are rejected.

struct BoundarySpec {
    enum class Kind { gaussian, uniform, atoms, sampled, from_noise };
    Kind kind = Kind::from_noise;
    double mean = 0.0, variance = 0.0;
    double lo = 0.0, hi = 0.0;
    std::vector<std::pair<double, double>> atom_list;
    std::size_t sample_n = 100000;
    std::uint64_t sample_seed = 1;
};

struct ScenarioBundle {
    PosteriorScenario scenario;
    std::optional<NoiseModel> noise;
    std::optional<BoundarySpec> boundary;
};

ScenarioBundle load_scenario_bundle(const std::string& path);

// Builds the distribution the bundle describes. "sampled" draws from the
// noise model; "from-noise" is the Gaussian with the noise-implied moments.
BoundaryDistribution realize_boundary(const ScenarioBundle& bundle,
                                      Execution exec = Execution::parallel);

// --- prediction logs ---
//
// CSV with header columns run_id, pattern_id, predicted_class, true_class
// (any order, no extras). Each pattern must keep one true class across rows.

struct PredictionLog {
    std::vector<std::size_t> pattern_ids;             // ascending
    std::vector<std::size_t> true_labels;             // per pattern
    std::vector<std::vector<std::size_t>> votes;      // per pattern, ordered by run_id
    std::size_t classes = 0;
};

PredictionLog load_prediction_log_csv(const std::string& path);

// Headerless numeric matrix, one row per line.
std::vector<std::vector<double>> load_matrix_csv(const std::string& path);

}  // namespace bvlab
