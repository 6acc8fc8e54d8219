#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bvlab/dataset.hpp"
#include "bvlab/stats.hpp"

namespace bvlab {

struct MlpConfig {
    std::size_t hidden_nodes = 16;
    std::size_t epochs = 8;
    double learning_rate = 0.3;
    std::size_t batch_size = 1;  // 0 = full batch
    double init_range = 0.5;     // weights ~ U(-init_range, init_range)
    std::uint64_t seed = 1;
};

// One hidden sigmoid layer, softmax output, cross-entropy loss. Weight rows
// carry the bias as their last column.
struct Mlp {
    std::size_t input_dim = 0;
    std::size_t hidden_nodes = 0;
    std::size_t classes = 0;
    std::vector<double> w1;  // hidden_nodes x (input_dim + 1)
    std::vector<double> w2;  // classes x (hidden_nodes + 1)

    Mlp() = default;
    Mlp(std::size_t in, std::size_t hidden, std::size_t k);

    void posterior(const double* x, std::vector<double>& out) const;
    std::vector<double> posterior(const double* x) const;
    std::size_t predict(const double* x) const;  // argmax, ties to lowest index

    void save_json(const std::string& path) const;
    static Mlp load_json(const std::string& path);
};

// Seeded shuffled mini-batch gradient descent on the train split. Throws if
// the epoch loss goes non-finite (with the epoch and learning rate in the
// message).
Mlp train_mlp(const Dataset& data, const MlpConfig& cfg);

enum class Split { train, test };

// Posterior rows for one model over a split, in split-index order.
std::vector<double> predict_posteriors(const Mlp& model, const Dataset& data, Split split);

}  // namespace bvlab
