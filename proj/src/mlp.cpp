#include "bvlab/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "bvlab/io.hpp"
#include "bvlab/rng.hpp"

namespace bvlab {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

Mlp::Mlp(std::size_t in, std::size_t hidden, std::size_t k)
    : input_dim(in),
      hidden_nodes(hidden),
      classes(k),
      w1(hidden * (in + 1), 0.0),
      w2(k * (hidden + 1), 0.0) {
    if (in == 0 || hidden == 0 || k < 2)
        throw std::invalid_argument("Mlp: need input_dim >= 1, hidden >= 1, classes >= 2");
}

void Mlp::posterior(const double* x, std::vector<double>& out) const {
    std::vector<double> h(hidden_nodes);
    for (std::size_t j = 0; j < hidden_nodes; ++j) {
        const double* row = w1.data() + j * (input_dim + 1);
        double z = row[input_dim];
        for (std::size_t i = 0; i < input_dim; ++i) z += row[i] * x[i];
        h[j] = sigmoid(z);
    }
    out.assign(classes, 0.0);
    double zmax = -1e300;
    for (std::size_t c = 0; c < classes; ++c) {
        const double* row = w2.data() + c * (hidden_nodes + 1);
        double z = row[hidden_nodes];
        for (std::size_t j = 0; j < hidden_nodes; ++j) z += row[j] * h[j];
        out[c] = z;
        zmax = std::max(zmax, z);
    }
    double sum = 0.0;
    for (double& z : out) {
        z = std::exp(z - zmax);
        sum += z;
    }
    for (double& z : out) z /= sum;
}

std::vector<double> Mlp::posterior(const double* x) const {
    std::vector<double> out;
    posterior(x, out);
    return out;
}

std::size_t Mlp::predict(const double* x) const {
    const std::vector<double> p = posterior(x);
    std::size_t best = 0;
    for (std::size_t c = 1; c < classes; ++c)
        if (p[c] > p[best]) best = c;
    return best;
}

Mlp train_mlp(const Dataset& data, const MlpConfig& cfg) {
    if (data.train_index.empty()) throw std::invalid_argument("train_mlp: empty train split");
    if (cfg.hidden_nodes == 0 || cfg.epochs == 0)
        throw std::invalid_argument("train_mlp: hidden_nodes and epochs must be >= 1");
    if (!(cfg.learning_rate > 0.0))
        throw std::invalid_argument("train_mlp: learning_rate must be positive");

    Mlp net(data.feature_dim, cfg.hidden_nodes, data.classes);
    RandomStream rng(cfg.seed);
    for (double& w : net.w1) w = rng.uniform(-cfg.init_range, cfg.init_range);
    for (double& w : net.w2) w = rng.uniform(-cfg.init_range, cfg.init_range);

    const std::size_t n = data.train_index.size();
    const std::size_t batch = cfg.batch_size == 0 ? n : std::min(cfg.batch_size, n);
    std::vector<std::size_t> order(data.train_index);
    std::vector<double> h(cfg.hidden_nodes), p(data.classes);
    std::vector<double> g1(net.w1.size()), g2(net.w2.size());
    std::vector<double> dh(cfg.hidden_nodes);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = n; i > 1; --i)
            std::swap(order[i - 1], order[rng.index(i)]);

        double loss = 0.0;
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t stop = std::min(start + batch, n);
            std::fill(g1.begin(), g1.end(), 0.0);
            std::fill(g2.begin(), g2.end(), 0.0);
            for (std::size_t t = start; t < stop; ++t) {
                const double* x = data.row(order[t]);
                const std::size_t label = data.y[order[t]];

                for (std::size_t j = 0; j < cfg.hidden_nodes; ++j) {
                    const double* row = net.w1.data() + j * (data.feature_dim + 1);
                    double z = row[data.feature_dim];
                    for (std::size_t i = 0; i < data.feature_dim; ++i) z += row[i] * x[i];
                    h[j] = sigmoid(z);
                }
                double zmax = -1e300;
                for (std::size_t c = 0; c < data.classes; ++c) {
                    const double* row = net.w2.data() + c * (cfg.hidden_nodes + 1);
                    double z = row[cfg.hidden_nodes];
                    for (std::size_t j = 0; j < cfg.hidden_nodes; ++j) z += row[j] * h[j];
                    p[c] = z;
                    zmax = std::max(zmax, z);
                }
                double sum = 0.0;
                for (double& z : p) {
                    z = std::exp(z - zmax);
                    sum += z;
                }
                for (double& z : p) z /= sum;
                loss -= std::log(std::max(p[label], 1e-300));

                std::fill(dh.begin(), dh.end(), 0.0);
                for (std::size_t c = 0; c < data.classes; ++c) {
                    const double delta = p[c] - (c == label ? 1.0 : 0.0);
                    double* grow = g2.data() + c * (cfg.hidden_nodes + 1);
                    const double* wrow = net.w2.data() + c * (cfg.hidden_nodes + 1);
                    for (std::size_t j = 0; j < cfg.hidden_nodes; ++j) {
                        grow[j] += delta * h[j];
                        dh[j] += delta * wrow[j];
                    }
                    grow[cfg.hidden_nodes] += delta;
                }
                for (std::size_t j = 0; j < cfg.hidden_nodes; ++j) {
                    const double delta = dh[j] * h[j] * (1.0 - h[j]);
                    double* grow = g1.data() + j * (data.feature_dim + 1);
                    for (std::size_t i = 0; i < data.feature_dim; ++i) grow[i] += delta * x[i];
                    grow[data.feature_dim] += delta;
                }
            }
            const double step = cfg.learning_rate / static_cast<double>(stop - start);
            for (std::size_t k = 0; k < net.w1.size(); ++k) net.w1[k] -= step * g1[k];
            for (std::size_t k = 0; k < net.w2.size(); ++k) net.w2[k] -= step * g2[k];
        }
        if (!std::isfinite(loss))
            throw std::runtime_error("train_mlp: loss diverged at epoch " +
                                     std::to_string(epoch) + " (learning_rate " +
                                     format_double(cfg.learning_rate) + ")");
    }
    return net;
}

std::vector<double> predict_posteriors(const Mlp& model, const Dataset& data, Split split) {
    if (model.input_dim != data.feature_dim || model.classes != data.classes)
        throw std::invalid_argument("predict_posteriors: model/dataset shape mismatch");
    const std::vector<std::size_t>& index =
        split == Split::train ? data.train_index : data.test_index;
    std::vector<double> out(index.size() * model.classes);
    std::vector<double> p;
    for (std::size_t r = 0; r < index.size(); ++r) {
        model.posterior(data.row(index[r]), p);
        std::copy(p.begin(), p.end(), out.begin() + static_cast<std::ptrdiff_t>(r * model.classes));
    }
    return out;
}

void Mlp::save_json(const std::string& path) const {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["model"] = "mlp-sigmoid-softmax";
    doc["input_dim"] = input_dim;
    doc["hidden_nodes"] = hidden_nodes;
    doc["classes"] = classes;
    doc["w1"] = w1;
    doc["w2"] = w2;
    write_text_file(path, doc.dump(2) + "\n");
}

Mlp Mlp::load_json(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(path + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object() || doc.value("schema_version", 0) != 1 ||
        doc.value("model", "") != "mlp-sigmoid-softmax")
        throw std::runtime_error(path + ": not a version-1 mlp-sigmoid-softmax document");
    Mlp net(doc.at("input_dim").get<std::size_t>(), doc.at("hidden_nodes").get<std::size_t>(),
            doc.at("classes").get<std::size_t>());
    net.w1 = doc.at("w1").get<std::vector<double>>();
    net.w2 = doc.at("w2").get<std::vector<double>>();
    if (net.w1.size() != net.hidden_nodes * (net.input_dim + 1) ||
        net.w2.size() != net.classes * (net.hidden_nodes + 1))
        throw std::runtime_error(path + ": weight shapes do not match the declared dimensions");
    return net;
}

}  // namespace bvlab
