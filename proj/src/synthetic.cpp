#include "bvlab/synthetic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bvlab/rng.hpp"

namespace bvlab {

Dataset make_gaussian_blobs(const BlobsConfig& cfg) {
    if (cfg.classes < 2 || cfg.dim == 0 || cfg.train_per_class == 0 || cfg.test_per_class == 0)
        throw std::invalid_argument("make_gaussian_blobs: bad configuration");
    if (!(cfg.mean_decay > 0.0))
        throw std::invalid_argument("make_gaussian_blobs: mean_decay must be positive");
    RandomStream rng(cfg.seed);

    std::vector<double> means(cfg.classes * cfg.dim);
    for (std::size_t c = 0; c < cfg.classes; ++c)
        for (std::size_t d = 0; d < cfg.dim; ++d)
            means[c * cfg.dim + d] =
                cfg.mean_scale * std::pow(cfg.mean_decay, static_cast<double>(d)) * rng.gaussian();

    Dataset data;
    data.feature_dim = cfg.dim;
    data.classes = cfg.classes;
    for (std::size_t d = 0; d < cfg.dim; ++d)
        data.feature_names.push_back("f" + std::to_string(d));
    for (std::size_t c = 0; c < cfg.classes; ++c)
        data.class_names.push_back("c" + std::to_string(c));

    auto emit_block = [&](std::size_t per_class, std::vector<std::size_t>& index) {
        for (std::size_t c = 0; c < cfg.classes; ++c) {
            for (std::size_t i = 0; i < per_class; ++i) {
                index.push_back(data.y.size());
                data.y.push_back(c);
                for (std::size_t d = 0; d < cfg.dim; ++d)
                    data.x.push_back(means[c * cfg.dim + d] + cfg.noise_sd * rng.gaussian());
            }
        }
    };
    emit_block(cfg.train_per_class, data.train_index);
    emit_block(cfg.test_per_class, data.test_index);
    return data;
}

Dataset make_xor_dataset() {
    Dataset data;
    data.feature_dim = 2;
    data.classes = 2;
    data.feature_names = {"f0", "f1"};
    data.class_names = {"c0", "c1"};
    data.x = {0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0};
    data.y = {0, 1, 1, 0};
    data.train_index = {0, 1, 2, 3};
    data.test_index = {0, 1, 2, 3};
    return data;
}

Dataset make_segmentation_surrogate() {
    // Calibrated so the case studies show their regimes. mean_decay 0.75
    // concentrates class separation in the leading dimensions, making
    // capacity matter; the anchor class holds 60 of the 210 train rows, so
    // barely trained networks share a majority-class attractor (a skewed
    // boundary distribution) while the balanced test block scores them
    // fairly. Changing any constant changes data/surrogate7.csv.
    const std::size_t classes = 7;
    const std::size_t dim = 19;
    const double mean_scale = 2.5;
    const double mean_decay = 0.75;

    RandomStream rng(4);
    std::vector<double> means(classes * dim);
    for (std::size_t c = 0; c < classes; ++c)
        for (std::size_t d = 0; d < dim; ++d)
            means[c * dim + d] =
                mean_scale * std::pow(mean_decay, static_cast<double>(d)) * rng.gaussian();

    Dataset data;
    data.feature_dim = dim;
    data.classes = classes;
    for (std::size_t d = 0; d < dim; ++d)
        data.feature_names.push_back("f" + std::to_string(d));
    for (std::size_t c = 0; c < classes; ++c)
        data.class_names.push_back("c" + std::to_string(c));

    auto emit = [&](std::size_t c, std::size_t count, std::vector<std::size_t>& index) {
        for (std::size_t i = 0; i < count; ++i) {
            index.push_back(data.y.size());
            data.y.push_back(c);
            for (std::size_t d = 0; d < dim; ++d)
                data.x.push_back(means[c * dim + d] + rng.gaussian());
        }
    };
    for (std::size_t c = 0; c < classes; ++c) emit(c, c == 0 ? 60 : 25, data.train_index);
    for (std::size_t c = 0; c < classes; ++c) emit(c, 300, data.test_index);
    return data;
}

}  // namespace bvlab
