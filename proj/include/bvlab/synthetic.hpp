#pragma once

#include <cstdint>

#include "bvlab/dataset.hpp"

namespace bvlab {

// Seeded Gaussian mixture: the class mean along dimension d is drawn from
// N(0, (mean_scale * mean_decay^d)^2), samples from N(mean, noise_sd^2 I).
// mean_decay < 1 concentrates the class separation in the leading
// dimensions, so low-capacity learners are all drawn to the same dominant
// direction while full separation still needs the tail dimensions. Rows are
// class-major, train block first, then the test block.
struct BlobsConfig {
    std::size_t classes = 3;
    std::size_t dim = 2;
    std::size_t train_per_class = 30;
    std::size_t test_per_class = 100;
    double mean_scale = 1.0;
    double mean_decay = 1.0;
    double noise_sd = 1.0;
    std::uint64_t seed = 1;
};

Dataset make_gaussian_blobs(const BlobsConfig& cfg);

// Four XOR patterns; train and test splits both cover all four.
Dataset make_xor_dataset();

// The committed 7-class, 19-feature case-study surrogate: 210 train rows
// (60 for the anchor class, 25 for each other class) and a balanced 2100-row
// test block. Dimension-decaying class separation makes a 16-node, 8-epoch
// network strong while a 1-node, 1-epoch one collapses onto the anchor
// class. data/surrogate7.csv is this dataset written out.
Dataset make_segmentation_surrogate();

}  // namespace bvlab
