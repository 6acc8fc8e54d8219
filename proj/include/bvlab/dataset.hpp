#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace bvlab {

struct Dataset {
    std::size_t feature_dim = 0;
    std::size_t classes = 0;
    std::vector<double> x;  // row-major rows() * feature_dim
    std::vector<std::size_t> y;
    std::vector<std::size_t> train_index;
    std::vector<std::size_t> test_index;
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;  // class id -> original label text

    std::size_t rows() const { return y.size(); }
    const double* row(std::size_t r) const { return x.data() + r * feature_dim; }
};

// Numeric CSV with a header row. All columns except the label column (and the
// optional split column with values "train"/"test") are features. Class ids
// are assigned by sorting the distinct label strings, so loading is
// order-independent. Without a split column, rows are split by a seeded
// shuffle at train_fraction.
struct CsvSchema {
    std::string label_column = "label";
    std::string split_column;
    double train_fraction = 0.5;
    std::uint64_t split_seed = 1;
};

Dataset load_dataset_csv(const std::string& path, const CsvSchema& schema = {});

// Writes features, label, and a split column; load_dataset_csv round-trips it.
void write_dataset_csv(const Dataset& data, const std::string& path);

// Center and scale every feature using mean/sd of the train split only.
// Constant features are centered and left unscaled.
void standardize_features(Dataset& data);

}  // namespace bvlab
