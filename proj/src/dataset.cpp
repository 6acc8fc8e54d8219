#include "bvlab/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "bvlab/io.hpp"
#include "bvlab/rng.hpp"

namespace bvlab {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

Dataset load_dataset_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    const std::vector<std::string> header = split_line(line);

    std::size_t label_col = header.size();
    std::size_t split_col = header.size();
    std::vector<std::size_t> feature_cols;
    Dataset data;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == schema.label_column) {
            label_col = i;
        } else if (!schema.split_column.empty() && header[i] == schema.split_column) {
            split_col = i;
        } else {
            feature_cols.push_back(i);
            data.feature_names.push_back(header[i]);
        }
    }
    if (label_col == header.size())
        throw std::runtime_error(path + ": no label column \"" + schema.label_column + "\"");
    if (!schema.split_column.empty() && split_col == header.size())
        throw std::runtime_error(path + ": no split column \"" + schema.split_column + "\"");
    if (feature_cols.empty()) throw std::runtime_error(path + ": no feature columns");

    data.feature_dim = feature_cols.size();
    std::vector<std::string> labels;
    std::vector<int> split_flags;  // 0 train, 1 test
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> f = split_line(line);
        if (f.size() != header.size())
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(header.size()) + " fields, got " +
                                     std::to_string(f.size()));
        for (std::size_t c : feature_cols) {
            double v = 0.0;
            const auto res = std::from_chars(f[c].data(), f[c].data() + f[c].size(), v);
            if (res.ec != std::errc() || res.ptr != f[c].data() + f[c].size() ||
                !std::isfinite(v))
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": feature \"" + header[c] +
                                         "\" is not a finite number: \"" + f[c] + "\"");
            data.x.push_back(v);
        }
        labels.push_back(f[label_col]);
        if (split_col != header.size()) {
            if (f[split_col] == "train")
                split_flags.push_back(0);
            else if (f[split_col] == "test")
                split_flags.push_back(1);
            else
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": split must be \"train\" or \"test\", got \"" +
                                         f[split_col] + "\"");
        }
    }
    if (labels.empty()) throw std::runtime_error(path + ": no data rows");

    // sorted distinct label text -> class id, so row order never changes ids
    std::map<std::string, std::size_t> id_of;
    for (const std::string& l : labels) id_of.emplace(l, 0);
    for (auto& [text, id] : id_of) {
        id = data.class_names.size();
        data.class_names.push_back(text);
    }
    data.classes = data.class_names.size();
    data.y.reserve(labels.size());
    for (const std::string& l : labels) data.y.push_back(id_of[l]);

    if (split_col != header.size()) {
        for (std::size_t r = 0; r < data.rows(); ++r)
            (split_flags[r] == 0 ? data.train_index : data.test_index).push_back(r);
    } else {
        std::vector<std::size_t> order(data.rows());
        for (std::size_t r = 0; r < order.size(); ++r) order[r] = r;
        RandomStream rng(schema.split_seed);
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.index(i)]);
        const auto cut = static_cast<std::size_t>(
            std::ceil(schema.train_fraction * static_cast<double>(order.size())));
        data.train_index.assign(order.begin(), order.begin() + std::min(cut, order.size()));
        data.test_index.assign(order.begin() + std::min(cut, order.size()), order.end());
        std::sort(data.train_index.begin(), data.train_index.end());
        std::sort(data.test_index.begin(), data.test_index.end());
    }
    if (data.train_index.empty())
        throw std::runtime_error(path + ": train split is empty");
    return data;
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
    std::vector<int> split(data.rows(), -1);
    for (std::size_t r : data.train_index) split[r] = 0;
    for (std::size_t r : data.test_index) {
        if (split[r] == 0)
            throw std::invalid_argument("write_dataset_csv: row in both splits");
        split[r] = 1;
    }
    for (int s : split)
        if (s < 0) throw std::invalid_argument("write_dataset_csv: row in neither split");

    std::string out;
    for (std::size_t d = 0; d < data.feature_dim; ++d) {
        out += d < data.feature_names.size() ? csv_escape(data.feature_names[d])
                                             : "f" + std::to_string(d);
        out += ',';
    }
    out += "label,split\n";
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (std::size_t d = 0; d < data.feature_dim; ++d) {
            out += format_double(data.row(r)[d]);
            out += ',';
        }
        out += r < data.y.size() && data.y[r] < data.class_names.size()
                   ? csv_escape(data.class_names[data.y[r]])
                   : std::to_string(data.y[r]);
        out += split[r] == 0 ? ",train\n" : ",test\n";
    }
    write_text_file(path, out);
}

void standardize_features(Dataset& data) {
    if (data.train_index.empty())
        throw std::invalid_argument("standardize_features: empty train split");
    const double n = static_cast<double>(data.train_index.size());
    for (std::size_t d = 0; d < data.feature_dim; ++d) {
        double mean = 0.0;
        for (std::size_t r : data.train_index) mean += data.row(r)[d];
        mean /= n;
        double ss = 0.0;
        for (std::size_t r : data.train_index) {
            const double dv = data.row(r)[d] - mean;
            ss += dv * dv;
        }
        const double sd = std::sqrt(ss / n);
        const double scale = sd > 0.0 ? 1.0 / sd : 1.0;
        for (std::size_t r = 0; r < data.rows(); ++r) {
            double& v = data.x[r * data.feature_dim + d];
            v = (v - mean) * scale;
        }
    }
}

}  // namespace bvlab
