#include "bvlab/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

namespace bvlab {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw std::runtime_error(path + ": " + msg);
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& path, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) fail(path, "unknown key \"" + it.key() + "\" in " + where);
    }
}

double need_number(const json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key)) fail(path, std::string("missing key \"") + key + "\"");
    if (!obj[key].is_number()) fail(path, std::string("key \"") + key + "\" must be a number");
    return obj[key].get<double>();
}

// "eta"/"z" accept a constant or {"a": [...], "value": [...]}
std::vector<std::pair<double, double>> parse_profile(const json& v, const char* key,
                                                     const std::string& path) {
    std::vector<std::pair<double, double>> knots;
    if (v.is_number()) {
        knots.emplace_back(0.0, v.get<double>());
        return knots;
    }
    if (!v.is_object()) fail(path, std::string(key) + " must be a number or {a, value}");
    reject_unknown_keys(v, {"a", "value"}, path, key);
    if (!v.contains("a") || !v.contains("value") || !v["a"].is_array() ||
        !v["value"].is_array() || v["a"].size() != v["value"].size() || v["a"].empty())
        fail(path, std::string(key) + " table needs equal-length a/value arrays");
    for (std::size_t i = 0; i < v["a"].size(); ++i)
        knots.emplace_back(v["a"][i].get<double>(), v["value"][i].get<double>());
    return knots;
}

}  // namespace

ScenarioBundle load_scenario_bundle(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        fail(path, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail(path, "top level must be an object");
    reject_unknown_keys(doc, {"schema_version", "slope_s", "t1", "t2", "eta", "z", "noise",
                              "boundary"},
                        path, "scenario");
    if (need_number(doc, "schema_version", path) != 1)
        fail(path, "unsupported schema_version (expected 1)");

    const double s = need_number(doc, "slope_s", path);
    const double t1 = need_number(doc, "t1", path);
    const double t2 = need_number(doc, "t2", path);
    if (!doc.contains("eta")) fail(path, "missing key \"eta\"");
    const auto eta_knots = parse_profile(doc["eta"], "eta", path);

    std::optional<PosteriorScenario> scenario;
    try {
        scenario.emplace(s, t1, t2, eta_knots);
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }

    // The Bayes-error profile is determined by eta and s; a supplied z is
    // only accepted if it agrees with the derived profile.
    if (doc.contains("z")) {
        const auto z_knots = parse_profile(doc["z"], "z", path);
        std::vector<double> check_points;
        if (z_knots.size() == 1 && doc["z"].is_number()) {
            check_points = {t1, 0.0, t2};
            for (const auto& [a, e] : scenario->eta_knots())
                if (a > t1 && a < t2) check_points.push_back(a);
            for (double a : check_points)
                if (std::abs(scenario->bayes_error_at(a) - z_knots.front().second) > 1e-12)
                    fail(path, "constant z inconsistent with the profile derived from eta and "
                               "slope_s (z(a) = (1 + eta(a) - s|a|)/2)");
        } else {
            for (const auto& [a, z] : z_knots) {
                if (a < t1 || a > t2) fail(path, "z table point outside the decision region");
                if (std::abs(scenario->bayes_error_at(a) - z) > 1e-12)
                    fail(path, "z table inconsistent with the profile derived from eta and "
                               "slope_s at a = " + format_double(a));
            }
        }
    }

    ScenarioBundle bundle{*scenario, std::nullopt, std::nullopt};

    if (doc.contains("noise")) {
        const json& nj = doc["noise"];
        if (!nj.is_object()) fail(path, "noise must be an object");
        reject_unknown_keys(nj, {"biases", "variances", "cov"}, path, "noise");
        if (!nj.contains("biases") || !nj["biases"].is_array() || nj["biases"].size() != 2 ||
            !nj.contains("variances") || !nj["variances"].is_array() ||
            nj["variances"].size() != 2)
            fail(path, "noise needs biases [l, r] and variances [l, r]");
        NoiseModel noise;
        noise.bias_left = nj["biases"][0].get<double>();
        noise.bias_right = nj["biases"][1].get<double>();
        noise.variance_left = nj["variances"][0].get<double>();
        noise.variance_right = nj["variances"][1].get<double>();
        noise.covariance = nj.contains("cov") ? need_number(nj, "cov", path) : 0.0;
        try {
            validate_noise(noise);
        } catch (const std::invalid_argument& e) {
            fail(path, e.what());
        }
        bundle.noise = noise;
    }

    if (doc.contains("boundary")) {
        const json& bj = doc["boundary"];
        if (!bj.is_object() || !bj.contains("family") || !bj["family"].is_string())
            fail(path, "boundary needs a family tag");
        const std::string family = bj["family"].get<std::string>();
        BoundarySpec spec;
        if (family == "gaussian") {
            reject_unknown_keys(bj, {"family", "mean", "variance"}, path, "boundary");
            spec.kind = BoundarySpec::Kind::gaussian;
            spec.mean = need_number(bj, "mean", path);
            spec.variance = need_number(bj, "variance", path);
        } else if (family == "uniform") {
            reject_unknown_keys(bj, {"family", "lo", "hi"}, path, "boundary");
            spec.kind = BoundarySpec::Kind::uniform;
            spec.lo = need_number(bj, "lo", path);
            spec.hi = need_number(bj, "hi", path);
        } else if (family == "atoms") {
            reject_unknown_keys(bj, {"family", "locations", "weights"}, path, "boundary");
            if (!bj.contains("locations") || !bj.contains("weights") ||
                !bj["locations"].is_array() || !bj["weights"].is_array() ||
                bj["locations"].size() != bj["weights"].size() || bj["locations"].empty())
                fail(path, "atoms boundary needs equal-length locations/weights");
            spec.kind = BoundarySpec::Kind::atoms;
            for (std::size_t i = 0; i < bj["locations"].size(); ++i)
                spec.atom_list.emplace_back(bj["locations"][i].get<double>(),
                                            bj["weights"][i].get<double>());
        } else if (family == "sampled") {
            reject_unknown_keys(bj, {"family", "n", "seed"}, path, "boundary");
            spec.kind = BoundarySpec::Kind::sampled;
            if (bj.contains("n")) spec.sample_n = bj["n"].get<std::size_t>();
            if (bj.contains("seed")) spec.sample_seed = bj["seed"].get<std::uint64_t>();
            if (!bundle.noise) fail(path, "sampled boundary requires a noise block");
        } else if (family == "from-noise") {
            reject_unknown_keys(bj, {"family"}, path, "boundary");
            spec.kind = BoundarySpec::Kind::from_noise;
            if (!bundle.noise) fail(path, "from-noise boundary requires a noise block");
        } else {
            fail(path, "unknown boundary family \"" + family + "\"");
        }
        bundle.boundary = spec;
    }

    return bundle;
}

BoundaryDistribution realize_boundary(const ScenarioBundle& bundle, Execution exec) {
    if (!bundle.boundary)
        throw std::invalid_argument("realize_boundary: bundle has no boundary block");
    const PosteriorScenario& sc = bundle.scenario;
    const BoundarySpec& spec = *bundle.boundary;
    switch (spec.kind) {
        case BoundarySpec::Kind::gaussian:
            return BoundaryDistribution::gaussian(sc.t1(), sc.t2(), spec.mean, spec.variance);
        case BoundarySpec::Kind::uniform:
            return BoundaryDistribution::uniform(sc.t1(), sc.t2(), spec.lo, spec.hi);
        case BoundarySpec::Kind::atoms:
            return BoundaryDistribution::atoms(sc.t1(), sc.t2(), spec.atom_list);
        case BoundarySpec::Kind::sampled:
            return sample_boundary(*bundle.noise, sc, spec.sample_n, spec.sample_seed, exec);
        case BoundarySpec::Kind::from_noise: {
            const NoiseImpliedMoments m = noise_implied_moments(*bundle.noise, sc.s());
            return BoundaryDistribution::gaussian(sc.t1(), sc.t2(), m.mean, m.variance);
        }
    }
    throw std::logic_error("realize_boundary: unhandled family");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    // no quoting in the numeric formats this loader accepts
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::size_t parse_index(const std::string& text, const std::string& path, std::size_t lineno,
                        const char* col) {
    std::size_t value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": column " + col +
                                 " is not a nonnegative integer: \"" + text + "\"");
    return value;
}

}  // namespace

PredictionLog load_prediction_log_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    const std::vector<std::string> header = split_csv_line(strip_cr(line));
    const std::vector<std::string> expected{"run_id", "pattern_id", "predicted_class",
                                            "true_class"};
    std::vector<std::size_t> col(4, header.size());
    if (header.size() != 4)
        throw std::runtime_error(path + ": header must have exactly the columns run_id, "
                                        "pattern_id, predicted_class, true_class");
    for (std::size_t e = 0; e < 4; ++e) {
        for (std::size_t h = 0; h < header.size(); ++h)
            if (header[h] == expected[e]) col[e] = h;
        if (col[e] == header.size())
            throw std::runtime_error(path + ": missing column " + expected[e]);
    }

    struct Row {
        std::size_t run, pattern, predicted, truth;
    };
    std::vector<Row> rows;
    std::size_t lineno = 1;
    std::size_t classes = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 4)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 4 fields, got " + std::to_string(f.size()));
        Row r;
        r.run = parse_index(f[col[0]], path, lineno, "run_id");
        r.pattern = parse_index(f[col[1]], path, lineno, "pattern_id");
        r.predicted = parse_index(f[col[2]], path, lineno, "predicted_class");
        r.truth = parse_index(f[col[3]], path, lineno, "true_class");
        classes = std::max({classes, r.predicted + 1, r.truth + 1});
        rows.push_back(r);
    }
    if (rows.empty()) throw std::runtime_error(path + ": no data rows");

    std::map<std::size_t, std::size_t> truth_by_pattern;
    std::map<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> votes_by_pattern;
    for (const Row& r : rows) {
        auto [it, inserted] = truth_by_pattern.emplace(r.pattern, r.truth);
        if (!inserted && it->second != r.truth)
            throw std::runtime_error(path + ": pattern " + std::to_string(r.pattern) +
                                     " has conflicting true_class values");
        votes_by_pattern[r.pattern].emplace_back(r.run, r.predicted);
    }

    PredictionLog log;
    log.classes = classes;
    for (auto& [pattern, votes] : votes_by_pattern) {
        std::sort(votes.begin(), votes.end());
        log.pattern_ids.push_back(pattern);
        log.true_labels.push_back(truth_by_pattern[pattern]);
        std::vector<std::size_t> v;
        v.reserve(votes.size());
        for (const auto& [run, pred] : votes) v.push_back(pred);
        log.votes.push_back(std::move(v));
    }
    return log;
}

std::vector<std::vector<double>> load_matrix_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        std::vector<double> row;
        for (const std::string& f : split_csv_line(line)) {
            double v = 0.0;
            const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
            if (res.ec != std::errc() || res.ptr != f.data() + f.size())
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": not a number: \"" + f + "\"");
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": ragged row (expected " +
                                     std::to_string(rows.front().size()) + " fields)");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path + ": no data rows");
    return rows;
}

}  // namespace bvlab
