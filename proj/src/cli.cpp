#include "bvlab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "bvlab/added_error.hpp"
#include "bvlab/boundary.hpp"
#include "bvlab/boundary_effects.hpp"
#include "bvlab/dataset.hpp"
#include "bvlab/decomposition.hpp"
#include "bvlab/experiments.hpp"
#include "bvlab/io.hpp"
#include "bvlab/svg.hpp"
#include "bvlab/synthetic.hpp"
#include "bvlab/verification.hpp"

namespace bvlab {

namespace {

using json = nlohmann::ordered_json;

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir);
}

void write_json_file(const std::string& path, const json& doc) {
    write_text_file(path, doc.dump(2) + "\n");
}

void reject_unknown(const json& obj, std::initializer_list<const char*> keys,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : keys)
            if (it.key() == k) known = true;
        if (!known)
            throw std::runtime_error(where + ": unknown key \"" + it.key() + "\"");
    }
}

json load_config_json(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(path + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object()) throw std::runtime_error(path + ": top level must be an object");
    if (!doc.contains("schema_version") || doc["schema_version"] != 1)
        throw std::runtime_error(path + ": unsupported schema_version (expected 1)");
    return doc;
}

// --- datasets shared by the case studies ---

struct DataChoice {
    std::string spec = "surrogate";  // "surrogate" or a CSV path
    std::string label_column = "label";
    std::string split_column;
    double train_fraction = 0.5;
    std::uint64_t split_seed = 1;
};

Dataset load_choice(const DataChoice& choice) {
    Dataset data;
    if (choice.spec == "surrogate") {
        data = make_segmentation_surrogate();
    } else {
        CsvSchema schema;
        schema.label_column = choice.label_column;
        schema.split_column = choice.split_column;
        schema.train_fraction = choice.train_fraction;
        schema.split_seed = choice.split_seed;
        data = load_dataset_csv(choice.spec, schema);
    }
    standardize_features(data);
    return data;
}

void apply_dataset_json(const json& dj, DataChoice& choice, const std::string& where) {
    if (dj.is_string()) {
        choice.spec = dj.get<std::string>();
        if (choice.spec != "surrogate")
            throw std::runtime_error(
                where + ": string dataset must be \"surrogate\"; CSV data needs an object "
                        "with \"path\"");
        return;
    }
    if (!dj.is_object()) throw std::runtime_error(where + ": dataset must be a string or object");
    reject_unknown(dj, {"path", "label_column", "split_column", "train_fraction", "split_seed"},
                   where);
    if (!dj.contains("path") || !dj["path"].is_string())
        throw std::runtime_error(where + ": dataset object needs a \"path\" string");
    choice.spec = dj["path"].get<std::string>();
    if (dj.contains("label_column")) choice.label_column = dj["label_column"].get<std::string>();
    if (dj.contains("split_column")) choice.split_column = dj["split_column"].get<std::string>();
    if (dj.contains("train_fraction"))
        choice.train_fraction = dj["train_fraction"].get<double>();
    if (dj.contains("split_seed")) choice.split_seed = dj["split_seed"].get<std::uint64_t>();
}

void apply_mlp_json(const json& mj, MlpConfig& mlp, const std::string& where) {
    if (!mj.is_object()) throw std::runtime_error(where + ": mlp must be an object");
    reject_unknown(mj, {"hidden_nodes", "epochs", "learning_rate", "batch_size", "init_range"},
                   where);
    if (mj.contains("hidden_nodes")) mlp.hidden_nodes = mj["hidden_nodes"].get<std::size_t>();
    if (mj.contains("epochs")) mlp.epochs = mj["epochs"].get<std::size_t>();
    if (mj.contains("learning_rate")) mlp.learning_rate = mj["learning_rate"].get<double>();
    if (mj.contains("batch_size")) mlp.batch_size = mj["batch_size"].get<std::size_t>();
    if (mj.contains("init_range")) mlp.init_range = mj["init_range"].get<double>();
}

json mlp_json(const MlpConfig& mlp) {
    return json{{"hidden_nodes", mlp.hidden_nodes},
                {"epochs", mlp.epochs},
                {"learning_rate", mlp.learning_rate},
                {"batch_size", mlp.batch_size},
                {"init_range", mlp.init_range}};
}

json dataset_json(const DataChoice& choice) {
    if (choice.spec == "surrogate") return json("surrogate");
    return json{{"path", choice.spec},
                {"label_column", choice.label_column},
                {"split_column", choice.split_column},
                {"train_fraction", choice.train_fraction},
                {"split_seed", choice.split_seed}};
}

const char* family_name(BoundaryDistribution::Family f) {
    switch (f) {
        case BoundaryDistribution::Family::gaussian: return "gaussian";
        case BoundaryDistribution::Family::uniform: return "uniform";
        case BoundaryDistribution::Family::atoms: return "atoms";
        case BoundaryDistribution::Family::empirical: return "empirical";
    }
    return "?";
}

// --- verify ---

int cmd_verify(std::uint64_t seed, double fault_offset, bool serial,
               const std::string& out_dir) {
    const Execution exec = serial ? Execution::serial : Execution::parallel;
    const VerificationReport report = run_verification(seed, fault_offset, exec);

    std::cout << std::left << std::setw(42) << "check" << std::right << std::setw(7)
              << "cases" << "  " << std::left << std::setw(24) << "max residual"
              << std::setw(12) << "tolerance" << "status\n";
    for (const SweepResult& r : report.results) {
        std::cout << std::left << std::setw(42) << r.name << std::right << std::setw(7)
                  << r.cases << "  " << std::left << std::setw(24)
                  << format_double(r.max_residual) << std::setw(12)
                  << format_double(r.tolerance) << (r.pass ? "pass" : "FAIL") << "\n";
        if (!r.detail.empty()) std::cout << "    " << r.detail << "\n";
    }
    std::cout << "overall: " << (report.pass ? "pass" : "FAIL") << "\n";

    if (!out_dir.empty()) {
        ensure_dir(out_dir);
        json doc{{"schema_version", 1},
                 {"command", "verify"},
                 {"seed", seed},
                 {"fault_offset", fault_offset},
                 {"execution", serial ? "serial" : "parallel"}};
        json checks = json::array();
        for (const SweepResult& r : report.results) {
            checks.push_back(json{{"name", r.name},
                                  {"cases", r.cases},
                                  {"max_residual", r.max_residual},
                                  {"tolerance", r.tolerance},
                                  {"detail", r.detail},
                                  {"pass", r.pass}});
        }
        doc["checks"] = std::move(checks);
        doc["pass"] = report.pass;
        write_json_file(join_path(out_dir, "verify_report.json"), doc);
    }
    return report.pass ? 0 : 1;
}

// --- simulate ---

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 const std::vector<std::string>& route_names, std::size_t mc_draws,
                 std::uint64_t mc_seed, bool serial) {
    const Execution exec = serial ? Execution::serial : Execution::parallel;
    ScenarioBundle bundle = load_scenario_bundle(config_path);
    if (!bundle.boundary) {
        if (!bundle.noise)
            throw std::runtime_error(config_path +
                                     ": need a boundary or a noise block to simulate");
        bundle.boundary = BoundarySpec{};  // defaults to from-noise
    }
    const BoundaryDistribution dist = realize_boundary(bundle, exec);
    const EffectsReport effects = decompose_boundary_effects(bundle.scenario, dist);
    const RouteSelection routes = parse_routes(route_names);
    const NoiseModel* noise = bundle.noise ? &*bundle.noise : nullptr;
    const AddedErrorReport routes_report = compare_added_error_routes(
        &dist, noise, bundle.scenario.s(), routes, mc_draws, mc_seed, 1e-8, 3.0, exec);

    constexpr double kEffectTol = 1e-5;
    constexpr double kChecksumTol = 1e-10;
    const bool effects_ok = std::abs(effects.se_delta) <= kEffectTol &&
                            std::abs(effects.ve_delta) <= kEffectTol &&
                            effects.checksum_residual <= kChecksumTol;
    const bool pass = effects_ok && routes_report.pass;

    auto line = [](const std::string& k, const std::string& v) {
        std::cout << std::left << std::setw(30) << k << v << "\n";
    };
    line("slope_s", format_double(bundle.scenario.s()));
    line("region", "[" + format_double(bundle.scenario.t1()) + ", " +
                       format_double(bundle.scenario.t2()) + "]");
    line("boundary family", family_name(dist.family()));
    line("truncated mass", format_double(dist.truncated_mass()));
    line("offset mean", format_double(effects.moments.mean));
    line("offset variance", format_double(effects.moments.variance));
    line("offset median", format_double(effects.moments.median));
    line("systematic effect", format_double(effects.se_closed) + "  (numeric " +
                                  format_double(effects.se_numeric) + ", delta " +
                                  format_double(effects.se_delta) + ")");
    line("variance effect", format_double(effects.ve_closed) + "  (numeric " +
                                format_double(effects.ve_numeric) + ", delta " +
                                format_double(effects.ve_delta) + ")");
    line("added error", format_double(effects.added_error));
    line("checksum residual", format_double(effects.checksum_residual));
    if (routes_report.integral) line("route integral", format_double(*routes_report.integral));
    if (routes_report.moments) line("route moments", format_double(*routes_report.moments));
    if (routes_report.class_noise)
        line("route class-noise", format_double(*routes_report.class_noise));
    if (routes_report.monte_carlo)
        line("route monte-carlo", format_double(*routes_report.monte_carlo) + "  (stderr " +
                                      format_double(*routes_report.monte_carlo_stderr) + ")");
    for (const RouteAgreement& a : routes_report.agreement)
        line("  " + a.route_a + " vs " + a.route_b,
             "delta " + format_double(a.delta) + ", tolerance " + format_double(a.tolerance) +
                 (a.ok ? "" : "  BREACH"));
    std::cout << "overall: " << (pass ? "pass" : "FAIL") << "\n";

    if (!out_dir.empty()) {
        ensure_dir(out_dir);
        json doc{{"schema_version", 1},
                 {"command", "simulate"},
                 {"config", config_path},
                 {"slope_s", bundle.scenario.s()},
                 {"region", json::array({bundle.scenario.t1(), bundle.scenario.t2()})},
                 {"boundary_family", family_name(dist.family())},
                 {"truncated_mass", dist.truncated_mass()},
                 {"moments",
                  json{{"mean", effects.moments.mean},
                       {"variance", effects.moments.variance},
                       {"median", effects.moments.median}}},
                 {"effects",
                  json{{"systematic_closed", effects.se_closed},
                       {"variance_closed", effects.ve_closed},
                       {"systematic_numeric", effects.se_numeric},
                       {"variance_numeric", effects.ve_numeric},
                       {"systematic_delta", effects.se_delta},
                       {"variance_delta", effects.ve_delta},
                       {"added_error", effects.added_error},
                       {"checksum_residual", effects.checksum_residual}}}};
        json rj;
        if (routes_report.integral) rj["integral"] = *routes_report.integral;
        if (routes_report.moments) rj["moments"] = *routes_report.moments;
        if (routes_report.class_noise) rj["class_noise"] = *routes_report.class_noise;
        if (routes_report.monte_carlo) {
            rj["monte_carlo"] = *routes_report.monte_carlo;
            rj["monte_carlo_stderr"] = *routes_report.monte_carlo_stderr;
            rj["monte_carlo_draws"] = mc_draws;
            rj["monte_carlo_seed"] = mc_seed;
        }
        json agreement = json::array();
        for (const RouteAgreement& a : routes_report.agreement)
            agreement.push_back(json{{"route_a", a.route_a},
                                     {"route_b", a.route_b},
                                     {"delta", a.delta},
                                     {"tolerance", a.tolerance},
                                     {"ok", a.ok}});
        rj["agreement"] = std::move(agreement);
        rj["pass"] = routes_report.pass;
        doc["added_error_routes"] = std::move(rj);
        doc["pass"] = pass;
        write_json_file(join_path(out_dir, "simulate_report.json"), doc);
    }
    return pass ? 0 : 1;
}

// --- decompose ---

int cmd_decompose(const std::string& log_path, const std::string& out_dir,
                  const std::string& format) {
    const PredictionLog log = load_prediction_log_csv(log_path);
    const std::size_t k = log.classes;

    std::vector<PatternDecomposition> decomps;
    decomps.reserve(log.pattern_ids.size());
    for (std::size_t i = 0; i < log.pattern_ids.size(); ++i)
        decomps.push_back(decompose_zero_one(
            response_distribution(log.true_labels[i], k, ResponseMode::point_mass),
            estimate_from_votes(log.votes[i], k)));
    const AggregateDecomposition agg = aggregate(decomps);

    auto line = [](const std::string& key, double v) {
        std::cout << std::left << std::setw(26) << key << format_double(v) << "\n";
    };
    std::cout << "patterns " << log.pattern_ids.size() << ", classes " << k
              << ", response mode point-mass\n";
    line("bias rate", agg.bias);
    line("var(response)", agg.var_response);
    line("var(predictor)", agg.var_predictor);
    line("systematic effect", agg.systematic_effect);
    line("variance effect", agg.variance_effect);
    line("expected loss", agg.expected_loss);

    if (!out_dir.empty()) {
        ensure_dir(out_dir);
        std::string csv =
            "pattern_id,true_class,runs,predictor_class,bias,var_response,var_predictor,"
            "systematic_effect,variance_effect,expected_loss\n";
        for (std::size_t i = 0; i < decomps.size(); ++i) {
            const PatternDecomposition& d = decomps[i];
            csv += std::to_string(log.pattern_ids[i]) + "," +
                   std::to_string(log.true_labels[i]) + "," +
                   std::to_string(log.votes[i].size()) + "," +
                   std::to_string(d.predictor_class) + "," + format_double(d.bias) + "," +
                   format_double(d.var_response) + "," + format_double(d.var_predictor) +
                   "," + format_double(d.systematic_effect) + "," +
                   format_double(d.variance_effect) + "," + format_double(d.expected_loss) +
                   "\n";
        }
        write_text_file(join_path(out_dir, "per_pattern.csv"), csv);

        if (format == "json") {
            json doc{{"schema_version", 1},
                     {"command", "decompose"},
                     {"log", log_path},
                     {"patterns", log.pattern_ids.size()},
                     {"classes", k},
                     {"response_mode", "point-mass"},
                     {"aggregate",
                      json{{"bias", agg.bias},
                           {"var_response", agg.var_response},
                           {"var_predictor", agg.var_predictor},
                           {"systematic_effect", agg.systematic_effect},
                           {"variance_effect", agg.variance_effect},
                           {"expected_loss", agg.expected_loss}}}};
            write_json_file(join_path(out_dir, "aggregate.json"), doc);
        } else {
            std::string acsv =
                "response_mode,patterns,classes,bias,var_response,var_predictor,"
                "systematic_effect,variance_effect,expected_loss\n";
            acsv += "point-mass," + std::to_string(log.pattern_ids.size()) + "," +
                    std::to_string(k) + "," + format_double(agg.bias) + "," +
                    format_double(agg.var_response) + "," + format_double(agg.var_predictor) +
                    "," + format_double(agg.systematic_effect) + "," +
                    format_double(agg.variance_effect) + "," +
                    format_double(agg.expected_loss) + "\n";
            write_text_file(join_path(out_dir, "aggregate.csv"), acsv);
        }
    }
    return 0;
}

// --- case studies ---

json estimators_json() {
    return json{
        {"response_mode", "point-mass"},
        {"correlation",
         "mean pairwise Pearson correlation of per-class posterior errors against the "
         "point-mass response, weighted by empirical class priors"},
        {"posterior_variance",
         "across-member population variance of the posterior estimates, averaged over "
         "patterns and classes"},
        {"variance_effect", "aggregate variance effect of the plurality vote"},
        {"ensemble_gain",
         "accuracy of the averaged-posterior aggregate minus mean member accuracy"}};
}

int cmd_case_one(const std::string& config_path, DataChoice data_flags,
                 const CLI::App* sub, std::size_t groups_flag, std::size_t members_flag,
                 std::uint64_t seed_flag, MlpConfig mlp_flags, const std::string& out_dir,
                 bool serial) {
    DataChoice data_choice;
    CaseOneConfig cfg;
    if (!config_path.empty()) {
        const json doc = load_config_json(config_path);
        reject_unknown(doc,
                       {"schema_version", "dataset", "groups", "classifiers_per_group",
                        "seed", "mlp"},
                       config_path);
        if (doc.contains("dataset")) apply_dataset_json(doc["dataset"], data_choice, config_path);
        if (doc.contains("groups")) cfg.groups = doc["groups"].get<std::size_t>();
        if (doc.contains("classifiers_per_group"))
            cfg.classifiers_per_group = doc["classifiers_per_group"].get<std::size_t>();
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("mlp")) apply_mlp_json(doc["mlp"], cfg.base, config_path);
    }
    // explicit flags win over the config file
    if (sub->count("--data") > 0) data_choice.spec = data_flags.spec;
    if (sub->count("--label-column") > 0) data_choice.label_column = data_flags.label_column;
    if (sub->count("--split-column") > 0) data_choice.split_column = data_flags.split_column;
    if (sub->count("--groups") > 0) cfg.groups = groups_flag;
    if (sub->count("--classifiers") > 0) cfg.classifiers_per_group = members_flag;
    if (sub->count("--seed") > 0) cfg.seed = seed_flag;
    if (sub->count("--hidden") > 0) cfg.base.hidden_nodes = mlp_flags.hidden_nodes;
    if (sub->count("--epochs") > 0) cfg.base.epochs = mlp_flags.epochs;
    if (sub->count("--learning-rate") > 0) cfg.base.learning_rate = mlp_flags.learning_rate;
    if (sub->count("--batch-size") > 0) cfg.base.batch_size = mlp_flags.batch_size;

    const Dataset data = load_choice(data_choice);
    const Execution exec = serial ? Execution::serial : Execution::parallel;
    const CaseOneResult result = run_case_one(data, cfg, exec);

    std::cout << "groups " << cfg.groups << ", classifiers per group "
              << cfg.classifiers_per_group << ", test patterns " << data.test_index.size()
              << "\n";
    std::cout << "corr(posterior variance, variance effect)  "
              << format_double(result.corr_variance_vs_ve) << "\n";
    std::cout << "corr(error rate, posterior variance)       "
              << format_double(result.corr_error_vs_variance) << "\n";
    std::cout << "corr(correlation, ensemble gain)           "
              << format_double(result.corr_c_vs_gain) << "\n";

    ensure_dir(out_dir);
    std::string csv =
        "group,error_rate,correlation,posterior_variance,variance_effect,ensemble_gain\n";
    for (std::size_t g = 0; g < result.groups.size(); ++g) {
        const GroupRecord& r = result.groups[g];
        csv += std::to_string(g) + "," + format_double(r.error_rate) + "," +
               format_double(r.correlation) + "," + format_double(r.posterior_variance) +
               "," + format_double(r.variance_effect) + "," +
               format_double(r.ensemble_gain) + "\n";
    }
    write_text_file(join_path(out_dir, "case1_groups.csv"), csv);

    json doc{{"schema_version", 1},
             {"command", "case1"},
             {"dataset", dataset_json(data_choice)},
             {"groups", cfg.groups},
             {"classifiers_per_group", cfg.classifiers_per_group},
             {"seed", cfg.seed},
             {"mlp", mlp_json(cfg.base)},
             {"test_patterns", data.test_index.size()},
             {"classes", data.classes},
             {"estimators", estimators_json()},
             {"correlations",
              json{{"posterior_variance_vs_variance_effect", result.corr_variance_vs_ve},
                   {"error_rate_vs_posterior_variance", result.corr_error_vs_variance},
                   {"correlation_vs_ensemble_gain", result.corr_c_vs_gain}}},
             // context from the original boosting/bagging study; reported, not asserted
             {"reference_correlations",
              json{{"posterior_variance_vs_variance_effect", 0.749},
                   {"error_rate_vs_posterior_variance", 0.633},
                   {"correlation_vs_ensemble_gain", -0.512}}}};
    write_json_file(join_path(out_dir, "case1_summary.json"), doc);

    std::vector<PlotPoint> pv_ve, err_pv, c_gain;
    for (const GroupRecord& r : result.groups) {
        pv_ve.push_back({r.posterior_variance, r.variance_effect});
        err_pv.push_back({r.error_rate, r.posterior_variance});
        c_gain.push_back({r.correlation, r.ensemble_gain});
    }
    write_plot_with_csv_twin(join_path(out_dir, "var_vs_ve.svg"),
                             join_path(out_dir, "var_vs_ve.csv"),
                             {"variance effect vs posterior variance", "posterior variance",
                              "variance effect", false},
                             pv_ve);
    write_plot_with_csv_twin(join_path(out_dir, "error_vs_var.svg"),
                             join_path(out_dir, "error_vs_var.csv"),
                             {"posterior variance vs error rate", "error rate",
                              "posterior variance", false},
                             err_pv);
    write_plot_with_csv_twin(join_path(out_dir, "c_vs_gain.svg"),
                             join_path(out_dir, "c_vs_gain.csv"),
                             {"ensemble gain vs error correlation", "error correlation",
                              "ensemble gain", false},
                             c_gain);
    return 0;
}

int cmd_case_two(const std::string& config_path, DataChoice data_flags,
                 const CLI::App* sub, std::size_t members_flag, std::uint64_t seed_flag,
                 MlpConfig mlp_flags, const std::string& out_dir, bool serial) {
    DataChoice data_choice;
    CaseTwoConfig cfg;
    if (!config_path.empty()) {
        const json doc = load_config_json(config_path);
        reject_unknown(doc, {"schema_version", "dataset", "classifiers", "ladder", "seed", "mlp"},
                       config_path);
        if (doc.contains("dataset")) apply_dataset_json(doc["dataset"], data_choice, config_path);
        if (doc.contains("classifiers")) cfg.classifiers = doc["classifiers"].get<std::size_t>();
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("mlp")) apply_mlp_json(doc["mlp"], cfg.base, config_path);
        if (doc.contains("ladder")) {
            if (!doc["ladder"].is_array() || doc["ladder"].empty())
                throw std::runtime_error(config_path + ": ladder must be a non-empty array");
            cfg.ladder.clear();
            for (const json& rung : doc["ladder"]) {
                reject_unknown(rung, {"hidden_nodes", "epochs"}, config_path);
                if (!rung.contains("hidden_nodes") || !rung.contains("epochs"))
                    throw std::runtime_error(config_path +
                                             ": each rung needs hidden_nodes and epochs");
                cfg.ladder.push_back(
                    {rung["hidden_nodes"].get<std::size_t>(), rung["epochs"].get<std::size_t>()});
            }
        }
    }
    if (sub->count("--data") > 0) data_choice.spec = data_flags.spec;
    if (sub->count("--label-column") > 0) data_choice.label_column = data_flags.label_column;
    if (sub->count("--split-column") > 0) data_choice.split_column = data_flags.split_column;
    if (sub->count("--classifiers") > 0) cfg.classifiers = members_flag;
    if (sub->count("--seed") > 0) cfg.seed = seed_flag;
    if (sub->count("--learning-rate") > 0) cfg.base.learning_rate = mlp_flags.learning_rate;
    if (sub->count("--batch-size") > 0) cfg.base.batch_size = mlp_flags.batch_size;

    const Dataset data = load_choice(data_choice);
    const Execution exec = serial ? Execution::serial : Execution::parallel;
    const CaseTwoResult result = run_case_two(data, cfg, exec);

    std::cout << std::left << std::setw(8) << "hidden" << std::setw(8) << "epochs"
              << std::setw(22) << "mean member acc" << std::setw(22) << "aggregate acc"
              << "variance effect\n";
    for (const RungRecord& r : result.rungs)
        std::cout << std::left << std::setw(8) << r.rung.hidden_nodes << std::setw(8)
                  << r.rung.epochs << std::setw(22) << format_double(r.mean_member_accuracy)
                  << std::setw(22) << format_double(r.aggregate_accuracy)
                  << format_double(r.variance_effect) << "\n";

    ensure_dir(out_dir);
    std::string csv =
        "hidden_nodes,epochs,error_rate,mean_member_accuracy,aggregate_accuracy,"
        "variance_effect\n";
    for (const RungRecord& r : result.rungs)
        csv += std::to_string(r.rung.hidden_nodes) + "," + std::to_string(r.rung.epochs) +
               "," + format_double(r.error_rate) + "," +
               format_double(r.mean_member_accuracy) + "," +
               format_double(r.aggregate_accuracy) + "," +
               format_double(r.variance_effect) + "\n";
    write_text_file(join_path(out_dir, "case2_rungs.csv"), csv);

    json ladder = json::array();
    for (const LadderRung& rung : cfg.ladder)
        ladder.push_back(json{{"hidden_nodes", rung.hidden_nodes}, {"epochs", rung.epochs}});
    json rungs = json::array();
    for (const RungRecord& r : result.rungs)
        rungs.push_back(json{{"hidden_nodes", r.rung.hidden_nodes},
                             {"epochs", r.rung.epochs},
                             {"error_rate", r.error_rate},
                             {"mean_member_accuracy", r.mean_member_accuracy},
                             {"aggregate_accuracy", r.aggregate_accuracy},
                             {"variance_effect", r.variance_effect}});
    json doc{{"schema_version", 1},
             {"command", "case2"},
             {"dataset", dataset_json(data_choice)},
             {"classifiers", cfg.classifiers},
             {"seed", cfg.seed},
             {"mlp", mlp_json(cfg.base)},
             {"ladder", std::move(ladder)},
             {"estimators", estimators_json()},
             {"rungs", std::move(rungs)}};
    write_json_file(join_path(out_dir, "case2_summary.json"), doc);

    std::vector<PlotPoint> points;
    for (std::size_t i = 0; i < result.rungs.size(); ++i)
        points.push_back({static_cast<double>(i), result.rungs[i].variance_effect});
    write_plot_with_csv_twin(
        join_path(out_dir, "ladder.svg"), join_path(out_dir, "ladder.csv"),
        {"variance effect across the capacity ladder", "ladder rung (largest first)",
         "variance effect", true},
        points);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"bias-variance decomposition laboratory for 0/1-loss classifiers"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand("verify", "run the randomized identity sweeps");
    std::uint64_t verify_seed = 42;
    double fault_offset = 0.0;
    bool verify_serial = false;
    std::string verify_out;
    verify->add_option("--seed", verify_seed, "sweep seed");
    verify->add_option("--inject-fault", fault_offset,
                       "offset the closed-form median to prove breaches are caught");
    verify->add_flag("--serial", verify_serial, "single-threaded kernels");
    verify->add_option("--out", verify_out, "directory for verify_report.json");

    // simulate
    auto* simulate = app.add_subcommand("simulate",
                                        "decompose the added error of one scenario");
    std::string sim_config, sim_out;
    std::vector<std::string> sim_routes;
    std::size_t sim_mc_draws = 200000;
    std::uint64_t sim_mc_seed = 1;
    bool sim_serial = false;
    simulate->add_option("--config", sim_config, "scenario JSON")->required();
    simulate->add_option("--out", sim_out, "directory for simulate_report.json");
    simulate->add_option("--routes", sim_routes,
                         "added-error routes (integral, moments, class-noise, monte-carlo)")
        ->delimiter(',');
    simulate->add_option("--mc-draws", sim_mc_draws, "Monte Carlo draws");
    simulate->add_option("--mc-seed", sim_mc_seed, "Monte Carlo seed");
    simulate->add_flag("--serial", sim_serial, "single-threaded kernels");

    // decompose
    auto* decompose = app.add_subcommand("decompose",
                                         "decompose a prediction log per pattern");
    std::string dec_log, dec_out, dec_format = "json";
    decompose->add_option("--log", dec_log, "prediction log CSV")->required();
    decompose->add_option("--out", dec_out, "directory for per_pattern.csv and the aggregate");
    decompose->add_option("--format", dec_format, "aggregate format")
        ->check(CLI::IsMember({"csv", "json"}));

    // shared case-study flags
    auto add_case_flags = [](CLI::App* sub, std::string& config, DataChoice& data,
                             std::uint64_t& seed, MlpConfig& mlp, std::string& out,
                             bool& serial) {
        sub->add_option("--config", config, "case config JSON");
        sub->add_option("--data", data.spec, "\"surrogate\" or a dataset CSV path");
        sub->add_option("--label-column", data.label_column, "label column name");
        sub->add_option("--split-column", data.split_column,
                        "column with train/test membership");
        sub->add_option("--seed", seed, "experiment seed");
        sub->add_option("--learning-rate", mlp.learning_rate, "member learning rate");
        sub->add_option("--batch-size", mlp.batch_size, "member batch size (0 = full)");
        sub->add_option("--out", out, "output directory")->required();
        sub->add_flag("--serial", serial, "single-threaded training");
    };

    // case1
    auto* case1 = app.add_subcommand(
        "case1", "many small ensembles: spread, correlation, and the variance effect");
    std::string c1_config, c1_out;
    DataChoice c1_data;
    std::size_t c1_groups = 200, c1_members = 6;
    std::uint64_t c1_seed = 7;
    MlpConfig c1_mlp;
    bool c1_serial = false;
    add_case_flags(case1, c1_config, c1_data, c1_seed, c1_mlp, c1_out, c1_serial);
    case1->add_option("--groups", c1_groups, "number of ensembles");
    case1->add_option("--classifiers", c1_members, "classifiers per ensemble");
    case1->add_option("--hidden", c1_mlp.hidden_nodes, "hidden nodes per member");
    case1->add_option("--epochs", c1_mlp.epochs, "training epochs per member");

    // case2
    auto* case2 = app.add_subcommand(
        "case2", "capacity ladder: when averaging helps and when it hurts");
    std::string c2_config, c2_out;
    DataChoice c2_data;
    std::size_t c2_members = 50;
    std::uint64_t c2_seed = 11;
    MlpConfig c2_mlp;
    bool c2_serial = false;
    add_case_flags(case2, c2_config, c2_data, c2_seed, c2_mlp, c2_out, c2_serial);
    case2->add_option("--classifiers", c2_members, "classifiers per rung");

    try {
        std::vector<std::string> full;
        full.reserve(args.size() + 1);
        full.emplace_back("bvlab");
        full.insert(full.end(), args.begin(), args.end());
        std::vector<char*> argv;
        argv.reserve(full.size());
        for (std::string& s : full) argv.push_back(s.data());
        app.parse(static_cast<int>(argv.size()), argv.data());

        if (*verify) return cmd_verify(verify_seed, fault_offset, verify_serial, verify_out);
        if (*simulate)
            return cmd_simulate(sim_config, sim_out, sim_routes, sim_mc_draws, sim_mc_seed,
                                sim_serial);
        if (*decompose) return cmd_decompose(dec_log, dec_out, dec_format);
        if (*case1)
            return cmd_case_one(c1_config, c1_data, case1, c1_groups, c1_members, c1_seed,
                                c1_mlp, c1_out, c1_serial);
        if (*case2)
            return cmd_case_two(c2_config, c2_data, case2, c2_members, c2_seed, c2_mlp,
                                c2_out, c2_serial);
        return 2;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace bvlab
