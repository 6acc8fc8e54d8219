#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "bvlab/cli.hpp"
#include "bvlab/dataset.hpp"
#include "bvlab/experiments.hpp"
#include "bvlab/io.hpp"
#include "bvlab/synthetic.hpp"
#include "test_util.hpp"

using namespace bvlab;
using bvlab::test::CerrCapture;
using bvlab::test::CoutCapture;
using bvlab::test::TempDir;

namespace {

int run_quiet(const std::vector<std::string>& args, std::string* out = nullptr) {
    CoutCapture cout_capture;
    CerrCapture cerr_capture;
    const int rc = run_cli(args);
    if (out) *out = cout_capture.text();
    return rc;
}

Dataset tiny_blobs() {
    BlobsConfig bc;
    bc.classes = 2;
    bc.dim = 2;
    bc.train_per_class = 6;
    bc.test_per_class = 10;
    bc.mean_scale = 2.5;
    bc.seed = 12;
    Dataset d = make_gaussian_blobs(bc);
    standardize_features(d);
    return d;
}

bool same_record(const GroupRecord& a, const GroupRecord& b) {
    return a.error_rate == b.error_rate && a.correlation == b.correlation &&
           a.posterior_variance == b.posterior_variance &&
           a.variance_effect == b.variance_effect && a.ensemble_gain == b.ensemble_gain;
}

const std::string kSurrogateCsv = std::string(BVLAB_DATA_DIR) + "/surrogate7.csv";
const std::string kScenarioJson =
    std::string(BVLAB_DATA_DIR) + "/../configs/scenario_gaussian.json";

}  // namespace

TEST_SUITE("experiments-cli") {

TEST_CASE("group summary on a hand-worked tensor") {
    PosteriorEstimateTensor t(2, 2, 2);
    t.at(0, 0, 0) = 0.8; t.at(0, 0, 1) = 0.2;
    t.at(0, 1, 0) = 0.4; t.at(0, 1, 1) = 0.6;
    t.at(1, 0, 0) = 0.6; t.at(1, 0, 1) = 0.4;
    t.at(1, 1, 0) = 0.7; t.at(1, 1, 1) = 0.3;
    const GroupRecord r = summarize_group(t, {0, 1});
    CHECK(r.error_rate == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(r.correlation == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.posterior_variance == doctest::Approx(0.01625).epsilon(1e-13));
    CHECK(r.variance_effect == doctest::Approx(-0.25).epsilon(1e-13));
    CHECK(r.ensemble_gain == doctest::Approx(-0.25).epsilon(1e-13));

    CHECK_THROWS_AS(summarize_group(t, {0}), std::invalid_argument);
    PosteriorEstimateTensor lone(1, 2, 2);
    lone.at(0, 0, 0) = 1.0;
    lone.at(0, 1, 1) = 1.0;
    CHECK_THROWS_AS(summarize_group(lone, {0, 1}), std::invalid_argument);
}

TEST_CASE("case one is execution-mode independent") {
    const Dataset data = tiny_blobs();
    CaseOneConfig cfg;
    cfg.groups = 2;
    cfg.classifiers_per_group = 2;
    cfg.base.hidden_nodes = 2;
    cfg.base.epochs = 2;
    cfg.seed = 5;
    const CaseOneResult ser = run_case_one(data, cfg, Execution::serial);
    const CaseOneResult par = run_case_one(data, cfg, Execution::parallel);
    REQUIRE(ser.groups.size() == 2);
    REQUIRE(par.groups.size() == 2);
    for (std::size_t g = 0; g < 2; ++g) CHECK(same_record(ser.groups[g], par.groups[g]));
    CHECK(ser.corr_variance_vs_ve == par.corr_variance_vs_ve);
    CHECK(ser.corr_error_vs_variance == par.corr_error_vs_variance);
    CHECK(ser.corr_c_vs_gain == par.corr_c_vs_gain);

    CaseOneConfig bad = cfg;
    bad.groups = 1;
    CHECK_THROWS_AS(run_case_one(data, bad, Execution::serial), std::invalid_argument);
    bad = cfg;
    bad.classifiers_per_group = 1;
    CHECK_THROWS_AS(run_case_one(data, bad, Execution::serial), std::invalid_argument);
    Dataset no_test = data;
    no_test.test_index.clear();
    CHECK_THROWS_AS(run_case_one(no_test, cfg, Execution::serial), std::invalid_argument);
}

TEST_CASE("case two rungs satisfy the accuracy identities") {
    const Dataset data = tiny_blobs();
    CaseTwoConfig cfg;
    cfg.ladder = {{2, 2}, {1, 1}};
    cfg.classifiers = 3;
    cfg.seed = 5;
    const CaseTwoResult ser = run_case_two(data, cfg, Execution::serial);
    const CaseTwoResult par = run_case_two(data, cfg, Execution::parallel);
    REQUIRE(ser.rungs.size() == 2);
    for (std::size_t i = 0; i < ser.rungs.size(); ++i) {
        const RungRecord& r = ser.rungs[i];
        CHECK(r.rung.hidden_nodes == cfg.ladder[i].hidden_nodes);
        // members' mean accuracy complements their mean expected loss, and the
        // vote's accuracy splits into that plus the variance effect
        CHECK(std::abs(r.mean_member_accuracy - (1.0 - r.error_rate)) <= 1e-12);
        CHECK(std::abs(r.aggregate_accuracy -
                       (r.mean_member_accuracy + r.variance_effect)) <= 1e-12);
        const RungRecord& p = par.rungs[i];
        CHECK(r.error_rate == p.error_rate);
        CHECK(r.variance_effect == p.variance_effect);
        CHECK(r.aggregate_accuracy == p.aggregate_accuracy);
        CHECK(r.mean_member_accuracy == p.mean_member_accuracy);
    }

    CaseTwoConfig bad = cfg;
    bad.ladder.clear();
    CHECK_THROWS_AS(run_case_two(data, bad, Execution::serial), std::invalid_argument);
    bad = cfg;
    bad.classifiers = 1;
    CHECK_THROWS_AS(run_case_two(data, bad, Execution::serial), std::invalid_argument);
}

TEST_CASE("cli: verify passes clean and fails under an injected fault") {
    TempDir dir("cliverify");
    std::string out;
    CHECK(run_quiet({"verify", "--out", dir.file("rep")}, &out) == 0);
    CHECK(out.find("overall: pass") != std::string::npos);
    const nlohmann::json doc =
        nlohmann::json::parse(read_text_file(dir.file("rep") + "/verify_report.json"));
    CHECK(doc.at("pass").get<bool>());
    CHECK(doc.at("checks").size() >= 5);

    std::string fault_out;
    TempDir fdir("clifault");
    CHECK(run_quiet({"verify", "--inject-fault", "0.05", "--out", fdir.file("rep")},
                    &fault_out) == 1);
    CHECK(fault_out.find("FAIL") != std::string::npos);
    const nlohmann::json fdoc =
        nlohmann::json::parse(read_text_file(fdir.file("rep") + "/verify_report.json"));
    CHECK(!fdoc.at("pass").get<bool>());
}

TEST_CASE("cli: simulate is reproducible byte for byte") {
    TempDir dir("clisim");
    std::string out1, out2;
    CHECK(run_quiet({"simulate", "--config", kScenarioJson, "--out", dir.file("a")},
                    &out1) == 0);
    CHECK(run_quiet({"simulate", "--config", kScenarioJson, "--out", dir.file("b")},
                    &out2) == 0);
    CHECK(out1 == out2);
    CHECK(out1.find("overall: pass") != std::string::npos);
    CHECK(read_text_file(dir.file("a") + "/simulate_report.json") ==
          read_text_file(dir.file("b") + "/simulate_report.json"));

    const nlohmann::json doc =
        nlohmann::json::parse(read_text_file(dir.file("a") + "/simulate_report.json"));
    CHECK(doc.at("pass").get<bool>());
    CHECK(doc.at("added_error_routes").at("agreement").size() == 6);
}

TEST_CASE("cli: simulate honors a route subset") {
    TempDir dir("cliroutes");
    std::string out;
    CHECK(run_quiet({"simulate", "--config", kScenarioJson, "--routes",
                     "integral,moments", "--out", dir.file("r")},
                    &out) == 0);
    const nlohmann::json doc =
        nlohmann::json::parse(read_text_file(dir.file("r") + "/simulate_report.json"));
    const nlohmann::json& routes = doc.at("added_error_routes");
    CHECK(routes.contains("integral"));
    CHECK(routes.contains("moments"));
    CHECK(!routes.contains("class_noise"));
    CHECK(!routes.contains("monte_carlo"));
    CHECK(routes.at("agreement").size() == 1);
}

TEST_CASE("cli: decompose reports the aggregate split of a prediction log") {
    TempDir dir("clidec");
    const std::string log = dir.file("log.csv");
    write_text_file(log,
                    "run_id,pattern_id,predicted_class,true_class\n"
                    "0,0,0,0\n"
                    "1,0,0,0\n"
                    "0,1,0,1\n"
                    "1,1,1,1\n");
    std::string out;
    CHECK(run_quiet({"decompose", "--log", log, "--out", dir.file("d")}, &out) == 0);
    CHECK(out.find("patterns 2, classes 2") != std::string::npos);

    const nlohmann::json doc =
        nlohmann::json::parse(read_text_file(dir.file("d") + "/aggregate.json"));
    const nlohmann::json& agg = doc.at("aggregate");
    CHECK(agg.at("bias").get<double>() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(agg.at("var_response").get<double>() == 0.0);
    CHECK(agg.at("var_predictor").get<double>() == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(agg.at("systematic_effect").get<double>() ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(agg.at("variance_effect").get<double>() ==
          doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(agg.at("expected_loss").get<double>() == doctest::Approx(0.25).epsilon(1e-14));

    const std::string per_pattern = read_text_file(dir.file("d") + "/per_pattern.csv");
    CHECK(per_pattern.find("pattern_id,true_class,runs,predictor_class,bias,var_response,"
                           "var_predictor,systematic_effect,variance_effect,expected_loss") ==
          0);

    // csv aggregate format writes aggregate.csv instead
    std::string out2;
    CHECK(run_quiet({"decompose", "--log", log, "--out", dir.file("dc"), "--format",
                     "csv"},
                    &out2) == 0);
    CHECK(std::filesystem::exists(dir.file("dc") + "/aggregate.csv"));
    CHECK(!std::filesystem::exists(dir.file("dc") + "/aggregate.json"));
    const std::string acsv = read_text_file(dir.file("dc") + "/aggregate.csv");
    CHECK(acsv.find("point-mass,2,2,0.5,0,0.25,0.5,-0.25,0.25") != std::string::npos);
}

TEST_CASE("cli: tiny case1 via flags is byte-stable across runs") {
    TempDir dir("clicase1");
    const std::vector<std::string> base{
        "case1",       "--data",  kSurrogateCsv, "--split-column", "split",
        "--groups",    "2",       "--classifiers", "2",
        "--hidden",    "2",       "--epochs",      "1",
        "--learning-rate", "0.1"};
    std::vector<std::string> first = base;
    first.insert(first.end(), {"--out", dir.file("a")});
    std::vector<std::string> second = base;
    second.insert(second.end(), {"--out", dir.file("b")});

    std::string out1, out2;
    CHECK(run_quiet(first, &out1) == 0);
    CHECK(run_quiet(second, &out2) == 0);
    CHECK(out1 == out2);

    const std::vector<std::string> outputs{
        "case1_groups.csv", "case1_summary.json", "var_vs_ve.svg",  "var_vs_ve.csv",
        "error_vs_var.svg", "error_vs_var.csv",   "c_vs_gain.svg",  "c_vs_gain.csv"};
    for (const std::string& name : outputs) {
        CAPTURE(name);
        REQUIRE(std::filesystem::exists(dir.file("a") + "/" + name));
        CHECK(read_text_file(dir.file("a") + "/" + name) ==
              read_text_file(dir.file("b") + "/" + name));
    }

    const std::string groups_csv = read_text_file(dir.file("a") + "/case1_groups.csv");
    CHECK(groups_csv.find(
              "group,error_rate,correlation,posterior_variance,variance_effect,"
              "ensemble_gain") == 0);
    const nlohmann::json doc =
        nlohmann::json::parse(read_text_file(dir.file("a") + "/case1_summary.json"));
    CHECK(doc.at("groups").get<int>() == 2);
    CHECK(doc.at("classes").get<int>() == 7);
    CHECK(doc.at("mlp").at("hidden_nodes").get<int>() == 2);
    CHECK(doc.at("estimators").contains("response_mode"));
}

TEST_CASE("cli: tiny case2 via a config file") {
    TempDir dir("clicase2");
    const std::string config = dir.file("case.json");
    write_text_file(config, R"({
        "schema_version": 1,
        "dataset": "surrogate",
        "classifiers": 2,
        "seed": 3,
        "ladder": [{"hidden_nodes": 2, "epochs": 1}, {"hidden_nodes": 1, "epochs": 1}],
        "mlp": {"learning_rate": 0.2}
    })");
    std::string out;
    CHECK(run_quiet({"case2", "--config", config, "--out", dir.file("o")}, &out) == 0);
    for (const std::string name :
         {"case2_rungs.csv", "case2_summary.json", "ladder.svg", "ladder.csv"}) {
        CAPTURE(name);
        CHECK(std::filesystem::exists(dir.file("o") + "/" + name));
    }
    const nlohmann::json doc =
        nlohmann::json::parse(read_text_file(dir.file("o") + "/case2_summary.json"));
    const nlohmann::json& rungs = doc.at("rungs");
    REQUIRE(rungs.size() == 2);
    CHECK(rungs[0].at("hidden_nodes").get<int>() == 2);
    for (const nlohmann::json& r : rungs) {
        const double err = r.at("error_rate").get<double>();
        const double mma = r.at("mean_member_accuracy").get<double>();
        const double agg = r.at("aggregate_accuracy").get<double>();
        const double ve = r.at("variance_effect").get<double>();
        CHECK(std::abs(mma - (1.0 - err)) <= 1e-12);
        CHECK(std::abs(agg - (mma + ve)) <= 1e-12);
    }
    const std::string rungs_csv = read_text_file(dir.file("o") + "/case2_rungs.csv");
    CHECK(rungs_csv.find("hidden_nodes,epochs,error_rate,mean_member_accuracy,"
                         "aggregate_accuracy,variance_effect") == 0);
}

TEST_CASE("cli: malformed input exits with code 2") {
    TempDir dir("clibad");

    CHECK(run_quiet({"frobnicate"}) == 2);
    CHECK(run_quiet({}) == 2);
    CHECK(run_quiet({"case1", "--data", kSurrogateCsv}) == 2);  // missing --out

    const std::string unknown_key = dir.file("unknown.json");
    write_text_file(unknown_key, R"({"schema_version": 1, "frobs": 3})");
    CHECK(run_quiet({"case2", "--config", unknown_key, "--out", dir.file("o1")}) == 2);

    const std::string bad_json = dir.file("bad.json");
    write_text_file(bad_json, "{ not json");
    CHECK(run_quiet({"case2", "--config", bad_json, "--out", dir.file("o2")}) == 2);

    const std::string empty_ladder = dir.file("ladder.json");
    write_text_file(empty_ladder, R"({"schema_version": 1, "ladder": []})");
    CHECK(run_quiet({"case2", "--config", empty_ladder, "--out", dir.file("o3")}) == 2);

    const std::string short_rung = dir.file("rung.json");
    write_text_file(short_rung,
                    R"({"schema_version": 1, "ladder": [{"hidden_nodes": 2}]})");
    CHECK(run_quiet({"case2", "--config", short_rung, "--out", dir.file("o4")}) == 2);

    const std::string bad_dataset = dir.file("data.json");
    write_text_file(bad_dataset, R"({"schema_version": 1, "dataset": "mystery"})");
    CHECK(run_quiet({"case2", "--config", bad_dataset, "--out", dir.file("o5")}) == 2);

    const std::string conflict_log = dir.file("conflict.csv");
    write_text_file(conflict_log,
                    "run_id,pattern_id,predicted_class,true_class\n"
                    "0,7,1,1\n"
                    "1,7,1,2\n");
    CHECK(run_quiet({"decompose", "--log", conflict_log}) == 2);

    const std::string bad_z = dir.file("badz.json");
    write_text_file(bad_z, R"({
        "schema_version": 1, "slope_s": 1.0, "t1": -0.5, "t2": 0.5,
        "eta": 0.0, "z": 0.3,
        "noise": {"biases": [0.0, 0.0], "variances": [0.01, 0.01]}})");
    CHECK(run_quiet({"simulate", "--config", bad_z}) == 2);

    CHECK(run_quiet({"simulate", "--config", kScenarioJson, "--routes", "nonsense"}) ==
          2);
}

}  // TEST_SUITE
