#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bvlab/decomposition.hpp"
#include "bvlab/rng.hpp"
#include "bvlab/stats.hpp"

using namespace bvlab;

TEST_SUITE("stats") {

TEST_CASE("pearson on frozen closed forms") {
    // cov = 2, sd_x = sqrt(2/3), sd_y = sqrt(56/9)  =>  r = 3 sqrt(3) / (2 sqrt(7))
    CHECK(std::abs(pearson({1.0, 2.0, 3.0}, {2.0, 4.0, 8.0}) -
                   3.0 * std::sqrt(3.0) / (2.0 * std::sqrt(7.0))) <= 1e-14);
    CHECK(std::abs(pearson({1.0, 2.0, 3.0}, {2.0, 4.0, 7.0}) -
                   15.0 / std::sqrt(228.0)) <= 1e-14);
    CHECK(pearson({1.0, 2.0}, {5.0, 3.0}) == doctest::Approx(-1.0).epsilon(1e-14));
    // symmetric and scale-invariant
    CHECK(pearson({1.0, 2.0, 3.0}, {2.0, 4.0, 8.0}) ==
          doctest::Approx(pearson({2.0, 4.0, 8.0}, {1.0, 2.0, 3.0})).epsilon(1e-15));
    CHECK(pearson({10.0, 20.0, 30.0}, {2.0, 4.0, 8.0}) ==
          doctest::Approx(pearson({1.0, 2.0, 3.0}, {2.0, 4.0, 8.0})).epsilon(1e-14));
}

TEST_CASE("pearson input guards") {
    CHECK_THROWS_AS(pearson({1.0, 2.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(pearson({1.0}, {2.0}), std::invalid_argument);
    CHECK_THROWS_AS(pearson({1.0, 1.0}, {2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(pearson({1.0, 2.0}, {3.0, 3.0}), std::invalid_argument);
}

TEST_CASE("zero_spread") {
    CHECK(zero_spread({}));
    CHECK(zero_spread({4.0}));
    CHECK(zero_spread({2.0, 2.0, 2.0}));
    CHECK(!zero_spread({2.0, 2.0, 2.1}));
}

TEST_CASE("tensor rows must be probability vectors") {
    PosteriorEstimateTensor t(2, 2, 2);
    t.at(0, 0, 0) = 0.3; t.at(0, 0, 1) = 0.7;
    t.at(0, 1, 0) = 1.0; t.at(0, 1, 1) = 0.0;
    t.at(1, 0, 0) = 0.5; t.at(1, 0, 1) = 0.5;
    t.at(1, 1, 0) = 0.9; t.at(1, 1, 1) = 0.1;
    CHECK_NOTHROW(t.validate());
    t.at(1, 1, 0) = 0.8;  // row sums to 0.9
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    t.at(1, 1, 0) = 1.2; t.at(1, 1, 1) = -0.2;  // sums to 1 but leaves [0, 1]
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}

TEST_CASE("class bias on a hand-worked tensor") {
    // one model, one pattern with label 1: mean estimate (0.2, 0.8)
    PosteriorEstimateTensor t(1, 1, 2);
    t.at(0, 0, 0) = 0.2;
    t.at(0, 0, 1) = 0.8;
    const std::vector<double> b = class_bias(t, {1});
    REQUIRE(b.size() == 2);
    CHECK(b[0] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(b[1] == doctest::Approx(-0.2).epsilon(1e-14));

    CHECK_THROWS_AS(class_bias(t, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(class_bias(t, {2}), std::invalid_argument);
    CHECK_THROWS_AS(class_bias(PosteriorEstimateTensor{}, {}), std::invalid_argument);
}

TEST_CASE("class variance on a hand-worked tensor") {
    // two models disagreeing by 0.2 on one pattern: population variance 0.01
    PosteriorEstimateTensor t(2, 1, 2);
    t.at(0, 0, 0) = 0.3; t.at(0, 0, 1) = 0.7;
    t.at(1, 0, 0) = 0.5; t.at(1, 0, 1) = 0.5;
    const std::vector<double> v = class_variance(t);
    REQUIRE(v.size() == 2);
    CHECK(v[0] == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(v[1] == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(posterior_variance_scalar(t) == doctest::Approx(0.01).epsilon(1e-14));
}

TEST_CASE("class variance matches the squared-error decomposition variance") {
    RandomStream rng(23);
    const std::size_t models = 7, patterns = 5, classes = 3;
    PosteriorEstimateTensor t(models, patterns, classes);
    for (std::size_t m = 0; m < models; ++m) {
        for (std::size_t p = 0; p < patterns; ++p) {
            double sum = 0.0;
            std::vector<double> raw(classes);
            for (double& r : raw) {
                r = -std::log(1.0 - rng.uniform01());
                sum += r;
            }
            for (std::size_t c = 0; c < classes; ++c) t.at(m, p, c) = raw[c] / sum;
        }
    }
    t.validate();

    const std::vector<double> v = class_variance(t);
    for (std::size_t c = 0; c < classes; ++c) {
        double mean_over_patterns = 0.0;
        for (std::size_t p = 0; p < patterns; ++p) {
            std::vector<double> estimates(models);
            for (std::size_t m = 0; m < models; ++m) estimates[m] = t.at(m, p, c);
            // decompose against an arbitrary response; only the variance matters
            const SquaredErrorDecomposition d =
                decompose_squared_error(estimates, 0.0, 0.0);
            mean_over_patterns += d.variance;
        }
        mean_over_patterns /= static_cast<double>(patterns);
        CHECK(std::abs(v[c] - mean_over_patterns) <= 1e-15);
    }
}

}  // TEST_SUITE
