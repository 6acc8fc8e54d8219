// Timing harness for the parallel kernels against their serial twins. Prints
// wall times, speedups, and whether the two modes produced identical results;
// it asserts nothing and is not part of the test suite.

#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bvlab/added_error.hpp"
#include "bvlab/boundary.hpp"
#include "bvlab/ensemble.hpp"
#include "bvlab/experiments.hpp"
#include "bvlab/rng.hpp"
#include "bvlab/synthetic.hpp"

namespace {

template <class Fn>
double time_seconds(Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

void report(const std::string& name, double serial_s, double parallel_s, bool identical) {
    std::cout << std::left << std::setw(28) << name << "serial " << std::setw(10)
              << serial_s << "  parallel " << std::setw(10) << parallel_s << "  speedup "
              << std::setw(8) << serial_s / parallel_s
              << (identical ? "  identical" : "  DIFFERENT") << "\n";
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::cout << "openmp threads: " << omp_get_max_threads() << "\n";
#else
    std::cout << "openmp not enabled\n";
#endif
    std::cout << std::setprecision(4);

    using namespace bvlab;

    {
        NoiseModel noise;
        noise.bias_left = 0.02;
        noise.bias_right = -0.01;
        noise.variance_left = 0.01;
        noise.variance_right = 0.01;
        noise.covariance = 0.003;
        const PosteriorScenario scenario(2.0, -0.45, 0.45, 0.05);
        constexpr std::size_t n = 2'000'000;
        BoundaryDistribution ser = sample_boundary(noise, scenario, 1, 1, Execution::serial);
        BoundaryDistribution par = ser;
        const double ts = time_seconds(
            [&] { ser = sample_boundary(noise, scenario, n, 7, Execution::serial); });
        const double tp = time_seconds(
            [&] { par = sample_boundary(noise, scenario, n, 7, Execution::parallel); });
        const bool same = ser.mean() == par.mean() && ser.variance() == par.variance() &&
                          ser.median() == par.median();
        report("boundary sampling", ts, tp, same);

        constexpr std::size_t mc = 4'000'000;
        MonteCarloEstimate ms, mp;
        const double ms_t = time_seconds(
            [&] { ms = added_error_monte_carlo(noise, 2.0, mc, 11, Execution::serial); });
        const double mp_t = time_seconds(
            [&] { mp = added_error_monte_carlo(noise, 2.0, mc, 11, Execution::parallel); });
        report("added-error monte carlo", ms_t, mp_t,
               ms.value == mp.value && ms.stderr_ == mp.stderr_);
    }

    {
        constexpr std::size_t classes = 7, members = 40, patterns = 1500;
        RandomStream rng(3);
        std::vector<ErrorMatrix> residuals(
            classes, ErrorMatrix(members, std::vector<double>(patterns)));
        for (auto& per_class : residuals)
            for (auto& row : per_class)
                for (double& v : row) v = rng.gaussian();
        const std::vector<double> priors(classes, 1.0 / classes);
        CorrelationSummary cs, cp;
        const double ts = time_seconds(
            [&] { cs = average_error_correlation(residuals, priors, Execution::serial); });
        const double tp = time_seconds(
            [&] { cp = average_error_correlation(residuals, priors, Execution::parallel); });
        report("error correlation", ts, tp, cs.overall == cp.overall);
    }

    {
        BlobsConfig blobs;
        blobs.classes = 4;
        blobs.dim = 6;
        blobs.train_per_class = 40;
        blobs.test_per_class = 80;
        blobs.mean_scale = 1.5;
        Dataset data = make_gaussian_blobs(blobs);
        CaseOneConfig cfg;
        cfg.groups = 2;
        cfg.classifiers_per_group = 4;
        cfg.base.hidden_nodes = 8;
        cfg.base.epochs = 6;
        CaseOneResult rs, rp;
        const double ts =
            time_seconds([&] { rs = run_case_one(data, cfg, Execution::serial); });
        const double tp =
            time_seconds([&] { rp = run_case_one(data, cfg, Execution::parallel); });
        bool same = rs.groups.size() == rp.groups.size();
        for (std::size_t g = 0; same && g < rs.groups.size(); ++g)
            same = rs.groups[g].error_rate == rp.groups[g].error_rate &&
                   rs.groups[g].variance_effect == rp.groups[g].variance_effect &&
                   rs.groups[g].correlation == rp.groups[g].correlation;
        report("ensemble training", ts, tp, same);
    }

    return 0;
}
