#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bvlab/boundary.hpp"
#include "bvlab/exec.hpp"

namespace bvlab {

// Added error of a single classifier over the Bayes floor, computed as
// (s/2) * E[b^2] for the boundary offset b. Four routes that must agree:
// direct integration against the offset distribution, its first two moments,
// the class-noise algebra, and Monte Carlo.

double added_error_integral(const BoundaryDistribution& d, double s);

double added_error_from_moments(double mean, double variance, double s);

// (var_l + var_r - 2 cov) / (2 s) + s * mean_offset^2 / 2
double added_error_from_class_noise(const NoiseModel& noise, double s);

struct MonteCarloEstimate {
    double value = 0.0;
    double stderr_ = 0.0;  // sample std of the per-draw terms / sqrt(n)
};

// Untruncated draws from the noise model; bit-reproducible per seed.
MonteCarloEstimate added_error_monte_carlo(const NoiseModel& noise, double s,
                                           std::size_t n, std::uint64_t seed,
                                           Execution exec = Execution::parallel);

struct RouteSelection {
    bool integral = true;
    bool moments = true;
    bool class_noise = true;
    bool monte_carlo = true;
};

RouteSelection parse_routes(const std::vector<std::string>& names);

struct RouteAgreement {
    std::string route_a;
    std::string route_b;
    double delta = 0.0;
    double tolerance = 0.0;
    bool ok = false;
};

struct AddedErrorReport {
    std::optional<double> integral;
    std::optional<double> moments;
    std::optional<double> class_noise;
    std::optional<double> monte_carlo;
    std::optional<double> monte_carlo_stderr;
    std::vector<RouteAgreement> agreement;
    bool pass = true;
};

// Runs the selected routes and cross-checks every computed pair. Analytic
// pairs compare at analytic_tol; pairs involving Monte Carlo compare at
// mc_sigmas standard errors. The distribution may be omitted when only
// noise-based routes are selected, and vice versa.
AddedErrorReport compare_added_error_routes(const BoundaryDistribution* d,
                                            const NoiseModel* noise, double s,
                                            const RouteSelection& routes,
                                            std::size_t mc_n, std::uint64_t mc_seed,
                                            double analytic_tol = 1e-8,
                                            double mc_sigmas = 3.0,
                                            Execution exec = Execution::parallel);

}  // namespace bvlab
