#include "bvlab/added_error.hpp"

#include <cmath>
#include <stdexcept>

#include "bvlab/quadrature.hpp"
#include "bvlab/rng.hpp"

namespace bvlab {

double added_error_integral(const BoundaryDistribution& d, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("added_error_integral: s must be positive");
    if (d.has_density()) {
        auto f = [&](double b) { return b * b * d.pdf(b); };
        std::vector<double> cuts{d.t1(), d.t2()};
        for (double k : d.density_kinks()) cuts.push_back(k);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        return 0.5 * s * integrate_segmented(f, cuts, {.abs_tol = 1e-12});
    }
    double second = 0.0;  // exact for point masses
    for (const auto& [loc, w] : d.point_masses()) second += w * loc * loc;
    return 0.5 * s * second;
}

double added_error_from_moments(double mean, double variance, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("added_error_from_moments: s must be positive");
    if (!(variance >= 0.0))
        throw std::invalid_argument("added_error_from_moments: negative variance");
    return 0.5 * s * (variance + mean * mean);
}

double added_error_from_class_noise(const NoiseModel& noise, double s) {
    validate_noise(noise);
    if (!(s > 0.0))
        throw std::invalid_argument("added_error_from_class_noise: s must be positive");
    const double mean_offset = (noise.bias_left - noise.bias_right) / s;
    return (noise.variance_left + noise.variance_right - 2.0 * noise.covariance) / (2.0 * s) +
           0.5 * s * mean_offset * mean_offset;
}

MonteCarloEstimate added_error_monte_carlo(const NoiseModel& noise, double s,
                                           std::size_t n, std::uint64_t seed,
                                           Execution exec) {
    validate_noise(noise);
    if (!(s > 0.0))
        throw std::invalid_argument("added_error_monte_carlo: s must be positive");
    if (n < 2) throw std::invalid_argument("added_error_monte_carlo: need n >= 2");

    const double sd_l = std::sqrt(noise.variance_left);
    const double c1 = noise.variance_left > 0.0 ? noise.covariance / sd_l : 0.0;
    const double sd_r = std::sqrt(std::max(noise.variance_right - c1 * c1, 0.0));
    const double bias_gap = noise.bias_left - noise.bias_right;

    std::vector<double> terms(n);
    for_each_chunk(n, exec, [&](std::size_t c, std::size_t lo, std::size_t hi) {
        RandomStream rng(derive_seed(seed, c));
        for (std::size_t i = lo; i < hi; ++i) {
            const double u = rng.gaussian();
            const double v = rng.gaussian();
            const double b = (bias_gap + (sd_l - c1) * u - sd_r * v) / s;
            terms[i] = 0.5 * s * b * b;
        }
    });

    // serial reduction in index order keeps the result independent of the
    // execution mode
    double sum = 0.0;
    for (double t : terms) sum += t;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double t : terms) ss += (t - mean) * (t - mean);
    const double sample_var = ss / static_cast<double>(n - 1);

    MonteCarloEstimate est;
    est.value = mean;
    est.stderr_ = std::sqrt(sample_var / static_cast<double>(n));
    return est;
}

RouteSelection parse_routes(const std::vector<std::string>& names) {
    if (names.empty()) return {};
    RouteSelection sel{false, false, false, false};
    for (const auto& name : names) {
        if (name == "integral")
            sel.integral = true;
        else if (name == "moments")
            sel.moments = true;
        else if (name == "class-noise")
            sel.class_noise = true;
        else if (name == "monte-carlo")
            sel.monte_carlo = true;
        else
            throw std::invalid_argument("unknown added-error route: " + name);
    }
    return sel;
}

AddedErrorReport compare_added_error_routes(const BoundaryDistribution* d,
                                            const NoiseModel* noise, double s,
                                            const RouteSelection& routes,
                                            std::size_t mc_n, std::uint64_t mc_seed,
                                            double analytic_tol, double mc_sigmas,
                                            Execution exec) {
    AddedErrorReport report;
    if (routes.integral && d) report.integral = added_error_integral(*d, s);
    if (routes.moments) {
        if (d) {
            const BoundaryMoments m = boundary_moments(*d);
            report.moments = added_error_from_moments(m.mean, m.variance, s);
        } else if (noise) {
            const NoiseImpliedMoments m = noise_implied_moments(*noise, s);
            report.moments = added_error_from_moments(m.mean, m.variance, s);
        }
    }
    if (routes.class_noise && noise) report.class_noise = added_error_from_class_noise(*noise, s);
    if (routes.monte_carlo && noise) {
        const MonteCarloEstimate mc = added_error_monte_carlo(*noise, s, mc_n, mc_seed, exec);
        report.monte_carlo = mc.value;
        report.monte_carlo_stderr = mc.stderr_;
    }

    struct Entry {
        const char* name;
        const std::optional<double>& value;
        bool is_mc;
    };
    const Entry entries[] = {
        {"integral", report.integral, false},
        {"moments", report.moments, false},
        {"class-noise", report.class_noise, false},
        {"monte-carlo", report.monte_carlo, true},
    };
    for (std::size_t i = 0; i < 4; ++i) {
        if (!entries[i].value) continue;
        for (std::size_t j = i + 1; j < 4; ++j) {
            if (!entries[j].value) continue;
            RouteAgreement a;
            a.route_a = entries[i].name;
            a.route_b = entries[j].name;
            a.delta = std::abs(*entries[i].value - *entries[j].value);
            a.tolerance = (entries[i].is_mc || entries[j].is_mc)
                              ? mc_sigmas * report.monte_carlo_stderr.value_or(0.0)
                              : analytic_tol;
            a.ok = a.delta <= a.tolerance;
            report.pass = report.pass && a.ok;
            report.agreement.push_back(a);
        }
    }
    return report;
}

}  // namespace bvlab
