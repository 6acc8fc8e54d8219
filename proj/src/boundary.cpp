#include "bvlab/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bvlab/rng.hpp"

namespace bvlab {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) * 0.3989422804014326779;
}

void check_region(double t1, double t2, const char* what) {
    if (!(std::isfinite(t1) && std::isfinite(t2) && t1 < 0.0 && 0.0 < t2))
        throw std::invalid_argument(std::string(what) + ": decision region must satisfy t1 < 0 < t2");
}

}  // namespace

// --- PosteriorScenario ---

PosteriorScenario::PosteriorScenario(double s, double t1, double t2, double eta)
    : s_(s), t1_(t1), t2_(t2), knots_{{0.0, eta}} {
    validate();
}

PosteriorScenario::PosteriorScenario(double s, double t1, double t2,
                                     std::vector<std::pair<double, double>> eta_knots)
    : s_(s), t1_(t1), t2_(t2), knots_(std::move(eta_knots)) {
    if (knots_.empty())
        throw std::invalid_argument("PosteriorScenario: empty eta profile");
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (!(knots_[i - 1].first < knots_[i].first))
            throw std::invalid_argument("PosteriorScenario: eta knots must be strictly increasing");
    validate();
}

void PosteriorScenario::validate() const {
    if (!(std::isfinite(s_) && s_ > 0.0))
        throw std::invalid_argument("PosteriorScenario: slope s must be positive");
    check_region(t1_, t2_, "PosteriorScenario");
    for (const auto& [a, e] : knots_)
        if (!(std::isfinite(a) && std::isfinite(e)))
            throw std::invalid_argument("PosteriorScenario: non-finite eta knot");

    // eta(a), eta(a) + s|a| and (1 + s|a|)/3 - eta(a) are piecewise linear
    // with kinks only at the knots and at 0, so region-wide feasibility
    // follows from these check points.
    std::vector<double> pts{t1_, 0.0, t2_};
    for (const auto& [a, e] : knots_)
        if (a > t1_ && a < t2_) pts.push_back(a);
    for (double a : pts) {
        const double e = eta_at(a);
        if (e < 0.0)
            throw std::invalid_argument("PosteriorScenario: eta must be nonnegative");
        if (e + s_ * std::abs(a) > 1.0 + 1e-12)
            throw std::invalid_argument(
                "PosteriorScenario: eta(a) + s|a| exceeds 1 (negative posterior)");
        if (e > (1.0 + s_ * std::abs(a)) / 3.0 + 1e-12)
            throw std::invalid_argument(
                "PosteriorScenario: rest mass dominates the boundary pair");
    }
}

double PosteriorScenario::eta_at(double a) const {
    if (knots_.size() == 1) return knots_.front().second;
    if (a <= knots_.front().first) return knots_.front().second;
    if (a >= knots_.back().first) return knots_.back().second;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), a,
                               [](double v, const auto& k) { return v < k.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double t = (a - lo.first) / (hi.first - lo.first);
    return lo.second + t * (hi.second - lo.second);
}

PosteriorTriple PosteriorScenario::posteriors_at(double a) const {
    if (!(a >= t1_ && a <= t2_))
        throw std::invalid_argument("posteriors_at: offset outside decision region");
    const double e = eta_at(a);
    PosteriorTriple p;
    p.left = 0.5 * (1.0 - e - s_ * a);
    p.right = 0.5 * (1.0 - e + s_ * a);
    p.rest = e;
    return p;
}

double PosteriorScenario::bayes_error_at(double a) const {
    if (!(a >= t1_ && a <= t2_))
        throw std::invalid_argument("bayes_error_at: offset outside decision region");
    return 0.5 * (1.0 + eta_at(a) - s_ * std::abs(a));
}

std::size_t PosteriorScenario::bayes_class_at(double a) const {
    return a > 0.0 ? 1 : 0;
}

// --- NoiseModel ---

void validate_noise(const NoiseModel& noise) {
    if (!(std::isfinite(noise.bias_left) && std::isfinite(noise.bias_right) &&
          std::isfinite(noise.variance_left) && std::isfinite(noise.variance_right) &&
          std::isfinite(noise.covariance)))
        throw std::invalid_argument("NoiseModel: non-finite parameter");
    if (!(noise.variance_left >= 0.0 && noise.variance_right >= 0.0))
        throw std::invalid_argument("NoiseModel: negative variance");
    const double bound = noise.variance_left * noise.variance_right;
    if (noise.covariance * noise.covariance > bound * (1.0 + 1e-12) + 1e-300)
        throw std::invalid_argument("NoiseModel: covariance violates positive semidefiniteness");
}

NoiseImpliedMoments noise_implied_moments(const NoiseModel& noise, double s) {
    validate_noise(noise);
    if (!(s > 0.0)) throw std::invalid_argument("noise_implied_moments: s must be positive");
    NoiseImpliedMoments m;
    m.mean = (noise.bias_left - noise.bias_right) / s;
    m.variance = (noise.variance_left + noise.variance_right - 2.0 * noise.covariance) / (s * s);
    return m;
}

// --- BoundaryDistribution ---

namespace {

void fail_escape(double truncated_mass) {
    throw std::runtime_error(
        "boundary distribution escapes the decision region (truncated mass " +
        std::to_string(truncated_mass) + ")");
}

}  // namespace

BoundaryDistribution BoundaryDistribution::gaussian(double t1, double t2, double mean,
                                                    double variance) {
    check_region(t1, t2, "BoundaryDistribution::gaussian");
    if (!(std::isfinite(mean) && std::isfinite(variance) && variance >= 0.0))
        throw std::invalid_argument("BoundaryDistribution::gaussian: bad parameters");
    if (variance == 0.0) return atoms(t1, t2, {{mean, 1.0}});

    BoundaryDistribution d;
    d.family_ = Family::gaussian;
    d.t1_ = t1;
    d.t2_ = t2;
    d.g_mean_ = mean;
    d.g_sd_ = std::sqrt(variance);
    d.g_cdf_t1_ = normal_cdf((t1 - mean) / d.g_sd_);
    d.g_norm_ = normal_cdf((t2 - mean) / d.g_sd_) - d.g_cdf_t1_;
    d.truncated_mass_ = 1.0 - d.g_norm_;
    if (d.truncated_mass_ > 0.5) fail_escape(d.truncated_mass_);
    return d;
}

BoundaryDistribution BoundaryDistribution::uniform(double t1, double t2, double lo, double hi) {
    check_region(t1, t2, "BoundaryDistribution::uniform");
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo <= hi))
        throw std::invalid_argument("BoundaryDistribution::uniform: bad support");
    if (lo == hi) return atoms(t1, t2, {{lo, 1.0}});

    const double clipped_lo = std::max(lo, t1);
    const double clipped_hi = std::min(hi, t2);
    const double kept = (clipped_hi - clipped_lo) / (hi - lo);
    if (!(kept > 0.5)) fail_escape(1.0 - std::max(kept, 0.0));

    BoundaryDistribution d;
    d.family_ = Family::uniform;
    d.t1_ = t1;
    d.t2_ = t2;
    d.u_lo_ = clipped_lo;
    d.u_hi_ = clipped_hi;
    d.truncated_mass_ = 1.0 - kept;
    return d;
}

BoundaryDistribution BoundaryDistribution::atoms(double t1, double t2,
                                                 std::vector<std::pair<double, double>> atoms) {
    check_region(t1, t2, "BoundaryDistribution::atoms");
    if (atoms.empty()) throw std::invalid_argument("BoundaryDistribution::atoms: no atoms");
    double total = 0.0;
    for (const auto& [loc, w] : atoms) {
        if (!(std::isfinite(loc) && w > 0.0))
            throw std::invalid_argument("BoundaryDistribution::atoms: bad atom");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("BoundaryDistribution::atoms: weights sum to " +
                                    std::to_string(total));

    std::sort(atoms.begin(), atoms.end());
    BoundaryDistribution d;
    d.family_ = Family::atoms;
    d.t1_ = t1;
    d.t2_ = t2;
    double kept = 0.0;
    for (const auto& [loc, w] : atoms) {
        if (loc < t1 || loc > t2) continue;
        kept += w;
        if (!d.atoms_.empty() && d.atoms_.back().first == loc)
            d.atoms_.back().second += w;
        else
            d.atoms_.emplace_back(loc, w);
    }
    d.truncated_mass_ = 1.0 - kept / total;
    if (d.atoms_.empty() || d.truncated_mass_ > 0.5) fail_escape(d.truncated_mass_);
    double cum = 0.0;
    for (auto& [loc, w] : d.atoms_) {
        w /= kept;
        cum += w;
        d.cumulative_.push_back(cum);
    }
    d.cumulative_.back() = 1.0;
    return d;
}

BoundaryDistribution BoundaryDistribution::empirical(double t1, double t2,
                                                     std::vector<double> samples) {
    check_region(t1, t2, "BoundaryDistribution::empirical");
    if (samples.empty())
        throw std::invalid_argument("BoundaryDistribution::empirical: no samples");
    const std::size_t total = samples.size();
    std::erase_if(samples, [&](double v) { return !(v >= t1 && v <= t2); });
    const std::size_t kept = samples.size();

    BoundaryDistribution d;
    d.family_ = Family::empirical;
    d.t1_ = t1;
    d.t2_ = t2;
    d.sample_count_ = kept;
    d.truncated_mass_ =
        static_cast<double>(total - kept) / static_cast<double>(total);
    if (kept == 0 || d.truncated_mass_ > 0.5) fail_escape(d.truncated_mass_);

    std::sort(samples.begin(), samples.end());
    const double w1 = 1.0 / static_cast<double>(kept);
    for (double v : samples) {
        if (!d.atoms_.empty() && d.atoms_.back().first == v)
            d.atoms_.back().second += w1;
        else
            d.atoms_.emplace_back(v, w1);
    }
    double cum = 0.0;
    for (const auto& [loc, w] : d.atoms_) {
        cum += w;
        d.cumulative_.push_back(cum);
    }
    d.cumulative_.back() = 1.0;
    return d;
}

double BoundaryDistribution::cdf(double x) const {
    if (x < t1_) return 0.0;
    if (x >= t2_) return 1.0;
    switch (family_) {
        case Family::gaussian: {
            const double f = (normal_cdf((x - g_mean_) / g_sd_) - g_cdf_t1_) / g_norm_;
            return std::clamp(f, 0.0, 1.0);
        }
        case Family::uniform:
            return std::clamp((x - u_lo_) / (u_hi_ - u_lo_), 0.0, 1.0);
        case Family::atoms:
        case Family::empirical: {
            auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x,
                                       [](double v, const auto& a) { return v < a.first; });
            if (it == atoms_.begin()) return 0.0;
            return cumulative_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
        }
    }
    return 0.0;
}

double BoundaryDistribution::pdf(double x) const {
    if (!has_density())
        throw std::logic_error("BoundaryDistribution::pdf: no density for discrete family");
    if (x < t1_ || x > t2_) return 0.0;
    if (family_ == Family::gaussian)
        return normal_pdf((x - g_mean_) / g_sd_) / (g_sd_ * g_norm_);
    return (x >= u_lo_ && x <= u_hi_) ? 1.0 / (u_hi_ - u_lo_) : 0.0;
}

double BoundaryDistribution::mean() const {
    switch (family_) {
        case Family::gaussian: {
            const double a = (t1_ - g_mean_) / g_sd_;
            const double b = (t2_ - g_mean_) / g_sd_;
            return g_mean_ + g_sd_ * (normal_pdf(a) - normal_pdf(b)) / g_norm_;
        }
        case Family::uniform:
            return 0.5 * (u_lo_ + u_hi_);
        default: {
            double m = 0.0;
            for (const auto& [loc, w] : atoms_) m += loc * w;
            return m;
        }
    }
}

double BoundaryDistribution::variance() const {
    switch (family_) {
        case Family::gaussian: {
            const double a = (t1_ - g_mean_) / g_sd_;
            const double b = (t2_ - g_mean_) / g_sd_;
            const double pa = normal_pdf(a), pb = normal_pdf(b);
            const double shift = (pa - pb) / g_norm_;
            return g_sd_ * g_sd_ * (1.0 + (a * pa - b * pb) / g_norm_ - shift * shift);
        }
        case Family::uniform: {
            const double w = u_hi_ - u_lo_;
            return w * w / 12.0;
        }
        default: {
            const double m = mean();
            double v = 0.0;
            for (const auto& [loc, w] : atoms_) v += w * (loc - m) * (loc - m);
            return v;
        }
    }
}

double BoundaryDistribution::median() const {
    switch (family_) {
        case Family::gaussian: {
            // cdf is continuous and strictly increasing here, so bisection on
            // cdf(x) >= 1/2 converges to the unique crossing.
            double lo = t1_, hi = t2_;
            for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                (cdf(mid) >= 0.5 ? hi : lo) = mid;
            }
            return hi;
        }
        case Family::uniform:
            return 0.5 * (u_lo_ + u_hi_);
        default: {
            auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), 0.5);
            return atoms_[static_cast<std::size_t>(it - cumulative_.begin())].first;
        }
    }
}

std::vector<double> BoundaryDistribution::jump_points() const {
    std::vector<double> pts;
    pts.reserve(atoms_.size());
    for (const auto& [loc, w] : atoms_) pts.push_back(loc);
    return pts;
}

std::vector<double> BoundaryDistribution::density_kinks() const {
    if (family_ == Family::uniform) return {u_lo_, u_hi_};
    return {};
}

BoundaryMoments boundary_moments(const BoundaryDistribution& d) {
    return {d.mean(), d.variance(), d.median()};
}

// --- sampling ---

BoundaryDistribution sample_boundary(const NoiseModel& noise,
                                     const PosteriorScenario& scenario,
                                     std::size_t n, std::uint64_t seed, Execution exec) {
    validate_noise(noise);
    if (n == 0) throw std::invalid_argument("sample_boundary: need at least one sample");

    const double s = scenario.s();
    const double t1 = scenario.t1();
    const double t2 = scenario.t2();
    const double sd_l = std::sqrt(noise.variance_left);
    const double c1 = noise.variance_left > 0.0 ? noise.covariance / sd_l : 0.0;
    const double sd_r = std::sqrt(std::max(noise.variance_right - c1 * c1, 0.0));
    const double bias_gap = noise.bias_left - noise.bias_right;

    std::vector<double> samples(n);
    const std::size_t chunks = chunk_count(n);
    std::vector<std::size_t> attempts(chunks, 0);
    std::vector<unsigned char> exhausted(chunks, 0);

    for_each_chunk(n, exec, [&](std::size_t c, std::size_t lo, std::size_t hi) {
        RandomStream rng(derive_seed(seed, c));
        const std::size_t quota = hi - lo;
        const std::size_t budget = std::max<std::size_t>(1000, 8 * quota);
        std::size_t used = 0;
        std::size_t filled = 0;
        while (filled < quota) {
            if (used >= budget) {
                exhausted[c] = 1;
                break;
            }
            ++used;
            const double u = rng.gaussian();
            const double v = rng.gaussian();
            const double b = (bias_gap + (sd_l - c1) * u - sd_r * v) / s;
            if (b >= t1 && b <= t2) samples[lo + filled++] = b;
        }
        attempts[c] = used;
    });

    std::size_t total_attempts = 0;
    bool failed = false;
    for (std::size_t c = 0; c < chunks; ++c) {
        total_attempts += attempts[c];
        failed = failed || exhausted[c] != 0;
    }
    const double truncated =
        static_cast<double>(total_attempts - n) / static_cast<double>(total_attempts);
    if (failed) fail_escape(truncated);

    BoundaryDistribution d = BoundaryDistribution::empirical(t1, t2, std::move(samples));
    d.truncated_mass_ = truncated;
    if (truncated > 0.5) fail_escape(truncated);
    return d;
}

}  // namespace bvlab
