#pragma once

/**
 * @file cramer_rao.hpp
 * @brief Monte Carlo estimator experiments on location families.
 *
 * Each trial draws n i.i.d. samples from p_theta by inverse-CDF sampling and
 * applies an estimator T. Over many trials the empirical Var(T) is compared
 * with the Cramér–Rao bound (d<T>/dtheta)^2 / (n I).
 *
 * Seeding: trial t of a run with seed s uses std::mt19937_64 seeded with
 * mix_seed(s, t), where
 *
 *     mix_seed(s, t) = splitmix64(s + (t + 1) * 0x9E3779B97F4A7C15)   (mod 2^64)
 *
 * and a uniform variate is (engine() >> 11) * 2^-53. Both are fully specified
 * so reports are reproducible across standard libraries.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qfisher/fisher.hpp"
#include "qfisher/location_family.hpp"

namespace qfisher {

inline constexpr std::size_t min_trials = 1000;
inline constexpr std::size_t variance_batches = 10;

/// Standard errors of slack granted to the empirical variance when checking
/// it against the bound.
inline constexpr double bound_confidence = 3.0;

inline constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

/// Uniform variate in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Inverse-CDF sampler over a tabulated density.
///
/// The CDF is tabulated at every node by cumulative Simpson (half panels use
/// the three-point rule h/12 (5 f0 + 8 f1 - f2)), forced monotone, and
/// inverted by linear interpolation between nodes.
class InverseCdfSampler {
public:
    explicit InverseCdfSampler(const DensityGrid& p) : grid_(p.grid()), cdf_(p.p().size(), 0.0) {
        const auto f = p.p();
        const double h = grid_.spacing();
        for (std::size_t i = 0; i + 2 < f.size(); i += 2) {
            cdf_[i + 1] = cdf_[i] + h / 12.0 * (5.0 * f[i] + 8.0 * f[i + 1] - f[i + 2]);
            cdf_[i + 2] = cdf_[i] + h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
        }
        for (std::size_t i = 1; i < cdf_.size(); ++i) cdf_[i] = std::max(cdf_[i], cdf_[i - 1]);
        const double total = cdf_.back();
        if (!(total > 0.0)) throw numerical_error("sampler: density has no mass");
        for (auto& c : cdf_) c /= total;
    }

    double operator()(double u) const {
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        if (it == cdf_.end()) return grid_.x_max();
        const auto j = static_cast<std::size_t>(it - cdf_.begin());
        if (j == 0) return grid_.x_min();
        const double lo = cdf_[j - 1];
        const double t = (u - lo) / (cdf_[j] - lo);
        return grid_.x(j - 1) + t * grid_.spacing();
    }

    double operator()(std::mt19937_64& engine) const { return (*this)(uniform01(engine)); }

    void fill(std::span<double> out, std::mt19937_64& engine) const {
        for (auto& v : out) v = (*this)(engine);
    }

    std::span<const double> cdf() const noexcept { return cdf_; }

private:
    Grid1D grid_;
    std::vector<double> cdf_;
};

/// n i.i.d. draws from the family's realized member.
inline std::vector<double> draw_samples(const LocationFamily& family, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw invalid_argument("draw_samples: n must be at least 1");
    const InverseCdfSampler sampler(family.realized());
    std::mt19937_64 engine(seed);
    std::vector<double> out(n);
    sampler.fill(out, engine);
    return out;
}

// ---------------------------------------------------------------------------
// Estimators
// ---------------------------------------------------------------------------

enum class EstimatorKind { sample_mean, sample_median, shrunk_mean };

struct EstimatorSpec {
    EstimatorKind kind = EstimatorKind::sample_mean;
    double shrink = 1.0; ///< c of shrunk_mean; 1 for the other kinds

    static EstimatorSpec sample_mean() { return {EstimatorKind::sample_mean, 1.0}; }
    static EstimatorSpec sample_median() { return {EstimatorKind::sample_median, 1.0}; }
    static EstimatorSpec shrunk_mean(double c) {
        if (!(c > 0.0 && c <= 1.0)) throw invalid_argument("shrunk_mean: factor must lie in (0, 1]");
        return {EstimatorKind::shrunk_mean, c};
    }

    std::string to_string() const {
        switch (kind) {
        case EstimatorKind::sample_mean: return "mean";
        case EstimatorKind::sample_median: return "median";
        case EstimatorKind::shrunk_mean: return "shrunk:" + detail::fmt_double(shrink);
        }
        return "unknown";
    }
};

/// "mean", "median" or "shrunk:C".
inline EstimatorSpec parse_estimator(std::string_view text) {
    if (text == "mean") return EstimatorSpec::sample_mean();
    if (text == "median") return EstimatorSpec::sample_median();
    if (text.starts_with("shrunk:")) {
        const std::string arg(text.substr(7));
        std::size_t used = 0;
        double c = 0.0;
        try {
            c = std::stod(arg, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (arg.empty() || used != arg.size())
            throw invalid_argument("estimator: '" + arg + "' is not a number");
        return EstimatorSpec::shrunk_mean(c);
    }
    throw invalid_argument("estimator: expected mean, median or shrunk:C, got '" + std::string(text) + "'");
}

inline double apply_estimator(const EstimatorSpec& spec, std::span<const double> samples) {
    if (samples.empty()) throw invalid_argument("apply_estimator: no samples");
    switch (spec.kind) {
    case EstimatorKind::sample_mean:
    case EstimatorKind::shrunk_mean: {
        double sum = 0.0;
        for (double v : samples) sum += v;
        return spec.shrink * (sum / static_cast<double>(samples.size()));
    }
    case EstimatorKind::sample_median: {
        std::vector<double> v(samples.begin(), samples.end());
        const std::size_t mid = v.size() / 2;
        std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
        const double upper = v[mid];
        if (v.size() % 2 == 1) return upper;
        const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
        return 0.5 * (lower + upper);
    }
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

/// One estimate per trial, drawn from the member at theta. Trial t is seeded
/// with mix_seed(seed, t), so equal seeds give common random numbers across
/// different theta.
inline std::vector<double> simulate_estimates(const EstimatorSpec& spec, const LocationFamily& family,
                                              double theta, std::size_t n, std::size_t trials,
                                              std::uint64_t seed) {
    if (n < 1) throw invalid_argument("simulate_estimates: n must be at least 1");
    const InverseCdfSampler sampler(family.member(theta));
    std::vector<double> samples(n);
    std::vector<double> estimates(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        std::mt19937_64 engine(mix_seed(seed, t));
        sampler.fill(samples, engine);
        estimates[t] = apply_estimator(spec, samples);
    }
    return estimates;
}

namespace detail {

inline double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double variance_of(std::span<const double> v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

} // namespace detail

/// d<T>/dtheta by central differences at theta +- one grid spacing with
/// common random numbers.
inline double bias_slope(const EstimatorSpec& spec, const LocationFamily& family, std::size_t n,
                         std::size_t trials, std::uint64_t seed) {
    if (trials < 1) throw invalid_argument("bias_slope: trials must be at least 1");
    const double h = family.grid().spacing();
    const auto plus = simulate_estimates(spec, family, family.theta + h, n, trials, seed);
    const auto minus = simulate_estimates(spec, family, family.theta - h, n, trials, seed);
    return (detail::mean_of(plus) - detail::mean_of(minus)) / (2.0 * h);
}

/// (d<T>/dtheta)^2 / (n I).
inline double cramer_rao_bound(double slope, std::size_t n, double fisher) {
    return slope * slope / (static_cast<double>(n) * fisher);
}

struct EstimatorReport {
    std::string estimator;
    std::size_t n_samples = 0;
    std::size_t n_trials = 0;
    std::uint64_t seed = 0;
    double theta = 0.0;
    double empirical_mean = 0.0;
    double empirical_variance = 0.0;
    double variance_std_error = 0.0;
    double bias_slope = 0.0;
    double fisher = 0.0;
    double cr_bound = 0.0;
    bool bound_satisfied = false;

    /// Standard errors by which the empirical variance exceeds the bound.
    double bound_margin_in_std_errors() const {
        return (empirical_variance - cr_bound) / variance_std_error;
    }
};

inline EstimatorReport run_experiment(const EstimatorSpec& spec, const LocationFamily& family,
                                      std::size_t n, std::size_t trials, std::uint64_t seed) {
    if (trials < min_trials)
        throw invalid_argument("run_experiment: at least " + std::to_string(min_trials) +
                               " trials required, got " + std::to_string(trials));
    if (n < 1) throw invalid_argument("run_experiment: n must be at least 1");

    const auto estimates = simulate_estimates(spec, family, family.theta, n, trials, seed);

    EstimatorReport r;
    r.estimator = spec.to_string();
    r.n_samples = n;
    r.n_trials = trials;
    r.seed = seed;
    r.theta = family.theta;
    r.empirical_mean = detail::mean_of(estimates);
    r.empirical_variance = detail::variance_of(estimates);

    std::vector<double> batch_vars;
    for (std::size_t b = 0; b < variance_batches; ++b) {
        const std::size_t lo = b * trials / variance_batches;
        const std::size_t hi = (b + 1) * trials / variance_batches;
        batch_vars.push_back(detail::variance_of(std::span<const double>(estimates).subspan(lo, hi - lo)));
    }
    r.variance_std_error = std::sqrt(detail::variance_of(batch_vars) / static_cast<double>(variance_batches));
    if (!(r.variance_std_error > 0.0))
        throw numerical_error("run_experiment: variance standard error is not positive");

    r.bias_slope = bias_slope(spec, family, n, trials, seed);
    r.fisher = fisher_location(family.base).value;
    r.cr_bound = cramer_rao_bound(r.bias_slope, n, r.fisher);
    r.bound_satisfied = r.empirical_variance >= r.cr_bound - bound_confidence * r.variance_std_error;
    return r;
}

} // namespace qfisher
