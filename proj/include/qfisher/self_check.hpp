#pragma once

// Invariant suite run by `qfisher --self-check`. Each check evaluates one
// property over the standard corpus and reports the worst observed value.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "qfisher/cramer_rao.hpp"
#include "qfisher/divergence.hpp"
#include "qfisher/uncertainty.hpp"

namespace qfisher {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

namespace detail {

inline std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

template <typename F>
CheckResult timed_check(std::string name, F&& body) {
    CheckResult r;
    r.name = std::move(name);
    const auto start = std::chrono::steady_clock::now();
    try {
        std::tie(r.passed, r.detail) = body();
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace detail

inline std::vector<CheckResult> run_self_check() {
    using detail::rel;
    using detail::sci;
    using Outcome = std::pair<bool, std::string>;

    const auto grid = standard_corpus_grid();
    std::vector<WavefunctionGrid> states;
    const auto specs = standard_corpus();
    for (const auto& s : specs) states.push_back(corpus(s, grid));

    std::vector<CheckResult> out;

    out.push_back(detail::timed_check("heisenberg_inequality", [&]() -> Outcome {
        double worst = 1e300;
        for (const auto& psi : states)
            for (double hbar : {0.5, 1.0, 2.0}) {
                const auto u = uncertainty_report(psi, hbar);
                worst = std::min(worst, u.product - u.bound);
            }
        return {worst >= -heisenberg_slack, "min(product - hbar/2) = " + sci(worst)};
    }));

    out.push_back(detail::timed_check("equality_only_for_gaussians", [&]() -> Outcome {
        bool ok = true;
        double gauss_worst = 0.0;
        double other_best = 1e300;
        for (std::size_t i = 0; i < states.size(); ++i) {
            const auto u = uncertainty_report(states[i], 1.0);
            const double excess = u.product - u.bound;
            if (specs[i].is_gaussian()) {
                gauss_worst = std::max(gauss_worst, std::abs(excess));
                ok = ok && excess < 1e-6;
            } else {
                other_best = std::min(other_best, excess);
                ok = ok && excess >= 1e-6;
            }
        }
        return {ok, "gaussian |excess| <= " + sci(gauss_worst) + ", others >= " + sci(other_best)};
    }));

    out.push_back(detail::timed_check("cramer_rao_position_link", [&]() -> Outcome {
        bool ok = true;
        double worst = 1e300;
        for (std::size_t i = 0; i < states.size(); ++i) {
            const double ratio = uncertainty_report(states[i], 1.0).cramer_rao_ratio();
            worst = std::min(worst, ratio);
            ok = ok && ratio >= 1.0 - 1e-9;
            if (specs[i].is_gaussian()) ok = ok && std::abs(ratio - 1.0) < 1e-6;
        }
        return {ok, "min (dx)^2 I = " + sci(worst)};
    }));

    out.push_back(detail::timed_check("momentum_fisher_identity", [&]() -> Outcome {
        double worst = 0.0;
        for (const auto& psi : states) {
            const double rhs = 4.0 * momentum_variance(psi, 1.0);
            worst = std::max(worst, momentum_identity_check(psi, 1.0).relative_gap);
            worst = std::max(worst, rel(fisher_location(density_of(psi)).value, rhs));
        }
        return {worst < 1e-6, "max relative gap = " + sci(worst)};
    }));

    out.push_back(detail::timed_check("fisher_route_agreement", [&]() -> Outcome {
        double worst = 0.0;
        for (const auto& psi : states)
            worst = std::max(worst, rel(fisher_location(density_of(psi)).value, fisher_amplitude(psi).value));
        return {worst < 1e-6, "max relative difference = " + sci(worst)};
    }));

    out.push_back(detail::timed_check("fisher_scale_law", [&]() -> Outcome {
        const auto wide = make_grid(-40.0, 40.0, 4097);
        std::vector<double> scaled;
        for (double sigma : {0.5, 1.0, 2.0, 4.0})
            scaled.push_back(fisher_location(density_of(gaussian_packet(wide, sigma))).value * sigma * sigma);
        double spread = 0.0;
        for (double v : scaled) spread = std::max(spread, rel(v, scaled[1]));
        return {spread < 1e-5, "max relative spread of I sigma^2 = " + sci(spread)};
    }));

    out.push_back(detail::timed_check("parametric_shift_invariance", [&]() -> Outcome {
        double worst = 0.0;
        for (const auto& psi : states) {
            const LocationFamily fam(density_of(psi));
            const double at0 = fisher_parametric(fam, 0.0).value;
            worst = std::max(worst, std::abs(fisher_parametric(fam, 2.0).value - at0));
            worst = std::max(worst, std::abs(fisher_parametric(fam, -1.0).value - at0));
        }
        return {worst < 1e-8, "max |I(theta) - I(0)| = " + sci(worst)};
    }));

    out.push_back(detail::timed_check("global_phase_invariance", [&]() -> Outcome {
        double worst = 0.0;
        for (const auto& psi : states) {
            const auto rotated = psi.with_global_phase(0.7);
            const auto p0 = density_of(psi);
            const auto p1 = density_of(rotated);
            for (std::size_t i = 0; i < p0.p().size(); ++i) worst = std::max(worst, std::abs(p0.p()[i] - p1.p()[i]));
            worst = std::max(worst, std::abs(fisher_amplitude(psi).value - fisher_amplitude(rotated).value));
            worst = std::max(worst, std::abs(fisher_location(p0).value - fisher_location(p1).value));
        }
        return {worst < 1e-12, "max deviation = " + sci(worst)};
    }));

    out.push_back(detail::timed_check("kl_curvature", [&]() -> Outcome {
        double worst = 0.0;
        double worst_sym = 0.0;
        double min_kl = 0.0;
        for (const auto& psi : states) {
            const auto scan = kl_quadratic_scan(density_of(psi), default_scan_deltas(grid));
            worst = std::max(worst, rel(quadratic_coefficient(scan), 0.5 * scan.fisher));
            for (std::size_t i = 0; i + 1 < scan.shifts.size(); i += 2)
                worst_sym = std::max(worst_sym, std::abs(scan.residuals[i] - scan.residuals[i + 1]));
            for (double k : scan.kl_values) min_kl = std::min(min_kl, k);
        }
        return {worst < 0.01 && worst_sym < 1e-10 && min_kl >= -1e-12,
                "curvature rel err " + sci(worst) + ", residual asymmetry " + sci(worst_sym) +
                    ", min K " + sci(min_kl)};
    }));

    out.push_back(detail::timed_check("gaussian_minimality", [&]() -> Outcome {
        const auto rows = gaussian_minimality_probe(1.0, {-0.2, -0.1, 0.0, 0.1, 0.2}, 1.0);
        double margin = 1e300;
        for (const auto& r : rows)
            if (r.amplitude != 0.0) margin = std::min(margin, r.product - rows[2].product);
        return {minimum_at_zero(rows) && margin >= 1e-5, "margin to nearest neighbour = " + sci(margin)};
    }));

    out.push_back(detail::timed_check("cramer_rao_monte_carlo", [&]() -> Outcome {
        const LocationFamily fam(density_of(gaussian_packet(make_grid(-8.0, 8.0, 1025), 1.0)));
        const auto mean = run_experiment(EstimatorSpec::sample_mean(), fam, 100, 10000, 42);
        const auto median = run_experiment(EstimatorSpec::sample_median(), fam, 101, 10000, 42);
        const auto shrunk = run_experiment(EstimatorSpec::shrunk_mean(0.5), fam, 100, 10000, 42);
        const double ratio = mean.empirical_variance / mean.cr_bound;
        const bool ok = mean.bound_satisfied && ratio >= 0.97 && ratio <= 1.05 &&
                        median.bound_margin_in_std_errors() >= 3.0 && shrunk.bound_satisfied;
        return {ok, "mean var/bound " + sci(ratio) + ", median margin " +
                        sci(median.bound_margin_in_std_errors()) + " s.e., shrunk var/bound " +
                        sci(shrunk.empirical_variance / shrunk.cr_bound)};
    }));

    return out;
}

} // namespace qfisher
