#pragma once

/**
 * @file uncertainty.hpp
 * @brief Position-momentum uncertainty products and the local minimality of
 *        the Gaussian packet.
 *
 * The Cramér–Rao inequality for the position family, I * (Delta x)^2 >= 1,
 * together with hbar^2 I = 4 <p^2> gives Delta x * Delta p >= hbar / 2.
 * A report carries both sides so either form can be checked.
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "qfisher/fisher.hpp"
#include "qfisher/moments.hpp"

namespace qfisher {

/// Slack allowed below hbar/2 before the Heisenberg inequality counts as violated.
inline constexpr double heisenberg_slack = 1e-9;

/// Relative distance from hbar/2 within which a product counts as minimal.
inline constexpr double saturation_tolerance = 1e-6;

struct UncertaintyReport {
    double delta_x = 0.0;
    double delta_p = 0.0;
    double product = 0.0;
    double bound = 0.0;        ///< hbar / 2
    double fisher_value = 0.0; ///< amplitude-route I(psi)
    double hbar = 1.0;

    /// (Delta x)^2 * I, which the Cramér–Rao inequality keeps >= 1.
    double cramer_rao_ratio() const { return delta_x * delta_x * fisher_value; }
    bool satisfies_heisenberg() const { return product >= bound - heisenberg_slack; }
    bool saturates() const { return product - bound <= saturation_tolerance * bound; }
};

inline UncertaintyReport uncertainty_report(const WavefunctionGrid& psi, double hbar) {
    UncertaintyReport r;
    r.hbar = hbar;
    r.delta_x = std::sqrt(position_variance(psi));
    r.delta_p = std::sqrt(momentum_variance(psi, hbar));
    r.product = r.delta_x * r.delta_p;
    r.bound = 0.5 * hbar;
    r.fisher_value = fisher_amplitude(psi).value;
    return r;
}

// ---------------------------------------------------------------------------
// Gaussian minimality
// ---------------------------------------------------------------------------

using PerturbationShape = std::function<double(double)>;

/// h(x) = x^2 exp(-x^2 / (8 dx^2)): even, smooth, and decaying in the tails.
inline PerturbationShape default_perturbation(double delta_x) {
    const double scale = 8.0 * delta_x * delta_x;
    return [scale](double x) { return x * x * std::exp(-x * x / scale); };
}

struct ProbeRow {
    double amplitude = 0.0;
    double product = 0.0;
};

/// Grid on which probes for a packet of width delta_x are evaluated by default.
inline Grid1D probe_grid(double delta_x) {
    return make_grid(-12.0 * delta_x, 12.0 * delta_x, 2049);
}

/// Uncertainty products of psi_a ~ gaussian(delta_x) * (1 + a h(x)) for each
/// amplitude a, in input order. The amplitudes must include 0.
inline std::vector<ProbeRow> gaussian_minimality_probe(const Grid1D& grid, double delta_x,
                                                       const std::vector<double>& amplitudes,
                                                       double hbar,
                                                       const PerturbationShape& shape) {
    if (std::find(amplitudes.begin(), amplitudes.end(), 0.0) == amplitudes.end())
        throw invalid_argument("gaussian_minimality_probe: amplitudes must include 0");
    const auto base = gaussian_packet(grid, delta_x);
    std::vector<ProbeRow> rows;
    rows.reserve(amplitudes.size());
    for (double a : amplitudes) {
        if (!std::isfinite(a)) throw invalid_argument("gaussian_minimality_probe: non-finite amplitude");
        std::vector<complex> v(grid.n_points());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double factor = 1.0 + a * shape(grid.x(i));
            if (!(factor > 0.0))
                throw numerical_error("gaussian_minimality_probe: amplitude " + detail::fmt_double(a) +
                                      " makes the perturbed amplitude change sign");
            v[i] = base.psi()[i] * factor;
        }
        const auto psi = normalize(ComplexField(grid, std::move(v)));
        rows.push_back({a, uncertainty_report(psi, hbar).product});
    }
    return rows;
}

inline std::vector<ProbeRow> gaussian_minimality_probe(double delta_x,
                                                       const std::vector<double>& amplitudes,
                                                       double hbar) {
    return gaussian_minimality_probe(probe_grid(delta_x), delta_x, amplitudes, hbar,
                                     default_perturbation(delta_x));
}

/// True when the row with amplitude 0 has the smallest product.
inline bool minimum_at_zero(const std::vector<ProbeRow>& rows) {
    const auto zero = std::find_if(rows.begin(), rows.end(), [](const ProbeRow& r) { return r.amplitude == 0.0; });
    if (zero == rows.end()) return false;
    return std::all_of(rows.begin(), rows.end(),
                       [&](const ProbeRow& r) { return r.product >= zero->product; });
}

} // namespace qfisher
