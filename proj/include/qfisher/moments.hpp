#pragma once

// Position and momentum moments of a wavefunction.
//
// Momentum is represented by the operator (hbar/i) d/dx. The second moment is
// taken as hbar^2 * integral |psi'|^2 dx, which equals <p^2> whenever
// psi decays at the grid ends.

#include <cmath>

#include "qfisher/quantum_state.hpp"

namespace qfisher {

/// Mean momentum must vanish to this absolute tolerance.
inline constexpr double mean_momentum_tolerance = 1e-8;

inline double mean_position(const WavefunctionGrid& psi) {
    const auto& g = psi.grid();
    std::vector<double> f(g.n_points());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = g.x(i) * std::norm(psi.psi()[i]);
    return integrate(RealField(g, std::move(f)));
}

/// Central second moment of position.
inline double position_variance(const WavefunctionGrid& psi) {
    const auto& g = psi.grid();
    const double mean = mean_position(psi);
    std::vector<double> f(g.n_points());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double dx = g.x(i) - mean;
        f[i] = dx * dx * std::norm(psi.psi()[i]);
    }
    const double var = integrate(RealField(g, std::move(f)));
    if (!(var >= 1e-14))
        throw numerical_error("position variance " + detail::fmt_double(var) + " is degenerate");
    return var;
}

/// <p> = hbar * integral Im(conj(psi) psi') dx.
inline double mean_momentum(const WavefunctionGrid& psi, double hbar) {
    const auto d = derivative(psi.field(), DerivativeOrder::sixth);
    std::vector<double> f(d.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::imag(std::conj(psi.psi()[i]) * d[i]);
    return hbar * integrate(RealField(psi.grid(), std::move(f)));
}

/// hbar^2 * integral |psi'|^2 dx. Requires <p> = 0.
inline double momentum_variance(const WavefunctionGrid& psi, double hbar) {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw invalid_argument("hbar must be positive");
    const double mean = mean_momentum(psi, hbar);
    if (!(std::abs(mean) < mean_momentum_tolerance))
        throw numerical_error("mean momentum " + detail::fmt_double(mean) +
                              " is not zero; only <p> = 0 states are supported");
    const auto d = derivative(psi.field(), DerivativeOrder::sixth);
    std::vector<double> f(d.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::norm(d[i]);
    const double var = hbar * hbar * integrate(RealField(psi.grid(), std::move(f)));
    if (!(var > 0.0)) throw numerical_error("momentum variance is not positive");
    return var;
}

} // namespace qfisher
