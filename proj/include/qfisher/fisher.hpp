#pragma once

/**
 * @file fisher.hpp
 * @brief Fisher information of a location parameter, computed three ways.
 *
 *  - log_derivative:        integral of (d ln p / dx)^2 p over p >= density_cutoff.
 *                           The score is evaluated as p'/p so that ln p is
 *                           never formed in the tails.
 *  - amplitude_derivative:  4 * integral (d|psi|/dx)^2. Finite where psi -> 0,
 *                           so no cutoff is needed.
 *  - parametric_difference: central difference in theta of lattice-shifted
 *                           members of a LocationFamily.
 *
 * The log-derivative and parametric routes skip samples below the cutoff and
 * report the probability mass skipped; more than max_excluded_mass is an error.
 */

#include <cmath>
#include <string_view>

#include "qfisher/location_family.hpp"
#include "qfisher/moments.hpp"

namespace qfisher {

/// Densities below this are excluded from log-score integrands.
inline constexpr double density_cutoff = 1e-13;

/// Largest probability mass the cutoff may discard.
inline constexpr double max_excluded_mass = 1e-8;

enum class FisherMethod { log_derivative, amplitude_derivative, parametric_difference };

inline std::string_view to_string(FisherMethod m) {
    switch (m) {
    case FisherMethod::log_derivative: return "log_derivative";
    case FisherMethod::amplitude_derivative: return "amplitude_derivative";
    case FisherMethod::parametric_difference: return "parametric_difference";
    }
    return "unknown";
}

struct FisherResult {
    double value = 0.0;
    FisherMethod method = FisherMethod::log_derivative;
    double excluded_mass = 0.0;
};

namespace detail {

inline void require_excluded_mass(double mass, const char* what) {
    if (mass > max_excluded_mass)
        throw numerical_error(std::string(what) + ": low-density cutoff discards probability " +
                              fmt_double(mass) + " (limit " + fmt_double(max_excluded_mass) + ")");
}

/// Integrates score^2 * p over p >= density_cutoff. score_times_p supplies
/// p * score at each node.
inline FisherResult score_integral(const Grid1D& grid, std::span<const double> p,
                                   std::span<const double> score_times_p, FisherMethod method,
                                   const char* what) {
    std::vector<double> integrand(p.size(), 0.0);
    double excluded = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] >= density_cutoff)
            integrand[i] = score_times_p[i] * score_times_p[i] / p[i];
        else
            excluded += p[i];
    }
    excluded *= grid.spacing();
    require_excluded_mass(excluded, what);
    FisherResult r;
    r.value = std::max(0.0, integrate(RealField(grid, std::move(integrand))));
    r.method = method;
    r.excluded_mass = excluded;
    return r;
}

} // namespace detail

/// Fisher information of the translation family generated by p.
inline FisherResult fisher_location(const DensityGrid& p) {
    const auto dp = derivative(p.field(), DerivativeOrder::sixth);
    return detail::score_integral(p.grid(), p.p(), dp.values, FisherMethod::log_derivative,
                                  "fisher_location");
}

/// 4 * integral (d|psi|/dx)^2 dx; depends on |psi| only.
inline FisherResult fisher_amplitude(const WavefunctionGrid& psi) {
    const auto d = derivative(psi.modulus(), DerivativeOrder::sixth);
    std::vector<double> f(d.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = d[i] * d[i];
    FisherResult r;
    r.value = 4.0 * integrate(RealField(psi.grid(), std::move(f)));
    r.method = FisherMethod::amplitude_derivative;
    r.excluded_mass = 0.0;
    return r;
}

/// Fisher information of the family at theta, from the central difference
/// (p_{theta+h} - p_{theta-h}) / 2h with h the grid spacing.
inline FisherResult fisher_parametric(const LocationFamily& family, double theta) {
    const double h = family.grid().spacing();
    (void)lattice_steps(family.grid(), theta);
    const auto centre = family.member(theta);
    const auto plus = family.member(theta + h);
    const auto minus = family.member(theta - h);
    std::vector<double> dp(centre.p().size());
    for (std::size_t i = 0; i < dp.size(); ++i) dp[i] = (plus.p()[i] - minus.p()[i]) / (2.0 * h);
    return detail::score_integral(family.grid(), centre.p(), dp, FisherMethod::parametric_difference,
                                  "fisher_parametric");
}

struct MomentumIdentity {
    double lhs = 0.0;          ///< hbar^2 * I(psi)
    double rhs = 0.0;          ///< 4 <p^2>
    double relative_gap = 0.0; ///< |lhs - rhs| / rhs
};

/// Compares hbar^2 I(psi) with 4 <p^2>. These agree for real psi only.
inline MomentumIdentity momentum_identity_check(const WavefunctionGrid& psi, double hbar) {
    if (!psi.is_real())
        throw invalid_argument("momentum_identity_check: wavefunction must be real-valued");
    MomentumIdentity m;
    m.lhs = hbar * hbar * fisher_amplitude(psi).value;
    m.rhs = 4.0 * momentum_variance(psi, hbar);
    m.relative_gap = std::abs(m.lhs - m.rhs) / m.rhs;
    return m;
}

} // namespace qfisher
