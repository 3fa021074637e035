#pragma once

// Kullback relative information between a density and its translate, and the
// quadratic approximation K(delta) ~ I * delta^2 / 2 for small shifts.

#include <cmath>
#include <set>
#include <vector>

#include "qfisher/fisher.hpp"

namespace qfisher {

/// K(delta) = integral p(x) ln[p(x) / p(x + delta)] dx, in nats.
///
/// Nodes where either density is below density_cutoff are skipped; the
/// probability of p on those nodes must stay below max_excluded_mass.
inline double kerridge_inaccuracy(const DensityGrid& p, double delta) {
    // p(x + delta) is the density translated by -delta.
    const auto q = shift(p, -delta);
    const auto pv = p.p();
    const auto qv = q.p();
    std::vector<double> integrand(pv.size(), 0.0);
    double excluded = 0.0;
    for (std::size_t i = 0; i < pv.size(); ++i) {
        if (pv[i] >= density_cutoff && qv[i] >= density_cutoff)
            integrand[i] = pv[i] * std::log(pv[i] / qv[i]);
        else
            excluded += pv[i];
    }
    excluded *= p.grid().spacing();
    detail::require_excluded_mass(excluded, "kerridge_inaccuracy");
    return integrate(RealField(p.grid(), std::move(integrand)));
}

struct KLScanResult {
    std::vector<double> shifts;
    std::vector<double> kl_values;
    std::vector<double> quadratic_values;
    std::vector<double> residuals;
    double fisher = 0.0;
};

/// Evaluates K(delta) and I delta^2 / 2 for every delta, with I from
/// fisher_location(p).
inline KLScanResult kl_quadratic_scan(const DensityGrid& p, const std::vector<double>& deltas) {
    for (double d : deltas) (void)lattice_steps(p.grid(), d);
    KLScanResult r;
    r.fisher = fisher_location(p).value;
    r.shifts = deltas;
    r.kl_values.reserve(deltas.size());
    for (double d : deltas) {
        const double kl = kerridge_inaccuracy(p, d);
        const double quad = 0.5 * r.fisher * d * d;
        r.kl_values.push_back(kl);
        r.quadratic_values.push_back(quad);
        r.residuals.push_back(kl - quad);
    }
    return r;
}

/// +-{1, 2, 4, 8, 16} grid spacings.
inline std::vector<double> default_scan_deltas(const Grid1D& grid) {
    std::vector<double> d;
    for (int k : {1, 2, 4, 8, 16}) {
        d.push_back(-k * grid.spacing());
        d.push_back(k * grid.spacing());
    }
    return d;
}

/// Least-squares c in K(delta) ~ c delta^2 using every scan entry whose |delta|
/// is among the `count` smallest distinct nonzero magnitudes.
inline double quadratic_coefficient(const KLScanResult& scan, std::size_t count = 4) {
    std::set<double> magnitudes;
    for (double d : scan.shifts)
        if (d != 0.0) magnitudes.insert(std::abs(d));
    if (magnitudes.size() < count)
        throw invalid_argument("quadratic_coefficient: scan has fewer than " +
                               std::to_string(count) + " distinct nonzero shifts");
    const double limit = *std::next(magnitudes.begin(), static_cast<std::ptrdiff_t>(count - 1));
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < scan.shifts.size(); ++i) {
        const double d = scan.shifts[i];
        if (d == 0.0 || std::abs(d) > limit) continue;
        num += scan.kl_values[i] * d * d;
        den += d * d * d * d;
    }
    return num / den;
}

} // namespace qfisher
