#pragma once

#include "qfisher/quantum_state.hpp"

namespace qfisher {

/// Translation family p_theta(x) = base(x - theta) restricted to lattice
/// values of theta. `theta` is the member considered "true" when sampling.
struct LocationFamily {
    DensityGrid base;
    double theta = 0.0;

    LocationFamily(DensityGrid b, double t = 0.0) : base(std::move(b)), theta(t) {
        (void)lattice_steps(base.grid(), theta);
    }

    const Grid1D& grid() const noexcept { return base.grid(); }

    /// p_t on the grid.
    DensityGrid member(double t) const { return shift(base, t); }

    DensityGrid realized() const { return member(theta); }

    LocationFamily at(double t) const { return LocationFamily(base, t); }
};

} // namespace qfisher
