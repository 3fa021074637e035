#pragma once

/**
 * @file grid.hpp
 * @brief Uniform real-line grids, composite Simpson quadrature and
 *        fourth-order finite differences.
 *
 * Everything else in the library works on sampled fields living on a
 * Grid1D. The integration domain is the truncated interval
 * [x_min, x_max]; physical fields are expected to have decayed to
 * negligible values at both endpoints.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qfisher/errors.hpp"

namespace qfisher {

using complex = std::complex<double>;

/// Smallest accepted number of grid points.
inline constexpr std::size_t min_grid_points = 17;

/// Magnitude above which an endpoint sample counts as truncating the field.
inline constexpr double endpoint_warning_level = 1e-12;

class Grid1D {
public:
    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    std::size_t n_points() const noexcept { return n_points_; }
    double spacing() const noexcept { return spacing_; }

    /// Position of node i.
    double x(std::size_t i) const noexcept {
        // Anchor the last node exactly on x_max.
        if (i + 1 == n_points_) return x_max_;
        return x_min_ + static_cast<double>(i) * spacing_;
    }

    std::vector<double> points() const {
        std::vector<double> xs(n_points_);
        for (std::size_t i = 0; i < n_points_; ++i) xs[i] = x(i);
        return xs;
    }

    friend bool operator==(const Grid1D&, const Grid1D&) = default;

    friend Grid1D make_grid(double x_min, double x_max, std::size_t n_points);

private:
    Grid1D(double lo, double hi, std::size_t n)
        : x_min_(lo), x_max_(hi), n_points_(n),
          spacing_((hi - lo) / static_cast<double>(n - 1)) {}

    double x_min_;
    double x_max_;
    std::size_t n_points_;
    double spacing_;
};

/// Builds a uniform grid. n_points must be odd (composite Simpson) and at
/// least 17.
inline Grid1D make_grid(double x_min, double x_max, std::size_t n_points) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max))
        throw invalid_argument("grid bounds must be finite");
    if (!(x_min < x_max))
        throw invalid_argument("grid requires x_min < x_max");
    if (n_points < min_grid_points)
        throw invalid_argument("grid requires at least 17 points, got " +
                               std::to_string(n_points));
    if (n_points % 2 == 0)
        throw invalid_argument("grid requires an odd number of points, got " +
                               std::to_string(n_points));
    return Grid1D(x_min, x_max, n_points);
}

/// Samples of a real or complex function on a grid.
template <typename T>
struct Field {
    Grid1D grid;
    std::vector<T> values;

    Field(Grid1D g, std::vector<T> v) : grid(std::move(g)), values(std::move(v)) {
        if (values.size() != grid.n_points())
            throw invalid_argument("field length " + std::to_string(values.size()) +
                                   " does not match grid size " +
                                   std::to_string(grid.n_points()));
    }

    /// Samples f at every node.
    template <typename F>
    static Field sample(const Grid1D& g, F&& f) {
        std::vector<T> v(g.n_points());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<T>(f(g.x(i)));
        return Field(g, std::move(v));
    }

    std::size_t size() const noexcept { return values.size(); }
    const T& operator[](std::size_t i) const { return values[i]; }
};

using RealField = Field<double>;
using ComplexField = Field<complex>;

namespace detail {

inline bool is_finite(double v) { return std::isfinite(v); }
inline bool is_finite(const complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

template <typename T>
void require_finite(std::span<const T> values, const char* what) {
    for (const auto& v : values)
        if (!is_finite(v)) throw numerical_error(std::string(what) + ": non-finite sample");
}

/// Composite Simpson over an odd number of equally spaced samples.
inline double simpson(std::span<const double> f, double h) {
    const std::size_t n = f.size();
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i + 1 < n; i += 2) odd += f[i];
    for (std::size_t i = 2; i + 1 < n; i += 2) even += f[i];
    return h / 3.0 * (f[0] + f[n - 1] + 4.0 * odd + 2.0 * even);
}

} // namespace detail

/// Composite Simpson estimate of the integral of f over [x_min, x_max].
inline double integrate(const RealField& f) {
    detail::require_finite<double>(f.values, "integrate");
    return detail::simpson(f.values, f.grid.spacing());
}

/// Interior stencil width for derivative(). The boundary bands always use
/// the fourth-order one-sided stencils.
enum class DerivativeOrder { fourth = 4, sixth = 6 };

/**
 * Finite-difference derivative, fourth order by default.
 *
 * Interior nodes use the five-point central stencil (seven-point for
 * DerivativeOrder::sixth); the first two and last two nodes use one-sided
 * fourth-order stencils.
 */
template <typename T>
Field<T> derivative(const Field<T>& f, DerivativeOrder order = DerivativeOrder::fourth) {
    detail::require_finite<T>(f.values, "derivative");
    const auto& v = f.values;
    const std::size_t n = v.size();
    const double inv = 1.0 / (12.0 * f.grid.spacing());
    std::vector<T> d(n);

    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) * inv;
    if (order == DerivativeOrder::sixth) {
        const double inv60 = 1.0 / (60.0 * f.grid.spacing());
        for (std::size_t i = 3; i + 3 < n; ++i)
            d[i] = (-v[i - 3] + 9.0 * v[i - 2] - 45.0 * v[i - 1] + 45.0 * v[i + 1] - 9.0 * v[i + 2] + v[i + 3]) *
                   inv60;
    }

    d[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) * inv;
    d[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) * inv;
    d[n - 1] = (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] - 16.0 * v[n - 4] +
                3.0 * v[n - 5]) * inv;
    d[n - 2] = (3.0 * v[n - 1] + 10.0 * v[n - 2] - 18.0 * v[n - 3] + 6.0 * v[n - 4] -
                v[n - 5]) * inv;
    return Field<T>(f.grid, std::move(d));
}

/// Largest magnitude at the two endpoints; compare against
/// endpoint_warning_level to detect truncation of the real line.
template <typename T>
double endpoint_magnitude(const Field<T>& f) {
    return std::max(std::abs(f.values.front()), std::abs(f.values.back()));
}

/// Number of lattice steps corresponding to a displacement. Throws unless
/// theta is an integer multiple of the spacing (to 1e-9 of a step).
inline std::ptrdiff_t lattice_steps(const Grid1D& grid, double theta) {
    if (!std::isfinite(theta)) throw invalid_argument("shift must be finite");
    const double steps = theta / grid.spacing();
    const double rounded = std::round(steps);
    if (std::abs(steps - rounded) > 1e-9)
        throw invalid_argument("shift " + std::to_string(theta) +
                               " is not an integer multiple of the grid spacing " +
                               std::to_string(grid.spacing()));
    return static_cast<std::ptrdiff_t>(rounded);
}

/// Translates samples by `steps` nodes towards larger x, zero-filling the
/// vacated nodes. Returns the samples that fell off the grid alongside.
template <typename T>
std::pair<std::vector<T>, std::vector<T>> translate_samples(std::span<const T> v,
                                                            std::ptrdiff_t steps) {
    const auto n = static_cast<std::ptrdiff_t>(v.size());
    std::vector<T> out(v.size(), T{});
    std::vector<T> lost;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::ptrdiff_t j = i + steps;
        if (j >= 0 && j < n)
            out[static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(i)];
        else
            lost.push_back(v[static_cast<std::size_t>(i)]);
    }
    return {std::move(out), std::move(lost)};
}

} // namespace qfisher
