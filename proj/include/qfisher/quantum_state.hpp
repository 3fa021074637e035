#pragma once

/**
 * @file quantum_state.hpp
 * @brief Normalized wavefunctions, probability densities, lattice shifts and
 *        the named corpus of real test states.
 *
 * Corpus members (all real, even, normalized on the grid):
 *
 *   gaussian:DX               (2 pi DX^2)^(-1/4) exp(-x^2 / (4 DX^2))
 *   double_gaussian:SEP:DX    sum of two such bumps centred at +-SEP/2
 *   cosine_window:W           cos^6(pi x / W) on |x| < W/2, zero outside
 *   sech:S                    sech(x / S)
 */

#include <cmath>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qfisher/grid.hpp"

namespace qfisher {

/// Tolerance on the quadrature norm of a state or density.
inline constexpr double normalization_tolerance = 1e-10;

/// Largest probability density allowed at either grid endpoint.
inline constexpr double endpoint_density_limit = 1e-10;

namespace detail {

inline std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

inline void require_decayed(double density_at_ends, const char* what) {
    if (!(density_at_ends < endpoint_density_limit))
        throw numerical_error(std::string(what) + ": density " + fmt_double(density_at_ends) +
                              " at grid endpoint exceeds " + fmt_double(endpoint_density_limit) +
                              " (widen the grid)");
}

inline void require_normalized(double norm, const char* what) {
    if (!(std::abs(norm - 1.0) <= normalization_tolerance))
        throw numerical_error(std::string(what) + ": norm " + fmt_double(norm) +
                              " differs from 1");
}

} // namespace detail

/// Normalized complex amplitude samples with decayed endpoints.
class WavefunctionGrid {
public:
    /// Wraps samples that are already normalized; validates both invariants.
    static WavefunctionGrid from_normalized(ComplexField field) {
        WavefunctionGrid w(std::move(field));
        detail::require_finite<complex>(w.field_.values, "wavefunction");
        detail::require_decayed(std::max(std::norm(w.field_.values.front()),
                                         std::norm(w.field_.values.back())),
                                "wavefunction");
        detail::require_normalized(w.norm(), "wavefunction");
        return w;
    }

    const Grid1D& grid() const noexcept { return field_.grid; }
    std::span<const complex> psi() const noexcept { return field_.values; }
    const ComplexField& field() const noexcept { return field_; }

    /// Quadrature of |psi|^2.
    double norm() const {
        std::vector<double> p(field_.size());
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(field_.values[i]);
        return detail::simpson(p, grid().spacing());
    }

    /// exp(i phi) psi: the same probability amplitude up to a global phase.
    WavefunctionGrid with_global_phase(double phi) const {
        const complex rot = std::polar(1.0, phi);
        auto v = field_.values;
        for (auto& z : v) z *= rot;
        return WavefunctionGrid(ComplexField(grid(), std::move(v)));
    }

    bool is_real(double tol = 1e-12) const {
        for (const auto& z : field_.values)
            if (std::abs(z.imag()) >= tol) return false;
        return true;
    }

    /// |psi| at every node.
    RealField modulus() const {
        std::vector<double> m(field_.size());
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::abs(field_.values[i]);
        return RealField(grid(), std::move(m));
    }

private:
    explicit WavefunctionGrid(ComplexField f) : field_(std::move(f)) {}

    ComplexField field_;
};

/// Nonnegative probability density integrating to one.
class DensityGrid {
public:
    static DensityGrid from_samples(RealField field) {
        detail::require_finite<double>(field.values, "density");
        for (double v : field.values)
            if (v < 0.0) throw numerical_error("density: negative sample " + detail::fmt_double(v));
        detail::require_normalized(integrate(field), "density");
        return DensityGrid(std::move(field));
    }

    const Grid1D& grid() const noexcept { return field_.grid; }
    std::span<const double> p() const noexcept { return field_.values; }
    const RealField& field() const noexcept { return field_; }

private:
    explicit DensityGrid(RealField f) : field_(std::move(f)) {}

    RealField field_;
};

/// Pointwise |psi|^2.
inline DensityGrid density_of(const WavefunctionGrid& psi) {
    std::vector<double> p(psi.psi().size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(psi.psi()[i]);
    return DensityGrid::from_samples(RealField(psi.grid(), std::move(p)));
}

/// Scales raw samples to unit quadrature norm.
inline WavefunctionGrid normalize(const ComplexField& raw) {
    detail::require_finite<complex>(raw.values, "normalize");
    std::vector<double> p(raw.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(raw.values[i]);
    const double norm2 = detail::simpson(p, raw.grid.spacing());
    if (!(norm2 > 0.0)) throw invalid_argument("normalize: state has zero norm");
    const double scale = 1.0 / std::sqrt(norm2);
    auto v = raw.values;
    for (auto& z : v) z *= scale;
    return WavefunctionGrid::from_normalized(ComplexField(raw.grid, std::move(v)));
}

inline WavefunctionGrid normalize(const RealField& raw) {
    std::vector<complex> v(raw.values.begin(), raw.values.end());
    return normalize(ComplexField(raw.grid, std::move(v)));
}

/// Translates the state by theta towards larger x: the result samples
/// psi(x - theta). theta must be a lattice multiple, and no more than
/// endpoint_density_limit of probability may be pushed off the grid.
inline WavefunctionGrid shift(const WavefunctionGrid& psi, double theta) {
    const auto steps = lattice_steps(psi.grid(), theta);
    if (steps == 0) return psi;
    auto [moved, lost] = translate_samples<complex>(psi.psi(), steps);
    double lost_mass = 0.0;
    for (const auto& z : lost) lost_mass += std::norm(z);
    lost_mass *= psi.grid().spacing();
    if (lost_mass > endpoint_density_limit)
        throw numerical_error("shift by " + detail::fmt_double(theta) + " pushes probability " +
                              detail::fmt_double(lost_mass) + " off the grid");
    return WavefunctionGrid::from_normalized(ComplexField(psi.grid(), std::move(moved)));
}

/// Density counterpart of shift(): samples p(x - theta).
inline DensityGrid shift(const DensityGrid& p, double theta) {
    const auto steps = lattice_steps(p.grid(), theta);
    if (steps == 0) return p;
    auto [moved, lost] = translate_samples<double>(p.p(), steps);
    double lost_mass = 0.0;
    for (double v : lost) lost_mass += v;
    lost_mass *= p.grid().spacing();
    if (lost_mass > endpoint_density_limit || std::max(moved.front(), moved.back()) >= endpoint_density_limit)
        throw numerical_error("shift by " + detail::fmt_double(theta) +
                              " pushes probability off the grid");
    return DensityGrid::from_samples(RealField(p.grid(), std::move(moved)));
}

// ---------------------------------------------------------------------------
// Corpus
// ---------------------------------------------------------------------------

/// A corpus state addressed as `name:param1[:param2]`.
struct StateSpec {
    std::string name;
    std::vector<double> params;

    std::string to_string() const {
        std::string s = name;
        for (double p : params) s += ":" + detail::fmt_double(p);
        return s;
    }

    bool is_gaussian() const { return name == "gaussian"; }
};

inline StateSpec parse_state(std::string_view text) {
    StateSpec spec;
    std::size_t pos = text.find(':');
    spec.name = std::string(text.substr(0, pos));
    while (pos != std::string_view::npos) {
        const std::size_t next = text.find(':', pos + 1);
        const std::string token(text.substr(pos + 1, next == std::string_view::npos
                                                         ? std::string_view::npos
                                                         : next - pos - 1));
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (token.empty() || used != token.size())
            throw invalid_argument("state: parameter '" + token + "' is not a number");
        spec.params.push_back(value);
        pos = next;
    }
    if (spec.name.empty()) throw invalid_argument("state: missing name");
    return spec;
}

namespace detail {

inline void require_params(const StateSpec& s, std::size_t count) {
    if (s.params.size() != count)
        throw invalid_argument("state '" + s.name + "' takes " + std::to_string(count) +
                               " parameter(s), got " + std::to_string(s.params.size()));
    for (double p : s.params)
        if (!std::isfinite(p)) throw invalid_argument("state '" + s.name + "': non-finite parameter");
}

inline void require_positive(double v, const char* what) {
    if (!(v > 0.0)) throw invalid_argument(std::string(what) + " must be positive");
}

} // namespace detail

/// Minimum-uncertainty packet with position standard deviation delta_x,
/// using the amplitude normalization (2 pi dx^2)^(-1/4).
inline WavefunctionGrid gaussian_packet(const Grid1D& grid, double delta_x) {
    detail::require_positive(delta_x, "gaussian: delta_x");
    const double var = delta_x * delta_x;
    const double amp = std::pow(2.0 * std::numbers::pi * var, -0.25);
    auto f = ComplexField::sample(grid, [&](double x) { return amp * std::exp(-x * x / (4.0 * var)); });
    return WavefunctionGrid::from_normalized(std::move(f));
}

inline WavefunctionGrid double_gaussian(const Grid1D& grid, double separation, double delta_x) {
    detail::require_positive(delta_x, "double_gaussian: delta_x");
    if (!(separation >= 0.0)) throw invalid_argument("double_gaussian: separation must be >= 0");
    const double var = delta_x * delta_x;
    const double c = 0.5 * separation;
    auto f = RealField::sample(grid, [&](double x) {
        return std::exp(-(x - c) * (x - c) / (4.0 * var)) + std::exp(-(x + c) * (x + c) / (4.0 * var));
    });
    return normalize(f);
}

inline WavefunctionGrid cosine_window(const Grid1D& grid, double width) {
    detail::require_positive(width, "cosine_window: width");
    auto f = RealField::sample(grid, [&](double x) {
        if (std::abs(x) >= 0.5 * width) return 0.0;
        return std::pow(std::cos(std::numbers::pi * x / width), 6);
    });
    return normalize(f);
}

inline WavefunctionGrid sech_state(const Grid1D& grid, double scale) {
    detail::require_positive(scale, "sech: scale");
    auto f = RealField::sample(grid, [&](double x) { return 1.0 / std::cosh(x / scale); });
    return normalize(f);
}

/// Builds a named corpus state on the grid.
inline WavefunctionGrid corpus(const StateSpec& spec, const Grid1D& grid) {
    if (spec.name == "gaussian") {
        detail::require_params(spec, 1);
        return gaussian_packet(grid, spec.params[0]);
    }
    if (spec.name == "double_gaussian") {
        detail::require_params(spec, 2);
        return double_gaussian(grid, spec.params[0], spec.params[1]);
    }
    if (spec.name == "cosine_window") {
        detail::require_params(spec, 1);
        return cosine_window(grid, spec.params[0]);
    }
    if (spec.name == "sech") {
        detail::require_params(spec, 1);
        return sech_state(grid, spec.params[0]);
    }
    throw invalid_argument("unknown state '" + spec.name +
                           "' (expected gaussian, double_gaussian, cosine_window or sech)");
}

inline WavefunctionGrid corpus(std::string_view name, const Grid1D& grid,
                               std::vector<double> params) {
    return corpus(StateSpec{std::string(name), std::move(params)}, grid);
}

/// Grid on which every member of standard_corpus() is well resolved.
inline Grid1D standard_corpus_grid() { return make_grid(-16.0, 16.0, 2049); }

/// The states every invariant is checked over: three Gaussians plus the
/// non-Gaussian members that exercise the strict inequalities.
inline std::vector<StateSpec> standard_corpus() {
    return {
        {"gaussian", {0.5}},
        {"gaussian", {1.0}},
        {"gaussian", {2.0}},
        {"double_gaussian", {4.0, 0.5}},
        {"double_gaussian", {2.0, 1.0}},
        {"cosine_window", {4.0}},
        {"sech", {1.0}},
    };
}

} // namespace qfisher
