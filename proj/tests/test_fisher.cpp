#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qfisher/fisher.hpp"

using namespace qfisher;

namespace {

const Grid1D g8 = make_grid(-8, 8, 1025);
const Grid1D g16 = standard_corpus_grid();

// Smooth plateau: tanh((x + a)/b) - tanh((x - a)/b), normalized by quadrature.
DensityGrid plateau_density(const Grid1D& g, double a, double b) {
    auto f = RealField::sample(g, [&](double x) { return std::tanh((x + a) / b) - std::tanh((x - a) / b); });
    const double z = integrate(f);
    for (auto& v : f.values) v /= z;
    return DensityGrid::from_samples(f);
}

// 4 * integral ((|psi_{t+h}| - |psi_{t-h}|) / 2h)^2 dx: the amplitude side of
// the two-line Fisher identity, evaluated with parametric differences.
double parametric_amplitude_fisher(const WavefunctionGrid& psi, double theta) {
    const double h = psi.grid().spacing();
    const auto plus = shift(psi, theta + h);
    const auto minus = shift(psi, theta - h);
    std::vector<double> f(psi.psi().size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double d = (std::abs(plus.psi()[i]) - std::abs(minus.psi()[i])) / (2 * h);
        f[i] = d * d;
    }
    return 4.0 * integrate(RealField(psi.grid(), std::move(f)));
}

} // namespace

TEST(FisherLocation, GaussianClosedForm) {
    // I = 1 / sigma^2 for a Gaussian location family.
    const auto r1 = fisher_location(density_of(gaussian_packet(g8, 1.0)));
    EXPECT_NEAR(r1.value, 1.0, 1e-6);
    EXPECT_EQ(r1.method, FisherMethod::log_derivative);
    EXPECT_LE(r1.excluded_mass, max_excluded_mass);
    EXPECT_GT(r1.excluded_mass, 0.0); // the far tails fall below the cutoff

    EXPECT_NEAR(fisher_location(density_of(gaussian_packet(g16, 2.0))).value, 0.25, 1e-6);
}

TEST(FisherLocation, PlateauMatchesAmplitudeRoute) {
    const auto p = plateau_density(g16, 3.0, 0.5);
    std::vector<double> amp(p.p().size());
    for (std::size_t i = 0; i < amp.size(); ++i) amp[i] = std::sqrt(p.p()[i]);
    const auto psi = normalize(RealField(g16, amp));
    const double loc = fisher_location(p).value;
    const double ampl = fisher_amplitude(psi).value;
    EXPECT_NEAR(loc / ampl, 1.0, 1e-6);
}

TEST(FisherLocation, TooMuchMassBelowCutoffIsRejected) {
    // A 9e-14 floor over a width of 2e5 carries 1.8e-8 of probability.
    const auto g = make_grid(-1e5, 1e5, 200001);
    const double floor = 9e-14;
    const double floor_mass = floor * 2e5;
    auto f = RealField::sample(g, [&](double x) {
        return floor + (1.0 - floor_mass) * std::exp(-x * x / 50.0) / std::sqrt(50.0 * std::numbers::pi);
    });
    const auto p = DensityGrid::from_samples(f);
    EXPECT_THROW(fisher_location(p), qfisher::numerical_error);
}

TEST(FisherAmplitude, GaussianClosedForm) {
    const auto r = fisher_amplitude(gaussian_packet(g8, 1.0));
    EXPECT_NEAR(r.value, 1.0, 1e-6);
    EXPECT_EQ(r.method, FisherMethod::amplitude_derivative);
    EXPECT_EQ(r.excluded_mass, 0.0);
    EXPECT_NEAR(fisher_amplitude(gaussian_packet(g16, 2.0)).value, 0.25, 1e-6);
}

TEST(FisherAmplitude, GlobalPhaseInvariant) {
    for (const auto& spec : standard_corpus()) {
        const auto psi = corpus(spec, g16);
        for (double phi : {0.3, 1.7, -2.9})
            EXPECT_NEAR(fisher_amplitude(psi.with_global_phase(phi)).value, fisher_amplitude(psi).value, 1e-12);
    }
}

TEST(FisherParametric, GaussianFamily) {
    const LocationFamily fam(density_of(gaussian_packet(g16, 1.0)));
    const auto r0 = fisher_parametric(fam, 0.0);
    EXPECT_EQ(r0.method, FisherMethod::parametric_difference);
    EXPECT_NEAR(r0.value, 1.0, 1e-4);
    EXPECT_NEAR(fisher_parametric(fam, 2.0).value, r0.value, 1e-8);
    EXPECT_NEAR(fisher_parametric(fam, -1.5).value, 1.0, 1e-4);

    const LocationFamily wide(density_of(gaussian_packet(g16, 2.0)));
    EXPECT_NEAR(fisher_parametric(wide, 0.0).value, 0.25, 1e-4);
}

TEST(FisherParametric, ShiftInvarianceOverCorpus) {
    for (const auto& spec : standard_corpus()) {
        const LocationFamily fam(density_of(corpus(spec, g16)));
        const double at0 = fisher_parametric(fam, 0.0).value;
        for (int steps : {-64, -1, 1, 7, 128})
            EXPECT_NEAR(fisher_parametric(fam, steps * g16.spacing()).value, at0, 1e-8) << spec.to_string();
    }
}

TEST(FisherParametric, RejectsOffLatticeTheta) {
    const LocationFamily fam(density_of(gaussian_packet(g8, 1.0)));
    EXPECT_THROW(fisher_parametric(fam, 0.3 * g8.spacing()), qfisher::invalid_argument);
}

TEST(Fisher, LogAndAmplitudeFormsOfTheScoreAgree) {
    // integral (d ln|psi|^2/dtheta)^2 |psi|^2 = 4 integral (d|psi|/dtheta)^2.
    // With central differences in theta the two sides differ at O(h^2), so
    // check the gap is small and halves twice when the spacing halves.
    const auto fine = make_grid(-16, 16, 4097);
    for (const auto& spec : standard_corpus()) {
        const auto gap = [&](const Grid1D& g) {
            const auto psi = corpus(spec, g);
            const double log_form = fisher_parametric(LocationFamily(density_of(psi)), 0.0).value;
            return std::abs(log_form / parametric_amplitude_fisher(psi, 0.0) - 1.0);
        };
        const double coarse_gap = gap(g16);
        const double fine_gap = gap(fine);
        EXPECT_LT(coarse_gap, 1e-3) << spec.to_string();
        EXPECT_GE(coarse_gap / fine_gap, 3.5) << spec.to_string();
    }
}

TEST(Fisher, RouteAgreementOverCorpus) {
    for (const auto& spec : standard_corpus()) {
        const auto psi = corpus(spec, g16);
        const auto loc = fisher_location(density_of(psi));
        const auto amp = fisher_amplitude(psi);
        EXPECT_GE(loc.value, 0.0);
        EXPECT_GE(amp.value, 0.0);
        EXPECT_NEAR(loc.value / amp.value, 1.0, 1e-6) << spec.to_string();
    }
}

TEST(Fisher, ScaleLaw) {
    const auto wide = make_grid(-40, 40, 4097);
    const double ref = fisher_location(density_of(gaussian_packet(wide, 1.0))).value;
    for (double sigma : {0.5, 2.0, 4.0}) {
        const double v = fisher_location(density_of(gaussian_packet(wide, sigma))).value * sigma * sigma;
        EXPECT_NEAR(v / ref, 1.0, 1e-5) << sigma;
    }
    // Same law for a non-Gaussian shape.
    const double sech_ref = fisher_location(density_of(sech_state(wide, 1.0))).value;
    for (double s : {0.5, 2.0, 3.0})
        EXPECT_NEAR(fisher_location(density_of(sech_state(wide, s))).value * s * s / sech_ref, 1.0, 1e-5) << s;
}

TEST(MomentumIdentity, Examples) {
    const auto g1 = gaussian_packet(g8, 1.0);
    const auto m = momentum_identity_check(g1, 1.0);
    EXPECT_NEAR(m.lhs, 1.0, 1e-6);
    EXPECT_NEAR(m.rhs, 1.0, 1e-6);
    EXPECT_LT(m.relative_gap, 1e-6);

    EXPECT_LT(momentum_identity_check(cosine_window(g8, 4.0), 1.0).relative_gap, 1e-6);

    const auto m2 = momentum_identity_check(g1, 2.0);
    EXPECT_NEAR(m2.lhs, 4.0, 4e-6);
    EXPECT_NEAR(m2.rhs, 4.0, 4e-6);
}

TEST(MomentumIdentity, RejectsComplexWavefunction) {
    const auto psi = gaussian_packet(g8, 1.0).with_global_phase(0.5);
    EXPECT_THROW(momentum_identity_check(psi, 1.0), qfisher::invalid_argument);
}
