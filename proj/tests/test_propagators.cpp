#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "s2paths/analytic.hpp"
#include "s2paths/propagators.hpp"

using namespace s2paths;

namespace {

// Integral over alpha in [gamma, pi] with the singular factor split off in
// half-angle form so tanh-sinh sees a clean endpoint singularity.
cplx alpha_oracle(double g, long long n, cplx Tc)
{
    auto f = [&](double u) {
        const double a = g + u + two_pi * static_cast<double>(n);
        return a * std::exp(I * (a * a) / (2.0 * Tc)) / std::sqrt(2.0 * std::sin(g + 0.5 * u) * std::sin(0.5 * u));
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    const double L = pi - g;
    return {ts.integrate([&](double u) { return f(u).real(); }, 0.0, L),
            ts.integrate([&](double u) { return f(u).imag(); }, 0.0, L)};
}

}  // namespace

TEST(Propagators, WindingOrder)
{
    const auto w = winding_order(2);
    ASSERT_EQ(w.size(), 5u);
    EXPECT_EQ(w[0], 0);
    EXPECT_EQ(w[1], -1);
    EXPECT_EQ(w[4], 2);
}

TEST(Propagators, AlphaIntegralAgainstOracle)
{
    const cplx Tc = regularized_time(10.0, 1e-3);
    for (double g : {0.3, 1.5, 2.8})
        for (long long n : {-2LL, 0LL, 1LL}) {
            const cplx o = alpha_oracle(g, n, Tc);
            const cplx s = alpha_integral(g, n, Tc, {4096, AlphaRule::sqrt_substitution});
            EXPECT_LT(std::abs(s - o) / std::abs(o), 1e-6) << g << " " << n;
            const cplx m = alpha_integral(g, n, Tc, {4096, AlphaRule::midpoint_edge});
            EXPECT_LT(std::abs(m - o) / std::abs(o), 1e-3) << g << " " << n;
        }
    EXPECT_EQ(alpha_integral(pi, 0, Tc), cplx(0.0));
}

TEST(Propagators, AntipodalLimit)
{
    const double T = 10.0;
    for (long long n : {0LL, -1LL, 2LL}) {
        const cplx near = exact_term(pi - 1e-7, T, n, {4096, AlphaRule::sqrt_substitution});
        const cplx lim = antipodal_term(T, n);
        EXPECT_LT(std::abs(near - lim) / std::abs(lim), 1e-5);
    }
}

// Winding sums against the Legendre series at eps = 1e-3.
TEST(Propagators, ExactMatchesSpectral)
{
    const double eps = 1e-3;
    const AlphaQuadrature q{4096, AlphaRule::sqrt_substitution};
    for (double T : {3.0, 10.0})
        for (double g : {0.5 * pi, pi}) {
            const cplx ex = exact_propagator(g, T, regularized_n_max(T, eps), q, eps);
            const cplx sp = sphere_spectral(g, T, 600, eps);
            EXPECT_LT(std::abs(ex - sp) / std::abs(sp), 1e-4) << T << " " << g;
        }
}

TEST(Propagators, CircleWindingMatchesSpectral)
{
    for (double T : {1.0, 3.0, 10.0}) {
        const cplx w = circle_propagator(0.3, 2.1, T, 200, 1e-3);
        const cplx s = circle_spectral(0.3, 2.1, T, 400, 1e-3);
        EXPECT_LT(std::abs(w - s) / std::abs(s), 1e-6) << T;
    }
}

TEST(Propagators, AntipodalSeriesForms)
{
    for (double T : {3.0, 10.0, 32.0 * pi}) {
        const cplx a = poisson_antipodal(T, 300, 1e-3);
        const cplx b = antipodal_closed_form(T, 300, 1e-3);
        EXPECT_NEAR(std::abs(a - b), 0.0, 1e-12);
        const cplx s = sphere_spectral(pi, T, 300, 1e-3);
        EXPECT_NEAR(std::abs(a - s), 0.0, 1e-10 * std::max(1.0, std::abs(s)));
    }
}

TEST(Propagators, SemiclassicalTerm)
{
    const double T = 7.0;
    // n = 0 at gamma = 0: unit amplitude, no phase
    EXPECT_NEAR(std::abs(semiclassical_term(0.0, T, 0) - cplx(1.0)), 0.0, 1e-15);
    // one Maslov jump past pi
    const double g = 0.4;
    const cplx t = semiclassical_term(g, T, -1);
    const double gn = g - two_pi;
    const cplx ref = std::sqrt(std::abs(gn / std::sin(gn))) * std::polar(1.0, -0.5 * pi) *
                     std::exp(I * (gn * gn) / (2.0 * T));
    EXPECT_NEAR(std::abs(t - ref), 0.0, 1e-13);
    EXPECT_THROW(semiclassical_term(pi, T, 0), DivergenceError);
}

TEST(Propagators, SpectralEnergies)
{
    EXPECT_DOUBLE_EQ(sphere_energy(0), 0.0);
    EXPECT_DOUBLE_EQ(sphere_energy(3), 6.0);
    EXPECT_DOUBLE_EQ(parity(-3), -1.0);
    EXPECT_DOUBLE_EQ(parity(4), 1.0);
}

TEST(Propagators, RegularizedCutoff)
{
    EXPECT_EQ(regularized_n_max(10.0, 1e-3), 129);
    EXPECT_THROW(regularized_n_max(10.0, 0.0), DomainError);
}

TEST(Propagators, PhaseDataset)
{
    const std::vector<double> g{0.3, 1.2, 2.9};
    const auto rows = phase_comparison_dataset(32.0 * pi, g, -2, 2);
    ASSERT_EQ(rows.size(), 15u);
    for (const auto& r : rows) {
        EXPECT_NEAR(r.gamma_n, r.gamma + two_pi * static_cast<double>(r.n), 1e-14);
        EXPECT_GT(r.stripped_difference, -pi);
        EXPECT_LE(r.stripped_difference, pi);
    }
    EXPECT_DOUBLE_EQ(wrap_phase(-pi), pi);
    EXPECT_NEAR(wrap_phase(7.0), 7.0 - two_pi, 1e-15);
}
