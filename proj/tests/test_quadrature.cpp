#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "s2paths/quadrature.hpp"

using namespace s2paths;

namespace {

cplx edge_oracle(double g, double da, long long n, double T)
{
    // alpha = g + u; the singular factor written in half-angle form
    auto f = [&](double u) {
        const double a = g + u + two_pi * static_cast<double>(n);
        return a * std::exp(I * (a * a) / (2.0 * T)) / std::sqrt(2.0 * std::sin(g + 0.5 * u) * std::sin(0.5 * u));
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    const double re = ts.integrate([&](double u) { return f(u).real(); }, 0.0, da);
    const double im = ts.integrate([&](double u) { return f(u).imag(); }, 0.0, da);
    return {re, im};
}

double thetaf_oracle(double tg, double dtf)
{
    boost::math::quadrature::tanh_sinh<double> ts;
    // theta_f = tg + u; cos^2 tg - cos^2 theta_f = sin(u) sin(2 tg + u)
    return ts.integrate([&](double u) { return std::sin(tg + u) / std::sqrt(std::sin(u) * std::sin(2.0 * tg + u)); }, 0.0,
                        dtf);
}

}  // namespace

TEST(Quadrature, MidpointExactForLinear)
{
    const MidpointGrid g{1.0, 3.0, 5};
    EXPECT_DOUBLE_EQ(g.step(), 0.4);
    EXPECT_DOUBLE_EQ(g.node(1), 1.2);
    const cplx v = midpoint_integrate([](double x) { return cplx(2.0 * x + 1.0, -x); }, g);
    EXPECT_NEAR(v.real(), 10.0, 1e-13);
    EXPECT_NEAR(v.imag(), -4.0, 1e-13);
    EXPECT_THROW(midpoint_integrate([](double) { return cplx(NAN, 0.0); }, g), NonFiniteError);
    EXPECT_THROW(midpoint_integrate([](double) { return cplx(1.0); }, MidpointGrid{0, 1, 0}), DomainError);
}

TEST(Quadrature, RegularizedTime)
{
    const cplx t = regularized_time(10.0, 1e-3);
    EXPECT_DOUBLE_EQ(t.real(), 10.0);
    EXPECT_DOUBLE_EQ(t.imag(), -0.01);
    EXPECT_LT(std::abs(free_phase(100.0, t)), 1.0);
}

// gamma -> 0 at n = 0: the exact value is sqrt(2) da, which the estimator hits.
TEST(Quadrature, AlphaEdgeSmallGammaLimit)
{
    const double T = 32.0 * pi;
    for (double da : {1e-4, 1e-3, 1e-2}) {
        const cplx e = alpha_edge_estimate(1e-12, da, 0, T);
        EXPECT_NEAR(e.real(), std::sqrt(2.0) * da, 2e-4 * da);
        const cplx o = edge_oracle(1e-6 * da, da, 0, T);
        EXPECT_LT(std::abs(e - o) / std::abs(o), 1e-4);
    }
}

TEST(Quadrature, AlphaEdgeSeparatedRegime)
{
    const double T = 32.0 * pi;
    for (long long n = -2; n <= 2; ++n)
        for (double g : {0.3, 1.0, 2.0, 3.0})
            for (double da : {1e-4, 1e-3}) {
                const cplx o = edge_oracle(g, da, n, T);
                EXPECT_LT(std::abs(alpha_edge_estimate(g, da, n, T) - o) / std::abs(o), 1e-3) << n << " " << g << " " << da;
            }
}

// The refined estimator beats the first-order one in the crossover band.
TEST(Quadrature, AlphaEdgeBeatsFirstOrder)
{
    const double T = 32.0 * pi;
    for (double ratio : {0.01, 0.1, 1.0, 10.0}) {
        const double da = 1e-2, g = ratio * da;
        const cplx o = edge_oracle(g, da, 0, T);
        EXPECT_LT(std::abs(alpha_edge_estimate(g, da, 0, T) - o), std::abs(alpha_edge_estimate_first_order(g, da, 0, T) - o));
    }
}

TEST(Quadrature, ThetafEdgeEstimate)
{
    for (double tg : {0.2, 0.7, 1.2})
        for (double dtf : {1e-4, 1e-3}) {
            const double o = thetaf_oracle(tg, dtf);
            EXPECT_LT(std::abs(thetaf_edge_estimate(tg, dtf) - o) / o, 2e-3) << tg << " " << dtf;
        }
    EXPECT_EQ(thetaf_edge_estimate_unshifted(0.0, 0.01), 0.0);
    EXPECT_GT(thetaf_edge_estimate(0.0, 0.01), 0.0);
    EXPECT_TRUE(std::isfinite(thetaf_edge_estimate(0.0, 0.01)));
    EXPECT_DOUBLE_EQ(thetaf_edge_estimate(0.4, 0.01, EdgeSide::lower), thetaf_edge_estimate(0.4, 0.01, EdgeSide::upper));
    EXPECT_DOUBLE_EQ(thetaf_edge_node(0.4, 0.01, EdgeSide::lower), 0.405);
    EXPECT_DOUBLE_EQ(thetaf_edge_node(0.4, 0.01, EdgeSide::upper), pi - 0.405);
}

TEST(Quadrature, LprimeIntervalCount)
{
    const double T = 32.0 * pi;
    EXPECT_EQ(lprime_interval_count(T, 0.0), static_cast<int>(std::ceil(5.0 * std::sqrt(T))));
    EXPECT_EQ(lprime_interval_count(T, 10.0), static_cast<int>(std::ceil(30.0 * std::sqrt(T))));
}
