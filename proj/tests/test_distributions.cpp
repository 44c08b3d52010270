#include <gtest/gtest.h>

#include "s2paths/distributions.hpp"

using namespace s2paths;

namespace {

RunConfig small(int l, int m)
{
    RunConfig c;
    c.state = {l, m};
    c.n_alpha = 16;
    c.n_thetaf = 8;
    c.n_phi0 = 16;
    c.dLc = 0.01;
    return c;
}

}  // namespace

TEST(Distributions, ConfigDefaults)
{
    RunConfig c;
    EXPECT_NEAR(c.T, 32.0 * pi, 1e-12);
    EXPECT_EQ(c.effective_kappa(), 4.0);
    c.state = {1, 1};
    EXPECT_EQ(c.effective_kappa(), 3.0);
    EXPECT_DOUBLE_EQ(c.lc_range(), 4.5);
    c.kappa = 4.0;
    EXPECT_DOUBLE_EQ(c.lc_range(), 6.0);
    EXPECT_NO_THROW(c.validate());
}

TEST(Distributions, ConfigRejects)
{
    auto bad = [](auto mutate) {
        RunConfig c;
        mutate(c);
        EXPECT_THROW(c.validate(), std::invalid_argument);
    };
    bad([](RunConfig& c) { c.kappa = -1; });
    bad([](RunConfig& c) { c.state = {1, 2}; });
    bad([](RunConfig& c) { c.T = 0; });
    bad([](RunConfig& c) { c.epsilon = 0.5; });
    bad([](RunConfig& c) { c.n_alpha = 1; });
    bad([](RunConfig& c) { c.dLc = 0; });
}

// The rotated harmonic is a degree-l trigonometric polynomial in gamma~.
TEST(Distributions, AngularCoefficientsReproduceHarmonic)
{
    for (int l = 0; l <= 3; ++l)
        for (int m = -l; m <= l; ++m) {
            const auto a = detail::angular_coefficients(l, m, 0.7, 1.1, 0.4);
            for (double gt = -9.0; gt < 9.0; gt += 0.37) {
                const auto p = rotate_to_global(gt, 0.7, 1.1, 0.4);
                const cplx y = spherical_harmonic(l, m, p.theta, p.phi);
                EXPECT_NEAR(std::abs(detail::eval_trig(a, l, gt) - y), 0.0, 1e-12);
            }
        }
}

TEST(Distributions, FactoredWindowMatchesDirect)
{
    for (auto [l, m] : {std::pair{0, 0}, {1, -1}, {2, 1}}) {
        const auto c = small(l, m);
        for (double Lc : {-1.3, 0.2, 2.45}) {
            const cplx a = delta_J(Lc, 0.9, 1.2, 0.3, c);
            const cplx b = delta_J_factored(Lc, 0.9, 1.2, 0.3, c);
            EXPECT_NEAR(std::abs(a - b), 0.0, 1e-12 * std::max(1.0, std::abs(a)));
        }
    }
}

// Weights of the theta_f rule integrate sin / sqrt(cos^2 g - cos^2) to pi.
TEST(Distributions, ThetafRuleWeightSum)
{
    for (double tg : {0.0, 0.3, 1.0, 1.4}) {
        const auto r = thetaf_rule(tg, 256);
        double s = 0;
        for (double w : r.weights) s += w;
        EXPECT_NEAR(s, pi, 0.01) << tg;
        EXPECT_NEAR(r.nodes.front() + r.nodes.back(), pi, 1e-12);
    }
}

TEST(Distributions, LcGridSymmetric)
{
    auto c = small(1, 0);
    const auto g = default_lc_grid(c);
    ASSERT_EQ(g.size(), 900u);
    EXPECT_DOUBLE_EQ(g.front(), -g.back());
    EXPECT_NEAR(g[450], 0.005, 1e-15);
    EXPECT_EQ(lc_count(c, 3.0), 450u);
}

TEST(Distributions, P1NormalizationSmallGrid)
{
    const auto p = p1_distribution(small(0, 0), 1);
    const cplx n = p1_normalization(p);
    EXPECT_NEAR(n.real(), 1.0, 0.02);
    EXPECT_NEAR(n.imag(), 0.0, 0.02);
}

TEST(Distributions, P2NormalizationAndReality)
{
    const auto p = p2_distribution(small(0, 0), 1);
    ASSERT_EQ(p.axis.size(), 32u);
    EXPECT_NEAR(p.axis.front() + p.axis.back(), pi, 1e-12);
    const cplx n = p2_normalization(p);
    EXPECT_NEAR(n.real(), 1.0, 0.01);
    EXPECT_LT(imaginary_ratio(p), 0.05);
    // (0,0) is nearly isotropic at 1/2
    for (const auto& v : p.values) EXPECT_NEAR(v.real(), 0.5, 0.05);
}

TEST(Distributions, BivariateAgreesWithP2Pieces)
{
    auto c = small(1, 1);
    const auto grid = default_quadrant_grid(c);
    const auto w = quadrant_weights(c, grid, 1);
    const auto q = bivariate_angular_weights(grid[3], c);
    for (std::size_t k = 0; k < q.size(); ++k) EXPECT_NEAR(std::abs(q[k] - w.Q[3][k]), 0.0, 1e-13);
    EXPECT_TRUE(std::isfinite(std::abs(bivariate_p(1.5, grid[3], c))));
}

TEST(Distributions, SumRuleSmallGrid)
{
    auto c = small(1, 0);
    c.n_thetaf = 16;
    const auto r = sum_rule(1, c, default_quadrant_grid(c), 1);
    EXPECT_EQ(r.curves.size(), 3u);
    EXPECT_LT(r.max_relative_deviation, 0.05);
}

TEST(Distributions, KappaScanMeanIsAverage)
{
    auto c = small(0, 0);
    const auto s = kappa_scan({0, 0}, c, {2.0, 3.0}, 3.5, 1);
    ASSERT_EQ(s.curves.size(), 2u);
    EXPECT_EQ(s.window_mean.axis.size(), s.curves[0].axis.size());
    EXPECT_THROW(kappa_scan({0, 0}, c, {-1.0}, 3.5, 1), std::invalid_argument);
}

TEST(Distributions, ReconstructsHarmonic)
{
    for (auto [l, m] : {std::pair{0, 0}, {1, 1}}) {
        RunConfig c;
        c.state = {l, m};
        c.n_alpha = 32;
        c.n_thetaf = 16;
        c.dLc = 0.005;
        const cplx r = reconstruct_wavefunction(1.0, 0.5, c, 1);
        const cplx y = spherical_harmonic(l, m, 1.0, 0.5);
        EXPECT_LT(std::abs(r - y) / std::abs(y), 0.03) << l << " " << m;
    }
}

TEST(Distributions, ThreadCountDoesNotChangeBits)
{
    const auto c = small(1, 1);
    const auto a = p1_distribution(c, 1), b = p1_distribution(c, 3);
    ASSERT_EQ(a.values.size(), b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_EQ(a.values[i], b.values[i]);
    const auto p = p2_distribution(c, 1), q = p2_distribution(c, 4);
    for (std::size_t i = 0; i < p.values.size(); ++i) EXPECT_EQ(p.values[i], q.values[i]);
}
