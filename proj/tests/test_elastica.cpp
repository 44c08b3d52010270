#include <gtest/gtest.h>

#include <random>

#include "s2paths/elastica.hpp"

using namespace s2paths;

namespace {

struct Reference {
    double beta_over_pi;
    long long n;
    double length_over_pi;
};

// Reference take-off angles and lengths at gamma = pi/2, three decimals.
const Reference references[] = {
    {0.25, 0, 0.608},  {0.75, -1, 1.392}, {0.1, 1, 2.523},  {0.3, 1, 2.702},  {0.7, -2, 3.298},
    {0.9, -2, 3.477},  {0.1, 2, 4.524},   {0.3, 2, 4.705},  {0.7, -3, 5.295}, {0.9, -3, 5.476},
};

double polyline_length(const PolylineCurve& c)
{
    double s = 0;
    for (std::size_t i = 1; i < c.points.size(); ++i) s += norm(sub(c.points[i], c.points[i - 1]));
    return s;
}

}  // namespace

TEST(Elastica, ReferenceLengths)
{
    for (const auto& c : references) {
        const auto g = geometry_from({0.5 * pi, c.n, c.beta_over_pi * pi});
        EXPECT_NEAR(g.total_length / pi, c.length_over_pi, 5e-4) << c.beta_over_pi << " " << c.n;
    }
}

TEST(Elastica, GreatCircleCases)
{
    EXPECT_NEAR(geometry_from({0.5 * pi, 0, 0.0}).total_length, 0.5 * pi, 1e-12);
    EXPECT_NEAR(geometry_from({0.5 * pi, -1, pi}).total_length, 1.5 * pi, 1e-12);
    EXPECT_NEAR(geometry_from({0.5 * pi, 0, 0.5 * pi}).total_length, pi, 1e-12);
    EXPECT_NEAR(geometry_from({0.5 * pi, 1, 0.5 * pi}).total_length, 3.0 * pi, 1e-12);
    EXPECT_NEAR(geometry_from({0.5 * pi, 2, 0.5 * pi}).total_length, 5.0 * pi, 1e-12);
}

TEST(Elastica, CriticalTakeoff)
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> gd(0.01, pi);
    for (int i = 0; i < 50; ++i) {
        const double g = gd(rng);
        for (long long np = 0; np <= 3; ++np) {
            const double bc = critical_takeoff(g, np);
            EXPECT_LT(std::abs(critical_residual(g, np, bc)), 1e-10);
            EXPECT_NEAR(bc, 0.5 * pi, 1e-9);
        }
    }
    EXPECT_THROW(critical_takeoff(0.0, 0), DomainError);
}

TEST(Elastica, SideConditions)
{
    EXPECT_THROW(geometry_from({1.0, 0, 2.0}), ConsistencyError);
    EXPECT_THROW(geometry_from({1.0, -1, 1.0}), ConsistencyError);
    EXPECT_THROW(geometry_from({4.0, 0, 1.0}), ConsistencyError);
    EXPECT_NO_THROW(geometry_from({1.5708, 0, 1.5708}, 1e-4));
    EXPECT_THROW(geometry_from({1.5708, 0, 1.5708}), ConsistencyError);
}

TEST(Elastica, TakeoffFromLengthInverts)
{
    const double b = takeoff_from_length(2.702 * pi, 0.5 * pi, 1);
    EXPECT_NEAR(geometry_from({0.5 * pi, 1, b}).total_length, 2.702 * pi, 1e-10);
}

TEST(Elastica, SampledCurve)
{
    const double g = 1.1;
    for (long long n : {0LL, -1LL, 1LL, -2LL}) {
        const double beta = n >= 0 ? 0.3 : 2.6;
        const ElasticaSpec s{g, n, beta};
        const auto geo = geometry_from(s);
        const auto c = sample_curve(s, 400);
        for (const auto& p : c.points) EXPECT_NEAR(norm(p), 1.0, 1e-12);
        EXPECT_NEAR(c.points.front()[0], 1.0, 1e-12);
        EXPECT_NEAR(std::acos(std::clamp(dot(c.points.front(), c.points.back()), -1.0, 1.0)), g, 1e-9);
        EXPECT_EQ(c.torsion_indices.size(), static_cast<std::size_t>(geo.n_torsion));
        EXPECT_EQ(c.segment_index.back(), geo.n_torsion);
        // chord sum approaches rho times the total angle
        EXPECT_NEAR(polyline_length(c), geo.radius * geo.total_length, 1e-4 * geo.total_length);
        EXPECT_EQ(static_cast<long long>(std::floor(winding_measure(c))), geo.n_pair);
        const auto cls = classify_curve(c);
        EXPECT_EQ(cls.n, n);
        EXPECT_NEAR(cls.beta_avg, beta, 1e-3);
    }
}

TEST(Elastica, RandomWindingFloor)
{
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> gd(0.05, pi - 0.05), bd(0.02, 0.98);
    std::uniform_int_distribution<int> nd(-4, 3);
    for (int i = 0; i < 100; ++i) {
        const long long n = nd(rng);
        const double beta = n >= 0 ? bd(rng) * 0.5 * pi : (0.5 + 0.5 * bd(rng)) * pi;
        const ElasticaSpec s{gd(rng), n, beta};
        const auto c = sample_curve(s, 200);
        EXPECT_EQ(static_cast<long long>(std::floor(winding_measure(c))), pair_index(n));
    }
}
