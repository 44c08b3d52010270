#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "errors.hpp"
#include "special.hpp"

namespace s2paths {

// T -> T(1 - i eps)
inline cplx regularized_time(double T, double eps) { return cplx(T, -T * eps); }

// exp(i x^2 / 2 Tc)
inline cplx free_phase(double x, cplx Tc) { return std::exp(I * (x * x) / (2.0 * Tc)); }

struct MidpointGrid {
    double lower = 0;
    double upper = 1;
    int count = 1;

    double step() const { return (upper - lower) / count; }
    // i = 1..count
    double node(int i) const { return lower + (i - 0.5) * step(); }
};

template <class F>
cplx midpoint_integrate(F&& f, const MidpointGrid& g)
{
    if (g.count <= 0) throw DomainError("midpoint grid needs a positive count");
    const double h = g.step();
    cplx sum = 0;
    for (int i = 1; i <= g.count; ++i) {
        const cplx v = f(g.node(i));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NonFiniteError("non-finite integrand at node " + std::to_string(i));
        sum += v;
    }
    return sum * h;
}

// First-interval estimate of the alpha integral. Three variants in order of
// refinement; the last is the production estimator.
inline cplx alpha_edge_estimate_first_order(double gamma, double da, long long n, double T, double eps = 0)
{
    const double a = gamma + two_pi * static_cast<double>(n);
    return a * free_phase(a, regularized_time(T, eps)) * 2.0 * std::sqrt(da) / std::sqrt(std::sin(gamma));
}

inline cplx alpha_edge_estimate_shifted(double gamma, double da, long long n, double T, double eps = 0)
{
    const double a = gamma + 0.25 * da + two_pi * static_cast<double>(n);
    return a * free_phase(a, regularized_time(T, eps)) * 2.0 * std::sqrt(da) / std::sqrt(std::sin(gamma));
}

inline cplx alpha_edge_estimate(double gamma, double da, long long n, double T, double eps = 0)
{
    const double a = gamma + 0.25 * da + two_pi * static_cast<double>(n);
    return a * free_phase(a, regularized_time(T, eps)) * 2.0 * std::sqrt(da) /
           std::sqrt(std::sin(gamma + 0.125 * da));
}

enum class EdgeSide { lower, upper };

// Estimate of the integral of sin(thetaf)/sqrt(cos^2 theta_g - cos^2 thetaf)
// over the boundary interval of width dtf. Same value on either side.
inline double thetaf_edge_estimate(double theta_g, double dtf, EdgeSide = EdgeSide::lower)
{
    return std::sqrt(2.0 * dtf * std::tan(theta_g + 0.5 * dtf));
}

inline double thetaf_edge_estimate_unshifted(double theta_g, double dtf) { return std::sqrt(2.0 * dtf * std::tan(theta_g)); }

// Midpoint of the boundary interval where the caller evaluates the
// remaining (regular) factors.
inline double thetaf_edge_node(double theta_g, double dtf, EdgeSide side)
{
    return side == EdgeSide::lower ? theta_g + 0.5 * dtf : pi - theta_g - 0.5 * dtf;
}

inline int lprime_interval_count(double T, double Lc)
{
    const double r = std::sqrt(T);
    const int a = static_cast<int>(std::ceil(5.0 * r));
    const int b = static_cast<int>(std::ceil(3.0 * r * std::abs(Lc)));
    return a > b ? a : b;
}

}  // namespace s2paths
