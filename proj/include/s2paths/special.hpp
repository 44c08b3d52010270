#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "geometry.hpp"

namespace s2paths {

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};

// P_l(x) by the three-term recurrence.
inline double legendre_p(int l, double x)
{
    if (l == 0) return 1.0;
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= l; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

// All P_0..P_lmax at x.
inline std::vector<double> legendre_table(int lmax, double x)
{
    std::vector<double> p(static_cast<std::size_t>(lmax) + 1);
    p[0] = 1.0;
    if (lmax >= 1) p[1] = x;
    for (int k = 2; k <= lmax; ++k) p[k] = ((2 * k - 1) * x * p[k - 1] - (k - 1) * p[k - 2]) / k;
    return p;
}

// Orthonormal Y_lm(theta, 0) for m >= 0, Condon-Shortley phase included.
inline double sph_legendre_normalized(int l, int m, double theta)
{
    const double x = std::cos(theta), s = std::sin(theta);
    double pmm = std::sqrt(1.0 / (4.0 * pi));
    for (int i = 1; i <= m; ++i) pmm *= -std::sqrt((2.0 * i + 1.0) / (2.0 * i)) * s;
    if (l == m) return pmm;
    double pm1 = std::sqrt(2.0 * m + 3.0) * x * pmm;
    if (l == m + 1) return pm1;
    double a = pmm, b = pm1;
    for (int k = m + 2; k <= l; ++k) {
        const double kk = k, km1 = k - 1.0;
        const double ak = std::sqrt((4.0 * kk * kk - 1.0) / (kk * kk - m * m));
        const double bk = std::sqrt((km1 * km1 - m * m) / (4.0 * km1 * km1 - 1.0));
        const double c = ak * (x * b - bk * a);
        a = b;
        b = c;
    }
    return b;
}

// Orthonormal spherical harmonic, Condon-Shortley convention,
// Y_{l,-m} = (-1)^m conj(Y_{l,m}).
inline cplx spherical_harmonic(int l, int m, double theta, double phi)
{
    const int am = m < 0 ? -m : m;
    const double p = sph_legendre_normalized(l, am, theta);
    cplx y = p * std::polar(1.0, am * phi);
    if (m < 0) {
        y = std::conj(y);
        if (am % 2) y = -y;
    }
    return y;
}

}  // namespace s2paths
