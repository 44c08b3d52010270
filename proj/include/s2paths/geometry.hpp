#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace s2paths {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

inline Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

inline Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

inline Vec3 normalized(const Vec3& a) { return scale(a, 1.0 / norm(a)); }

// Rodrigues rotation of v about unit axis k by angle t.
inline Vec3 rotate_about(const Vec3& v, const Vec3& k, double t)
{
    const double c = std::cos(t), s = std::sin(t);
    const Vec3 kxv = cross(k, v);
    const double kv = dot(k, v);
    return {v[0] * c + kxv[0] * s + k[0] * kv * (1 - c), v[1] * c + kxv[1] * s + k[1] * kv * (1 - c),
            v[2] * c + kxv[2] * s + k[2] * kv * (1 - c)};
}

// Positive remainder: result in [0, m) for m > 0.
inline double pos_mod(double x, double m)
{
    double r = std::fmod(x, m);
    if (r < 0) r += m;
    if (r >= m) r -= m;
    return r;
}

inline long long pos_mod(long long x, long long m)
{
    long long r = x % m;
    return r < 0 ? r + m : r;
}

inline double clamp_unit(double x, double tol = 1e-9)
{
    if (x > 1.0) {
        if (x > 1.0 + tol) throw DomainError("cosine/sine argument above 1 beyond tolerance");
        return 1.0;
    }
    if (x < -1.0) {
        if (x < -1.0 - tol) throw DomainError("cosine/sine argument below -1 beyond tolerance");
        return -1.0;
    }
    return x;
}

inline double safe_acos(double x) { return std::acos(clamp_unit(x)); }
inline double safe_asin(double x) { return std::asin(clamp_unit(x)); }

struct SphericalPoint {
    double theta = 0;  // [0, pi]
    double phi = 0;    // [0, 2 pi)

    Vec3 unit() const
    {
        const double s = std::sin(theta);
        return {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
    }

    static SphericalPoint from_unit(const Vec3& u)
    {
        return {safe_acos(u[2] / norm(u)), pos_mod(std::atan2(u[1], u[0]), two_pi)};
    }
};

inline double angular_separation(const SphericalPoint& p0, const SphericalPoint& pf)
{
    const double c = std::cos(p0.theta) * std::cos(pf.theta) +
                     std::sin(p0.theta) * std::sin(pf.theta) * std::cos(pf.phi - p0.phi);
    return std::acos(std::clamp(c, -1.0, 1.0));
}

struct WindingDecomposition {
    double gamma = 0;  // [0, pi]
    long long n = 0;
    long long n_pair = 0;  // floor(|n + 1/2|)
};

inline long long pair_index(long long n) { return n >= 0 ? n : -n - 1; }

inline WindingDecomposition decompose_extended(double gamma_tilde)
{
    WindingDecomposition d;
    d.gamma = std::abs(pos_mod(gamma_tilde - pi, two_pi) - pi);
    const auto f2 = static_cast<long long>(std::floor(gamma_tilde / two_pi));
    const auto f1 = static_cast<long long>(std::floor(gamma_tilde / pi));
    d.n = f2 - (1 + 2 * f2) * pos_mod(f1, 2LL);
    d.n_pair = pair_index(d.n);
    return d;
}

// Point at extended angle Theta and azimuth Phi in the frame whose pole is
// the final location (thetaf, phif); z-y-z Euler rotation back to global axes.
inline SphericalPoint rotate_to_global(double Theta, double Phi, double thetaf, double phif)
{
    const double sT = std::sin(Theta), cT = std::cos(Theta);
    const double sF = std::sin(Phi), cF = std::cos(Phi);
    const double st = std::sin(thetaf), ct = std::cos(thetaf);
    const double sp = std::sin(phif), cp = std::cos(phif);
    const double ct0 = -st * cF * sT + ct * cT;
    const double w = ct * cF * sT + st * cT;
    const double u = -sp * sF * sT + cp * w;
    const double v = cp * sF * sT + sp * w;
    return {safe_acos(ct0), pos_mod(std::atan2(v, u), two_pi)};
}

inline double geodesic_tilt(double Phi0, double thetaf)
{
    const double cf = std::cos(thetaf), sf = std::sin(thetaf), cP = std::cos(Phi0);
    const double c = std::sqrt(cf * cf + cP * cP * sf * sf);
    return std::acos(std::min(c, 1.0));
}

inline double tilt_to_phi0(double theta_g, double thetaf)
{
    const double cg = std::cos(theta_g), cf = std::cos(thetaf);
    double d = cg * cg - cf * cf;
    if (d < -1e-12) throw DomainError("tilt_to_phi0: theta_g outside [0, min(thetaf, pi - thetaf)]");
    d = std::max(d, 0.0);
    return std::atan2(std::sin(theta_g), std::sqrt(d));
}

inline long long maslov_index(double gamma_n) { return static_cast<long long>(std::floor(std::abs(gamma_n) / pi)); }

}  // namespace s2paths
