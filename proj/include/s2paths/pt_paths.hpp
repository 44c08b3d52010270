#pragma once

#include <cmath>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"

namespace s2paths {

struct PTPathSpec {
    int l = 1;
    int m = 1;
    int periods = 7;
    int samples_per_period = 400;

    void validate() const
    {
        if (m == 0) throw DomainError("m = 0 has no Poschl-Teller form");
        if (l < std::abs(m)) throw DomainError("need l >= |m|");
        if (periods < 1 || samples_per_period < 1) throw DomainError("periods and samples_per_period must be positive");
    }
};

inline double pt_potential(double theta, int m)
{
    const double s = std::sin(theta);
    if (!(theta > 0 && theta < pi) || s == 0.0) throw DomainError("pt_potential needs theta in (0, pi)");
    return -0.125 + (m * m - 0.25) / (2.0 * s * s);
}

namespace detail {

inline double pt_rate(int l) { return std::sqrt(l * (l + 1.0)); }

// cos(theta_0)
inline double pt_cos_turn(int l, int m) { return std::sqrt(1.0 - (m * m - 0.25) / (l * (l + 1.0))); }

// F(u | k) for any real amplitude u, modulus k < 1
inline double ellint_f(double k, double u)
{
    const double K = std::comp_ellint_1(k);
    const double h = 0.5 * pi;
    const double j = std::round(u / pi);
    const double r = u - j * pi;  // |r| <= pi/2
    const double fr = r >= 0 ? std::ellint_1(k, std::min(r, h)) : -std::ellint_1(k, std::min(-r, h));
    return 2.0 * j * K + fr;
}

inline void check_pt(int l, int m)
{
    if (m == 0) throw DomainError("m = 0 has no Poschl-Teller form");
    if (l < std::abs(m)) throw DomainError("need l >= |m|");
}

inline void check_turning_range(double theta, double theta0)
{
    const double tol = 1e-12;
    if (theta < theta0 - tol || theta > pi - theta0 + tol) throw DomainError("theta outside the turning range");
}

}  // namespace detail

inline double turning_angle(int l, int m)
{
    detail::check_pt(l, m);
    return std::asin(std::sqrt(m * m - 0.25) / detail::pt_rate(l));
}

inline double half_period(int l) { return pi / detail::pt_rate(l); }

// Time from theta_0, first half period.
inline double time_of_theta(double theta, int l, int m)
{
    const double t0 = turning_angle(l, m);
    detail::check_turning_range(theta, t0);
    const double L = detail::pt_rate(l);
    const double s0 = std::sin(t0);
    const double rad = std::max(0.0, std::sin(theta) * std::sin(theta) - s0 * s0);
    return -std::atan2(std::cos(theta), std::sqrt(rad)) / L + 0.5 * pi / L;
}

inline double phi_of_theta(double theta, int l, int m)
{
    const double t0 = turning_angle(l, m);
    detail::check_turning_range(theta, t0);
    const double c0 = detail::pt_cos_turn(l, m);
    const double x = std::clamp(std::cos(theta) / c0, -1.0, 1.0);
    return m / detail::pt_rate(l) * (std::comp_ellint_1(c0) - std::ellint_1(c0, std::asin(std::abs(x))) * (x < 0 ? -1.0 : 1.0));
}

// Azimuthal advance over one half period of the theta motion.
inline double half_period_phi(int l, int m)
{
    detail::check_pt(l, m);
    return 2.0 * m / detail::pt_rate(l) * std::comp_ellint_1(detail::pt_cos_turn(l, m));
}

struct PTSample {
    double t = 0;
    double theta = 0;
    double phi = 0;
    double theta_dot = 0;
    double phi_dot = 0;
    Vec3 point{};
};

// cos(theta) = cos(theta_0) cos(L t) and phi from the elliptic integral,
// continued across half periods.
inline PTSample pt_state(double t, int l, int m)
{
    detail::check_pt(l, m);
    const double L = detail::pt_rate(l);
    const double c0 = detail::pt_cos_turn(l, m);
    const double s = L * t;
    PTSample p;
    p.t = t;
    p.theta = std::acos(std::clamp(c0 * std::cos(s), -1.0, 1.0));
    const double st = std::sin(p.theta);
    p.theta_dot = c0 * L * std::sin(s) / st;
    p.phi_dot = m / st;
    p.phi = m / L * (std::comp_ellint_1(c0) - detail::ellint_f(c0, 0.5 * pi - s));
    p.point = SphericalPoint{p.theta, pos_mod(p.phi, two_pi)}.unit();
    return p;
}

// Uniform in t over the requested number of full theta periods.
inline std::vector<PTSample> pt_path(const PTPathSpec& spec)
{
    spec.validate();
    const double period = 2.0 * half_period(spec.l);
    const long long count = static_cast<long long>(spec.periods) * spec.samples_per_period;
    std::vector<PTSample> out;
    out.reserve(static_cast<std::size_t>(count + 1));
    for (long long i = 0; i <= count; ++i)
        out.push_back(pt_state(period * static_cast<double>(i) / spec.samples_per_period, spec.l, spec.m));
    return out;
}

// Left side of the theta equation of motion without the -1/8 constant.
inline double pt_energy(const PTSample& p, int m)
{
    const double s = std::sin(p.theta);
    return 0.5 * p.theta_dot * p.theta_dot + (m * m - 0.25) / (2.0 * s * s);
}

}  // namespace s2paths
