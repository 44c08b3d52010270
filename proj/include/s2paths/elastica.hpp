#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"

namespace s2paths {

struct ElasticaSpec {
    double gamma = 0;  // endpoint separation, [0, pi]
    long long n = 0;   // winding number
    double beta = 0;   // dihedral angle between segment planes and the torsion plane, [0, pi]
};

struct ElasticaGeometry {
    long long n_pair = 0;
    long long n_torsion = 0;
    double segment_angle = 0;   // Gamma
    double radius = 1;          // rho
    double internal_angle = 0;  // nu of one segment
    double total_length = 0;    // (n_torsion + 1) * internal_angle
};

namespace detail {

struct SegmentShape {
    double Gamma, rho, nu;
};

inline SegmentShape segment_shape(double gamma, long long n, double beta)
{
    const long long np = pair_index(n);
    const double Gamma = std::abs(gamma + two_pi * static_cast<double>(n)) / static_cast<double>(2 * np + 1);
    const double sh = std::sin(0.5 * Gamma), ch = std::cos(0.5 * Gamma), cb = std::cos(beta);
    const double rho = std::sqrt(sh * sh + cb * cb * ch * ch);
    if (!(rho > 0)) throw ConsistencyError("elastica degenerates to a point (gamma = 0 with beta = pi/2)");
    const double sgn = n >= 0 ? 1.0 : -1.0;
    const double nu = 2.0 * std::acos(std::clamp(sgn * cb * ch / rho, -1.0, 1.0));
    return {Gamma, rho, nu};
}

// Total length as a function of beta on the n' family (n = n' branch formulas,
// which coincide with the n = -n'-1 formulas).
inline double family_length(double gamma, long long n_pair, double beta)
{
    return static_cast<double>(2 * n_pair + 1) * segment_shape(gamma, n_pair, beta).nu;
}

}  // namespace detail

inline double critical_takeoff(double gamma, long long n_pair)
{
    if (!(gamma > 0 && gamma <= pi) || n_pair < 0) throw DomainError("critical_takeoff needs gamma in (0, pi], n' >= 0");
    const double target = pi + two_pi * static_cast<double>(n_pair);
    auto r = [&](double b) { return detail::family_length(gamma, n_pair, b) - target; };
    double lo = 0, hi = pi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double rm = r(mid);
        if (rm == 0.0 || hi - lo < 1e-15) return mid;
        if (rm < 0) lo = mid; else hi = mid;
    }
    throw ConvergenceError("critical_takeoff did not converge in 200 iterations");
}

// Length residual at beta, used to verify critical_takeoff.
inline double critical_residual(double gamma, long long n_pair, double beta)
{
    return detail::family_length(gamma, n_pair, beta) - (pi + two_pi * static_cast<double>(n_pair));
}

// tol: slack allowed on the beta <= beta_c / beta >= beta_c side condition
inline ElasticaGeometry geometry_from(const ElasticaSpec& s, double tol = 1e-12)
{
    if (!(s.gamma >= 0 && s.gamma <= pi)) throw ConsistencyError("gamma outside [0, pi]");
    if (!(s.beta >= 0 && s.beta <= pi)) throw ConsistencyError("beta outside [0, pi]");
    const long long np = pair_index(s.n);
    if (s.gamma > 0) {
        const double bc = critical_takeoff(s.gamma, np);
        if (s.n >= 0 && s.beta > bc + tol)
            throw ConsistencyError("n >= 0 requires beta <= beta_c");
        if (s.n < 0 && s.beta < bc - tol)
            throw ConsistencyError("n < 0 requires beta >= beta_c");
    }
    const auto sh = detail::segment_shape(s.gamma, s.n, s.beta);
    ElasticaGeometry g;
    g.n_pair = np;
    g.n_torsion = 2 * np;
    g.segment_angle = sh.Gamma;
    g.radius = sh.rho;
    g.internal_angle = sh.nu;
    g.total_length = static_cast<double>(g.n_torsion + 1) * sh.nu;
    return g;
}

inline double takeoff_from_length(double target, double gamma, long long n)
{
    const long long np = pair_index(n);
    const double bc = critical_takeoff(gamma, np);
    double lo = n >= 0 ? 0.0 : bc, hi = n >= 0 ? bc : pi;
    const double flo = detail::family_length(gamma, np, lo), fhi = detail::family_length(gamma, np, hi);
    const double tol = 1e-12;
    if (target < flo - tol || target > fhi + tol) throw DomainError("target length outside the attainable range");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo < 1e-15) return mid;
        if (detail::family_length(gamma, np, mid) < target) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct PolylineCurve {
    std::vector<Vec3> points;
    std::vector<int> segment_index;      // per point
    std::vector<std::size_t> torsion_indices;
};

// Torsion plane is the x-z plane with normal y; the initial point is +x and
// the geodesic runs from +x toward +z. Segments alternate the side of the
// torsion plane they bulge to, so take-off and approach angles coincide.
inline PolylineCurve sample_curve(const ElasticaSpec& s, int points_per_segment, double tol = 1e-12)
{
    if (points_per_segment < 1) throw DomainError("points_per_segment must be positive");
    const ElasticaGeometry g = geometry_from(s, tol);
    const long long np = g.n_pair;
    const double Gamma = (s.gamma + two_pi * static_cast<double>(np)) / static_cast<double>(2 * np + 1);
    const Vec3 axis{0, -1, 0};
    const double cb = std::cos(s.beta), sb = std::sin(s.beta);

    PolylineCurve c;
    Vec3 A{1, 0, 0};
    c.points.push_back(A);
    c.segment_index.push_back(0);
    for (long long k = 0; k <= 2 * np; ++k) {
        const Vec3 B = rotate_about(A, axis, Gamma);
        const Vec3 m = rotate_about(A, axis, 0.5 * Gamma);
        const double side = (k % 2 == 0) ? 1.0 : -1.0;
        const Vec3 N = normalized(add(scale(axis, cb), scale(m, side * sb)));
        // rotation angle about N carrying A to B
        const Vec3 Ap = sub(A, scale(N, dot(N, A)));
        const Vec3 Bp = sub(B, scale(N, dot(N, B)));
        double psi = std::atan2(dot(N, cross(Ap, Bp)), dot(Ap, Bp));
        if (psi <= 0) psi += two_pi;
        for (int j = 1; j <= points_per_segment; ++j) {
            Vec3 p = rotate_about(A, N, psi * j / points_per_segment);
            if (j == points_per_segment) p = B;
            c.points.push_back(normalized(p));
            c.segment_index.push_back(static_cast<int>(k));
        }
        if (k < 2 * np) c.torsion_indices.push_back(c.points.size() - 1);
        A = B;
    }
    return c;
}

struct TorsionFrame {
    Vec3 e1, normal, e3;
};

inline TorsionFrame torsion_frame(const PolylineCurve& c)
{
    if (c.points.size() < 2) throw DegenerateError("curve needs at least two points");
    const Vec3 p0 = normalized(c.points.front());
    Vec3 nrm = cross(p0, normalized(c.points.back()));
    if (norm(nrm) < 1e-9) {
        // endpoints coincide or are antipodal: any plane through them will do;
        // take the one through the point farthest from the endpoint axis
        double best = 0;
        for (const auto& q : c.points) {
            const Vec3 x = cross(p0, q);
            if (norm(x) > best) {
                best = norm(x);
                nrm = x;
            }
        }
        if (best < 1e-12) throw DegenerateError("curve lies on the endpoint axis");
    }
    nrm = normalized(nrm);
    return {p0, nrm, cross(nrm, p0)};
}

// Signed in-plane winding angle, midpoint increments.
inline double signed_winding_angle(const PolylineCurve& c, const TorsionFrame& f)
{
    double sum = 0;
    double x0 = dot(c.points[0], f.e1), z0 = dot(c.points[0], f.e3);
    for (std::size_t i = 1; i < c.points.size(); ++i) {
        const double x1 = dot(c.points[i], f.e1), z1 = dot(c.points[i], f.e3);
        if (x1 * x1 + z1 * z1 < 1e-20) throw DegenerateError("curve sample lies on the torsion-plane axis");
        const double xm = 0.5 * (x0 + x1), zm = 0.5 * (z0 + z1);
        sum += (xm * (z1 - z0) - zm * (x1 - x0)) / (xm * xm + zm * zm);
        x0 = x1;
        z0 = z1;
    }
    return sum;
}

inline double winding_measure(const PolylineCurve& c)
{
    const auto f = torsion_frame(c);
    return std::abs(signed_winding_angle(c, f)) / two_pi;
}

struct CurveClass {
    long long n_pair = 0;
    double beta_avg = 0;
    long long n = 0;
    double winding = 0;
};

inline CurveClass classify_curve(const PolylineCurve& c)
{
    if (c.points.size() < 3) throw DegenerateError("classification needs at least three points");
    const auto f = torsion_frame(c);
    CurveClass out;
    out.winding = std::abs(signed_winding_angle(c, f)) / two_pi;
    out.n_pair = static_cast<long long>(std::floor(out.winding));

    const Vec3 p0 = normalized(c.points.front()), pf = normalized(c.points.back());
    const double gamma = std::acos(std::clamp(dot(p0, pf), -1.0, 1.0));
    const double Gamma = (gamma + two_pi * static_cast<double>(out.n_pair)) / static_cast<double>(2 * out.n_pair + 1);

    auto tangent = [](const Vec3& a, const Vec3& b, const Vec3& d) {
        // second-order one-sided difference, projected on the tangent plane at a
        Vec3 t = scale(add(add(scale(a, -3.0), scale(b, 4.0)), scale(d, -1.0)), 0.5);
        t = sub(t, scale(a, dot(a, t)));
        return normalized(t);
    };
    const std::size_t L = c.points.size();
    const Vec3 t0 = tangent(p0, c.points[1], c.points[2]);
    const Vec3 tf = scale(tangent(pf, c.points[L - 2], c.points[L - 3]), -1.0);
    const Vec3 g0 = f.e3;
    const Vec3 gf = cross(f.normal, pf);
    const double tau = 0.5 * (std::acos(std::clamp(dot(t0, g0), -1.0, 1.0)) + std::acos(std::clamp(dot(tf, gf), -1.0, 1.0)));
    // tangent angle on the sphere -> dihedral angle of the segment plane
    out.beta_avg = std::atan2(std::sin(tau), std::cos(tau) * std::sin(0.5 * Gamma));
    const double bc = gamma > 0 ? critical_takeoff(gamma, out.n_pair) : 0.5 * pi;
    out.n = out.beta_avg <= bc ? out.n_pair : -out.n_pair - 1;
    return out;
}

// Label from the fractional part of the winding measure alone.
inline long long fractional_winding_label(double w)
{
    const auto np = static_cast<long long>(std::floor(w));
    return (w - static_cast<double>(np)) < 0.5 ? np : -np - 1;
}

}  // namespace s2paths
