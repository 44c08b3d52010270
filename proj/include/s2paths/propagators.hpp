#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "quadrature.hpp"
#include "special.hpp"

namespace s2paths {

enum class AlphaRule {
    midpoint_edge,    // midpoint grid in alpha, estimator on the first interval
    sqrt_substitution  // alpha = gamma + (pi - gamma) s^2, midpoint grid in s
};

struct AlphaQuadrature {
    int intervals = 64;
    AlphaRule rule = AlphaRule::midpoint_edge;
};

inline int default_n_max(double T) { return T <= 10.0 ? 8 : static_cast<int>(std::ceil(2.0 + T / 2.0)); }

// Winding cutoff at which the eps-damping exp(-a^2 eps / 2T) of the
// remaining terms is below e^{-32}.
inline int regularized_n_max(double T, double eps)
{
    if (!(eps > 0)) throw DomainError("regularized_n_max needs eps > 0");
    return static_cast<int>(std::ceil(std::sqrt(64.0 * T / eps) / two_pi)) + 1;
}

// 0, -1, 1, -2, 2, ..., -n_max, n_max
inline std::vector<long long> winding_order(int n_max)
{
    std::vector<long long> out{0};
    for (long long k = 1; k <= n_max; ++k) {
        out.push_back(-k);
        out.push_back(k);
    }
    return out;
}

// Integral over alpha in [gamma, pi] of a_n exp(i a_n^2 / 2Tc) / sqrt(cos gamma - cos alpha),
// a_n = alpha + 2 pi n. Zero when gamma = pi.
inline cplx alpha_integral(double gamma, long long n, cplx Tc, const AlphaQuadrature& q = {})
{
    if (gamma >= pi) return 0.0;
    const double L = pi - gamma;
    const double shift = two_pi * static_cast<double>(n);
    const int N = q.intervals;
    cplx sum = 0;
    if (q.rule == AlphaRule::midpoint_edge) {
        const double da = L / N;
        {
            const double a = gamma + 0.25 * da + shift;
            sum += a * std::exp(I * (a * a) / (2.0 * Tc)) * 2.0 * std::sqrt(da) / std::sqrt(std::sin(gamma + 0.125 * da));
        }
        cplx inner = 0;
        for (int i = 2; i <= N; ++i) {
            const double alpha = gamma + (i - 0.5) * da;
            const double a = alpha + shift;
            const double den = 2.0 * std::sin(0.5 * (alpha + gamma)) * std::sin(0.5 * (alpha - gamma));
            inner += a * std::exp(I * (a * a) / (2.0 * Tc)) / std::sqrt(den);
        }
        sum += inner * da;
    } else {
        const double ds = 1.0 / N;
        for (int i = 1; i <= N; ++i) {
            const double s = (i - 0.5) * ds;
            const double u = L * s * s;
            const double alpha = gamma + u;
            const double a = alpha + shift;
            const double den = 2.0 * std::sin(0.5 * (alpha + gamma)) * std::sin(0.5 * u);
            sum += a * std::exp(I * (a * a) / (2.0 * Tc)) * (2.0 * L * s / std::sqrt(den));
        }
        sum *= ds;
    }
    return sum;
}

inline double parity(long long n) { return (n % 2 == 0) ? 1.0 : -1.0; }

inline cplx exact_term(double gamma, double T, long long n, const AlphaQuadrature& q = {}, double eps = 0)
{
    const cplx Tc = regularized_time(T, eps);
    return parity(n) * std::exp(I * Tc / 8.0) * alpha_integral(gamma, n, Tc, q);
}

// gamma -> pi limit of exact_term: the alpha range shrinks while the
// inverse-square-root weight integrates to pi/sqrt(2).
inline cplx antipodal_term(double T, long long n, double eps = 0)
{
    const cplx Tc = regularized_time(T, eps);
    const double a = pi + two_pi * static_cast<double>(n);
    return parity(n) * std::exp(I * Tc / 8.0) * (pi / std::sqrt(2.0)) * a * std::exp(I * (a * a) / (2.0 * Tc));
}

inline cplx exact_prefactor(double T, double eps = 0)
{
    const cplx z = 1.0 / (2.0 * pi * I * regularized_time(T, eps));
    return std::sqrt(2.0) * std::pow(z, 1.5);
}

inline cplx exact_propagator(double gamma, double T, int n_max, const AlphaQuadrature& q = {}, double eps = 0)
{
    cplx sum = 0;
    for (long long n : winding_order(n_max))
        sum += gamma >= pi ? antipodal_term(T, n, eps) : exact_term(gamma, T, n, q, eps);
    return exact_prefactor(T, eps) * sum;
}

inline cplx semiclassical_term(double gamma, double T, long long n, double eps = 0)
{
    const double gn = gamma + two_pi * static_cast<double>(n);
    const double s = std::sin(gn);
    double amp = 1.0;
    if (gn != 0.0) {
        if (std::abs(s) < 1e-300 || std::abs(s) < 1e-15 * std::abs(gn))
            throw DivergenceError("semiclassical prefactor diverges at a nonzero multiple of pi");
        amp = std::sqrt(std::abs(gn / s));
    }
    const double nu = static_cast<double>(maslov_index(gn));
    return amp * std::polar(1.0, -0.5 * pi * nu) * free_phase(gn, regularized_time(T, eps));
}

inline cplx semiclassical_prefactor(double T, double eps = 0)
{
    return 1.0 / (2.0 * pi * I * regularized_time(T, eps));
}

inline cplx semiclassical_propagator(double gamma, double T, int n_max, double eps = 0)
{
    cplx sum = 0;
    for (long long n : winding_order(n_max)) sum += semiclassical_term(gamma, T, n, eps);
    return semiclassical_prefactor(T, eps) * sum;
}

inline cplx circle_propagator(double phi0, double phif, double T, int n_max, double eps = 0)
{
    const cplx Tc = regularized_time(T, eps);
    const double d = phif - phi0;
    cplx sum = 0;
    for (long long n : winding_order(n_max)) sum += free_phase(d + two_pi * static_cast<double>(n), Tc);
    return std::sqrt(1.0 / (2.0 * pi * I * Tc)) * sum;
}

inline cplx circle_spectral(double phi0, double phif, double T, int l_max, double eps)
{
    const cplx Tc = regularized_time(T, eps);
    const double d = phif - phi0;
    cplx sum = 0;
    for (long long l : winding_order(l_max)) {
        const double ld = static_cast<double>(l);
        sum += std::polar(1.0, ld * d) * std::exp(-I * (ld * ld) * Tc / 2.0);
    }
    return sum / two_pi;
}

inline cplx poisson_antipodal(double T, int l_max, double eps)
{
    const cplx Tc = regularized_time(T, eps);
    cplx sum = 0;
    for (int l = 0; l <= l_max; ++l) {
        const double h = l + 0.5;
        sum += parity(l) * h * std::exp(-I * (h * h) * Tc / 2.0);
    }
    return std::exp(I * Tc / 8.0) * sum / two_pi;
}

inline double sphere_energy(int l) { return 0.5 * l * (l + 1.0); }

inline cplx sphere_spectral(double gamma, double T, int l_max, double eps)
{
    const cplx Tc = regularized_time(T, eps);
    const auto p = legendre_table(l_max, std::cos(gamma));
    cplx sum = 0;
    for (int l = 0; l <= l_max; ++l)
        sum += (2.0 * l + 1.0) / (4.0 * pi) * p[l] * std::exp(-I * sphere_energy(l) * Tc);
    return sum;
}

struct PhaseRow {
    double gamma = 0;
    long long n = 0;
    double gamma_n = 0;  // gamma + 2 pi n
    cplx exact;          // prefactor times exact_term
    cplx semiclassical;  // prefactor times semiclassical_term
    double stripped_difference = 0;  // wrapped to (-pi, pi]
};

inline double wrap_phase(double x)
{
    double r = pos_mod(x + pi, two_pi) - pi;
    if (r == -pi) r = pi;
    return r;
}

// Per-term amplitudes of both propagators and their phase difference with
// the sign jumps of the exact form and the Maslov jumps removed.
inline std::vector<PhaseRow> phase_comparison_dataset(double T, const std::vector<double>& gamma_grid,
                                                      long long n_lo, long long n_hi,
                                                      const AlphaQuadrature& q = {})
{
    std::vector<PhaseRow> rows;
    const cplx pe = exact_prefactor(T), ps = semiclassical_prefactor(T);
    for (long long n = n_lo; n <= n_hi; ++n) {
        for (double g : gamma_grid) {
            PhaseRow r;
            r.gamma = g;
            r.n = n;
            r.gamma_n = g + two_pi * static_cast<double>(n);
            r.exact = pe * (g >= pi ? antipodal_term(T, n) : exact_term(g, T, n, q));
            const double s = std::sin(r.gamma_n);
            if (r.gamma_n != 0.0 && std::abs(s) < 1e-12) {
                r.semiclassical = cplx(NAN, NAN);
                r.stripped_difference = NAN;
            } else {
                r.semiclassical = ps * semiclassical_term(g, T, n);
                const double jump_ex = (parity(n) * (n >= 0 ? 1.0 : -1.0)) > 0 ? 0.0 : pi;
                const double jump_sc = -0.5 * pi * static_cast<double>(maslov_index(r.gamma_n));
                r.stripped_difference =
                    wrap_phase(std::arg(r.exact) - jump_ex - (std::arg(r.semiclassical) - jump_sc));
            }
            rows.push_back(r);
        }
    }
    return rows;
}

}  // namespace s2paths
