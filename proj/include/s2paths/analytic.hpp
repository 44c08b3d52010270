#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "propagators.hpp"
#include "quadrature.hpp"
#include "special.hpp"

namespace s2paths {

// Generalized binomial through the Gamma function.
inline double binomial(double u, double w)
{
    return std::exp(std::lgamma(u + 1.0) - std::lgamma(w + 1.0) - std::lgamma(u - w + 1.0));
}

struct CosTerm {
    int k = 0;
    double coefficient = 0;
};

// P_l(cos t) = sum_k c_k cos(k t), k = l, l-2, ..., down to 0 or 1.
inline std::vector<CosTerm> legendre_cos_expansion(int l)
{
    if (l < 0) throw DomainError("legendre_cos_expansion needs l >= 0");
    std::vector<CosTerm> out;
    for (int k = l % 2; k <= l; k += 2) {
        const double c = (k == 0 ? 1.0 : 2.0) / std::pow(4.0, l) * binomial(l - k, 0.5 * (l - k)) *
                         binomial(l + k, 0.5 * (l + k));
        out.push_back({k, c});
    }
    return out;
}

inline double eval_cos_expansion(const std::vector<CosTerm>& terms, double t)
{
    double s = 0;
    for (const auto& c : terms) s += c.coefficient * std::cos(c.k * t);
    return s;
}

// Fourier coefficient of |sin x|^{1/2} exp(-i pi floor(x/pi)/2) on the
// harmonic exp(i nu x/2), nu = 4 mu - 1. Other harmonics vanish.
inline cplx fourier_coeff(int mu)
{
    if (mu < 0) throw DomainError("fourier_coeff needs mu >= 0");
    return -cplx(1.0, 1.0) * std::tgamma(mu - 0.5) / (4.0 * std::sqrt(pi) * std::tgamma(mu + 1.0));
}

struct ProjectionTerm {
    cplx coefficient;
    double frequency = 0;  // multiplies i T / 8
};

struct ProjectionResult {
    int l = 0;
    std::vector<ProjectionTerm> terms;  // ascending frequency; the leading term has frequency -1

    cplx evaluate(cplx Tc) const
    {
        cplx s = 0;
        for (const auto& t : terms) s += t.coefficient * std::exp(I * t.frequency * Tc / 8.0);
        return s;
    }

    const ProjectionTerm& leading() const
    {
        for (const auto& t : terms)
            if (t.frequency == -1.0) return t;
        throw ConsistencyError("projection has no e^{-iT/8} term");
    }
};

// Stationary-phase evaluation of the semiclassical projection onto P_l,
// terms with equal frequency merged.
inline ProjectionResult semiclassical_projection(int l)
{
    if (l < 0 || l > 12) throw DomainError("semiclassical_projection supports 0 <= l <= 12");
    std::map<long long, double> by_freq;  // 4 l(l+1) - 4 x^2 is an integer
    for (int k = l % 2; k <= l; k += 2) {
        const double ck = (k == 0 ? 1.0 : 2.0) / std::pow(4.0, l + 1) * binomial(l - k, 0.5 * (l - k)) *
                          binomial(l + k, 0.5 * (l + k));
        const double sign = ((l + k + 1) % 2 == 0) ? 1.0 : -1.0;
        for (int mu = 0; mu <= l; ++mu) {
            const double g = std::tgamma(mu - 0.5) / std::tgamma(mu + 1.0);
            // L_c = -x at the two stationary points; only L_c > 0 contributes
            for (int branch = 0; branch < 2; ++branch) {
                const double x = branch == 0 ? 2.0 * mu + k - 0.5 : 2.0 * mu - k - 0.5;
                const double Lc = -x;
                if (!(Lc > 0)) continue;
                const auto f = static_cast<long long>(std::llround(4.0 * l * (l + 1.0) - 4.0 * x * x));
                by_freq[f] += sign * ck * g * std::sqrt(Lc);
            }
        }
    }
    ProjectionResult r;
    r.l = l;
    for (const auto& [f, c] : by_freq) {
        if (c == 0.0) continue;
        r.terms.push_back({cplx(c, 0.0), static_cast<double>(f)});
    }
    return r;
}

inline double leading_magnitude(int l) { return std::tgamma(l + 1.5) / (std::sqrt(l + 0.5) * std::tgamma(l + 1.0)); }

// Direct quadrature of the semiclassical projection onto P_l,
// (1/(i Tc)) e^{i E_l Tc} int_0^inf |sin x|^{1/2} x^{1/2} P_l(cos x) e^{-i pi floor(x/pi)/2} e^{i x^2/2Tc} dx,
// with Tc = T(1 - i c/T). Each pi-interval is mapped through a cubic
// smoothstep so the square-root zeros at its ends become smooth.
inline cplx semiclassical_projection_numeric(int l, double T, double damping = 0.02, int base_nodes = 48)
{
    if (!(T > 0) || !(damping > 0)) throw DomainError("projection quadrature needs T > 0 and damping > 0");
    const double eps = damping / T;
    const cplx Tc = regularized_time(T, eps);
    const cplx q = I / (2.0 * Tc);
    // cut where the damping factor exp(-x^2 eps / 2T) drops below 1e-18
    const double x_max = std::sqrt(2.0 * T * 41.5 / eps);
    const auto intervals = static_cast<long long>(std::ceil(x_max / pi));
    cplx total = 0;
    for (long long j = 0; j < intervals; ++j) {
        const double a = pi * static_cast<double>(j);
        const double phase_span = (a + pi) * pi / T;
        const int N = base_nodes + static_cast<int>(std::ceil(6.0 * phase_span));
        const cplx maslov = std::polar(1.0, -0.5 * pi * static_cast<double>(j % 4));
        cplx part = 0;
        for (int i = 1; i <= N; ++i) {
            const double s = (i - 0.5) / N;
            const double u = s * s * (3.0 - 2.0 * s);
            const double du = 6.0 * s * (1.0 - s);
            const double x = a + pi * u;
            const double amp = std::sqrt(std::abs(std::sin(x)) * x) * legendre_p(l, std::cos(x));
            part += amp * std::exp(q * (x * x)) * (pi * du);
        }
        total += maslov * part / static_cast<double>(N);
    }
    return std::exp(I * sphere_energy(l) * Tc) * total / (I * Tc);
}

// Same series as poisson_antipodal, assembled as the bilateral sum over
// l in [-l_max - 1, l_max] with weight 1/4pi.
inline cplx antipodal_closed_form(double T, int l_max, double eps)
{
    const cplx Tc = regularized_time(T, eps);
    cplx sum = 0;
    for (int l = -l_max - 1; l <= l_max; ++l) {
        const double h = l + 0.5;
        const double sgn = (l % 2 == 0) ? 1.0 : -1.0;
        sum += sgn * h * std::exp(-I * (h * h) * Tc / 2.0);
    }
    return std::exp(I * Tc / 8.0) * sum / (4.0 * pi);
}

// m-sum of |Y_lm|^2 at any point, the degeneracy factor (2l+1)/4pi.
inline double degeneracy_sum(int l, double theta, double phi)
{
    double s = 0;
    for (int m = -l; m <= l; ++m) s += std::norm(spherical_harmonic(l, m, theta, phi));
    return s;
}

}  // namespace s2paths
