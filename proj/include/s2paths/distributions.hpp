#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "propagators.hpp"
#include "quadrature.hpp"
#include "special.hpp"

namespace s2paths {

struct StateLabel {
    int l = 0;
    int m = 0;
};

struct RunConfig {
    StateLabel state;
    double T = 32.0 * pi;
    double kappa = 0;  // 0 selects the default: 4 for (0,0), 3 otherwise
    int n_alpha = 64;
    int n_thetaf = 32;
    int n_phif = 1;
    int n_phi0 = 64;
    double dLc = 0.001;
    double epsilon = 1e-3;

    double effective_kappa() const
    {
        if (kappa > 0) return kappa;
        return (state.l == 0 && state.m == 0) ? 4.0 : 3.0;
    }

    // L_c half-range kappa (l + 1/2)
    double lc_range() const { return effective_kappa() * (state.l + 0.5); }

    void validate() const
    {
        if (state.l < 0) throw std::invalid_argument("l must be >= 0");
        if (std::abs(state.m) > state.l) throw std::invalid_argument("|m| must be <= l");
        if (!(T > 0)) throw std::invalid_argument("T must be positive");
        if (kappa < 0) throw std::invalid_argument("kappa must be positive");
        if (n_alpha < 2 || n_thetaf < 2 || n_phif < 1 || n_phi0 < 1)
            throw std::invalid_argument("grid counts too small (n_alpha, n_thetaf >= 2; n_phif, n_phi0 >= 1)");
        if (!(dLc > 0)) throw std::invalid_argument("dLc must be positive");
        if (!(epsilon >= 0 && epsilon <= 0.1)) throw std::invalid_argument("epsilon must lie in [0, 0.1]");
    }
};

struct DistributionCurve {
    std::vector<double> axis;
    std::vector<cplx> values;
    RunConfig config;
};

namespace detail {

inline double window_half_width(double T) { return 1.0 / std::sqrt(T); }

// e^{i(l+1/2)^2 T/2} / (sqrt2 pi i) * (1/(2 pi i T))^{1/2}
inline cplx window_prefactor(int l, double T)
{
    const double h = l + 0.5;
    return std::polar(1.0, 0.5 * h * h * T) / (std::sqrt(2.0) * pi * I) * std::sqrt(1.0 / (2.0 * pi * I * T));
}

// |sin(L'T)| (-1)^n times the alpha integral at gamma~ = -L'T
inline cplx lprime_kernel(double Lp, double T, const AlphaQuadrature& q)
{
    const double gt = -Lp * T;
    const auto d = decompose_extended(gt);
    return std::abs(std::sin(gt)) * parity(d.n) * alpha_integral(d.gamma, d.n, cplx(T, 0.0), q);
}

// Fourier coefficients of gamma~ -> Y_lm(rotate_to_global(gamma~, Phi0, thetaf, phif)).
// The map is a trigonometric polynomial of degree l in gamma~, so 2l+1 samples
// determine it exactly.
inline std::vector<cplx> angular_coefficients(int l, int m, double Phi0, double thetaf, double phif)
{
    const int N = 2 * l + 1;
    std::vector<cplx> samples(N);
    for (int j = 0; j < N; ++j) {
        const auto p = rotate_to_global(two_pi * j / N, Phi0, thetaf, phif);
        samples[j] = spherical_harmonic(l, m, p.theta, p.phi);
    }
    std::vector<cplx> a(N);
    for (int k = -l; k <= l; ++k) {
        cplx s = 0;
        for (int j = 0; j < N; ++j) s += samples[j] * std::polar(1.0, -two_pi * k * j / N);
        a[k + l] = s / static_cast<double>(N);
    }
    return a;
}

inline cplx eval_trig(const std::vector<cplx>& a, int l, double gt)
{
    cplx s = 0;
    for (int k = -l; k <= l; ++k) s += a[k + l] * std::polar(1.0, k * gt);
    return s;
}

}  // namespace detail

// Window moments D_k(L_c) = sum over L' nodes of dL' kernel(L') e^{ik gamma~}, k = -l..l.
// These carry the whole L'-dependence of Delta J; the angular dependence enters
// through angular_coefficients.
inline std::vector<cplx> window_moments(double Lc, int l, const RunConfig& cfg)
{
    const double w = detail::window_half_width(cfg.T);
    const int N = lprime_interval_count(cfg.T, Lc);
    const MidpointGrid g{Lc - w, Lc + w, N};
    const AlphaQuadrature q{cfg.n_alpha, AlphaRule::midpoint_edge};
    std::vector<cplx> D(2 * l + 1, 0.0);
    std::vector<cplx> zk(2 * l + 1);
    for (int i = 1; i <= N; ++i) {
        const double Lp = g.node(i);
        const double gt = -Lp * cfg.T;
        const cplx kern = detail::lprime_kernel(Lp, cfg.T, q);
        const cplx z = std::polar(1.0, gt);
        zk[l] = 1.0;
        for (int k = 1; k <= l; ++k) {
            zk[l + k] = zk[l + k - 1] * z;
            zk[l - k] = std::conj(zk[l + k]);
        }
        for (int k = 0; k < 2 * l + 1; ++k) D[k] += kern * zk[k];
    }
    for (auto& d : D) d *= g.step();
    return D;
}

// Direct evaluation: every L' node rotates, evaluates Y_lm and the alpha integral.
inline cplx delta_J(double Lc, double Phi0, double thetaf, double phif, const RunConfig& cfg)
{
    const int l = cfg.state.l, m = cfg.state.m;
    const double w = detail::window_half_width(cfg.T);
    const MidpointGrid g{Lc - w, Lc + w, lprime_interval_count(cfg.T, Lc)};
    const AlphaQuadrature q{cfg.n_alpha, AlphaRule::midpoint_edge};
    const cplx integral = midpoint_integrate(
        [&](double Lp) {
            const double gt = -Lp * cfg.T;
            const auto p = rotate_to_global(gt, Phi0, thetaf, phif);
            return detail::lprime_kernel(Lp, cfg.T, q) * spherical_harmonic(l, m, p.theta, p.phi);
        },
        g);
    return detail::window_prefactor(l, cfg.T) * integral;
}

// Same quantity assembled from window moments and angular coefficients.
inline cplx delta_J_factored(double Lc, double Phi0, double thetaf, double phif, const RunConfig& cfg)
{
    const int l = cfg.state.l;
    const auto D = window_moments(Lc, l, cfg);
    const auto a = detail::angular_coefficients(l, cfg.state.m, Phi0, thetaf, phif);
    cplx s = 0;
    for (int k = 0; k < 2 * l + 1; ++k) s += a[k] * D[k];
    return detail::window_prefactor(l, cfg.T) * s;
}

// Midpoints of [-R, R] with step dLc, split at zero. Ascending.
inline std::vector<double> default_lc_grid(const RunConfig& cfg)
{
    const auto nh = static_cast<long long>(std::llround(cfg.lc_range() / cfg.dLc));
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(2 * nh));
    for (long long i = nh; i >= 1; --i) g.push_back(-(static_cast<double>(i) - 0.5) * cfg.dLc);
    for (long long i = 1; i <= nh; ++i) g.push_back((static_cast<double>(i) - 0.5) * cfg.dLc);
    return g;
}

inline std::vector<std::vector<cplx>> window_moment_table(const std::vector<double>& Lc, int l, const RunConfig& cfg,
                                                          int threads = 1)
{
    std::vector<std::vector<cplx>> out(Lc.size());
    parallel_for(Lc.size(), threads, [&](std::size_t i) { out[i] = window_moments(Lc[i], l, cfg); });
    return out;
}

// Angular weights for P1: sum over Phi0, thetaf, phif of sin(thetaf) conj(Y(f)) a_k.
inline std::vector<cplx> p1_angular_weights(const RunConfig& cfg)
{
    const int l = cfg.state.l, m = cfg.state.m;
    const MidpointGrid gP{0.0, pi, cfg.n_phi0}, gt{0.0, pi, cfg.n_thetaf}, gp{0.0, two_pi, cfg.n_phif};
    std::vector<cplx> H(2 * l + 1, 0.0);
    for (int ip = 1; ip <= cfg.n_phif; ++ip) {
        const double phif = gp.node(ip);
        for (int it = 1; it <= cfg.n_thetaf; ++it) {
            const double thf = gt.node(it);
            const cplx yc = std::conj(spherical_harmonic(l, m, thf, phif)) * std::sin(thf);
            for (int iP = 1; iP <= cfg.n_phi0; ++iP) {
                const auto a = detail::angular_coefficients(l, m, gP.node(iP), thf, phif);
                for (int k = 0; k < 2 * l + 1; ++k) H[k] += yc * a[k];
            }
        }
    }
    const double vol = gP.step() * gt.step() * gp.step();
    for (auto& h : H) h *= vol;
    return H;
}

inline cplx contract(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    cplx s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

inline DistributionCurve p1_distribution(const RunConfig& cfg, const std::vector<double>& Lc_grid, int threads = 1)
{
    cfg.validate();
    const int l = cfg.state.l;
    const auto H = p1_angular_weights(cfg);
    const auto D = window_moment_table(Lc_grid, l, cfg, threads);
    const cplx pref = detail::window_prefactor(l, cfg.T) / (2.0 * detail::window_half_width(cfg.T));
    DistributionCurve c;
    c.config = cfg;
    c.axis = Lc_grid;
    c.values.reserve(Lc_grid.size());
    for (std::size_t i = 0; i < Lc_grid.size(); ++i) c.values.push_back(pref * contract(H, D[i]));
    return c;
}

inline DistributionCurve p1_distribution(const RunConfig& cfg, int threads = 1)
{
    return p1_distribution(cfg, default_lc_grid(cfg), threads);
}

// theta_f kernel sin(thetaf) / sqrt(cos^2 theta_g - cos^2 thetaf): node positions and
// weights over [theta_g, pi - theta_g], boundary intervals from the edge estimator.
struct ThetafRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline ThetafRule thetaf_rule(double theta_g, int count)
{
    ThetafRule r;
    const double width = pi - 2.0 * theta_g;
    const double d = width / count;
    const double cg = std::cos(theta_g);
    for (int j = 1; j <= count; ++j) {
        const double tf = theta_g + (j - 0.5) * d;
        double wgt;
        if (j == 1) {
            wgt = thetaf_edge_estimate(theta_g, d, EdgeSide::lower);
        } else if (j == count) {
            wgt = thetaf_edge_estimate(theta_g, d, EdgeSide::upper);
        } else {
            const double cf = std::cos(tf);
            wgt = d * std::sin(tf) / std::sqrt((cg - cf) * (cg + cf));
        }
        r.nodes.push_back(tf);
        r.weights.push_back(wgt);
    }
    return r;
}

// Angular weights Q_k(theta_Lc) of the bivariate distribution.
inline std::vector<cplx> bivariate_angular_weights(double theta_Lc, const RunConfig& cfg)
{
    const int l = cfg.state.l, m = cfg.state.m;
    const double theta_g = 0.5 * pi - theta_Lc;
    const auto rule = thetaf_rule(theta_g, cfg.n_thetaf);
    const MidpointGrid gp{0.0, two_pi, cfg.n_phif};
    std::vector<cplx> Q(2 * l + 1, 0.0);
    for (int ip = 1; ip <= cfg.n_phif; ++ip) {
        const double phif = gp.node(ip);
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const double tf = rule.nodes[j];
            const double P0 = tilt_to_phi0(theta_g, tf);
            const cplx yc = std::conj(spherical_harmonic(l, m, tf, phif)) * rule.weights[j];
            const auto a1 = detail::angular_coefficients(l, m, P0, tf, phif);
            const auto a2 = detail::angular_coefficients(l, m, pi - P0, tf, phif);
            for (int k = 0; k < 2 * l + 1; ++k) Q[k] += yc * (a1[k] + a2[k]);
        }
    }
    for (auto& q : Q) q *= gp.step();
    return Q;
}

inline cplx bivariate_p(double Lc, double theta_Lc, const RunConfig& cfg)
{
    cfg.validate();
    const int l = cfg.state.l;
    const auto Q = bivariate_angular_weights(theta_Lc, cfg);
    const auto D = window_moments(Lc, l, cfg);
    return detail::window_prefactor(l, cfg.T) / (2.0 * detail::window_half_width(cfg.T)) * contract(Q, D);
}

inline std::vector<double> default_quadrant_grid(const RunConfig& cfg)
{
    std::vector<double> g;
    const double h = 0.5 * pi / cfg.n_phi0;
    for (int i = 1; i <= cfg.n_phi0; ++i) g.push_back((i - 0.5) * h);
    return g;
}

// Integrated window moments over L_c > 0 and L_c < 0 for every prefix length,
// so that any kappa up to the table range is a lookup.
struct MomentPrefix {
    double dLc = 0;
    int l = 0;
    std::vector<std::vector<cplx>> plus;   // plus[N][k]: sum over i <= N of D at +(i-1/2)dLc, times dLc
    std::vector<std::vector<cplx>> minus;  // same for -(i-1/2)dLc

    std::size_t max_count() const { return plus.size() - 1; }
};

inline MomentPrefix moment_prefix(int l, const RunConfig& cfg, double max_range, int threads = 1)
{
    const auto nh = static_cast<std::size_t>(std::llround(max_range / cfg.dLc));
    std::vector<double> Lc;
    Lc.reserve(2 * nh);
    for (std::size_t i = 1; i <= nh; ++i) Lc.push_back((static_cast<double>(i) - 0.5) * cfg.dLc);
    for (std::size_t i = 1; i <= nh; ++i) Lc.push_back(-(static_cast<double>(i) - 0.5) * cfg.dLc);
    const auto D = window_moment_table(Lc, l, cfg, threads);
    MomentPrefix p;
    p.dLc = cfg.dLc;
    p.l = l;
    const std::size_t K = 2 * static_cast<std::size_t>(l) + 1;
    p.plus.assign(nh + 1, std::vector<cplx>(K, 0.0));
    p.minus.assign(nh + 1, std::vector<cplx>(K, 0.0));
    for (std::size_t i = 1; i <= nh; ++i) {
        for (std::size_t k = 0; k < K; ++k) {
            p.plus[i][k] = p.plus[i - 1][k] + D[i - 1][k] * cfg.dLc;
            p.minus[i][k] = p.minus[i - 1][k] + D[nh + i - 1][k] * cfg.dLc;
        }
    }
    return p;
}

// Bivariate angular weights on the quadrant grid. They do not depend on the
// L_c range, so one table serves every kappa.
struct QuadrantWeights {
    std::vector<double> grid;
    std::vector<std::vector<cplx>> Q;
};

inline QuadrantWeights quadrant_weights(const RunConfig& cfg, const std::vector<double>& quadrant_grid, int threads = 1)
{
    QuadrantWeights w;
    w.grid = quadrant_grid;
    w.Q.resize(quadrant_grid.size());
    parallel_for(quadrant_grid.size(), threads,
                 [&](std::size_t i) { w.Q[i] = bivariate_angular_weights(quadrant_grid[i], cfg); });
    return w;
}

inline std::size_t lc_count(const RunConfig& cfg, double kappa)
{
    return static_cast<std::size_t>(std::llround(kappa * (cfg.state.l + 0.5) / cfg.dLc));
}

// P2 on [0, pi]: quadrant grid theta_i carries P2+, pi - theta_i carries P2-.
// N is the number of L_c nodes on each side.
inline DistributionCurve p2_assemble(const RunConfig& cfg, const MomentPrefix& pre, const QuadrantWeights& w,
                                     std::size_t N)
{
    if (N > pre.max_count()) throw std::invalid_argument("moment table shorter than the requested L_c range");
    const cplx pref = detail::window_prefactor(cfg.state.l, cfg.T) / (2.0 * detail::window_half_width(cfg.T));
    DistributionCurve c;
    c.config = cfg;
    const std::size_t n = w.grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        c.axis.push_back(w.grid[i]);
        c.values.push_back(pref * contract(w.Q[i], pre.plus[N]));
    }
    for (std::size_t i = n; i-- > 0;) {
        c.axis.push_back(pi - w.grid[i]);
        c.values.push_back(pref * contract(w.Q[i], pre.minus[N]));
    }
    return c;
}

inline DistributionCurve p2_from_prefix(const RunConfig& cfg, const MomentPrefix& pre,
                                        const std::vector<double>& quadrant_grid, int threads = 1)
{
    return p2_assemble(cfg, pre, quadrant_weights(cfg, quadrant_grid, threads), lc_count(cfg, cfg.effective_kappa()));
}

inline DistributionCurve p2_distribution(const RunConfig& cfg, const std::vector<double>& quadrant_grid,
                                         int threads = 1)
{
    cfg.validate();
    const auto pre = moment_prefix(cfg.state.l, cfg, cfg.lc_range(), threads);
    return p2_from_prefix(cfg, pre, quadrant_grid, threads);
}

inline DistributionCurve p2_distribution(const RunConfig& cfg, int threads = 1)
{
    return p2_distribution(cfg, default_quadrant_grid(cfg), threads);
}

// Midpoint-rule value of the integral of sin(theta) P2 over [0, pi] for a
// curve on the default quadrant grid.
inline cplx p2_normalization(const DistributionCurve& c)
{
    const double h = pi / static_cast<double>(c.axis.size());
    cplx s = 0;
    for (std::size_t i = 0; i < c.axis.size(); ++i) s += std::sin(c.axis[i]) * c.values[i];
    return s * h;
}

inline cplx p1_normalization(const DistributionCurve& c)
{
    cplx s = 0;
    for (const auto& v : c.values) s += v;
    return s * c.config.dLc;
}

// Mean |Im| over mean |Re| of the samples.
inline double imaginary_ratio(const DistributionCurve& c)
{
    double re = 0, im = 0;
    for (const auto& v : c.values) {
        re += std::abs(v.real());
        im += std::abs(v.imag());
    }
    return im / re;
}

struct SumRuleRow {
    double theta = 0;
    cplx sum;
    double relative_deviation = 0;
};

struct SumRuleResult {
    std::vector<DistributionCurve> curves;  // m = -l..l
    std::vector<SumRuleRow> rows;
    double max_relative_deviation = 0;
};

inline SumRuleResult sum_rule(int l, const RunConfig& base, const std::vector<double>& quadrant_grid, int threads = 1)
{
    RunConfig cfg = base;
    cfg.state = {l, 0};
    cfg.validate();
    const auto pre = moment_prefix(l, cfg, cfg.lc_range(), threads);
    SumRuleResult out;
    for (int m = -l; m <= l; ++m) {
        RunConfig c = cfg;
        c.state = {l, m};
        out.curves.push_back(p2_from_prefix(c, pre, quadrant_grid, threads));
    }
    const auto& ax = out.curves.front().axis;
    for (std::size_t i = 0; i < ax.size(); ++i) {
        SumRuleRow r;
        r.theta = ax[i];
        for (const auto& c : out.curves) r.sum += c.values[i];
        r.relative_deviation = std::abs(r.sum.real() - (l + 0.5)) / (l + 0.5);
        out.max_relative_deviation = std::max(out.max_relative_deviation, r.relative_deviation);
        out.rows.push_back(r);
    }
    return out;
}

struct KappaScan {
    std::vector<double> kappas;
    std::vector<DistributionCurve> curves;
    DistributionCurve window_mean;  // average over kappa in [center - 2, center + 2]
    double center = 0;
};

// Curves for each requested kappa plus the kappa-window mean: the average
// over every L_c node count whose range lies in [center - 2, center + 2].
inline KappaScan kappa_scan(const StateLabel& state, const RunConfig& base, const std::vector<double>& kappa_list,
                            double center, int threads = 1)
{
    RunConfig cfg = base;
    cfg.state = state;
    cfg.validate();
    for (double k : kappa_list)
        if (!(k > 0)) throw std::invalid_argument("kappa values must be positive");
    if (!(center > 0)) throw std::invalid_argument("kappa window center must be positive");
    const double h = state.l + 0.5;
    double kmax = center + 2.0;
    for (double k : kappa_list) kmax = std::max(kmax, k);
    const auto pre = moment_prefix(state.l, cfg, kmax * h, threads);
    const auto w = quadrant_weights(cfg, default_quadrant_grid(cfg), threads);
    KappaScan out;
    out.center = center;
    out.kappas = kappa_list;
    for (double k : kappa_list) {
        RunConfig c = cfg;
        c.kappa = k;
        out.curves.push_back(p2_assemble(c, pre, w, lc_count(cfg, k)));
    }
    const std::size_t lo = std::max<std::size_t>(1, lc_count(cfg, std::max(0.0, center - 2.0)));
    const std::size_t hi = lc_count(cfg, center + 2.0);
    DistributionCurve mean;
    for (std::size_t N = lo; N <= hi; ++N) {
        const auto cur = p2_assemble(cfg, pre, w, N);
        if (mean.values.empty()) {
            mean = cur;
        } else {
            for (std::size_t i = 0; i < cur.values.size(); ++i) mean.values[i] += cur.values[i];
        }
    }
    for (auto& v : mean.values) v /= static_cast<double>(hi - lo + 1);
    mean.config = cfg;
    mean.config.kappa = center;
    out.window_mean = mean;
    return out;
}

inline cplx reconstruct_wavefunction(double thetaf, double phif, const RunConfig& cfg, int threads = 1)
{
    cfg.validate();
    const int l = cfg.state.l, m = cfg.state.m;
    const MidpointGrid gP{0.0, pi, cfg.n_phi0};
    std::vector<cplx> R(2 * l + 1, 0.0);
    for (int iP = 1; iP <= cfg.n_phi0; ++iP) {
        const auto a = detail::angular_coefficients(l, m, gP.node(iP), thetaf, phif);
        for (int k = 0; k < 2 * l + 1; ++k) R[k] += a[k] * gP.step();
    }
    const auto pre = moment_prefix(l, cfg, cfg.lc_range(), threads);
    const auto N = pre.max_count();
    std::vector<cplx> S(2 * l + 1);
    for (int k = 0; k < 2 * l + 1; ++k) S[k] = pre.plus[N][k] + pre.minus[N][k];
    return detail::window_prefactor(l, cfg.T) / (2.0 * detail::window_half_width(cfg.T)) * contract(R, S);
}

}  // namespace s2paths
