// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "s2paths/s2paths.hpp"

using namespace s2paths;

namespace {

int threads = 1;

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... a)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

RunConfig reduced(int l, int m)
{
    RunConfig c;
    c.state = {l, m};
    c.n_alpha = 32;
    c.n_thetaf = 16;
    return c;
}

// Re P1 averaged over a +-1/sqrt(T) window around each node.
std::vector<double> smoothed(const DistributionCurve& p)
{
    const double w = 1.0 / std::sqrt(p.config.T);
    const std::size_t n = p.values.size();
    std::vector<double> pre(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) pre[i + 1] = pre[i] + p.values[i].real();
    std::vector<double> out(n);
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (p.axis[lo] < p.axis[i] - w) ++lo;
        while (hi < n && p.axis[hi] <= p.axis[i] + w) ++hi;
        out[i] = (pre[hi] - pre[lo]) / static_cast<double>(hi - lo);
    }
    return out;
}

// 1. Smoothed P1 maximum on each side of zero; a side carries a primary peak
//    when its maximum reaches half the global one.
Verdict criterion1()
{
    const int states[5][2] = {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {3, 3}};
    bool ok = true;
    std::string d;
    for (const auto& s : states) {
        const auto p = p1_distribution(reduced(s[0], s[1]), threads);
        const auto sm = smoothed(p);
        double gmax = 0;
        for (double v : sm) gmax = std::max(gmax, v);
        const double target = s[0] + 0.5;
        int peaks = 0;
        d += fmt(" (%d,%d):", s[0], s[1]);
        for (int side : {-1, 1}) {
            double best = -1e300, at = 0;
            for (std::size_t i = 0; i < sm.size(); ++i)
                if (p.axis[i] * side > 0 && sm[i] > best) {
                    best = sm[i];
                    at = p.axis[i];
                }
            if (best < 0.5 * gmax) continue;
            ++peaks;
            const bool hit = std::abs(at - side * target) <= 0.1;
            ok = ok && hit;
            d += fmt(" %+.4f", at);
        }
        ok = ok && peaks > 0;
    }
    return {ok, "peaks within 0.1 of +-(l+1/2):" + d};
}

// 2. Normalizations at the default grids.
Verdict criterion2()
{
    const int states[5][2] = {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {3, 3}};
    double w1 = 0, w2 = 0;
    for (const auto& s : states) {
        RunConfig c;
        c.state = {s[0], s[1]};
        w1 = std::max(w1, std::abs(p1_normalization(p1_distribution(c, threads)).real() - 1.0));
        w2 = std::max(w2, std::abs(p2_normalization(p2_distribution(c, threads)).real() - 1.0));
    }
    return {w1 <= 0.02 && w2 <= 0.01, fmt("max |int P1 - 1| = %.5f (<= 0.02), max |int sin P2 - 1| = %.5f (<= 0.01)", w1, w2)};
}

Verdict criterion3()
{
    RunConfig c;
    const auto r = sum_rule(1, c, default_quadrant_grid(c), threads);
    return {r.max_relative_deviation <= 0.02, fmt("l = 1 max relative deviation %.5f (<= 0.02)", r.max_relative_deviation)};
}

double mean_ratio(double T)
{
    double s = 0;
    int n = 0;
    for (int l = 0; l <= 2; ++l)
        for (int m = 0; m <= l; ++m) {
            RunConfig c;
            c.state = {l, m};
            c.T = T;
            s += imaginary_ratio(p2_distribution(c, threads));
            ++n;
        }
    return s / n;
}

Verdict criterion4()
{
    const double a = mean_ratio(32.0 * pi), b = mean_ratio(128.0 * pi);
    return {a <= 0.05 && b < a, fmt("mean |Im|/|Re| over l <= 2, 0 <= m <= l: %.5f at 32pi (<= 0.05), %.5f at 128pi (must decrease)", a, b)};
}

Verdict criterion5()
{
    struct Row {
        double b;
        long long n;
        double len;
    };
    const Row rows[] = {{0.25, 0, 0.608}, {0.75, -1, 1.392}, {0.1, 1, 2.523},  {0.3, 1, 2.702},  {0.7, -2, 3.298},
                        {0.9, -2, 3.477}, {0.1, 2, 4.524},   {0.3, 2, 4.705},  {0.7, -3, 5.295}, {0.9, -3, 5.476}};
    double worst_len = 0;
    int rounded = 0;
    for (const auto& r : rows) {
        const double v = geometry_from({0.5 * pi, r.n, r.b * pi}).total_length / pi;
        worst_len = std::max(worst_len, std::abs(v - r.len));
        if (std::lround(v * 1000.0) == std::lround(r.len * 1000.0)) ++rounded;
    }

    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> gd(0.05, pi - 0.05), bd(0.02, 0.98);
    std::uniform_int_distribution<int> nd(-4, 3);
    int floor_ok = 0;
    for (int i = 0; i < 100; ++i) {
        const long long n = nd(rng);
        const double beta = n >= 0 ? bd(rng) * 0.5 * pi : (0.5 + 0.5 * bd(rng)) * pi;
        const auto c = sample_curve({gd(rng), n, beta}, 200);
        if (static_cast<long long>(std::floor(winding_measure(c))) == pair_index(n)) ++floor_ok;
    }

    double worst_res = 0;
    for (int i = 1; i <= 40; ++i) {
        const double g = pi * i / 40.0;
        for (long long np = 0; np <= 4; ++np)
            worst_res = std::max(worst_res, std::abs(critical_residual(g, np, critical_takeoff(g, np))));
    }
    return {rounded == 10 && floor_ok == 100 && worst_res < 1e-10,
            fmt("reference lengths %d/10 equal at 3 decimals (max |dev| %.2e pi), floor(w) = n' on %d/100, beta_c residual %.1e (< 1e-10)",
                rounded, worst_len, floor_ok, worst_res)};
}

Verdict criterion6()
{
    const double tol = 1e-10;
    auto at = [](const ProjectionResult& r, double f) -> double {
        for (const auto& t : r.terms)
            if (t.frequency == f) return t.coefficient.real();
        return NAN;
    };
    const std::vector<std::pair<double, double>> checks{
        {at(semiclassical_projection(0), -1), std::sqrt(pi / 2.0)},
        {at(semiclassical_projection(1), -1), std::sqrt(6.0 * pi) / 4.0},
        {at(semiclassical_projection(2), -1), 3.0 * std::sqrt(10.0 * pi) / 16.0},
        {at(semiclassical_projection(2), 23), std::sqrt(2.0 * pi) / 32.0},
        {at(semiclassical_projection(3), -1), 5.0 * std::sqrt(14.0 * pi) / 32.0},
        {at(semiclassical_projection(3), 39), std::sqrt(6.0 * pi) / 64.0},
        {at(semiclassical_projection(4), -1), 105.0 * std::sqrt(2.0 * pi) / 256.0},
        {at(semiclassical_projection(4), 55), 5.0 * std::sqrt(10.0 * pi) / 512.0},
        {at(semiclassical_projection(4), 79), 29.0 * std::sqrt(2.0 * pi) / 2048.0},
    };
    double w = 0;
    for (const auto& [a, b] : checks) w = std::max(w, std::isnan(a) ? INFINITY : std::abs(a - b));
    double wl = 0;
    for (int l = 0; l <= 12; ++l)
        wl = std::max(wl, std::abs(semiclassical_projection(l).leading().coefficient.real() - leading_magnitude(l)));
    const double l0 = leading_magnitude(0);
    const bool ok = w <= tol && wl <= tol && std::abs(l0 - 1.2533) < 5e-5;
    return {ok, fmt("closed forms max |dev| %.1e, leading magnitudes l <= 12 max |dev| %.1e (<= 1e-10), l = 0 value %.6f", w, wl, l0)};
}

Verdict criterion7()
{
    const double eps = 1e-3;
    const AlphaQuadrature q{4096, AlphaRule::sqrt_substitution};
    double w = 0;
    for (double T : {3.0, 10.0})
        for (double g : {0.5 * pi, pi}) {
            const cplx ex = exact_propagator(g, T, regularized_n_max(T, eps), q, eps);
            const cplx sp = sphere_spectral(g, T, 600, eps);
            w = std::max(w, std::abs(ex - sp) / std::abs(sp));
        }
    double wc = 0;
    for (double T : {3.0, 10.0})
        for (double d : {0.4, 1.9, pi}) {
            const cplx a = circle_propagator(0.0, d, T, 200, eps);
            const cplx b = circle_spectral(0.0, d, T, 400, eps);
            wc = std::max(wc, std::abs(a - b) / std::abs(b));
        }
    return {w <= 1e-4 && wc <= 1e-6, fmt("sphere winding vs spectral %.2e (<= 1e-4), circle %.2e (<= 1e-6)", w, wc)};
}

cplx edge_oracle(double g, double da, long long n, double T)
{
    auto f = [&](double u) {
        const double a = g + u + two_pi * static_cast<double>(n);
        return a * std::exp(I * (a * a) / (2.0 * T)) / std::sqrt(2.0 * std::sin(g + 0.5 * u) * std::sin(0.5 * u));
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    return {ts.integrate([&](double u) { return f(u).real(); }, 0.0, da),
            ts.integrate([&](double u) { return f(u).imag(); }, 0.0, da)};
}

// Grid: gamma >> dalpha for |n| <= 3, and gamma << dalpha at n = 0. The
// crossover band gamma ~ dalpha at n = 0 is reported but not gated.
Verdict criterion8()
{
    const double T = 32.0 * pi;
    double w = 0;
    for (long long n = -3; n <= 3; ++n)
        for (double g : {0.3, 1.0, 2.0, 3.0})
            for (double da : {1e-5, 1e-4, 1e-3}) {
                const cplx o = edge_oracle(g, da, n, T);
                w = std::max(w, std::abs(alpha_edge_estimate(g, da, n, T) - o) / std::abs(o));
            }
    double ws = 0;
    for (double da : {1e-4, 1e-3, 1e-2, 5e-2})
        for (double ratio : {1e-7, 1e-6, 1e-5, 1e-4}) {
            const double g = ratio * da;
            const cplx o = edge_oracle(g, da, 0, T);
            ws = std::max(ws, std::abs(alpha_edge_estimate(g, da, 0, T) - o) / std::abs(o));
        }
    double wx = 0;
    for (double ratio : {1e-2, 1e-1, 1.0, 10.0}) {
        const double da = 1e-2, g = ratio * da;
        const cplx o = edge_oracle(g, da, 0, T);
        wx = std::max(wx, std::abs(alpha_edge_estimate(g, da, 0, T) - o) / std::abs(o));
    }
    const double e64 = thetaf_edge_estimate_unshifted(0.0, 0.01), e65 = thetaf_edge_estimate(0.0, 0.01);
    const bool ok = w < 1e-3 && ws < 1e-3 && e64 == 0.0 && std::isfinite(e65) && e65 > 0.0;
    return {ok, fmt("gamma >> dalpha max rel %.2e, gamma << dalpha (n = 0) max rel %.2e (< 1e-3); crossover band %.2e (not gated); "
                    "theta_g = 0: unshifted estimate %.3g, shifted %.5f",
                    w, ws, wx, e64, e65)};
}

Verdict criterion9()
{
    const std::vector<double> ks{2.0, 3.0, 4.0, 5.0};
    auto amplitude = [&](int l, int m) {
        const auto s = kappa_scan({l, m}, reduced(l, m), ks, 3.5, threads);
        double a = 0;
        for (std::size_t i = 0; i < s.window_mean.axis.size(); ++i) {
            double lo = 1e300, hi = -1e300;
            for (const auto& c : s.curves) {
                lo = std::min(lo, c.values[i].real());
                hi = std::max(hi, c.values[i].real());
            }
            a = std::max(a, hi - lo);
        }
        return a;
    };
    const double a11 = amplitude(1, 1), a20 = amplitude(2, 0);
    const auto s = kappa_scan({0, 0}, reduced(0, 0), ks, 3.5, threads);
    double dev = 0;
    for (std::size_t j = 0; j < ks.size(); ++j) {
        if (static_cast<int>(ks[j]) % 2) continue;
        for (std::size_t i = 0; i < s.window_mean.axis.size(); ++i)
            dev = std::max(dev, std::abs(s.curves[j].values[i].real() - s.window_mean.values[i].real()) /
                                    std::abs(s.window_mean.values[i].real()));
    }
    return {a11 > 10.0 * a20 && dev <= 0.02,
            fmt("(1,1) amplitude %.4f vs 10 x (2,0) amplitude %.4f; (0,0) even-kappa max deviation from window mean %.4f (<= 0.02)",
                a11, 10.0 * a20, dev)};
}

Verdict criterion10()
{
    double we = 0, wz = 0, wh = 0;
    for (auto [l, m] : {std::pair{1, 1}, {2, 1}, {2, 2}, {3, 1}, {3, 2}, {4, 3}, {6, 5}}) {
        const double e0 = l * (l + 1.0) / 2.0;
        for (const auto& p : pt_path({l, m, 7, 400})) {
            we = std::max(we, std::abs(pt_energy(p, m) - e0) / e0);
            wz = std::max(wz, std::abs(std::sin(p.theta) * p.phi_dot - m) / std::abs(m));
        }
        // the path reaches the opposite turning point after pi / sqrt(l(l+1))
        const double hp = pi / std::sqrt(l * (l + 1.0));
        wh = std::max(wh, std::abs(half_period(l) - hp));
        const auto p = pt_state(hp, l, m);
        wh = std::max(wh, std::abs(p.theta - (pi - turning_angle(l, m))));
        wh = std::max(wh, std::abs(p.theta_dot));
    }
    return {we <= 1e-10 && wz <= 1e-10 && wh <= 1e-10,
            fmt("energy rel %.1e, L_z rel %.1e (<= 1e-10), half-period mismatch %.1e", we, wz, wh)};
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

Verdict criterion11()
{
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / "s2paths_acceptance";
    struct Job {
        std::vector<std::string> args;
        std::string file;
    };
    std::vector<Job> jobs;
    for (auto [l, m] : {std::pair{0, 0}, {1, 0}, {1, 1}, {2, 1}, {3, 3}})
        jobs.push_back({{"p1", "--l", std::to_string(l), "--m", std::to_string(m), "--n-alpha", "32", "--n-thetaf", "16"},
                        "p1.csv"});
    jobs.push_back({{"elastica", "--gamma", "1.5707963267948966", "--n", "-2", "--beta", "2.199114857512855"}, "elastica.csv"});
    jobs.push_back({{"elastica", "--gamma", "1.5707963267948966", "--n", "2", "--beta", "0.3141592653589793"}, "elastica.csv"});
    int same = 0;
    std::ostringstream sink;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        std::string ref;
        bool ok = true;
        for (const char* t : {"1", "4", "8"}) {
            const fs::path dir = root / (std::to_string(j) + "_" + t);
            fs::remove_all(dir);
            auto args = jobs[j].args;
            for (const char* a : {"--threads", t, "--out"}) args.push_back(a);
            args.push_back(dir.string());
            if (cli::run(args, sink, sink) != 0) {
                ok = false;
                break;
            }
            const auto s = slurp(dir / jobs[j].file);
            if (ref.empty()) ref = s;
            ok = ok && !s.empty() && s == ref;
        }
        if (ok) ++same;
    }
    fs::remove_all(root);
    return {same == static_cast<int>(jobs.size()),
            fmt("%d/%zu datasets byte-identical at 1, 4, 8 workers", same, jobs.size())};
}

}  // namespace

int main()
{
    threads = hardware_threads();
    const std::vector<std::function<Verdict()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                         criterion5, criterion6, criterion7, criterion8,
                                                         criterion9, criterion10, criterion11};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i]();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2zu %s  %s  [%.1fs]\n", i + 1, v.pass ? "PASS" : "FAIL", v.detail.c_str(), sec);
        std::fflush(stdout);
        if (!v.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
