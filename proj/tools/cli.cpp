#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "s2paths/s2paths.hpp"

namespace s2paths::cli {

namespace {

namespace fs = std::filesystem;

struct ConfigFail : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class KeyType { real, integer, real_list, text };

struct Key {
    std::string name;
    KeyType type;
    std::string def;  // empty with required = true means no default
    bool required;
    std::string help;
};

struct Column {
    std::string name;
    std::string help;
};

struct OutputDoc {
    std::string file;
    std::vector<Column> columns;
};

struct Table {
    std::string file;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

using Values = std::map<std::string, std::string>;

struct Command {
    std::string name;
    std::string help;
    std::vector<Key> keys;
    std::vector<OutputDoc> outputs;
    std::function<std::vector<Table>(const Values&, int)> exec;
};

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& v)
{
    std::size_t pos = 0;
    double x;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigFail("value for '" + key + "' is not a number: " + v);
    }
    if (trim(v.substr(pos)) != "" || !std::isfinite(x)) throw ConfigFail("value for '" + key + "' is not a number: " + v);
    return x;
}

long long parse_integer(const std::string& key, const std::string& v)
{
    std::size_t pos = 0;
    long long x;
    try {
        x = std::stoll(v, &pos);
    } catch (const std::exception&) {
        throw ConfigFail("value for '" + key + "' is not an integer: " + v);
    }
    if (trim(v.substr(pos)) != "") throw ConfigFail("value for '" + key + "' is not an integer: " + v);
    return x;
}

std::vector<double> parse_list(const std::string& key, const std::string& v)
{
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_real(key, item));
    }
    return out;
}

struct Args {
    const Values& v;

    double real(const std::string& k) const { return parse_real(k, v.at(k)); }
    int integer(const std::string& k) const
    {
        const long long x = parse_integer(k, v.at(k));
        if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
            throw ConfigFail("value for '" + k + "' out of range");
        return static_cast<int>(x);
    }
    long long big(const std::string& k) const { return parse_integer(k, v.at(k)); }
    std::vector<double> list(const std::string& k) const { return parse_list(k, v.at(k)); }
    const std::string& text(const std::string& k) const { return v.at(k); }
};

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Key sets ---------------------------------------------------------------

std::vector<Key> run_keys(bool need_m)
{
    std::vector<Key> k{
        {"l", KeyType::integer, "", true, "orbital quantum number l >= 0"},
    };
    if (need_m) k.push_back({"m", KeyType::integer, "", true, "azimuthal quantum number, |m| <= l"});
    const std::vector<Key> rest{
        {"T", KeyType::real, fmt(32.0 * pi), false, "travel time (hbar = I = 1)"},
        {"kappa", KeyType::real, "0", false, "L_c half-range in units of l + 1/2; 0 selects 4 for (0,0), 3 otherwise"},
        {"n_alpha", KeyType::integer, "64", false, "alpha intervals"},
        {"n_thetaf", KeyType::integer, "32", false, "theta_f intervals"},
        {"n_phif", KeyType::integer, "1", false, "phi_f intervals"},
        {"n_phi0", KeyType::integer, "64", false, "Phi_0 intervals; also theta_Lc points per quadrant"},
        {"dLc", KeyType::real, "0.001", false, "L_c step"},
        {"epsilon", KeyType::real, "0.001", false, "time regularization, T -> T(1 - i epsilon), [0, 0.1]"},
    };
    k.insert(k.end(), rest.begin(), rest.end());
    return k;
}

RunConfig make_config(const Args& a, bool need_m)
{
    RunConfig c;
    c.state.l = a.integer("l");
    c.state.m = need_m ? a.integer("m") : 0;
    c.T = a.real("T");
    c.kappa = a.real("kappa");
    c.n_alpha = a.integer("n_alpha");
    c.n_thetaf = a.integer("n_thetaf");
    c.n_phif = a.integer("n_phif");
    c.n_phi0 = a.integer("n_phi0");
    c.dLc = a.real("dLc");
    c.epsilon = a.real("epsilon");
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigFail(e.what());
    }
    return c;
}

std::vector<double> complex_row(double x, cplx v) { return {x, v.real(), v.imag()}; }

std::string kappa_label(double k)
{
    std::string s = fmt(k);
    return "k" + s;
}

// Commands ---------------------------------------------------------------

Command cmd_propagator()
{
    Command c;
    c.name = "propagator";
    c.help = "exact, semiclassical and spectral S^2 propagators on a gamma grid, plus per-winding phase data";
    c.keys = {
        {"T", KeyType::real, "", true, "travel time"},
        {"epsilon", KeyType::real, "0.001", false, "time regularization"},
        {"n_gamma", KeyType::integer, "64", false, "midpoint gamma nodes on [0, pi]"},
        {"n_max", KeyType::integer, "0", false, "winding cutoff; 0 picks the cutoff where the epsilon damping reaches e^-32"},
        {"l_max", KeyType::integer, "0", false, "spectral cutoff; 0 picks one from T and epsilon"},
        {"alpha_intervals", KeyType::integer, "64", false, "alpha intervals"},
        {"alpha_rule", KeyType::text, "midpoint_edge", false, "midpoint_edge or sqrt_substitution"},
        {"phase_n_min", KeyType::integer, "-3", false, "lowest winding in phase.csv"},
        {"phase_n_max", KeyType::integer, "3", false, "highest winding in phase.csv"},
    };
    c.outputs = {
        {"propagator.csv",
         {{"gamma", "angular separation"},
          {"exact_re", "exact propagator, real part"},
          {"exact_im", "exact propagator, imaginary part"},
          {"semiclassical_re", "semiclassical propagator, real part"},
          {"semiclassical_im", "semiclassical propagator, imaginary part"},
          {"spectral_re", "Legendre-series propagator, real part"},
          {"spectral_im", "Legendre-series propagator, imaginary part"}}},
        {"phase.csv",
         {{"gamma", "angular separation"},
          {"n", "winding number"},
          {"gamma_n", "gamma + 2 pi n"},
          {"exact_re", "prefactor times exact winding term, real part (epsilon = 0)"},
          {"exact_im", "same, imaginary part"},
          {"semiclassical_re", "prefactor times semiclassical winding term, real part (epsilon = 0)"},
          {"semiclassical_im", "same, imaginary part"},
          {"phase_difference", "phase difference with sign and Maslov jumps removed, (-pi, pi]; NaN at sin(gamma_n) = 0"}}},
    };
    c.exec = [](const Values& v, int threads) {
        const Args a{v};
        const double T = a.real("T"), eps = a.real("epsilon");
        if (!(T > 0)) throw ConfigFail("T must be positive");
        if (!(eps > 0 && eps <= 0.1)) throw ConfigFail("epsilon must lie in (0, 0.1] for the propagator sums");
        const int ng = a.integer("n_gamma");
        if (ng < 1) throw ConfigFail("n_gamma must be positive");
        int nmax = a.integer("n_max");
        if (nmax < 0) throw ConfigFail("n_max must be >= 0");
        if (nmax == 0) nmax = regularized_n_max(T, eps);
        int lmax = a.integer("l_max");
        if (lmax < 0) throw ConfigFail("l_max must be >= 0");
        if (lmax == 0) lmax = static_cast<int>(std::ceil(std::sqrt(80.0 / (T * eps)))) + 8;
        AlphaQuadrature q;
        q.intervals = a.integer("alpha_intervals");
        if (q.intervals < 2) throw ConfigFail("alpha_intervals must be >= 2");
        const auto& rule = a.text("alpha_rule");
        if (rule == "midpoint_edge")
            q.rule = AlphaRule::midpoint_edge;
        else if (rule == "sqrt_substitution")
            q.rule = AlphaRule::sqrt_substitution;
        else
            throw ConfigFail("alpha_rule must be midpoint_edge or sqrt_substitution");
        const int n_lo = a.integer("phase_n_min"), n_hi = a.integer("phase_n_max");
        if (n_lo > n_hi) throw ConfigFail("phase_n_min > phase_n_max");

        const MidpointGrid g{0.0, pi, ng};
        std::vector<double> gam;
        for (int i = 1; i <= ng; ++i) gam.push_back(g.node(i));
        std::vector<std::vector<double>> rows(gam.size());
        parallel_for(gam.size(), threads, [&](std::size_t i) {
            const cplx ex = exact_propagator(gam[i], T, nmax, q, eps);
            const cplx sc = semiclassical_propagator(gam[i], T, nmax, eps);
            const cplx sp = sphere_spectral(gam[i], T, lmax, eps);
            rows[i] = {gam[i], ex.real(), ex.imag(), sc.real(), sc.imag(), sp.real(), sp.imag()};
        });
        Table t1{"propagator.csv", {}, rows};
        Table t2{"phase.csv", {}, {}};
        for (const auto& r : phase_comparison_dataset(T, gam, n_lo, n_hi, q))
            t2.rows.push_back({r.gamma, static_cast<double>(r.n), r.gamma_n, r.exact.real(), r.exact.imag(),
                               r.semiclassical.real(), r.semiclassical.imag(), r.stripped_difference});
        return std::vector<Table>{t1, t2};
    };
    return c;
}

Command cmd_p1()
{
    Command c;
    c.name = "p1";
    c.help = "path distribution over the characteristic angular momentum L_c";
    c.keys = run_keys(true);
    c.outputs = {
        {"p1.csv", {{"L_c", "characteristic angular momentum"}, {"re", "P1 real part"}, {"im", "P1 imaginary part"}}},
        {"p1_summary.csv",
         {{"normalization_re", "integral of P1 over L_c, real part"},
          {"normalization_im", "same, imaginary part"}}},
    };
    c.exec = [](const Values& v, int threads) {
        const auto cfg = make_config(Args{v}, true);
        const auto p = p1_distribution(cfg, threads);
        Table t{"p1.csv", {}, {}};
        for (std::size_t i = 0; i < p.axis.size(); ++i) t.rows.push_back(complex_row(p.axis[i], p.values[i]));
        const cplx n = p1_normalization(p);
        Table s{"p1_summary.csv", {}, {{n.real(), n.imag()}}};
        return std::vector<Table>{t, s};
    };
    return c;
}

Command cmd_p2()
{
    Command c;
    c.name = "p2";
    c.help = "path distribution over the tilt angle theta_Lc of the characteristic angular momentum";
    c.keys = run_keys(true);
    c.outputs = {
        {"p2.csv", {{"theta_Lc", "tilt angle in [0, pi]"}, {"re", "P2 real part"}, {"im", "P2 imaginary part"}}},
        {"p2_summary.csv",
         {{"normalization_re", "integral of sin(theta) P2, real part"},
          {"normalization_im", "same, imaginary part"},
          {"imaginary_ratio", "mean |Im P2| over mean |Re P2|"}}},
    };
    c.exec = [](const Values& v, int threads) {
        const auto cfg = make_config(Args{v}, true);
        const auto p = p2_distribution(cfg, threads);
        Table t{"p2.csv", {}, {}};
        for (std::size_t i = 0; i < p.axis.size(); ++i) t.rows.push_back(complex_row(p.axis[i], p.values[i]));
        const cplx n = p2_normalization(p);
        Table s{"p2_summary.csv", {}, {{n.real(), n.imag(), imaginary_ratio(p)}}};
        return std::vector<Table>{t, s};
    };
    return c;
}

Command cmd_bivariate()
{
    Command c;
    c.name = "bivariate";
    c.help = "bivariate distribution P(L_c, theta_Lc) at one L_c on the quadrant grid";
    c.keys = run_keys(true);
    c.keys.push_back({"Lc", KeyType::real, "", true, "characteristic angular momentum"});
    c.outputs = {
        {"bivariate.csv",
         {{"theta_Lc", "tilt angle in [0, pi/2]"}, {"re", "real part"}, {"im", "imaginary part"}}},
    };
    c.exec = [](const Values& v, int threads) {
        const Args a{v};
        const auto cfg = make_config(a, true);
        const double Lc = a.real("Lc");
        const auto grid = default_quadrant_grid(cfg);
        std::vector<cplx> val(grid.size());
        parallel_for(grid.size(), threads, [&](std::size_t i) { val[i] = bivariate_p(Lc, grid[i], cfg); });
        Table t{"bivariate.csv", {}, {}};
        for (std::size_t i = 0; i < grid.size(); ++i) t.rows.push_back(complex_row(grid[i], val[i]));
        return std::vector<Table>{t};
    };
    return c;
}

Command cmd_sum_rule()
{
    Command c;
    c.name = "sum-rule";
    c.help = "sum over m of P2 for one l, compared with l + 1/2";
    c.keys = run_keys(false);
    c.outputs = {
        {"sum_rule.csv",
         {{"theta_Lc", "tilt angle in [0, pi]"},
          {"m<m>_re, m<m>_im", "P2 for each m = -l..l (for example m-1_re), real and imaginary parts"},
          {"sum_re", "sum over m, real part"},
          {"sum_im", "sum over m, imaginary part"},
          {"relative_deviation", "|sum_re - (l + 1/2)| / (l + 1/2)"}}},
        {"sum_rule_summary.csv", {{"max_relative_deviation", "largest relative_deviation"}}},
    };
    c.exec = [](const Values& v, int threads) {
        const auto cfg = make_config(Args{v}, false);
        const int l = cfg.state.l;
        const auto r = sum_rule(l, cfg, default_quadrant_grid(cfg), threads);
        Table t{"sum_rule.csv", {"theta_Lc"}, {}};
        for (int m = -l; m <= l; ++m) {
            t.header.push_back("m" + std::to_string(m) + "_re");
            t.header.push_back("m" + std::to_string(m) + "_im");
        }
        for (const char* h : {"sum_re", "sum_im", "relative_deviation"}) t.header.push_back(h);
        for (std::size_t i = 0; i < r.rows.size(); ++i) {
            std::vector<double> row{r.rows[i].theta};
            for (const auto& cv : r.curves) {
                row.push_back(cv.values[i].real());
                row.push_back(cv.values[i].imag());
            }
            row.push_back(r.rows[i].sum.real());
            row.push_back(r.rows[i].sum.imag());
            row.push_back(r.rows[i].relative_deviation);
            t.rows.push_back(row);
        }
        Table s{"sum_rule_summary.csv", {}, {{r.max_relative_deviation}}};
        return std::vector<Table>{t, s};
    };
    return c;
}

Command cmd_kappa_scan()
{
    Command c;
    c.name = "kappa-scan";
    c.help = "P2 for several L_c ranges and the mean over a kappa window of +-2";
    c.keys = run_keys(true);
    c.keys.push_back({"kappas", KeyType::real_list, "2,3,4,5", false, "comma-separated kappa values"});
    c.keys.push_back({"center", KeyType::real, "3.5", false, "kappa window center"});
    c.outputs = {
        {"kappa_scan.csv",
         {{"theta_Lc", "tilt angle in [0, pi]"},
          {"k<kappa>_re, k<kappa>_im", "P2 at each requested kappa (for example k2_re)"},
          {"mean_re", "kappa-window mean, real part"},
          {"mean_im", "kappa-window mean, imaginary part"}}},
        {"kappa_summary.csv",
         {{"kappa", "kappa value; the window mean row carries the center value"},
          {"is_mean", "1 for the window mean row"},
          {"normalization_re", "integral of sin(theta) P2, real part"},
          {"normalization_im", "same, imaginary part"}}},
    };
    c.exec = [](const Values& v, int threads) {
        const Args a{v};
        const auto cfg = make_config(a, true);
        const auto ks = a.list("kappas");
        if (ks.empty()) throw ConfigFail("kappas must list at least one value");
        for (double k : ks)
            if (!(k > 0)) throw ConfigFail("kappa values must be positive");
        const double center = a.real("center");
        if (!(center > 0)) throw ConfigFail("center must be positive");
        const auto r = kappa_scan(cfg.state, cfg, ks, center, threads);
        Table t{"kappa_scan.csv", {"theta_Lc"}, {}};
        for (double k : ks) {
            t.header.push_back(kappa_label(k) + "_re");
            t.header.push_back(kappa_label(k) + "_im");
        }
        t.header.push_back("mean_re");
        t.header.push_back("mean_im");
        for (std::size_t i = 0; i < r.window_mean.axis.size(); ++i) {
            std::vector<double> row{r.window_mean.axis[i]};
            for (const auto& cv : r.curves) {
                row.push_back(cv.values[i].real());
                row.push_back(cv.values[i].imag());
            }
            row.push_back(r.window_mean.values[i].real());
            row.push_back(r.window_mean.values[i].imag());
            t.rows.push_back(row);
        }
        Table s{"kappa_summary.csv", {}, {}};
        for (std::size_t j = 0; j < ks.size(); ++j) {
            const cplx n = p2_normalization(r.curves[j]);
            s.rows.push_back({ks[j], 0.0, n.real(), n.imag()});
        }
        const cplx n = p2_normalization(r.window_mean);
        s.rows.push_back({center, 1.0, n.real(), n.imag()});
        return std::vector<Table>{t, s};
    };
    return c;
}

Command cmd_elastica()
{
    Command c;
    c.name = "elastica";
    c.help = "constant-curvature spherical curve for (gamma, n, beta)";
    c.keys = {
        {"gamma", KeyType::real, "", true, "endpoint separation in [0, pi]"},
        {"n", KeyType::integer, "", true, "winding number"},
        {"beta", KeyType::real, "", true, "take-off angle (segment-plane dihedral) in [0, pi]"},
        {"points_per_segment", KeyType::integer, "200", false, "samples per circular segment"},
        {"tolerance", KeyType::real, "1e-4", false, "slack on the beta vs beta_c side condition"},
    };
    c.outputs = {
        {"elastica.csv",
         {{"x", "unit vector x"}, {"y", "unit vector y"}, {"z", "unit vector z"}, {"segment_index", "segment 0..2n'"}}},
        {"elastica_summary.csv",
         {{"n_pair", "pairwise winding n'"},
          {"n_torsion", "number of torsion points"},
          {"segment_angle", "Gamma"},
          {"radius", "rho"},
          {"internal_angle", "nu of one segment"},
          {"total_length", "(n_torsion + 1) nu"},
          {"total_length_over_pi", "total_length / pi"},
          {"critical_takeoff", "beta_c; NaN at gamma = 0"},
          {"winding_measure", "|winding angle| / 2 pi of the sampled curve"}}},
    };
    c.exec = [](const Values& v, int) {
        const Args a{v};
        ElasticaSpec s{a.real("gamma"), a.big("n"), a.real("beta")};
        const int pps = a.integer("points_per_segment");
        if (pps < 2) throw ConfigFail("points_per_segment must be >= 2");
        const double tol = a.real("tolerance");
        if (!(tol >= 0)) throw ConfigFail("tolerance must be >= 0");
        ElasticaGeometry g;
        PolylineCurve curve;
        try {
            g = geometry_from(s, tol);
            curve = sample_curve(s, pps, tol);
        } catch (const ConsistencyError& e) {
            throw ConfigFail(e.what());
        }
        Table t{"elastica.csv", {}, {}};
        for (std::size_t i = 0; i < curve.points.size(); ++i) {
            const auto& p = curve.points[i];
            t.rows.push_back({p[0], p[1], p[2], static_cast<double>(curve.segment_index[i])});
        }
        const double bc = s.gamma > 0 ? critical_takeoff(s.gamma, g.n_pair) : NAN;
        double w = NAN;
        try {
            w = winding_measure(curve);
        } catch (const DegenerateError&) {
        }
        Table sm{"elastica_summary.csv",
                 {},
                 {{static_cast<double>(g.n_pair), static_cast<double>(g.n_torsion), g.segment_angle, g.radius,
                   g.internal_angle, g.total_length, g.total_length / pi, bc, w}}};
        return std::vector<Table>{t, sm};
    };
    return c;
}

Command cmd_pt_path()
{
    Command c;
    c.name = "pt-path";
    c.help = "semiclassical Poschl-Teller path for |m| >= 1";
    c.keys = {
        {"l", KeyType::integer, "", true, "orbital quantum number"},
        {"m", KeyType::integer, "", true, "azimuthal quantum number, 1 <= |m| <= l"},
        {"periods", KeyType::integer, "7", false, "number of theta periods"},
        {"samples_per_period", KeyType::integer, "400", false, "uniform-in-time samples per period"},
    };
    c.outputs = {
        {"pt_path.csv",
         {{"t", "time"},
          {"theta", "polar angle"},
          {"phi", "accumulated azimuth (not wrapped)"},
          {"x", "unit vector x"},
          {"y", "unit vector y"},
          {"z", "unit vector z"},
          {"theta_dot", "d theta / dt"},
          {"phi_dot", "d phi / dt"},
          {"energy", "theta_dot^2/2 + (m^2 - 1/4)/(2 sin^2 theta)"},
          {"lz", "sin(theta) phi_dot"}}},
    };
    c.exec = [](const Values& v, int) {
        const Args a{v};
        PTPathSpec s{a.integer("l"), a.integer("m"), a.integer("periods"), a.integer("samples_per_period")};
        try {
            s.validate();
        } catch (const DomainError& e) {
            throw ConfigFail(e.what());
        }
        Table t{"pt_path.csv", {}, {}};
        for (const auto& p : pt_path(s))
            t.rows.push_back({p.t, p.theta, p.phi, p.point[0], p.point[1], p.point[2], p.theta_dot, p.phi_dot,
                              pt_energy(p, s.m), std::sin(p.theta) * p.phi_dot});
        return std::vector<Table>{t};
    };
    return c;
}

Command cmd_analytic()
{
    Command c;
    c.name = "analytic-check";
    c.help = "stationary-phase projection coefficients, direct quadrature comparison, antipodal series";
    c.keys = {
        {"l_max", KeyType::integer, "8", false, "largest l, at most 12"},
        {"numeric_T", KeyType::real_list, "100,400,1600", false, "travel times for the quadrature comparison; empty skips it"},
        {"numeric_l_max", KeyType::integer, "2", false, "largest l in the quadrature comparison"},
        {"damping", KeyType::real, "0.02", false, "quadrature damping c, epsilon = c / T"},
        {"T", KeyType::real, fmt(32.0 * pi), false, "travel time for the antipodal series"},
        {"epsilon", KeyType::real, "0.001", false, "regularization for the antipodal series"},
        {"antipodal_l_max", KeyType::integer, "200", false, "antipodal series cutoff"},
    };
    c.outputs = {
        {"analytic_terms.csv",
         {{"l", "orbital quantum number"},
          {"frequency", "f in exp(i f T / 8)"},
          {"coefficient_re", "coefficient, real part"},
          {"coefficient_im", "coefficient, imaginary part"}}},
        {"analytic_leading.csv",
         {{"l", "orbital quantum number"},
          {"leading_coefficient", "coefficient of exp(-i T / 8)"},
          {"closed_form_magnitude", "Gamma(l + 3/2) / (sqrt(l + 1/2) Gamma(l + 1))"},
          {"relative_deviation", "|leading - closed form| / closed form"}}},
        {"analytic_numeric.csv",
         {{"l", "orbital quantum number"},
          {"T", "travel time"},
          {"numeric_re", "direct quadrature, real part"},
          {"numeric_im", "direct quadrature, imaginary part"},
          {"asymptotic_re", "stationary-phase terms at the same complex time, real part"},
          {"asymptotic_im", "same, imaginary part"},
          {"relative_error", "|numeric - asymptotic| / |asymptotic|"}}},
        {"antipodal.csv",
         {{"T", "travel time"},
          {"closed_form_re", "bilateral series, real part"},
          {"closed_form_im", "bilateral series, imaginary part"},
          {"poisson_re", "one-sided series, real part"},
          {"poisson_im", "one-sided series, imaginary part"},
          {"abs_difference", "|closed_form - poisson|"}}},
    };
    c.exec = [](const Values& v, int threads) {
        const Args a{v};
        const int lmax = a.integer("l_max");
        if (lmax < 0 || lmax > 12) throw ConfigFail("l_max must lie in [0, 12]");
        const auto Ts = a.list("numeric_T");
        for (double T : Ts)
            if (!(T > 0)) throw ConfigFail("numeric_T values must be positive");
        const int nl = a.integer("numeric_l_max");
        if (nl < 0 || nl > 12) throw ConfigFail("numeric_l_max must lie in [0, 12]");
        const double damping = a.real("damping");
        if (!(damping > 0)) throw ConfigFail("damping must be positive");
        const double T = a.real("T"), eps = a.real("epsilon");
        if (!(T > 0) || !(eps >= 0)) throw ConfigFail("T must be positive and epsilon >= 0");
        const int alm = a.integer("antipodal_l_max");
        if (alm < 0) throw ConfigFail("antipodal_l_max must be >= 0");

        Table terms{"analytic_terms.csv", {}, {}}, lead{"analytic_leading.csv", {}, {}};
        for (int l = 0; l <= lmax; ++l) {
            const auto r = semiclassical_projection(l);
            for (const auto& t : r.terms)
                terms.rows.push_back({static_cast<double>(l), t.frequency, t.coefficient.real(), t.coefficient.imag()});
            const double lc = r.leading().coefficient.real(), cf = leading_magnitude(l);
            lead.rows.push_back({static_cast<double>(l), lc, cf, std::abs(lc - cf) / cf});
        }
        std::vector<std::pair<int, double>> jobs;
        for (int l = 0; l <= nl; ++l)
            for (double t : Ts) jobs.emplace_back(l, t);
        std::vector<std::vector<double>> rows(jobs.size());
        parallel_for(jobs.size(), threads, [&](std::size_t i) {
            const auto [l, t] = jobs[i];
            const cplx num = semiclassical_projection_numeric(l, t, damping);
            const cplx as = semiclassical_projection(l).evaluate(regularized_time(t, damping / t));
            rows[i] = {static_cast<double>(l), t, num.real(), num.imag(), as.real(), as.imag(), std::abs(num - as) / std::abs(as)};
        });
        Table numeric{"analytic_numeric.csv", {}, rows};
        const cplx cf = antipodal_closed_form(T, alm, eps), po = poisson_antipodal(T, alm, eps);
        Table anti{"antipodal.csv", {}, {{T, cf.real(), cf.imag(), po.real(), po.imag(), std::abs(cf - po)}}};
        return std::vector<Table>{terms, lead, numeric, anti};
    };
    return c;
}

Command cmd_reconstruct()
{
    Command c;
    c.name = "reconstruct";
    c.help = "wave function rebuilt from the L_c window integrals at one final point";
    c.keys = run_keys(true);
    c.keys.push_back({"thetaf", KeyType::real, "1.0", false, "final polar angle"});
    c.keys.push_back({"phif", KeyType::real, "0.5", false, "final azimuth"});
    c.outputs = {
        {"reconstruct.csv",
         {{"thetaf", "final polar angle"},
          {"phif", "final azimuth"},
          {"re", "reconstructed value, real part"},
          {"im", "reconstructed value, imaginary part"},
          {"ylm_re", "spherical harmonic, real part"},
          {"ylm_im", "spherical harmonic, imaginary part"}}},
    };
    c.exec = [](const Values& v, int threads) {
        const Args a{v};
        const auto cfg = make_config(a, true);
        const double tf = a.real("thetaf"), pf = a.real("phif");
        if (!(tf >= 0 && tf <= pi)) throw ConfigFail("thetaf must lie in [0, pi]");
        const cplx r = reconstruct_wavefunction(tf, pf, cfg, threads);
        const cplx y = spherical_harmonic(cfg.state.l, cfg.state.m, tf, pf);
        Table t{"reconstruct.csv", {}, {{tf, pf, r.real(), r.imag(), y.real(), y.imag()}}};
        return std::vector<Table>{t};
    };
    return c;
}

std::vector<Command> commands()
{
    return {cmd_propagator(), cmd_p1(),           cmd_p2(),          cmd_bivariate(),   cmd_sum_rule(),
            cmd_kappa_scan(), cmd_elastica(),     cmd_pt_path(),     cmd_analytic(),    cmd_reconstruct()};
}

// Output -----------------------------------------------------------------

void fill_headers(std::vector<Table>& tables, const Command& c)
{
    for (auto& t : tables) {
        if (!t.header.empty()) continue;
        for (const auto& o : c.outputs)
            if (o.file == t.file)
                for (const auto& col : o.columns) t.header.push_back(col.name);
    }
}

void write_csv(const fs::path& path, const Table& t)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t i = 0; i < t.header.size(); ++i) f << (i ? "," : "") << t.header[i];
    f << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) f << (i ? "," : "") << fmt(r[i]);
        f << '\n';
    }
}

nlohmann::ordered_json typed_config(const Command& c, const Values& v)
{
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& k : c.keys) {
        const auto& s = v.at(k.name);
        switch (k.type) {
        case KeyType::real: j[k.name] = parse_real(k.name, s); break;
        case KeyType::integer: j[k.name] = parse_integer(k.name, s); break;
        case KeyType::real_list: j[k.name] = parse_list(k.name, s); break;
        case KeyType::text: j[k.name] = s; break;
        }
    }
    return j;
}

void describe(const Command& c, std::ostream& out)
{
    out << c.name << ": " << c.help << "\n\nkeys (flag --<key>, or 'key = value' in a --config file):\n";
    for (const auto& k : c.keys) {
        out << "  " << k.name << (k.required ? " (required)" : " [default " + k.def + "]") << "  " << k.help << '\n';
    }
    out << "\noutputs (CSV, 17 significant digits, header row; manifest.json alongside):\n";
    for (const auto& o : c.outputs) {
        out << "  " << o.file << '\n';
        for (const auto& col : o.columns) out << "    " << col.name << "  " << col.help << '\n';
    }
}

Values read_config_file(const std::string& path, const Command& c)
{
    std::ifstream f(path);
    if (!f) throw ConfigFail("cannot read config file " + path);
    Values out;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigFail(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (val.size() >= 2 && val.front() == '"' && val.back() == '"') val = val.substr(1, val.size() - 2);
        bool known = false;
        for (const auto& k : c.keys) known = known || k.name == key;
        if (!known) throw ConfigFail("unknown config key: " + key);
        out[key] = val;
    }
    return out;
}

std::string flag_names(const std::string& key)
{
    std::string dashed = key;
    for (auto& ch : dashed)
        if (ch == '_') ch = '-';
    return dashed == key ? "--" + key : "--" + dashed + ",--" + key;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    const auto cmds = commands();
    CLI::App app{"Path integrals and path distributions on the two-sphere", "s2paths"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(s2paths::version));

    struct Slot {
        std::map<std::string, std::optional<std::string>> flags;
        std::string config, out_dir;
        int threads = 0;
        bool describe = false;
        CLI::App* sub = nullptr;
    };
    std::vector<Slot> slots(cmds.size());
    for (std::size_t i = 0; i < cmds.size(); ++i) {
        auto& s = slots[i];
        s.sub = app.add_subcommand(cmds[i].name, cmds[i].help);
        for (const auto& k : cmds[i].keys) s.sub->add_option(flag_names(k.name), s.flags[k.name], k.help);
        s.sub->add_option("--config", s.config, "file of 'key = value' lines; flags override it");
        s.sub->add_option("--out", s.out_dir, "output directory");
        s.sub->add_option("--threads", s.threads, "worker threads (default: hardware concurrency)");
        s.sub->add_flag("--describe", s.describe, "document keys and CSV columns, then exit");
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::CallForVersion&) {
        out << s2paths::version << '\n';
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return config_error;
    }

    std::size_t which = 0;
    for (; which < cmds.size(); ++which)
        if (slots[which].sub->parsed()) break;
    const Command& cmd = cmds[which];
    Slot& slot = slots[which];

    if (slot.describe) {
        describe(cmd, out);
        return ok;
    }

    Values values;
    fs::path out_dir;
    int threads = 0;
    try {
        for (const auto& k : cmd.keys)
            if (!k.required) values[k.name] = k.def;
        if (!slot.config.empty())
            for (const auto& [k, v] : read_config_file(slot.config, cmd)) values[k] = v;
        for (const auto& [k, v] : slot.flags)
            if (v) values[k] = *v;
        for (const auto& k : cmd.keys)
            if (!values.count(k.name)) throw ConfigFail("missing required key: " + k.name);
        for (const auto& k : cmd.keys) {
            const auto& s = values.at(k.name);
            switch (k.type) {
            case KeyType::real: parse_real(k.name, s); break;
            case KeyType::integer: parse_integer(k.name, s); break;
            case KeyType::real_list: parse_list(k.name, s); break;
            case KeyType::text: break;
            }
        }
        if (slot.threads < 0) throw ConfigFail("--threads must be >= 0");
        threads = slot.threads == 0 ? hardware_threads() : slot.threads;
        if (!slot.out_dir.empty()) {
            out_dir = slot.out_dir;
        } else if (const char* env = std::getenv("S2PATHS_OUTPUT_DIR"); env && *env) {
            out_dir = env;
        } else {
            out_dir = ".";
        }
    } catch (const ConfigFail& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    }

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Table> tables;
    try {
        tables = cmd.exec(values, threads);
    } catch (const ConfigFail& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const ConsistencyError& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return numerical_error;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    fill_headers(tables, cmd);
    try {
        fs::create_directories(out_dir);
        nlohmann::ordered_json manifest;
        manifest["command"] = cmd.name;
        manifest["config"] = typed_config(cmd, values);
        manifest["version"] = s2paths::version;
        manifest["threads"] = threads;
        manifest["wall_time_seconds"] = wall;
        manifest["outputs"] = nlohmann::ordered_json::array();
        for (const auto& t : tables) {
            write_csv(out_dir / t.file, t);
            manifest["outputs"].push_back(t.file);
            out << (out_dir / t.file).string() << '\n';
        }
        std::ofstream mf(out_dir / "manifest.json");
        mf << manifest.dump(2) << '\n';
        if (!mf) throw std::runtime_error("cannot write manifest.json");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return ok;
}

}  // namespace s2paths::cli
