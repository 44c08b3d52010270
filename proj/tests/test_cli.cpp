#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using s2paths::cli::run;

namespace {

struct Outcome {
    int code;
    std::string out, err;
};

Outcome call(std::vector<std::string> args)
{
    std::ostringstream o, e;
    const int c = run(args, o, e);
    return {c, o.str(), e.str()};
}

fs::path fresh_dir(const std::string& name)
{
    const auto p = fs::temp_directory_path() / ("s2paths_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

std::vector<std::string> header(const fs::path& csv)
{
    std::ifstream f(csv);
    std::string line;
    std::getline(f, line);
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
    return cols;
}

const std::vector<std::string> small_grid{"--n-alpha", "16", "--n-thetaf", "8", "--n-phi0", "16", "--dLc", "0.01"};

std::vector<std::string> with_small(std::vector<std::string> a)
{
    a.insert(a.end(), small_grid.begin(), small_grid.end());
    return a;
}

}  // namespace

TEST(Cli, MissingRequiredWritesNothing)
{
    const auto d = fresh_dir("missing");
    const auto r = call({"p2", "--l", "1", "--out", d.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("m"), std::string::npos);
    EXPECT_FALSE(fs::exists(d));
}

TEST(Cli, UnknownConfigKey)
{
    const auto d = fresh_dir("unknown");
    fs::create_directories(d);
    std::ofstream(d / "cfg.txt") << "# comment\nT = 10\nbogus_key = 3\n";
    const auto r = call({"p1", "--l", "0", "--m", "0", "--config", (d / "cfg.txt").string(), "--out", d.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("bogus_key"), std::string::npos);
    EXPECT_FALSE(fs::exists(d / "manifest.json"));
}

TEST(Cli, NegativeKappaRejected)
{
    const auto d = fresh_dir("kappa");
    fs::create_directories(d);
    std::ofstream(d / "cfg.txt") << "kappa = -1\n";
    const auto r = call({"p2", "--l", "0", "--m", "0", "--config", (d / "cfg.txt").string(), "--out", d.string()});
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, MalformedValueRejected)
{
    EXPECT_EQ(call({"elastica", "--gamma", "abc", "--n", "0", "--beta", "1"}).code, 2);
    EXPECT_EQ(call({"elastica", "--gamma", "1", "--n", "0.5", "--beta", "1"}).code, 2);
    EXPECT_EQ(call({"nonsense"}).code, 2);
}

TEST(Cli, InconsistentElasticaIsConfigError)
{
    const auto d = fresh_dir("elastica_bad");
    EXPECT_EQ(call({"elastica", "--gamma", "1", "--n", "0", "--beta", "2.5", "--out", d.string()}).code, 2);
}

TEST(Cli, ElasticaExampleHasLengthPi)
{
    const auto d = fresh_dir("elastica");
    const auto r = call({"elastica", "--gamma", "1.5708", "--n", "0", "--beta", "1.5708", "--out", d.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream f(d / "elastica_summary.csv");
    std::string h, v;
    std::getline(f, h);
    std::getline(f, v);
    std::vector<double> vals;
    std::stringstream ss(v);
    std::string c;
    while (std::getline(ss, c, ',')) vals.push_back(std::stod(c));
    EXPECT_NEAR(vals.at(6), 1.0, 1e-4);  // total_length_over_pi
    EXPECT_EQ(header(d / "elastica.csv"), (std::vector<std::string>{"x", "y", "z", "segment_index"}));
}

TEST(Cli, ManifestContents)
{
    const auto d = fresh_dir("manifest");
    fs::create_directories(d);
    std::ofstream(d / "empty.txt") << "";
    const auto r = call({"pt-path", "--l", "2", "--m", "1", "--config", (d / "empty.txt").string(), "--threads", "2",
                         "--out", d.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(slurp(d / "manifest.json"));
    EXPECT_EQ(j["command"], "pt-path");
    EXPECT_EQ(j["config"]["periods"], 7);
    EXPECT_EQ(j["config"]["samples_per_period"], 400);
    EXPECT_EQ(j["threads"], 2);
    EXPECT_TRUE(j.contains("version"));
    EXPECT_TRUE(j["wall_time_seconds"].is_number());
    EXPECT_EQ(j["outputs"][0], "pt_path.csv");
}

TEST(Cli, FlagsOverrideConfigFile)
{
    const auto d = fresh_dir("override");
    fs::create_directories(d);
    std::ofstream(d / "cfg.txt") << "l = 3\nm = 3\nperiods = 2\n";
    const auto r = call({"pt-path", "--config", (d / "cfg.txt").string(), "--periods", "1", "--samples_per_period", "5",
                         "--out", d.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(slurp(d / "manifest.json"));
    EXPECT_EQ(j["config"]["l"], 3);
    EXPECT_EQ(j["config"]["periods"], 1);
}

TEST(Cli, P2DefaultsInManifest)
{
    const auto d = fresh_dir("p2");
    const auto r = call(with_small({"p2", "--l", "1", "--m", "1", "--T", "100.53", "--out", d.string()}));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(slurp(d / "manifest.json"));
    EXPECT_DOUBLE_EQ(j["config"]["T"].get<double>(), 100.53);
    EXPECT_DOUBLE_EQ(j["config"]["epsilon"].get<double>(), 1e-3);
    EXPECT_EQ(header(d / "p2.csv"), (std::vector<std::string>{"theta_Lc", "re", "im"}));
}

TEST(Cli, ByteIdenticalAcrossThreads)
{
    std::string ref;
    for (const char* t : {"1", "4", "8"}) {
        const auto d = fresh_dir(std::string("threads") + t);
        const auto r = call(with_small({"p1", "--l", "1", "--m", "1", "--threads", t, "--out", d.string()}));
        ASSERT_EQ(r.code, 0) << r.err;
        const auto s = slurp(d / "p1.csv");
        if (ref.empty()) ref = s;
        EXPECT_EQ(s, ref);
    }
}

TEST(Cli, OutputDirFromEnvironment)
{
    const auto d = fresh_dir("env");
    ::setenv("S2PATHS_OUTPUT_DIR", d.string().c_str(), 1);
    const auto r = call({"pt-path", "--l", "1", "--m", "1", "--periods", "1", "--samples-per-period", "4"});
    ::unsetenv("S2PATHS_OUTPUT_DIR");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(d / "pt_path.csv"));
}

// Every header column appears in --describe, for each command run cheaply.
TEST(Cli, DescribeCoversColumns)
{
    struct Case {
        std::vector<std::string> args;
    };
    const std::vector<Case> cases{
        {{"propagator", "--T", "3", "--n-gamma", "4", "--n-max", "4", "--l-max", "40"}},
        {with_small({"p1", "--l", "0", "--m", "0"})},
        {with_small({"p2", "--l", "0", "--m", "0"})},
        {with_small({"bivariate", "--l", "1", "--m", "0", "--Lc", "1.5"})},
        {with_small({"sum-rule", "--l", "1"})},
        {with_small({"kappa-scan", "--l", "0", "--m", "0", "--kappas", "2,3"})},
        {{"elastica", "--gamma", "1", "--n", "1", "--beta", "0.5"}},
        {{"pt-path", "--l", "2", "--m", "2"}},
        {{"analytic-check", "--l-max", "3", "--numeric-T", "100", "--numeric-l-max", "0"}},
        {with_small({"reconstruct", "--l", "1", "--m", "-1"})},
    };
    for (const auto& c : cases) {
        const auto d = fresh_dir("describe_" + c.args[0]);
        auto args = c.args;
        args.push_back("--out");
        args.push_back(d.string());
        const auto r = call(args);
        ASSERT_EQ(r.code, 0) << c.args[0] << ": " << r.err;
        const auto desc = call({c.args[0], "--describe"});
        ASSERT_EQ(desc.code, 0);
        const auto j = nlohmann::json::parse(slurp(d / "manifest.json"));
        for (const auto& f : j["outputs"]) {
            const std::string file = f;
            EXPECT_NE(desc.out.find(file), std::string::npos) << file;
            for (const auto& col : header(d / file)) {
                std::string key = col;
                // per-m and per-kappa columns are documented by pattern
                if (c.args[0] == "sum-rule" && col.rfind("m", 0) == 0 && col != "sum_re") key = "m<m>_re, m<m>_im";
                if (c.args[0] == "kappa-scan" && col.rfind("k", 0) == 0 && col != "kappa") key = "k<kappa>_re, k<kappa>_im";
                EXPECT_NE(desc.out.find("    " + key + "  "), std::string::npos) << file << ": " << col;
            }
        }
    }
}
