#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "sturm/cli.hpp"

namespace cli = sturm::cli;
using nlohmann::json;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string log;
};

Run run(std::vector<const char*> args) {
    args.insert(args.begin(), "sturm");
    cli::RunConfig cfg;
    std::ostringstream out, log;
    Run r;
    if (const auto stop = cli::parse_command_line(static_cast<int>(args.size()), args.data(), cfg, out, log)) {
        r.code = *stop;
    } else {
        r.code = cli::run(cfg, out, log);
    }
    r.out = out.str();
    r.log = log.str();
    return r;
}

constexpr const char* kPiText = "3.141592653589793";

} // namespace

TEST(Cli, CountConstantPotential) {
    const auto r = run({"count", "--potential", "1", "--a", "0", "--b", kPiText, "--lambda", "2.5"});
    ASSERT_EQ(r.code, 0) << r.log;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["count"], 2);
    EXPECT_EQ(j["lambda"], 2.5);
    EXPECT_NEAR(j["theta_b"].get<double>(), 2.5 * std::numbers::pi, 1e-9);
    EXPECT_TRUE(j.contains("config"));
}

TEST(Cli, CountMatrixMethod) {
    const auto r = run({"count", "--potential", "2+sin(x)", "--a", "0", "--b", "3", "--lambda", "40", "--method",
                        "matrix"});
    ASSERT_EQ(r.code, 0) << r.log;
    const auto j = json::parse(r.out);
    const auto p = sturm::Potential::theorem_class(sturm::parse("2+sin(x)"), 0, 3);
    EXPECT_EQ(j["count"], sturm::count_negative(p, 40, 1e-10));
}

TEST(Cli, JumpsCsv) {
    const auto r = run({"jumps", "--potential", "1", "--a", "0", "--b", kPiText, "--n-min", "1", "--n-max", "5"});
    ASSERT_EQ(r.code, 0) << r.log;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "n,lambda_n,e_n,n_times_e_n");
    for (int n = 1; n <= 5; ++n) {
        ASSERT_TRUE(std::getline(in, line));
        const auto comma = line.find(',');
        EXPECT_EQ(std::stoi(line.substr(0, comma)), n);
        EXPECT_NEAR(std::stod(line.substr(comma + 1)), n, 1e-8);
    }
    EXPECT_FALSE(std::getline(in, line));
}

TEST(Cli, JumpsJson) {
    const auto r = run({"jumps", "--potential", "4", "--a", "0", "--b", "1", "--n-min", "2", "--n-max", "3", "--format",
                        "json"});
    ASSERT_EQ(r.code, 0) << r.log;
    const auto j = json::parse(r.out);
    ASSERT_EQ(j["records"].size(), 2u);
    EXPECT_NEAR(j["records"][1]["lambda_n"].get<double>(), 1.5 * std::numbers::pi, 1e-8);
}

TEST(Cli, TransformWritesFile) {
    const auto path = std::filesystem::temp_directory_path() / "sturm_cli_transform_test.json";
    const std::string p = path.string();
    const auto r = run({"transform", "--potential", "exp(x)", "--a", "0", "--b", "1", "--grid", "256", "--out",
                        p.c_str()});
    ASSERT_EQ(r.code, 0) << r.log;
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(path);
    const auto j = json::parse(f);
    EXPECT_NEAR(j["D"].get<double>(), 2 * (std::exp(0.5) - 1), 1e-12);
    EXPECT_NEAR(j["C"].get<double>(), 1.05 / 16, 1e-12);
    EXPECT_EQ(j["samples"].size(), 256u);
    EXPECT_TRUE(j["samples"][0].contains("U"));
    std::filesystem::remove(path);
}

TEST(Cli, OutputIsReproducible) {
    const std::vector<const char*> args{"verify", "--suite", "weyl", "--potential", "exp(x)", "--a", "0", "--b", "1",
                                        "--samples", "40", "--seed", "9"};
    const auto a = run(args);
    const auto b = run(args);
    ASSERT_EQ(a.code, 0) << a.log;
    EXPECT_EQ(a.out, b.out);
    const auto c = run({"jumps", "--potential", "2+sin(x)", "--a", "0", "--b", "3", "--n-max", "20", "--threads", "3"});
    const auto d = run({"jumps", "--potential", "2+sin(x)", "--a", "0", "--b", "3", "--n-max", "20", "--threads", "1"});
    EXPECT_EQ(c.out, d.out);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({"count", "--potential", "1", "--a", "0"}).code, 64);
    EXPECT_EQ(run({"count", "--potential", "1", "--a", "1", "--b", "0", "--lambda", "1"}).code, 64);
    EXPECT_EQ(run({"frobnicate"}).code, 64);
    EXPECT_EQ(run({"count", "--potential", "1+", "--a", "0", "--b", "1", "--lambda", "1"}).code, 64);
    EXPECT_EQ(run({"jumps", "--potential", "1", "--a", "0", "--b", "1", "--n-min", "5", "--n-max", "2"}).code, 64);
    EXPECT_EQ(run({"count", "--potential", "1", "--a", "0", "--b", "1", "--lambda", "1", "--rtol", "-1"}).code, 64);
}

TEST(Cli, HelpIsNotAnError) {
    EXPECT_EQ(run({"--help"}).code, 0);
    EXPECT_EQ(run({"count", "--help"}).code, 0);
}

TEST(Cli, ComputationalErrors) {
    // theorem class requires V > 0 on [a, b]
    EXPECT_EQ(run({"count", "--potential", "x", "--a", "0", "--b", "1", "--lambda", "3"}).code, 1);
    EXPECT_EQ(run({"count", "--potential", "log(x-2)", "--a", "0", "--b", "1", "--lambda", "3"}).code, 1);
    const auto r = run({"count", "--potential", "1", "--a", "0", "--b", kPiText, "--lambda", "3"});
    EXPECT_EQ(r.code, 0) << r.log;
    EXPECT_TRUE(json::parse(r.out)["at_jump"].get<bool>());
}

TEST(Cli, VerifyFailureExitsWithTwo) {
    // V = x misdeclared as regular at both ends: the constant is -1/12, not 0
    const auto r = run({"verify", "--suite", "conjecture", "--potential", "x", "--a", "0", "--b", "1", "--class",
                        "conjecture", "--gamma-a", "0", "--gamma-b", "0", "--n-min", "20", "--n-max", "120"});
    EXPECT_EQ(r.code, 2) << r.log;
    const auto j = json::parse(r.out);
    EXPECT_FALSE(j["pass"].get<bool>());
}

TEST(Cli, VerifyConjectureExample) {
    const auto r = run({"verify", "--suite", "conjecture", "--potential", "(1-x)/x", "--a", "0", "--b", "1", "--class",
                        "conjecture", "--gamma-a", "-1", "--gamma-b", "1", "--n-max", "400"});
    ASSERT_EQ(r.code, 0) << r.log;
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_NEAR(j["report"]["constant_estimate"].get<double>(), 1.0 / 6, 0.01);
}

TEST(Cli, VerifyTheoremAndBracket) {
    const auto t = run({"verify", "--suite", "theorem", "--potential", "2+sin(x)", "--a", "0", "--b", "3", "--n-min",
                        "10", "--n-max", "60"});
    EXPECT_EQ(t.code, 0) << t.log;
    const auto b = run({"verify", "--suite", "bracket", "--potential", "exp(x)", "--a", "0", "--b", "1"});
    EXPECT_EQ(b.code, 0) << b.log;
    EXPECT_TRUE(json::parse(b.out)["pass"].get<bool>());
}
