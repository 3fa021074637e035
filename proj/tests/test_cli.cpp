#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace {

struct Run {
    int exit_code = -1;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + QFISHER_BIN + std::string(" ") + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

nlohmann::json run_json(const std::string& args, int expected_exit = 0) {
    const auto r = run(args + " --format json");
    EXPECT_EQ(r.exit_code, expected_exit) << args;
    return nlohmann::json::parse(r.out);
}

// Rows of a CSV body, split on CRLF; header included.
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::size_t start = 0;
    while (start < text.size()) {
        const auto end = text.find("\r\n", start);
        EXPECT_NE(end, std::string::npos) << "CSV lines must end with CRLF";
        if (end == std::string::npos) break;
        std::vector<std::string> cells;
        std::stringstream line(text.substr(start, end - start));
        std::string cell;
        while (std::getline(line, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
        start = end + 2;
    }
    return rows;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

} // namespace

TEST(CliFisher, GaussianBothRoutes) {
    const auto j = run_json("fisher --state gaussian:1 --grid -8:8:1025");
    EXPECT_EQ(j["schema"], "qfisher/1");
    EXPECT_EQ(j["grid"]["n_points"], 1025);
    EXPECT_NEAR(j["log_derivative"]["value"].get<double>(), 1.0, 1e-6);
    EXPECT_NEAR(j["amplitude_derivative"]["value"].get<double>(), 1.0, 1e-6);
    EXPECT_LT(j["momentum_identity"]["relative_gap"].get<double>(), 1e-6);
}

TEST(CliFisher, DefaultGridWideGaussian) {
    const auto j = run_json("fisher --state gaussian:2");
    EXPECT_NEAR(j["log_derivative"]["value"].get<double>(), 0.25, 1e-6);
    EXPECT_NEAR(j["amplitude_derivative"]["value"].get<double>(), 0.25, 1e-6);
}

TEST(CliFisher, CsvOutput) {
    const auto r = run("fisher --state gaussian:1 --grid -8:8:1025");
    ASSERT_EQ(r.exit_code, 0);
    const auto rows = csv_rows(r.out);
    ASSERT_GE(rows.size(), 2u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"field", "value"}));
    EXPECT_EQ(rows[1][0], "log_derivative.value");
    EXPECT_NEAR(std::stod(rows[1][1]), 1.0, 1e-6);
}

TEST(CliExitCodes, UsageAndNumericalErrors) {
    EXPECT_EQ(run("fisher --grid -8:8:1024").exit_code, 2);
    EXPECT_EQ(run("fisher --grid=-8:8").exit_code, 2);
    EXPECT_EQ(run("fisher --state lorentzian:1").exit_code, 2);
    EXPECT_EQ(run("fisher --format xml").exit_code, 2);
    EXPECT_EQ(run("fisher --hbar -1").exit_code, 2);
    EXPECT_EQ(run("no-such-command").exit_code, 2);
    EXPECT_EQ(run("cr-sim --trials 10").exit_code, 2);
    EXPECT_EQ(run("cr-sim --estimator mode").exit_code, 2);
    // sech tails are not decayed on [-8, 8]
    EXPECT_EQ(run("fisher --state sech:1 --grid -8:8:1025").exit_code, 1);
}

TEST(CliKlScan, GaussianResidualsVanish) {
    const auto r = run("kl-scan --state gaussian:1 --grid -8:8:1025");
    ASSERT_EQ(r.exit_code, 0);
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 11u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"delta", "kl", "quadratic", "residual"}));
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(std::abs(std::stod(rows[i][3])), 1e-8);
}

TEST(CliKlScan, ExplicitDeltas) {
    EXPECT_EQ(run("kl-scan --state gaussian:1 --grid -8:8:1025 --deltas 0.25,0.01").exit_code, 2);
    const auto j = run_json("kl-scan --state gaussian:1 --grid -8:8:1025 --deltas -0.25,0.25");
    ASSERT_EQ(j["rows"].size(), 2u);
    EXPECT_NEAR(j["rows"][0]["kl"].get<double>(), 0.03125, 1e-6);
    EXPECT_EQ(j["rows"][0]["delta"].get<double>(), -0.25);
}

TEST(CliKlScan, CosineWindowResidualOrder) {
    const auto r = run("kl-scan --state cosine_window:4 --deltas 0.015625,0.03125,0.0625,0.125,0.25");
    ASSERT_EQ(r.exit_code, 0);
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 6u);
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        const double small = std::abs(std::stod(rows[i][3]));
        const double large = std::abs(std::stod(rows[i + 1][3]));
        EXPECT_GE(large / small, 8.0) << "delta doubling from row " << i;
    }
}

TEST(CliUncertainty, Examples) {
    const auto g = run_json("uncertainty --state gaussian:1");
    EXPECT_NEAR(g["product"].get<double>(), 0.5, 0.5e-6);
    EXPECT_EQ(g["minimum_uncertainty"], true);
    EXPECT_EQ(g["heisenberg_satisfied"], true);

    const auto d = run_json("uncertainty --state double_gaussian:4:0.5");
    EXPECT_GT(d["product"].get<double>(), 0.5);
    EXPECT_EQ(d["minimum_uncertainty"], false);

    const auto h = run_json("uncertainty --state gaussian:1 --hbar 2");
    EXPECT_NEAR(h["product"].get<double>(), 1.0, 1e-6);
    EXPECT_EQ(h["bound"].get<double>(), 1.0);
}

TEST(CliGaussianMin, Examples) {
    const auto r = run("gaussian-min --state gaussian:1");
    ASSERT_EQ(r.exit_code, 0);
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"amplitude", "product"}));
    EXPECT_EQ(std::stod(rows[3][0]), 0.0);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(std::stod(rows[i][1]), std::stod(rows[3][1]));

    const auto z = run_json("gaussian-min --amplitudes 0");
    EXPECT_NEAR(z["rows"][0]["product"].get<double>(), 0.5, 0.5e-6);

    const auto flat = run_json("gaussian-min --amplitudes 0,0.1 --shape none");
    EXPECT_NEAR(flat["rows"][0]["product"].get<double>(), 0.5, 0.5e-6);
    EXPECT_NEAR(flat["rows"][1]["product"].get<double>(), 0.5, 0.5e-6);

    EXPECT_EQ(run("gaussian-min --state sech:1").exit_code, 2);
    EXPECT_EQ(run("gaussian-min --amplitudes 0.1,0.2").exit_code, 2);
}

TEST(CliCrSim, Examples) {
    const std::string base = "cr-sim --state gaussian:1 --grid -8:8:1025 --trials 10000 --seed 42";
    const auto mean = run_json(base + " --estimator mean --n 100");
    EXPECT_EQ(mean["bound_satisfied"], true);
    EXPECT_NEAR(mean["empirical_variance"].get<double>(), 0.01, 0.0005);

    const auto median = run_json(base + " --estimator median --n 101");
    EXPECT_GT(median["empirical_variance"].get<double>(), median["cr_bound"].get<double>());

    const auto shrunk = run_json(base + " --estimator shrunk:0.5 --n 100");
    EXPECT_NEAR(shrunk["cr_bound"].get<double>(), 0.0025, 1e-6);
    EXPECT_EQ(shrunk["estimator"], "shrunk:0.5");
}

TEST(CliCrSim, ByteIdenticalReportsAndTrialDump) {
    const auto dir = std::filesystem::temp_directory_path() / "qfisher_cli_test";
    std::filesystem::create_directories(dir);
    const std::string args = "cr-sim --estimator median --n 21 --trials 2000 --seed 5 --out ";
    ASSERT_EQ(run(args + (dir / "a.json").string()).exit_code, 0);
    ASSERT_EQ(run(args + (dir / "b.json").string() + " --dump-trials " + (dir / "t.csv").string()).exit_code, 0);
    EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
    EXPECT_NO_THROW((void)nlohmann::json::parse(slurp(dir / "a.json")));
    EXPECT_EQ(csv_rows(slurp(dir / "t.csv")).size(), 2001u);
    std::filesystem::remove_all(dir);
}

TEST(CliConfig, EnvironmentGridDefault) {
    const auto r = run("fisher --format json", "QFISHER_DEFAULT_GRID=-10:10:1601");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(nlohmann::json::parse(r.out)["grid"]["n_points"], 1601);
    const auto flag = run("fisher --format json --grid -8:8:1025", "QFISHER_DEFAULT_GRID=-10:10:1601");
    EXPECT_EQ(nlohmann::json::parse(flag.out)["grid"]["n_points"], 1025);
    EXPECT_EQ(run("fisher", "QFISHER_DEFAULT_GRID=bogus").exit_code, 2);
}
