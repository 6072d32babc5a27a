#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "mga/app/commands.hpp"
#include "oracles.hpp"

using namespace mga;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    const fs::path dir = fs::temp_directory_path() / ("mga_cli_test_" + name);
    fs::remove_all(dir);
    return dir;
}

const ProblemSpec &toy() {
    static const ProblemSpec p = load_problem(oracle::config_path("toy.json"));
    return p;
}

} // namespace

TEST(Cli, EvaluateExitCodes) {
    const ProblemSpec p = load_problem(oracle::config_path("laplace.json"));
    std::ostringstream out;
    EXPECT_EQ(app::cmd_evaluate(p, {}, out), app::kOk);
    EXPECT_NE(out.str().find("branch"), std::string::npos);
    std::ostringstream infeasible;
    EXPECT_EQ(app::cmd_evaluate(toy(), {2, 1, 1, 1}, infeasible), app::kEmpty);
    std::ostringstream bad;
    EXPECT_EQ(app::cmd_evaluate(toy(), {1, 1}, bad), app::kUsage);
}

TEST(Cli, SearchResultsRoundTrip) {
    const fs::path dir = scratch("search");
    std::ostringstream out;
    ASSERT_EQ(app::cmd_search(toy(), toy().search, dir, out), app::kOk);
    const auto j = app::read_json(dir / "results.json");
    ASSERT_FALSE(j.at("feasible").empty());
    for (const auto &e : j.at("feasible")) {
        const Evaluation again = evaluate_solution(toy(), e.at("s").get<SolutionVector>());
        ASSERT_TRUE(again.feasible);
        EXPECT_EQ(again.f_obj, e.at("f_obj").get<double>());
    }
    EXPECT_TRUE(fs::exists(dir / "sequences.csv"));
    EXPECT_TRUE(fs::exists(dir / "run_stats.json"));
    fs::remove_all(dir);
}

TEST(Cli, EmptySearchWritesValidFile) {
    ProblemSpec p = toy();
    p.model.tof_total_max = 1.0;
    const fs::path dir = scratch("empty");
    std::ostringstream out;
    EXPECT_EQ(app::cmd_search(p, p.search, dir, out), app::kEmpty);
    const auto j = app::read_json(dir / "results.json");
    EXPECT_TRUE(j.at("feasible").empty());
    fs::remove_all(dir);
}

TEST(Cli, EnumerateWritesTables) {
    const fs::path dir = scratch("enumerate");
    std::ostringstream out;
    ASSERT_EQ(app::cmd_enumerate(toy(), kDefaultEnumerationCap, dir, out), app::kOk);
    const auto j = app::read_json(dir / "enumeration.json");
    EXPECT_EQ(j.at("canonical_count").get<int>(), 160);
    std::ifstream csv(dir / "enumeration.csv");
    int lines = 0;
    for (std::string line; std::getline(csv, line);) ++lines;
    EXPECT_EQ(lines, 161);
    std::ostringstream refused;
    EXPECT_EQ(app::cmd_enumerate(toy(), 10.0, dir, refused), app::kUsage);
    fs::remove_all(dir);
}

TEST(Cli, SingleDateScanEqualsSearchBest) {
    ProblemSpec p = toy();
    ScanConfig scan{{p.model.t0}, 1};
    const auto rows = app::scan_dates(p, scan, 7);
    ASSERT_EQ(rows.size(), 1u);
    SearchConfig cfg = p.search;
    cfg.seed = 7;
    const SearchResult res = search(p, cfg, 1);
    ASSERT_TRUE(rows[0].best);
    EXPECT_EQ(rows[0].best->s, res.feasible.front().s);
    EXPECT_EQ(rows[0].best->f_obj, res.feasible.front().f_obj);
}

TEST(Cli, ScanMarksInfeasibleDates) {
    ProblemSpec p = toy();
    p.model.tof_total_max = 1.0;
    p.scan = ScanConfig{{p.model.t0, p.model.t0 + 1.0}, 1};
    const fs::path dir = scratch("scan");
    std::ostringstream out;
    EXPECT_EQ(app::cmd_scan_dates(p, std::nullopt, 1, dir, out), app::kEmpty);
    const auto j = app::read_json(dir / "scan.json");
    EXPECT_EQ(j.at("rows").size(), 2u);
    EXPECT_EQ(j.at("rows")[0].at("sequence"), "infeasible");
    fs::remove_all(dir);
}

TEST(Cli, PlotFromResultsFile) {
    const fs::path dir = scratch("plot");
    std::ostringstream out;
    ASSERT_EQ(app::cmd_search(toy(), toy().search, dir, out), app::kOk);
    EXPECT_EQ(app::cmd_plot(toy(), {}, dir / "results.json", 0, std::nullopt, dir / "best.svg", out), app::kOk);
    EXPECT_TRUE(fs::exists(dir / "best.svg"));
    EXPECT_EQ(app::cmd_plot(toy(), {}, dir / "results.json", 0, std::string("9.9"), dir / "x.svg", out), app::kUsage);
    EXPECT_EQ(app::cmd_plot(toy(), {}, dir / "results.json", 100000, std::nullopt, dir / "x.svg", out), app::kUsage);
    fs::remove_all(dir);
}

TEST(Cli, StatsCampaignPairsBaseline) {
    const fs::path dir = scratch("stats");
    std::ostringstream out;
    ProblemSpec p = toy();
    p.success_threshold = 7.0;
    ASSERT_EQ(app::cmd_stats(p, p.search, 3, true, dir, out), app::kOk);
    const auto j = app::read_json(dir / "stats.json");
    EXPECT_EQ(j.at("aco").at("runs"), 3);
    EXPECT_EQ(j.at("random").at("runs"), 3);
    fs::remove_all(dir);
}

TEST(Cli, MissingFileIsIoError) {
    try {
        app::read_json("/nonexistent/results.json");
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(app::exit_code(e), app::kIo);
    }
}
