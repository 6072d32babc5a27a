// mga: evaluate, search, enumerate, scan launch dates, run statistics and
// plot trajectories for linked-conic MGA problems.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mga/app/commands.hpp"

using namespace mga;
using namespace mga::app;

int main(int argc, char **argv) {
    CLI::App cli{"Linked-conic multiple gravity assist planner"};
    cli.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    long max_evals = 0;
    int reps = 0;
    std::string out_dir = "out";
    std::vector<int> solution;

    auto common = [&](CLI::App *sub) {
        sub->add_option("--config", config_path, "problem config (JSON)")->required()->check(CLI::ExistingFile);
    };
    auto seeded = [&](CLI::App *sub) {
        sub->add_option("--seed", seed, "base random seed")->each([&](const std::string &) { seed_given = true; });
        sub->add_option("--max-evals", max_evals, "evaluation budget per run")->check(CLI::PositiveNumber);
    };

    CLI::App *evaluate = cli.add_subcommand("evaluate", "schedule one solution and print its trajectories");
    common(evaluate);
    evaluate->add_option("solution", solution, "solution vector (defaults to the config's golden plan)");

    CLI::App *search_cmd = cli.add_subcommand("search", "one ACO-MGA run");
    common(search_cmd);
    seeded(search_cmd);
    search_cmd->add_option("--out", out_dir, "output directory");

    double cap = kDefaultEnumerationCap;
    CLI::App *enumerate = cli.add_subcommand("enumerate", "evaluate the whole canonical space");
    common(enumerate);
    enumerate->add_option("--out", out_dir, "output directory");
    enumerate->add_option("--cap", cap, "refuse spaces larger than this");

    CLI::App *scan = cli.add_subcommand("scan-dates", "best solution for every launch date of the scan window");
    common(scan);
    seeded(scan);
    scan->add_option("--reps", reps, "searches per date")->check(CLI::PositiveNumber);
    scan->add_option("--out", out_dir, "output directory");

    std::string results_path, branch, svg_path = "trajectory.svg";
    std::size_t rank = 0;
    CLI::App *plot = cli.add_subcommand("plot", "render a trajectory to SVG");
    common(plot);
    plot->add_option("solution", solution, "solution vector");
    plot->add_option("--results", results_path, "results.json written by search")->check(CLI::ExistingFile);
    plot->add_option("--rank", rank, "entry of the results file (0 = best)");
    plot->add_option("--branch", branch, "branch id of the trajectory tree (default: best branch)");
    plot->add_option("--svg", svg_path, "output file");

    bool with_random = false;
    CLI::App *stats = cli.add_subcommand("stats", "repeated seeded searches with success-rate summary");
    common(stats);
    seeded(stats);
    stats->add_option("--reps", reps, "number of runs")->check(CLI::PositiveNumber);
    stats->add_option("--out", out_dir, "output directory");
    stats->add_flag("--baseline", with_random, "also run random search with the same seeds and budget");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = cli.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        const ProblemSpec problem = load_problem(config_path);
        SearchConfig config = problem.search;
        if (seed_given) config.seed = seed;
        if (max_evals > 0) config.n_eval_max = max_evals;

        if (*evaluate) return cmd_evaluate(problem, solution, std::cout);
        if (*search_cmd) return cmd_search(problem, config, out_dir, std::cout);
        if (*enumerate) return cmd_enumerate(problem, cap, out_dir, std::cout);
        if (*scan) {
            ProblemSpec scanned = problem;
            scanned.search = config;
            return cmd_scan_dates(scanned, reps > 0 ? std::optional<int>(reps) : std::nullopt, config.seed, out_dir,
                                  std::cout);
        }
        if (*plot)
            return cmd_plot(problem, solution,
                            results_path.empty() ? std::nullopt : std::optional<std::filesystem::path>(results_path),
                            rank, branch.empty() ? std::nullopt : std::optional<std::string>(branch), svg_path,
                            std::cout);
        if (*stats) return cmd_stats(problem, config, reps > 0 ? reps : problem.stats_reps, with_random, out_dir, std::cout);
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e);
    }
    return kUsage;
}
