#pragma once

// Subcommands of the mga command-line tool. Each returns a process exit code
// and writes human-readable output to `out`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mga/app/report.hpp"
#include "mga/baselines.hpp"
#include "mga/planner.hpp"
#include "mga/problem.hpp"
#include "mga/svg.hpp"

namespace mga::app {

enum Exit : int { kOk = 0, kUsage = 1, kEmpty = 2, kIo = 3 };

inline int exit_code(const Error &e) {
    switch (e.code()) {
    case ErrorCode::Io: return kIo;
    default: return kUsage;
    }
}

inline std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

inline void print_record(std::ostream &out, const ProblemSpec &problem, const Plan &plan, const TrajectoryRecord &r) {
    const auto &bodies = problem.model.catalog.bodies;
    out << "branch " << r.path_id << "  f_obj " << fmt("%.6f", r.f_obj) << "  v_inf " << fmt("%.6f", r.v_inf)
        << " km/s  v0 " << fmt("%.6f", r.v0) << " km/s  T " << fmt("%.4f", r.total_T) << " d  dv "
        << fmt("%.4f", r.total_dv) << " km/s\n";
    std::size_t from = problem.model.departure;
    for (std::size_t i = 0; i < r.durations.size(); ++i) {
        const std::size_t to = plan.sequence[i];
        out << "  leg " << i + 1 << ' ' << bodies[from].symbol << "->" << bodies[to].symbol << "  "
            << (i == 0 ? "v0 " + fmt("%.6f", r.lambdas[i]) + " km/s" : "rps " + fmt("%.3f", r.lambdas[i]) + " km")
            << "  T " << fmt("%.4f", r.durations[i]) << " d  dv " << fmt("%+.4f", r.dv[i]) << " km/s\n";
        from = to;
    }
}

/// Evaluates one solution vector (or the config's reference plan when `s`
/// is empty) and prints every branch of its trajectory tree.
inline int cmd_evaluate(const ProblemSpec &problem, const SolutionVector &given, std::ostream &out) {
    SolutionVector s = given;
    if (s.empty()) {
        if (!problem.golden) {
            out << "error: no solution vector given and the config has no golden plan\n";
            return kUsage;
        }
        s = problem.encode(*problem.golden);
    }
    Plan plan;
    try {
        plan = problem.decode(s);
    } catch (const Error &e) {
        out << "error: " << e.what() << "\n";
        return kUsage;
    }
    const PlanOutcome outcome = evaluate_plan(plan, problem.model);
    out << "problem " << problem.name << "\n"
        << "solution " << to_string(s) << "\n"
        << "sequence " << problem.sequence_name(plan) << "\n";
    if (!outcome.feasible) {
        out << "infeasible at leg " << outcome.l_u << "\n";
        return kEmpty;
    }
    out << "feasible  trajectories " << outcome.records.size() << "  f_obj " << fmt("%.6f", outcome.f_obj) << "\n";
    for (const TrajectoryRecord &r : outcome.records) print_record(out, problem, plan, r);
    return kOk;
}

/// One ACO-MGA run; writes results.json (deterministic), sequences.csv and
/// run_stats.json (timings) under out_dir.
inline int cmd_search(const ProblemSpec &problem, const SearchConfig &config, const std::filesystem::path &out_dir,
                      std::ostream &out) {
    const SearchResult res = search(problem, config);
    const auto per_seq = best_per_sequence(problem, res.feasible);
    write_json(out_dir / "results.json", search_results_json(problem, config, res));
    std::ostringstream csv;
    write_sequence_csv(csv, per_seq);
    write_text(out_dir / "sequences.csv", csv.str());
    write_json(out_dir / "run_stats.json", {{"seed", config.seed},
                                            {"n_eval", res.stats.n_eval},
                                            {"n_iter", res.stats.n_iter},
                                            {"wall_seconds", res.stats.wall_seconds}});

    out << "problem " << problem.name << "  seed " << config.seed << "  evaluations " << res.stats.n_eval
        << "  iterations " << res.stats.n_iter << "  feasible " << res.feasible.size() << "\n";
    if (res.feasible.empty()) {
        out << "no feasible solution\n";
        return kEmpty;
    }
    const FeasibleEntry &best = res.feasible.front();
    out << "best " << problem.sequence_name(problem.decode(best.s)) << "  f_obj " << fmt("%.6f", best.f_obj)
        << "  s " << to_string(best.s) << "\n";
    for (const SequenceBest &b : per_seq)
        out << "  " << b.sequence << "  f_obj " << fmt("%.6f", b.f_obj) << "  v_inf " << fmt("%.4f", b.v_inf)
            << "  dv " << fmt("%.4f", b.total_dv) << "  T " << fmt("%.2f", b.total_T) << "\n";
    return kOk;
}

inline int cmd_enumerate(const ProblemSpec &problem, double cap, const std::filesystem::path &out_dir,
                         std::ostream &out) {
    EnumerationReport rep;
    try {
        rep = enumerate_all(problem, cap);
    } catch (const Error &e) {
        if (e.code() != ErrorCode::SpaceTooLarge) throw;
        out << "refused: " << e.what() << "\n";
        return kUsage;
    }
    write_json(out_dir / "enumeration.json", enumeration_json(problem, rep));
    std::ostringstream all, seq;
    write_enumeration_csv(all, problem, rep);
    write_text(out_dir / "enumeration.csv", all.str());
    write_sequence_csv(seq, rep.per_sequence);
    write_text(out_dir / "sequences.csv", seq.str());

    out << "problem " << problem.name << "  raw " << static_cast<long long>(rep.raw_count) << "  canonical "
        << rep.canonical_count << "  feasible " << rep.n_feasible << "  leg solves " << rep.leg_solves << "  "
        << fmt("%.1f", rep.wall_seconds) << " s\n";
    if (!rep.best_rank) {
        out << "no feasible solution\n";
        return kEmpty;
    }
    const SolutionVector s = problem.unrank(*rep.best_rank);
    out << "best " << problem.sequence_name(problem.decode(s)) << "  f_obj " << fmt("%.6f", rep.best->f_obj)
        << "  s " << to_string(s) << "\n";
    for (const SequenceBest &b : rep.per_sequence)
        out << "  " << b.sequence << "  f_obj " << fmt("%.6f", b.f_obj) << "  v_inf " << fmt("%.4f", b.v_inf)
            << "  dv " << fmt("%.4f", b.total_dv) << "  T " << fmt("%.2f", b.total_T) << "\n";
    return kOk;
}

struct ScanRow {
    double t0{0.0};
    std::optional<FeasibleEntry> best;
    std::string sequence;
};

/// Best of `reps` seeded searches at every scan date.
inline std::vector<ScanRow> scan_dates(const ProblemSpec &problem, const ScanConfig &scan, std::uint64_t seed) {
    std::vector<ScanRow> rows;
    for (double t0 : scan.dates) {
        ProblemSpec at = problem;
        at.model.t0 = t0;
        ScanRow row;
        row.t0 = t0;
        std::vector<std::optional<FeasibleEntry>> bests(scan.reps);
        parallel_for(static_cast<std::size_t>(scan.reps), [&](std::size_t k) {
            SearchConfig cfg = problem.search;
            cfg.seed = seed + k;
            SearchResult res = search(at, cfg, 1);
            if (!res.feasible.empty()) bests[k] = res.feasible.front();
        });
        for (auto &b : bests)
            if (b && (!row.best || feasible_less(*b, *row.best))) row.best = b;
        if (row.best) row.sequence = at.sequence_name(at.decode(row.best->s));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline int cmd_scan_dates(const ProblemSpec &problem, std::optional<int> reps, std::uint64_t seed,
                          const std::filesystem::path &out_dir, std::ostream &out) {
    if (!problem.scan) {
        out << "error: config has no scan section\n";
        return kUsage;
    }
    ScanConfig scan = *problem.scan;
    if (reps) scan.reps = *reps;
    const auto rows = scan_dates(problem, scan, seed);

    std::ostringstream csv;
    csv << "t0,sequence,f_obj,s\n";
    json arr = json::array();
    out << "t0           sequence   f_obj\n";
    bool any = false;
    for (const ScanRow &r : rows) {
        if (r.best) {
            any = true;
            csv << fmt("%.4f", r.t0) << ',' << r.sequence << ',' << fmt("%.6f", r.best->f_obj) << ','
                << to_string(r.best->s) << "\n";
            arr.push_back({{"t0", r.t0}, {"sequence", r.sequence}, {"f_obj", r.best->f_obj}, {"s", r.best->s}});
            out << fmt("%-12.4f", r.t0) << ' ' << r.sequence << "  " << fmt("%.6f", r.best->f_obj) << "\n";
        } else {
            csv << fmt("%.4f", r.t0) << ",infeasible,,\n";
            arr.push_back({{"t0", r.t0}, {"sequence", "infeasible"}, {"f_obj", nullptr}, {"s", nullptr}});
            out << fmt("%-12.4f", r.t0) << " infeasible\n";
        }
    }
    write_text(out_dir / "scan.csv", csv.str());
    write_json(out_dir / "scan.json", {{"problem", problem.name}, {"reps", scan.reps}, {"seed", seed}, {"rows", arr}});
    return any ? kOk : kEmpty;
}

/// Renders one branch of a solution to SVG. The solution comes from `s`, or
/// from entry `rank` of a results file, or from the config's golden plan.
inline int cmd_plot(const ProblemSpec &problem, SolutionVector s, const std::optional<std::filesystem::path> &results,
                    std::size_t rank, const std::optional<std::string> &branch, const std::filesystem::path &svg_path,
                    std::ostream &out) {
    if (s.empty() && results) {
        const json j = read_json(*results);
        const auto &feasible = j.at("feasible");
        if (rank >= feasible.size()) {
            out << "error: results file has " << feasible.size() << " entries\n";
            return kUsage;
        }
        s = feasible.at(rank).at("s").get<SolutionVector>();
    }
    if (s.empty()) {
        if (!problem.golden) {
            out << "error: nothing to plot\n";
            return kUsage;
        }
        s = problem.encode(*problem.golden);
    }
    const Plan plan = problem.decode(s);
    const PlanOutcome outcome = evaluate_plan(plan, problem.model);
    if (!outcome.feasible) {
        out << "solution is infeasible at leg " << outcome.l_u << "\n";
        return kEmpty;
    }
    const TrajectoryRecord *record = &outcome.records.front();
    if (branch) {
        record = nullptr;
        for (const auto &r : outcome.records)
            if (r.path_id == *branch) record = &r;
        if (!record) {
            out << "error: no branch " << *branch << "\n";
            return kUsage;
        }
    }
    const std::string title = problem.name + " " + problem.sequence_name(plan) + " branch " + record->path_id;
    write_text(svg_path, render_svg(plot_geometry(problem.model, plan, *record), title));
    out << "wrote " << svg_path.string() << "\n";
    return kOk;
}

struct CampaignRun {
    std::uint64_t seed{0};
    bool feasible{false};
    double best{0.0};
    std::string sequence;
    long n_eval{0};
    double wall_seconds{0.0};
};

struct CampaignSummary {
    int runs{0};
    int feasible_runs{0};
    int successes{0}; // best below the success threshold
    double mean_best{0.0};
    double mean_evals{0.0};
    double mean_wall{0.0};
    std::vector<CampaignRun> detail;
};

inline CampaignSummary summarize(std::vector<CampaignRun> runs, double threshold) {
    CampaignSummary s;
    s.runs = static_cast<int>(runs.size());
    double sum_best = 0.0;
    for (const CampaignRun &r : runs) {
        s.mean_evals += static_cast<double>(r.n_eval);
        s.mean_wall += r.wall_seconds;
        if (!r.feasible) continue;
        ++s.feasible_runs;
        sum_best += r.best;
        if (r.best < threshold) ++s.successes;
    }
    if (s.runs) {
        s.mean_evals /= s.runs;
        s.mean_wall /= s.runs;
    }
    if (s.feasible_runs) s.mean_best = sum_best / s.feasible_runs;
    s.detail = std::move(runs);
    return s;
}

/// R independent ACO-MGA runs with seeds seed .. seed+R-1.
inline CampaignSummary aco_campaign(const ProblemSpec &problem, const SearchConfig &base, int reps) {
    std::vector<CampaignRun> runs(reps);
    parallel_for(static_cast<std::size_t>(reps), [&](std::size_t k) {
        SearchConfig cfg = base;
        cfg.seed = base.seed + k;
        const SearchResult res = search(problem, cfg, 1);
        CampaignRun &r = runs[k];
        r.seed = cfg.seed;
        r.n_eval = res.stats.n_eval;
        r.wall_seconds = res.stats.wall_seconds;
        if (!res.feasible.empty()) {
            r.feasible = true;
            r.best = res.feasible.front().f_obj;
            r.sequence = problem.sequence_name(problem.decode(res.feasible.front().s));
        }
    });
    return summarize(std::move(runs), problem.success_threshold);
}

/// Random-search runs paired with the ACO campaign (same seeds and budget).
inline CampaignSummary random_campaign(const ProblemSpec &problem, const SearchConfig &base, int reps) {
    std::vector<CampaignRun> runs(reps);
    parallel_for(static_cast<std::size_t>(reps), [&](std::size_t k) {
        const auto started = std::chrono::steady_clock::now();
        Rng rng = child_rng(base.seed + k, 0x72616e64ULL);
        const RandomSearchResult res = random_search(problem, base.n_eval_max, rng);
        CampaignRun &r = runs[k];
        r.seed = base.seed + k;
        r.n_eval = res.n_eval;
        r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        if (res.best) {
            r.feasible = true;
            r.best = res.best->f_obj;
            r.sequence = problem.sequence_name(problem.decode(res.best->s));
        }
    });
    return summarize(std::move(runs), problem.success_threshold);
}

inline json campaign_json(const CampaignSummary &s) {
    json runs = json::array();
    for (const CampaignRun &r : s.detail)
        runs.push_back({{"seed", r.seed}, {"feasible", r.feasible}, {"best", r.feasible ? json(r.best) : json(nullptr)},
                        {"sequence", r.sequence}, {"n_eval", r.n_eval}, {"wall_seconds", r.wall_seconds}});
    return {{"runs", s.runs},           {"feasible_runs", s.feasible_runs}, {"successes", s.successes},
            {"mean_best", s.mean_best}, {"mean_evals", s.mean_evals},       {"mean_wall_seconds", s.mean_wall},
            {"detail", runs}};
}

inline void print_campaign(std::ostream &out, const std::string &label, const CampaignSummary &s, double threshold) {
    out << label << ": runs " << s.runs << "  feasible " << fmt("%.0f", 100.0 * s.feasible_runs / std::max(1, s.runs))
        << "%  below " << fmt("%g", threshold) << " " << fmt("%.0f", 100.0 * s.successes / std::max(1, s.runs))
        << "%  mean best " << fmt("%.4f", s.mean_best) << "  mean evals " << fmt("%.1f", s.mean_evals)
        << "  mean time " << fmt("%.2f", s.mean_wall) << " s\n";
}

inline int cmd_stats(const ProblemSpec &problem, const SearchConfig &config, int reps, bool with_random,
                     const std::filesystem::path &out_dir, std::ostream &out) {
    const CampaignSummary aco = aco_campaign(problem, config, reps);
    json j = {{"problem", problem.name},
              {"seed", config.seed},
              {"reps", reps},
              {"max_evals", config.n_eval_max},
              {"success_threshold", problem.success_threshold},
              {"aco", campaign_json(aco)}};
    print_campaign(out, "aco-mga", aco, problem.success_threshold);
    if (with_random) {
        const CampaignSummary rnd = random_campaign(problem, config, reps);
        j["random"] = campaign_json(rnd);
        print_campaign(out, "random", rnd, problem.success_threshold);
    }
    write_json(out_dir / "stats.json", j);
    return aco.feasible_runs > 0 ? kOk : kEmpty;
}

} // namespace mga::app
