#pragma once

// Reference searches over the canonical solution space: exhaustive
// enumeration and uniform random sampling without replacement.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mga/legs.hpp"
#include "mga/parallel.hpp"
#include "mga/planner.hpp"
#include "mga/problem.hpp"
#include "mga/rng.hpp"

namespace mga {

inline constexpr double kDefaultEnumerationCap = 1e7;

struct SequenceBest {
    std::string sequence;
    SolutionVector s;
    double f_obj{0.0};
    double v_inf{0.0};
    double total_dv{0.0};
    double total_T{0.0};
};

struct EnumerationReport {
    double raw_count{0.0};
    std::uint64_t canonical_count{0};
    // Per canonical rank: f_obj of feasible solutions (NaN otherwise) and the
    // failing leg l_u (0 when feasible).
    std::vector<double> f_obj;
    std::vector<std::uint8_t> l_u;
    std::uint64_t n_feasible{0};
    std::optional<std::uint64_t> best_rank;
    std::optional<TrajectoryRecord> best;
    std::vector<SequenceBest> per_sequence; // ascending f_obj
    long leg_solves{0};                     // trajectory-tree extensions performed
    double wall_seconds{0.0};
};

/// Evaluates every canonical solution. Solutions sharing a prefix share its
/// partial trajectory tree, so each distinct prefix is scheduled once; the
/// outcomes equal evaluate_plan on every vector.
inline EnumerationReport enumerate_all(const ProblemSpec &problem, double cap = kDefaultEnumerationCap,
                                       unsigned threads = default_threads()) {
    const double count = problem.canonical_count();
    if (count > cap)
        throw Error(ErrorCode::SpaceTooLarge, "space has " + std::to_string(static_cast<long long>(count)) +
                                                  " canonical solutions, cap is " +
                                                  std::to_string(static_cast<long long>(cap)));
    const auto started = std::chrono::steady_clock::now();
    const std::size_t n = problem.n_legs();

    EnumerationReport rep;
    rep.raw_count = problem.raw_count();
    rep.canonical_count = static_cast<std::uint64_t>(count);
    rep.f_obj.assign(rep.canonical_count, std::numeric_limits<double>::quiet_NaN());
    rep.l_u.assign(rep.canonical_count, 0);

    // span[i] = number of canonical completions below one digit of leg i
    std::vector<std::uint64_t> span(n, 1);
    for (std::size_t i = n; i-- > 1;) span[i - 1] = span[i] * problem.leg_radix(i);

    auto leg_choice = [&](std::size_t i, std::size_t digit) {
        const auto &rows = problem.tables[i].canonical_rows();
        return std::pair{problem.legs[i].targets[digit / rows.size()], problem.tables[i].params(rows[digit % rows.size()])};
    };

    struct Task {
        std::uint64_t base;
        std::vector<ArrivalCondition> nodes; // tree after the leg that produced the task
        std::size_t next_leg;
    };
    std::vector<long> solves_by_task;
    std::vector<std::vector<std::pair<std::uint64_t, TrajectoryRecord>>> bests_by_task;

    // Walks the remaining legs depth first; writes outcomes of [base, base + span).
    auto walk = [&](auto &&self, std::size_t i, const std::vector<ArrivalCondition> &nodes, std::uint64_t base,
                    long &solves, std::vector<std::pair<std::uint64_t, TrajectoryRecord>> &bests) -> void {
        for (std::size_t d = 0; d < problem.leg_radix(i); ++d) {
            const auto [target, params] = leg_choice(i, d);
            const std::uint64_t lo = base + d * span[i];
            std::vector<ArrivalCondition> next = extend_tree(problem.model, nodes, i, target, params);
            ++solves;
            if (next.empty()) {
                std::fill(rep.l_u.begin() + lo, rep.l_u.begin() + lo + span[i], static_cast<std::uint8_t>(i + 1));
                continue;
            }
            if (i + 1 == n) {
                PlanOutcome outcome = finish_plan(problem.model, next);
                rep.f_obj[lo] = outcome.f_obj;
                bests.emplace_back(lo, std::move(outcome.records.front()));
                continue;
            }
            self(self, i + 1, next, lo, solves, bests);
        }
    };

    // Split the first legs into independent tasks.
    std::vector<Task> tasks{{0, {}, 0}};
    long head_solves = 0;
    const std::size_t want = 4 * std::max(1u, threads);
    while (tasks.size() < want && tasks.front().next_leg + 1 < n) {
        std::vector<Task> split;
        for (Task &t : tasks) {
            const std::size_t i = t.next_leg;
            for (std::size_t d = 0; d < problem.leg_radix(i); ++d) {
                const auto [target, params] = leg_choice(i, d);
                const std::uint64_t lo = t.base + d * span[i];
                std::vector<ArrivalCondition> next = extend_tree(problem.model, t.nodes, i, target, params);
                ++head_solves;
                if (next.empty()) {
                    std::fill(rep.l_u.begin() + lo, rep.l_u.begin() + lo + span[i], static_cast<std::uint8_t>(i + 1));
                    continue;
                }
                split.push_back({lo, std::move(next), i + 1});
            }
        }
        tasks = std::move(split);
        if (tasks.empty()) break;
    }

    solves_by_task.assign(tasks.size(), 0);
    bests_by_task.resize(tasks.size());
    parallel_for(
        tasks.size(),
        [&](std::size_t k) { walk(walk, tasks[k].next_leg, tasks[k].nodes, tasks[k].base, solves_by_task[k], bests_by_task[k]); },
        threads);

    rep.leg_solves = head_solves;
    for (long s : solves_by_task) rep.leg_solves += s;

    // Merge in rank order so the report does not depend on scheduling.
    std::map<std::string, SequenceBest> by_sequence;
    for (auto &bests : bests_by_task) {
        for (auto &[rank, record] : bests) {
            ++rep.n_feasible;
            const double f = rep.f_obj[rank];
            if (!rep.best_rank || f < rep.f_obj[*rep.best_rank] ||
                (f == rep.f_obj[*rep.best_rank] && rank < *rep.best_rank)) {
                rep.best_rank = rank;
                rep.best = record;
            }
            const SolutionVector s = problem.unrank(rank);
            const std::string seq = problem.sequence_name(problem.decode(s));
            auto it = by_sequence.find(seq);
            if (it == by_sequence.end() || f < it->second.f_obj)
                by_sequence[seq] = {seq, s, f, record.v_inf, record.total_dv, record.total_T};
        }
    }
    for (auto &[name, best] : by_sequence) rep.per_sequence.push_back(best);
    std::sort(rep.per_sequence.begin(), rep.per_sequence.end(), [](const SequenceBest &l, const SequenceBest &r) {
        return l.f_obj != r.f_obj ? l.f_obj < r.f_obj : l.sequence < r.sequence;
    });
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return rep;
}

struct RandomSearchResult {
    std::optional<FeasibleEntry> best;
    long n_eval{0};
    long n_feasible{0};
};

/// Evaluates `budget` distinct canonical solutions drawn uniformly (a sparse
/// Fisher-Yates shuffle over the ranks) and keeps the best.
inline RandomSearchResult random_search(const ProblemSpec &problem, long budget, Rng &rng) {
    const auto total = static_cast<std::uint64_t>(problem.canonical_count());
    std::unordered_map<std::uint64_t, std::uint64_t> swapped;
    auto slot = [&](std::uint64_t k) {
        const auto it = swapped.find(k);
        return it == swapped.end() ? k : it->second;
    };
    RandomSearchResult out;
    for (std::uint64_t drawn = 0; drawn < total && out.n_eval < budget; ++drawn) {
        const std::uint64_t j = drawn + uniform_index(rng, total - drawn);
        const std::uint64_t rank = slot(j);
        swapped[j] = slot(drawn);
        const SolutionVector s = problem.unrank(rank);
        Evaluation e = evaluate_solution(problem, s);
        ++out.n_eval;
        if (!e.feasible) continue;
        ++out.n_feasible;
        FeasibleEntry entry{s, e.f_obj, std::move(*e.best)};
        if (!out.best || feasible_less(entry, *out.best)) out.best = std::move(entry);
    }
    return out;
}

} // namespace mga
