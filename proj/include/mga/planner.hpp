#pragma once

// ACO-MGA: ants build solution vectors leg by leg, biased by pheromone that is
// recomputed from the feasible list and zeroed by the taboo lists.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "mga/legs.hpp"
#include "mga/parallel.hpp"
#include "mga/problem.hpp"
#include "mga/rng.hpp"

namespace mga {

/// Index drawn with probability tau_j / sum(tau); empty if sum(tau) == 0.
inline std::optional<std::size_t> roulette_select(const std::vector<double> &tau, Rng &rng) {
    double total = 0.0;
    for (double t : tau) total += t;
    if (!(total > 0.0)) return std::nullopt;
    const double u = uniform01(rng) * total;
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t j = 0; j < tau.size(); ++j) {
        if (tau[j] <= 0.0) continue;
        acc += tau[j];
        last = j;
        if (u < acc) return j;
    }
    return last; // u landed on the rounding gap at the top
}

/// Result of evaluating one solution, reduced to what the search keeps.
struct Evaluation {
    bool feasible{false};
    int l_u{0};
    double f_obj{0.0};
    std::optional<TrajectoryRecord> best;
    std::size_t n_records{0};
};

inline Evaluation reduce(PlanOutcome outcome) {
    Evaluation e;
    e.feasible = outcome.feasible;
    e.l_u = outcome.l_u;
    e.f_obj = outcome.f_obj;
    e.n_records = outcome.records.size();
    if (outcome.feasible) e.best = std::move(outcome.records.front());
    return e;
}

inline Evaluation evaluate_solution(const ProblemSpec &problem, const SolutionVector &s) {
    return reduce(evaluate_plan(problem.decode(s), problem.model));
}

struct FeasibleEntry {
    SolutionVector s;
    double f_obj{0.0};
    TrajectoryRecord best;
};

/// Per-leg stores of partial solutions known to fail at that leg. Prefixes are
/// kept in canonical form, so rows that differ only in unused parameters share
/// one entry.
class TabooLists {
  public:
    explicit TabooLists(std::size_t n_legs = 0) : lists_(n_legs) {}

    // leg is 1-based; prefix holds 2*leg entries
    bool contains(std::size_t leg, const SolutionVector &prefix) const { return lists_[leg - 1].count(prefix) > 0; }
    bool add(std::size_t leg, SolutionVector prefix) { return lists_[leg - 1].insert(std::move(prefix)).second; }
    std::size_t size(std::size_t leg) const { return lists_[leg - 1].size(); }
    std::size_t n_legs() const { return lists_.size(); }
    const std::set<SolutionVector> &list(std::size_t leg) const { return lists_[leg - 1]; }

  private:
    std::vector<std::set<SolutionVector>> lists_;
};

struct SearchLists {
    std::vector<FeasibleEntry> feasible;
    std::set<SolutionVector> feasible_keys;
    TabooLists taboo;

    explicit SearchLists(std::size_t n_legs = 0) : taboo(n_legs) {}
};

/// Files an evaluated solution: feasible ones join the feasible list (once per
/// vector), infeasible ones add their prefix up to leg l_u to that taboo list.
inline void record_result(const ProblemSpec &problem, const SolutionVector &s, const Evaluation &e,
                          SearchLists &lists) {
    if (e.feasible) {
        if (lists.feasible_keys.insert(s).second) lists.feasible.push_back({s, e.f_obj, *e.best});
        return;
    }
    const std::size_t leg = static_cast<std::size_t>(e.l_u);
    if (leg < 1 || leg > problem.n_legs()) return;
    SolutionVector prefix = problem.canonicalize(s);
    prefix.resize(2 * leg);
    lists.taboo.add(leg, std::move(prefix));
}

namespace detail {

inline double deposit(double w, double f_obj) {
    return w / std::max(f_obj, 1e-12);
}

} // namespace detail

/// Pheromone over the targets of leg i (0-based) for a partial sequence whose
/// odd entries are set for legs < i. Every feasible entry with the same
/// sequence so far and target j at leg i adds w / f_obj to tau_j.
inline std::vector<double> sequence_pheromone(const ProblemSpec &problem, const SearchLists &lists,
                                              const SolutionVector &s, std::size_t i, double w) {
    std::vector<double> tau(problem.legs[i].targets.size(), 1.0);
    if (w == 0.0) return tau;
    for (const FeasibleEntry &l : lists.feasible) {
        bool match = true;
        for (std::size_t k = 0; k < i && match; ++k) match = l.s[2 * k] == s[2 * k];
        if (match) tau[l.s[2 * i] - 1] += detail::deposit(w, l.f_obj);
    }
    return tau;
}

/// Pheromone over the type rows of leg i (0-based) given the full sequence
/// and types of legs < i. Rows whose partial solution is taboo get zero.
inline std::vector<double> type_pheromone(const ProblemSpec &problem, const SearchLists &lists,
                                          const SolutionVector &s, std::size_t i, double w) {
    const TypeTable &table = problem.tables[i];
    std::vector<double> tau(table.size(), 1.0);
    if (w != 0.0) {
        for (const FeasibleEntry &l : lists.feasible) {
            bool match = true;
            for (std::size_t k = 0; k < problem.n_legs() && match; ++k) match = l.s[2 * k] == s[2 * k];
            for (std::size_t k = 0; k < i && match; ++k) match = l.s[2 * k + 1] == s[2 * k + 1];
            if (match) tau[l.s[2 * i + 1] - 1] += detail::deposit(w, l.f_obj);
        }
    }
    if (lists.taboo.size(i + 1) > 0) {
        SolutionVector prefix(s.begin(), s.begin() + 2 * i + 2);
        for (std::size_t k = 0; k < i; ++k)
            prefix[2 * k + 1] = static_cast<int>(problem.tables[k].canonical_of(prefix[2 * k + 1] - 1)) + 1;
        for (std::size_t r = 0; r < table.size(); ++r) {
            prefix[2 * i + 1] = static_cast<int>(table.canonical_of(r)) + 1;
            if (lists.taboo.contains(i + 1, prefix)) tau[r] = 0.0;
        }
    }
    return tau;
}

/// Fills the odd entries of a fresh solution vector (even entries stay 0).
inline SolutionVector generate_sequence(const ProblemSpec &problem, const SearchLists &lists, double w_planet,
                                        Rng &rng) {
    SolutionVector s(2 * problem.n_legs(), 0);
    for (std::size_t i = 0; i < problem.n_legs(); ++i)
        s[2 * i] = static_cast<int>(*roulette_select(sequence_pheromone(problem, lists, s, i, w_planet), rng)) + 1;
    return s;
}

/// Fills the even entries; empty when some leg has no admissible type left
/// (the ant is discarded).
inline std::optional<SolutionVector> generate_types(const ProblemSpec &problem, const SearchLists &lists,
                                                    SolutionVector s, double w_type, Rng &rng) {
    for (std::size_t i = 0; i < problem.n_legs(); ++i) {
        const auto pick = roulette_select(type_pheromone(problem, lists, s, i, w_type), rng);
        if (!pick) return std::nullopt;
        s[2 * i + 1] = static_cast<int>(*pick) + 1;
    }
    return s;
}

struct SearchStats {
    long n_eval{0};
    long n_iter{0};
    long n_constructed{0};
    long n_discarded{0};
    long n_repeats{0}; // constructed vectors already evaluated earlier
    double wall_seconds{0.0};
};

struct SearchResult {
    std::vector<FeasibleEntry> feasible; // sorted by f_obj, total_T, s
    TabooLists taboo;
    SearchStats stats;
};

inline bool feasible_less(const FeasibleEntry &l, const FeasibleEntry &r) {
    if (l.f_obj != r.f_obj) return l.f_obj < r.f_obj;
    if (l.best.total_T != r.best.total_T) return l.best.total_T < r.best.total_T;
    return l.s < r.s;
}

/// Runs ACO-MGA. Each step runs its iterations with w_planet = w_type =
/// w_bar * f_obj_ref. Within an iteration the ants build against the lists as
/// they stood at its start; the lists are updated once all ants are evaluated.
/// Vectors equivalent to an already evaluated one are answered from a cache
/// and do not count as evaluations.
inline SearchResult search(const ProblemSpec &problem, const SearchConfig &config,
                           unsigned threads = default_threads()) {
    const auto started = std::chrono::steady_clock::now();
    SearchLists lists(problem.n_legs());
    std::map<SolutionVector, Evaluation> cache; // canonical vector -> outcome
    SearchStats stats;

    std::uint64_t global_iter = 0;
    bool exhausted = false;
    for (const auto &[n_iter, w_bar] : config.steps) {
        const double w = w_bar * config.f_obj_ref;
        for (int it = 0; it < n_iter && !exhausted; ++it) {
            if (stats.n_eval >= config.n_eval_max) {
                exhausted = true;
                break;
            }
            std::vector<std::optional<SolutionVector>> built(config.ants);
            for (int k = 0; k < config.ants; ++k) {
                Rng rng = child_rng(config.seed, global_iter, static_cast<std::uint64_t>(k));
                built[k] = generate_types(problem, lists, generate_sequence(problem, lists, w, rng), w, rng);
            }
            ++global_iter;
            ++stats.n_iter;

            // New canonical vectors in ant order, within the remaining budget.
            std::vector<SolutionVector> fresh;
            std::vector<bool> admitted(config.ants, false);
            for (int k = 0; k < config.ants; ++k) {
                ++stats.n_constructed;
                if (!built[k]) {
                    ++stats.n_discarded;
                    continue;
                }
                const SolutionVector key = problem.canonicalize(*built[k]);
                if (cache.count(key)) {
                    ++stats.n_repeats;
                    admitted[k] = true;
                    continue;
                }
                if (std::find(fresh.begin(), fresh.end(), key) != fresh.end()) {
                    ++stats.n_repeats;
                    admitted[k] = true;
                    continue;
                }
                if (stats.n_eval + static_cast<long>(fresh.size()) >= config.n_eval_max) continue;
                fresh.push_back(key);
                admitted[k] = true;
            }
            std::vector<Evaluation> results(fresh.size());
            parallel_for(
                fresh.size(), [&](std::size_t q) { results[q] = evaluate_solution(problem, fresh[q]); }, threads);
            for (std::size_t q = 0; q < fresh.size(); ++q) cache.emplace(fresh[q], std::move(results[q]));
            stats.n_eval += static_cast<long>(fresh.size());

            for (int k = 0; k < config.ants; ++k)
                if (admitted[k]) record_result(problem, *built[k], cache.at(problem.canonicalize(*built[k])), lists);
        }
        if (exhausted) break;
    }

    SearchResult out;
    out.feasible = std::move(lists.feasible);
    std::sort(out.feasible.begin(), out.feasible.end(), feasible_less);
    out.taboo = std::move(lists.taboo);
    stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    out.stats = stats;
    return out;
}

} // namespace mga
