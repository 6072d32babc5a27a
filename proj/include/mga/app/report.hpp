#pragma once

// JSON / CSV views of records, search results and enumeration reports.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mga/baselines.hpp"
#include "mga/planner.hpp"
#include "mga/problem.hpp"

namespace mga::app {

using nlohmann::json;

inline json leg_params_json(const LegParams &p) {
    return {{"m_dsm", p.m_dsm}, {"n_rev1", p.n_rev1}, {"n_rev2", p.n_rev2}, {"f_pa", p.f_pa}, {"f_12", p.f_12}};
}

inline json record_json(const TrajectoryRecord &r) {
    return {{"branch", r.path_id},   {"f_obj", r.f_obj},       {"v_inf", r.v_inf},     {"v0", r.v0},
            {"total_T", r.total_T},  {"total_dv", r.total_dv}, {"lambdas", r.lambdas}, {"durations", r.durations},
            {"dv", r.dv}};
}

inline json plan_json(const ProblemSpec &problem, const Plan &plan) {
    json targets = json::array(), types = json::array();
    for (std::size_t b : plan.sequence) targets.push_back(problem.model.catalog.bodies[b].name);
    for (const LegParams &p : plan.legs) types.push_back(leg_params_json(p));
    return {{"sequence", problem.sequence_name(plan)}, {"targets", targets}, {"types", types}};
}

inline json feasible_entry_json(const ProblemSpec &problem, const FeasibleEntry &e) {
    json j = plan_json(problem, problem.decode(e.s));
    j["s"] = e.s;
    j["f_obj"] = e.f_obj;
    j["best"] = record_json(e.best);
    return j;
}

/// Search output without timings, so equal seeds give identical files.
inline json search_results_json(const ProblemSpec &problem, const SearchConfig &config, const SearchResult &res) {
    json feasible = json::array();
    for (const FeasibleEntry &e : res.feasible) feasible.push_back(feasible_entry_json(problem, e));
    json taboo = json::array();
    for (std::size_t i = 1; i <= res.taboo.n_legs(); ++i) taboo.push_back(res.taboo.size(i));
    return {{"problem", problem.name},
            {"seed", config.seed},
            {"max_evals", config.n_eval_max},
            {"n_eval", res.stats.n_eval},
            {"n_iter", res.stats.n_iter},
            {"n_constructed", res.stats.n_constructed},
            {"n_discarded", res.stats.n_discarded},
            {"n_repeats", res.stats.n_repeats},
            {"taboo_sizes", taboo},
            {"feasible", feasible}};
}

/// Best entry of every sequence present in a sorted feasible list.
inline std::vector<SequenceBest> best_per_sequence(const ProblemSpec &problem, const std::vector<FeasibleEntry> &sorted) {
    std::vector<SequenceBest> out;
    for (const FeasibleEntry &e : sorted) {
        const std::string seq = problem.sequence_name(problem.decode(e.s));
        const bool seen = std::any_of(out.begin(), out.end(), [&](const SequenceBest &b) { return b.sequence == seq; });
        if (!seen) out.push_back({seq, e.s, e.f_obj, e.best.v_inf, e.best.total_dv, e.best.total_T});
    }
    return out;
}

inline void write_sequence_csv(std::ostream &out, const std::vector<SequenceBest> &rows) {
    out << "sequence,f_obj,v_inf_kms,dv_kms,tof_days,s\n";
    char buf[160];
    for (const SequenceBest &b : rows) {
        std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.4f,%.4f,", b.sequence.c_str(), b.f_obj, b.v_inf, b.total_dv,
                      b.total_T);
        out << buf << to_string(b.s) << "\n";
    }
}

inline json sequence_best_json(const std::vector<SequenceBest> &rows) {
    json arr = json::array();
    for (const SequenceBest &b : rows)
        arr.push_back({{"sequence", b.sequence}, {"s", b.s}, {"f_obj", b.f_obj}, {"v_inf", b.v_inf},
                       {"total_dv", b.total_dv}, {"total_T", b.total_T}});
    return arr;
}

inline json enumeration_json(const ProblemSpec &problem, const EnumerationReport &rep) {
    json j = {{"problem", problem.name},
              {"raw_count", rep.raw_count},
              {"canonical_count", rep.canonical_count},
              {"n_feasible", rep.n_feasible},
              {"leg_solves", rep.leg_solves},
              {"wall_seconds", rep.wall_seconds},
              {"per_sequence", sequence_best_json(rep.per_sequence)}};
    if (rep.best_rank) {
        const SolutionVector s = problem.unrank(*rep.best_rank);
        json best = plan_json(problem, problem.decode(s));
        best["s"] = s;
        best["rank"] = *rep.best_rank;
        best["record"] = record_json(*rep.best);
        j["best"] = best;
    } else {
        j["best"] = nullptr;
    }
    std::vector<std::uint64_t> failed(problem.n_legs() + 1, 0);
    for (std::uint8_t l : rep.l_u)
        if (l) ++failed[l];
    json by_leg = json::array();
    for (std::size_t i = 1; i < failed.size(); ++i) by_leg.push_back(failed[i]);
    j["infeasible_at_leg"] = by_leg;
    return j;
}

inline void write_enumeration_csv(std::ostream &out, const ProblemSpec &problem, const EnumerationReport &rep) {
    out << "rank,s,sequence,feasible,l_u,f_obj\n";
    char buf[64];
    for (std::uint64_t r = 0; r < rep.canonical_count; ++r) {
        const SolutionVector s = problem.unrank(r);
        out << r << ',' << to_string(s) << ',' << problem.sequence_name(problem.decode(s)) << ',';
        if (rep.l_u[r]) {
            out << "0," << static_cast<int>(rep.l_u[r]) << ",\n";
        } else {
            std::snprintf(buf, sizeof buf, "%.9g", rep.f_obj[r]);
            out << "1,0," << buf << "\n";
        }
    }
}

inline void write_text(const std::filesystem::path &path, const std::string &text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

inline void write_json(const std::filesystem::path &path, const json &j) { write_text(path, j.dump(2) + "\n"); }

inline json read_json(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception &ex) {
        throw Error(ErrorCode::InvalidInput, path.string() + ": " + ex.what());
    }
}

} // namespace mga::app
