#pragma once

// Discrete search space of a trajectory planning problem: per-leg target
// lists, type-of-transfer tables, the integer solution vector and the config
// file that defines all of it.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mga/core.hpp"
#include "mga/ephem.hpp"
#include "mga/legs.hpp"

namespace mga {

/// Candidate values of the five transfer parameters at one leg. An empty set
/// means the parameter is unused at that leg and reads as 0.
struct LegSpec {
    std::vector<std::size_t> targets; // catalog indices, q_P
    std::vector<double> m_dsm;        // km/s
    std::vector<int> n_rev1;
    std::vector<int> n_rev2;
    std::vector<int> f_pa;
    std::vector<int> f_12;
};

/// All combinations of indices into the five parameter sets, last index
/// fastest. Index tuples are 1-based; 0 marks an unused (empty) set.
class TypeTable {
  public:
    TypeTable() = default;

    explicit TypeTable(const LegSpec &spec) {
        sets_ = {spec.m_dsm.size(), spec.n_rev1.size(), spec.n_rev2.size(), spec.f_pa.size(), spec.f_12.size()};
        std::size_t n = 1;
        for (std::size_t c : sets_) n *= std::max<std::size_t>(c, 1);
        rows_.reserve(n);
        params_.reserve(n);
        for (std::size_t r = 0; r < n; ++r) {
            std::array<int, 5> idx{};
            std::size_t rest = r;
            for (int k = 4; k >= 0; --k) {
                const std::size_t card = std::max<std::size_t>(sets_[k], 1);
                idx[k] = sets_[k] == 0 ? 0 : static_cast<int>(rest % card) + 1;
                rest /= card;
            }
            rows_.push_back(idx);
            LegParams p;
            p.m_dsm = idx[0] ? spec.m_dsm[idx[0] - 1] : 0.0;
            p.n_rev1 = idx[1] ? spec.n_rev1[idx[1] - 1] : 0;
            p.n_rev2 = idx[2] ? spec.n_rev2[idx[2] - 1] : 0;
            p.f_pa = idx[3] ? spec.f_pa[idx[3] - 1] : 0;
            p.f_12 = idx[4] ? spec.f_12[idx[4] - 1] : 0;
            params_.push_back(p);
        }
        // Canonical representative: first row decoding to the same canonical
        // parameters.
        canonical_of_.resize(n);
        for (std::size_t r = 0; r < n; ++r) {
            canonical_of_[r] = r;
            for (std::size_t q = 0; q < r; ++q) {
                if (params_[q].canonical() == params_[r].canonical()) {
                    canonical_of_[r] = canonical_of_[q];
                    break;
                }
            }
            if (canonical_of_[r] == r) canonical_rows_.push_back(r);
        }
    }

    std::size_t size() const { return rows_.size(); }
    const std::array<int, 5> &row(std::size_t r) const { return rows_[r]; }
    const LegParams &params(std::size_t r) const { return params_[r]; }
    std::size_t canonical_of(std::size_t r) const { return canonical_of_[r]; }
    const std::vector<std::size_t> &canonical_rows() const { return canonical_rows_; }

  private:
    std::array<std::size_t, 5> sets_{};
    std::vector<std::array<int, 5>> rows_;
    std::vector<LegParams> params_;
    std::vector<std::size_t> canonical_of_;
    std::vector<std::size_t> canonical_rows_;
};

/// 2 n_p positive integers: (target index, type row) per leg, both 1-based.
using SolutionVector = std::vector<int>;

inline std::string to_string(const SolutionVector &s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(s[i]);
    }
    return out;
}

struct SearchConfig {
    int ants{10};
    std::vector<std::pair<int, double>> steps; // (iterations, w_bar)
    double f_obj_ref{1.0};
    long n_eval_max{1000};
    std::uint64_t seed{1};
};

struct ScanConfig {
    std::vector<double> dates; // days MJD2000
    int reps{1};
};

/// A problem as read from a config file: the trajectory model inputs, the
/// discrete space and the run settings that travel with it.
struct ProblemSpec {
    std::string name;
    TrajectoryProblem model;
    std::vector<LegSpec> legs;
    std::vector<TypeTable> tables;

    SearchConfig search;
    int stats_reps{100};
    double success_threshold{0.0};
    std::optional<Plan> golden;
    std::optional<ScanConfig> scan;

    std::size_t n_legs() const { return legs.size(); }

    void build_tables() {
        tables.clear();
        for (const LegSpec &leg : legs) tables.emplace_back(leg);
    }

    void validate() const {
        if (legs.empty()) throw Error(ErrorCode::InvalidInput, "problem has no legs");
        if (tables.size() != legs.size()) throw Error(ErrorCode::InvalidInput, "type tables not built");
        for (std::size_t i = 0; i < legs.size(); ++i) {
            const LegSpec &leg = legs[i];
            const std::string where = "leg " + std::to_string(i + 1);
            if (leg.targets.empty()) throw Error(ErrorCode::InvalidInput, where + ": no target bodies");
            for (std::size_t t : leg.targets)
                if (t >= model.catalog.bodies.size()) throw Error(ErrorCode::UnknownBody, where);
            if (leg.n_rev2.empty() || leg.f_12.empty())
                throw Error(ErrorCode::InvalidInput, where + ": n_rev2 and f_12 sets must not be empty");
            const bool dsm_possible = std::any_of(leg.m_dsm.begin(), leg.m_dsm.end(), [](double m) { return m != 0.0; });
            if (dsm_possible && (leg.n_rev1.empty() || leg.f_pa.empty()))
                throw Error(ErrorCode::InvalidInput, where + ": DSM values need n_rev1 and f_pa sets");
            auto bad_flag = [](int f) { return f != 0 && f != 1; };
            if (std::any_of(leg.f_pa.begin(), leg.f_pa.end(), bad_flag) ||
                std::any_of(leg.f_12.begin(), leg.f_12.end(), bad_flag))
                throw Error(ErrorCode::InvalidInput, where + ": flags must be 0 or 1");
            auto negative = [](int n) { return n < 0; };
            if (std::any_of(leg.n_rev1.begin(), leg.n_rev1.end(), negative) ||
                std::any_of(leg.n_rev2.begin(), leg.n_rev2.end(), negative))
                throw Error(ErrorCode::InvalidInput, where + ": revolution counts must be >= 0");
        }
        if (!(model.v0_min > 0.0 && model.v0_min < model.v0_max))
            throw Error(ErrorCode::InvalidInput, "need 0 < v0_min < v0_max");
    }

    // ---- coding ----------------------------------------------------------

    Plan decode(const SolutionVector &s) const {
        if (s.size() != 2 * legs.size())
            throw Error(ErrorCode::MalformedSolution, "expected " + std::to_string(2 * legs.size()) + " entries");
        Plan plan;
        for (std::size_t i = 0; i < legs.size(); ++i) {
            const int p = s[2 * i];
            const int t = s[2 * i + 1];
            if (p < 1 || static_cast<std::size_t>(p) > legs[i].targets.size() || t < 1 ||
                static_cast<std::size_t>(t) > tables[i].size())
                throw Error(ErrorCode::MalformedSolution, "entry out of range at leg " + std::to_string(i + 1));
            plan.sequence.push_back(legs[i].targets[p - 1]);
            plan.legs.push_back(tables[i].params(t - 1));
        }
        return plan;
    }

    /// Inverse of decode for plans drawn from this space.
    SolutionVector encode(const Plan &plan) const {
        if (plan.sequence.size() != legs.size() || plan.legs.size() != legs.size())
            throw Error(ErrorCode::MalformedSolution, "plan length differs from the problem");
        SolutionVector s;
        for (std::size_t i = 0; i < legs.size(); ++i) {
            const auto &targets = legs[i].targets;
            const auto it = std::find(targets.begin(), targets.end(), plan.sequence[i]);
            if (it == targets.end())
                throw Error(ErrorCode::MalformedSolution, "target not allowed at leg " + std::to_string(i + 1));
            s.push_back(static_cast<int>(it - targets.begin()) + 1);
            int row = 0;
            for (std::size_t r = 0; r < tables[i].size() && !row; ++r)
                if (tables[i].params(r) == plan.legs[i]) row = static_cast<int>(r) + 1;
            // fall back to a row that is equivalent once unused parameters are dropped
            for (std::size_t r = 0; r < tables[i].size() && !row; ++r)
                if (tables[i].params(r).canonical() == plan.legs[i].canonical()) row = static_cast<int>(r) + 1;
            if (!row) throw Error(ErrorCode::MalformedSolution, "type not allowed at leg " + std::to_string(i + 1));
            s.push_back(row);
        }
        return s;
    }

    /// Same solution with every type row replaced by its canonical row.
    SolutionVector canonicalize(SolutionVector s) const {
        for (std::size_t i = 0; i < legs.size() && 2 * i + 1 < s.size(); ++i)
            s[2 * i + 1] = static_cast<int>(tables[i].canonical_of(s[2 * i + 1] - 1)) + 1;
        return s;
    }

    // ---- space size and ranking ----------------------------------------------

    double raw_count() const {
        double n = 1.0;
        for (std::size_t i = 0; i < legs.size(); ++i)
            n *= static_cast<double>(legs[i].targets.size() * tables[i].size());
        return n;
    }

    std::size_t leg_radix(std::size_t i) const { return legs[i].targets.size() * tables[i].canonical_rows().size(); }

    double canonical_count() const {
        double n = 1.0;
        for (std::size_t i = 0; i < legs.size(); ++i) n *= static_cast<double>(leg_radix(i));
        return n;
    }

    /// Canonical solution number `rank` in mixed radix, leg 1 most significant
    /// and the type row varying fastest within a leg.
    SolutionVector unrank(std::uint64_t rank) const {
        SolutionVector s(2 * legs.size());
        for (std::size_t i = legs.size(); i-- > 0;) {
            const std::size_t radix = leg_radix(i);
            const std::size_t digit = rank % radix;
            rank /= radix;
            const auto &rows = tables[i].canonical_rows();
            s[2 * i] = static_cast<int>(digit / rows.size()) + 1;
            s[2 * i + 1] = static_cast<int>(rows[digit % rows.size()]) + 1;
        }
        return s;
    }

    std::uint64_t rank(const SolutionVector &s) const {
        const SolutionVector c = canonicalize(s);
        std::uint64_t r = 0;
        for (std::size_t i = 0; i < legs.size(); ++i) {
            const auto &rows = tables[i].canonical_rows();
            const auto pos = std::find(rows.begin(), rows.end(), static_cast<std::size_t>(c[2 * i + 1] - 1));
            const std::size_t digit = static_cast<std::size_t>(c[2 * i] - 1) * rows.size() + (pos - rows.begin());
            r = r * leg_radix(i) + digit;
        }
        return r;
    }

    std::string sequence_name(const Plan &plan) const {
        const auto &bodies = model.catalog.bodies;
        std::string out = bodies[model.departure].symbol;
        for (std::size_t b : plan.sequence) out += bodies[b].symbol;
        return out;
    }
};

// ---- config files ------------------------------------------------------------

namespace detail {

inline std::size_t body_index(const BodyCatalog &catalog, const nlohmann::json &j) {
    return catalog.index_of(j.get<std::string>());
}

inline LegParams leg_params_from_json(const nlohmann::json &j) {
    LegParams p;
    p.m_dsm = j.value("m_dsm", 0.0);
    p.n_rev1 = j.value("n_rev1", 0);
    p.n_rev2 = j.value("n_rev2", 0);
    p.f_pa = j.value("f_pa", 0);
    p.f_12 = j.value("f_12", 0);
    return p;
}

inline LegSpec leg_spec_from_json(const BodyCatalog &catalog, const nlohmann::json &j) {
    LegSpec leg;
    for (const auto &t : j.at("targets")) leg.targets.push_back(body_index(catalog, t));
    leg.m_dsm = j.value("m_dsm", std::vector<double>{});
    leg.n_rev1 = j.value("n_rev1", std::vector<int>{});
    leg.n_rev2 = j.value("n_rev2", std::vector<int>{});
    leg.f_pa = j.value("f_pa", std::vector<int>{});
    leg.f_12 = j.value("f_12", std::vector<int>{});
    return leg;
}

} // namespace detail

/// Builds a ProblemSpec from a parsed config. `base` resolves the relative
/// catalog path.
inline ProblemSpec problem_from_json(const nlohmann::json &j, const std::filesystem::path &base) {
    ProblemSpec spec;
    spec.name = j.value("name", std::string{"problem"});

    std::filesystem::path catalog_path = j.at("catalog").get<std::string>();
    if (catalog_path.is_relative()) catalog_path = base / catalog_path;
    spec.model.catalog = load_catalog(catalog_path);
    BodyCatalog &cat = spec.model.catalog;

    if (j.contains("rp_factors")) {
        const auto &rp = j.at("rp_factors");
        if (rp.contains("default")) {
            const auto f = rp.at("default").get<std::array<double, 2>>();
            for (Body &b : cat.bodies) {
                b.rp_min_factor = f[0];
                b.rp_max_factor = f[1];
            }
        }
        for (const auto &[name, value] : rp.items()) {
            if (name == "default") continue;
            const auto f = value.get<std::array<double, 2>>();
            Body &b = cat.at(name);
            b.rp_min_factor = f[0];
            b.rp_max_factor = f[1];
        }
        cat.validate();
    }

    TrajectoryProblem &m = spec.model;
    m.departure = detail::body_index(cat, j.at("departure"));
    m.t0 = j.at("t0").get<double>();
    m.phi0 = j.at("phi0").get<double>();
    const auto v0 = j.at("v0_bounds").get<std::array<double, 2>>();
    m.v0_min = v0[0];
    m.v0_max = v0[1];
    if (j.contains("tof_total_max") && !j.at("tof_total_max").is_null()) m.tof_total_max = j.at("tof_total_max").get<double>();
    if (j.contains("tof_leg_max")) {
        for (const auto &v : j.at("tof_leg_max"))
            m.tof_leg_max.push_back(v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
    }
    if (j.contains("objective")) {
        const auto &o = j.at("objective");
        const std::string kind = o.value("kind", std::string{"vinf"});
        if (kind == "vinf") {
            m.objective = {ObjectiveSpec::Kind::VInf, 0.0};
        } else if (kind == "vinf_plus_time") {
            m.objective = {ObjectiveSpec::Kind::VInfPlusTime, o.at("sigma").get<double>()};
        } else {
            throw Error(ErrorCode::InvalidInput, "unknown objective kind '" + kind + "'");
        }
    }
    m.delta_theta_forced = j.value("forced_dtheta", 0.3);
    m.phasing_grid = j.value("phasing_grid", kDefaultPhasingGrid);

    for (const auto &leg : j.at("legs")) {
        const int repeat = leg.value("repeat", 1);
        for (int k = 0; k < repeat; ++k) spec.legs.push_back(detail::leg_spec_from_json(cat, leg));
    }
    spec.build_tables();

    if (j.contains("search")) {
        const auto &s = j.at("search");
        spec.search.ants = s.value("ants", spec.search.ants);
        spec.search.f_obj_ref = s.value("f_obj_ref", spec.search.f_obj_ref);
        spec.search.n_eval_max = s.value("max_evals", spec.search.n_eval_max);
        spec.search.seed = s.value("seed", spec.search.seed);
        for (const auto &step : s.at("steps"))
            spec.search.steps.emplace_back(step.at("iterations").get<int>(), step.at("w_bar").get<double>());
    }
    if (j.contains("stats")) {
        spec.stats_reps = j.at("stats").value("reps", spec.stats_reps);
        spec.success_threshold = j.at("stats").value("success_threshold", 0.0);
    }
    if (j.contains("golden")) {
        const auto &g = j.at("golden");
        Plan plan;
        for (const auto &t : g.at("targets")) plan.sequence.push_back(detail::body_index(cat, t));
        for (const auto &t : g.at("types")) plan.legs.push_back(detail::leg_params_from_json(t));
        spec.golden = plan;
    }
    if (j.contains("scan")) {
        const auto &sc = j.at("scan");
        ScanConfig scan;
        scan.reps = sc.value("reps", 1);
        if (sc.contains("dates")) {
            scan.dates = sc.at("dates").get<std::vector<double>>();
        } else {
            const double start = sc.at("start").get<double>();
            const double end = sc.at("end").get<double>();
            const double step = sc.at("step").get<double>();
            if (!(step > 0.0)) throw Error(ErrorCode::InvalidInput, "scan step must be positive");
            for (long k = 0; start + k * step <= end + 1e-9; ++k) scan.dates.push_back(start + k * step);
        }
        if (scan.dates.empty()) throw Error(ErrorCode::InvalidInput, "scan window holds no dates");
        spec.scan = scan;
    }
    spec.validate();
    return spec;
}

inline ProblemSpec load_problem(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &ex) {
        throw Error(ErrorCode::InvalidInput, path.string() + ": " + ex.what());
    }
    try {
        return problem_from_json(j, path.parent_path());
    } catch (const nlohmann::json::exception &ex) {
        throw Error(ErrorCode::InvalidInput, path.string() + ": " + ex.what());
    }
}

} // namespace mga
