#pragma once

// The linked-conic trajectory model: launch, swing-by and deep-space legs,
// the phasing problem, and scheduling of the full trajectory tree of a plan.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mga/brent.hpp"
#include "mga/conic.hpp"
#include "mga/core.hpp"
#include "mga/ephem.hpp"

namespace mga {

/// Type of transfer of one leg.
struct LegParams {
    double m_dsm{0.0}; // km/s, signed, 0 = no DSM
    int n_rev1{0};
    int n_rev2{0};
    int f_pa{0};       // 0 = DSM at pericentre, 1 = apocentre
    int f_12{0};       // 0 = first intersection ahead of M, 1 = the other one

    bool has_dsm() const { return m_dsm != 0.0; }

    // Without a DSM, f_pa and n_rev1 do not influence the leg.
    LegParams canonical() const {
        LegParams c = *this;
        if (!has_dsm()) {
            c.n_rev1 = 0;
            c.f_pa = 0;
        }
        return c;
    }

    friend auto operator<=>(const LegParams &, const LegParams &) = default;
};

inline State2D with_velocity(State2D s, const Vec2 &v) {
    s.v = v;
    return s;
}

/// Spacecraft state just after launch: the excess velocity v0 is applied at
/// angle phi0 counter-clockwise from the planet's heliocentric velocity.
inline Expected<State2D> launch_state(const State2D &planet_state, double v0, double phi0, double mu) {
    const Vec2 dir = rotate(unit(planet_state.v), phi0);
    State2D sc = with_velocity(planet_state, planet_state.v + v0 * dir);
    const auto orbit = orbit_from_state(sc, mu);
    if (!orbit || !orbit->orbit.is_elliptic()) return ErrorCode::LegInfeasible;
    return sc;
}

/// Anomaly of the outgoing asymptote of the flyby hyperbola.
inline double asymptote_anomaly(double v_inf, double rp, double mu_body) {
    const double k = mu_body / rp;
    return std::acos(-k / (v_inf * v_inf + k));
}

/// Signed deflection of the relative velocity for a signed pericentre radius.
inline double swingby_deflection(double v_inf, double rps, double mu_body) {
    const double sign = rps > 0.0 ? 1.0 : -1.0;
    return sign * (2.0 * asymptote_anomaly(v_inf, std::abs(rps), mu_body) - kPi);
}

/// Unpowered swing-by: rotates v_in - v_planet by the deflection for rps and
/// returns the outgoing heliocentric velocity.
inline Expected<Vec2> swingby(const State2D &planet_state, const Vec2 &v_in, double rps, const Body &body) {
    const double rp = std::abs(rps);
    if (!(rp >= body.rp_min() && rp <= body.rp_max())) return ErrorCode::PericentreOutOfRange;
    const Vec2 v_rel = v_in - planet_state.v;
    const double v_inf = norm(v_rel);
    if (!(v_inf > 0.0)) return ErrorCode::DegenerateSwingby;
    return planet_state.v + rotate(v_rel, swingby_deflection(v_inf, rps, body.mu_body));
}

/// First conic arc of a leg, from the departure planet to the point M.
struct FirstArc {
    State2D start;
    State2D m_before; // at M, before the manoeuvre
    State2D m_after;  // at M, after it (same as m_before without DSM)
    Orbit2D orbit_before;
    Orbit2D orbit_after;
    double theta_start{0.0}; // on orbit_before
    double theta_m{0.0};     // on orbit_after
};

/// Propagates to M and applies the tangential DSM there. With a DSM, M is the
/// pericentre (f_pa = 0) or apocentre (f_pa = 1) first reached ahead of the
/// start, plus n_rev1 full periods; without one, M lies delta_theta_forced
/// ahead of the start.
inline Expected<FirstArc> first_arc(const State2D &start, double mu, const LegParams &params,
                                    double delta_theta_forced) {
    const auto initial = orbit_from_state(start, mu);
    if (!initial) return ErrorCode::LegInfeasible;
    if (!initial->orbit.is_elliptic()) return ErrorCode::LegInfeasible;

    FirstArc arc;
    arc.start = start;
    arc.orbit_before = initial->orbit;
    arc.theta_start = initial->theta;

    double theta_m = 0.0;
    double dt = 0.0;
    if (params.has_dsm()) {
        theta_m = params.f_pa == 0 ? 0.0 : kPi;
        dt = *time_of_flight(arc.orbit_before, arc.theta_start, theta_m, params.n_rev1);
        if (dt <= 0.0) dt = arc.orbit_before.period();
    } else {
        theta_m = arc.theta_start + delta_theta_forced;
        dt = *time_of_flight(arc.orbit_before, arc.theta_start, theta_m, 0);
    }
    const auto at_m = state_at_anomaly(arc.orbit_before, theta_m, start.t + dt / kSecondsPerDay);
    if (!at_m) return ErrorCode::LegInfeasible;
    arc.m_before = *at_m;
    arc.m_after = arc.m_before;
    if (params.has_dsm()) {
        arc.m_after.v += params.m_dsm * unit(arc.m_before.v);
        const auto after = orbit_from_state(arc.m_after, mu);
        if (!after || !after->orbit.is_elliptic()) return ErrorCode::LegInfeasible;
        arc.orbit_after = after->orbit;
        arc.theta_m = after->theta;
    } else {
        arc.orbit_after = arc.orbit_before;
        arc.theta_m = wrap_two_pi(theta_m);
    }
    return arc;
}

/// Second conic arc: from M to the selected crossing of the target's orbit.
struct SecondArc {
    double theta_int{0.0}; // on the spacecraft orbit
    double theta_bar{0.0}; // on the target orbit
    double t_int{0.0};     // days MJD2000
    State2D arrival;
};

inline Expected<SecondArc> second_arc(const Orbit2D &sc_orbit, double theta_m, double t_m, const Body &target,
                                      int f_12, int n_rev2) {
    if (!sc_orbit.is_elliptic()) return ErrorCode::LegInfeasible;
    const auto crossings = intersect_orbits(sc_orbit, target.elements);
    if (!crossings) return crossings.error();
    if (crossings->empty()) return ErrorCode::NoIntersection;

    // Order by forward angular distance from M.
    std::vector<IntersectionPair> ahead = *crossings;
    std::sort(ahead.begin(), ahead.end(), [&](const IntersectionPair &l, const IntersectionPair &r) {
        return wrap_two_pi(l.theta_sc - theta_m) < wrap_two_pi(r.theta_sc - theta_m);
    });
    const std::size_t pick = f_12 == 0 ? 0 : 1;
    if (pick >= ahead.size()) return ErrorCode::NoIntersection;

    SecondArc out;
    out.theta_int = ahead[pick].theta_sc;
    out.theta_bar = ahead[pick].theta_body;
    const auto dt = time_of_flight(sc_orbit, theta_m, out.theta_int, n_rev2);
    if (!dt) return dt.error();
    out.t_int = t_m + *dt / kSecondsPerDay;
    out.arrival = *state_at_anomaly(sc_orbit, out.theta_int, out.t_int);
    return out;
}

inline Expected<SecondArc> second_arc(const State2D &at_m, double mu, const Body &target, int f_12, int n_rev2) {
    const auto orbit = orbit_from_state(at_m, mu);
    if (!orbit) return orbit.error();
    if (!orbit->orbit.is_elliptic()) return ErrorCode::LegInfeasible;
    return second_arc(orbit->orbit, orbit->theta, at_m.t, target, f_12, n_rev2);
}

// ---- phasing ---------------------------------------------------------------

enum class LegStart { Launch, Swingby };

struct PhasingContext {
    LegStart mode{LegStart::Launch};
    State2D planet_state;      // departure planet at the leg start epoch
    Vec2 v_in;                 // inbound heliocentric velocity (swing-by only)
    double phi0{0.0};          // launch direction (launch only)
    const Body *departure{nullptr};
    const Body *target{nullptr};
    double t_ref{0.0};         // catalog epoch
    double mu{0.0};            // central body
    LegParams params;
    double delta_theta_forced{0.3};
    double lambda_min{0.0};    // km/s for v0, signed km for rps
    double lambda_max{0.0};
    double forbidden_half_width{0.0}; // swing-by: |rps| < rp_min is excluded

    std::vector<std::pair<double, double>> bands() const {
        if (mode == LegStart::Launch) return {{lambda_min, lambda_max}};
        return {{lambda_min, -forbidden_half_width}, {forbidden_half_width, lambda_max}};
    }
};

inline PhasingContext launch_context(const Body &departure, const Body &target, const State2D &planet_state,
                                     double phi0, double v0_min, double v0_max, const LegParams &params,
                                     double mu, double t_ref, double delta_theta_forced = 0.3) {
    PhasingContext ctx;
    ctx.mode = LegStart::Launch;
    ctx.planet_state = planet_state;
    ctx.phi0 = phi0;
    ctx.departure = &departure;
    ctx.target = &target;
    ctx.t_ref = t_ref;
    ctx.mu = mu;
    ctx.params = params;
    ctx.delta_theta_forced = delta_theta_forced;
    ctx.lambda_min = v0_min;
    ctx.lambda_max = v0_max;
    return ctx;
}

inline PhasingContext swingby_context(const Body &departure, const Body &target, const State2D &planet_state,
                                      const Vec2 &v_in, const LegParams &params, double mu, double t_ref,
                                      double delta_theta_forced = 0.3) {
    PhasingContext ctx;
    ctx.mode = LegStart::Swingby;
    ctx.planet_state = planet_state;
    ctx.v_in = v_in;
    ctx.departure = &departure;
    ctx.target = &target;
    ctx.t_ref = t_ref;
    ctx.mu = mu;
    ctx.params = params;
    ctx.delta_theta_forced = delta_theta_forced;
    ctx.lambda_min = -departure.rp_max();
    ctx.lambda_max = departure.rp_max();
    ctx.forbidden_half_width = departure.rp_min();
    return ctx;
}

/// One leg built for a given lambda, with everything needed downstream.
struct LegTrace {
    double lambda{0.0};
    Vec2 v_in;        // heliocentric velocity before the departure event
    State2D departure; // spacecraft right after launch / swing-by
    FirstArc first;
    SecondArc second;
    double theta_planet{0.0}; // target true anomaly at t_int
    double dtheta{0.0};       // theta_planet - theta_bar, wrapped to (-pi, pi]
};

inline Expected<LegTrace> build_leg(double lambda, const PhasingContext &ctx) {
    LegTrace trace;
    trace.lambda = lambda;
    if (ctx.mode == LegStart::Launch) {
        trace.v_in = ctx.planet_state.v;
        const auto sc = launch_state(ctx.planet_state, lambda, ctx.phi0, ctx.mu);
        if (!sc) return ErrorCode::LegInfeasible;
        trace.departure = *sc;
    } else {
        trace.v_in = ctx.v_in;
        const auto v_out = swingby(ctx.planet_state, ctx.v_in, lambda, *ctx.departure);
        if (!v_out) return v_out.error();
        trace.departure = with_velocity(ctx.planet_state, *v_out);
    }
    const auto first = first_arc(trace.departure, ctx.mu, ctx.params, ctx.delta_theta_forced);
    if (!first) return first.error();
    trace.first = *first;
    const auto second = second_arc(first->orbit_after, first->theta_m, first->m_after.t, *ctx.target,
                                   ctx.params.f_12, ctx.params.n_rev2);
    if (!second) return second.error();
    trace.second = *second;
    trace.theta_planet = body_true_anomaly(*ctx.target, second->t_int, ctx.t_ref);
    trace.dtheta = wrap_pi(trace.theta_planet - second->theta_bar);
    return trace;
}

/// Phasing residual at lambda; any construction failure reads as LegInfeasible.
inline Expected<double> delta_theta(double lambda, const PhasingContext &ctx) {
    const auto leg = build_leg(lambda, ctx);
    if (!leg) return ErrorCode::LegInfeasible;
    return leg->dtheta;
}

inline constexpr int kDefaultPhasingGrid = 64;
inline constexpr double kPhasingTolerance = 1e-9; // rad

/// All roots of the phasing residual over the lambda domain.
///
/// Each band is sampled at n_grid uniform points; adjacent finite samples
/// with a sign change and a jump below pi (wrap-arounds excluded) bracket a
/// Brent search. Roots are kept when |residual| < 1e-9 rad, deduplicated at
/// 1e-6 relative spacing and returned in ascending order.
inline std::vector<double> solve_phasing(const PhasingContext &ctx, int n_grid = kDefaultPhasingGrid) {
    n_grid = std::max(n_grid, 2);
    std::vector<double> roots;
    auto f = [&](double x) -> std::optional<double> {
        const auto r = delta_theta(x, ctx);
        if (!r) return std::nullopt;
        return *r;
    };
    for (const auto &[lo, hi] : ctx.bands()) {
        if (!(hi > lo)) continue;
        std::vector<double> xs(n_grid);
        std::vector<std::optional<double>> fs(n_grid);
        for (int k = 0; k < n_grid; ++k) {
            xs[k] = k == n_grid - 1 ? hi : lo + (hi - lo) * static_cast<double>(k) / (n_grid - 1);
            fs[k] = f(xs[k]);
            if (fs[k] && *fs[k] == 0.0) roots.push_back(xs[k]);
        }
        for (int k = 0; k + 1 < n_grid; ++k) {
            if (!fs[k] || !fs[k + 1]) continue;
            const double fa = *fs[k], fb = *fs[k + 1];
            if (fa == 0.0 || fb == 0.0 || (fa > 0.0) == (fb > 0.0)) continue;
            if (std::abs(fb - fa) >= kPi) continue;
            const auto root = brent_root(f, xs[k], xs[k + 1], fa, fb, 1e-12);
            if (root && std::abs(root->fx) < kPhasingTolerance) roots.push_back(root->x);
        }
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> unique;
    for (double r : roots) {
        if (!unique.empty() && std::abs(r - unique.back()) <= 1e-6 * std::max(std::abs(r), std::abs(unique.back())))
            continue;
        unique.push_back(r);
    }
    return unique;
}

// ---- plan evaluation ---------------------------------------------------------

struct ObjectiveSpec {
    enum class Kind { VInf, VInfPlusTime };
    Kind kind{Kind::VInf};
    double sigma{0.0}; // km/s per day
};

/// Everything the model needs besides the plan itself.
struct TrajectoryProblem {
    BodyCatalog catalog;
    std::size_t departure{0};
    double t0{0.0};   // days MJD2000
    double phi0{0.0}; // rad
    double v0_min{0.0};
    double v0_max{0.0};
    std::optional<double> tof_total_max;          // days
    std::vector<std::optional<double>> tof_leg_max; // days, per leg (may be shorter than the plan)
    ObjectiveSpec objective;
    double delta_theta_forced{0.3};
    int phasing_grid{kDefaultPhasingGrid};
};

/// Decoded solution: target body (catalog index) and type of transfer per leg.
struct Plan {
    std::vector<std::size_t> sequence;
    std::vector<LegParams> legs;
};

/// A node of the trajectory tree: conditions on arrival at a planet.
struct ArrivalCondition {
    std::size_t body{0};
    State2D state;          // spacecraft at arrival (heliocentric)
    double total_dv{0.0};   // km/s
    double v0_used{0.0};    // km/s
    std::vector<double> lambda_per_leg;
    double elapsed{0.0};    // days since launch
    std::vector<int> path;  // root index chosen at every leg
    std::vector<LegTrace> legs;
};

struct TrajectoryRecord {
    std::vector<double> lambdas;   // v0* then rps* values
    std::vector<double> durations; // days
    std::vector<double> dv;        // signed DSM per leg, km/s
    double v0{0.0};
    double v_inf{0.0};
    double total_T{0.0};
    double total_dv{0.0};
    double f_obj{0.0};
    std::string path_id;
    std::vector<LegTrace> legs;
};

inline double objective(const TrajectoryRecord &record, const ObjectiveSpec &spec) {
    switch (spec.kind) {
    case ObjectiveSpec::Kind::VInf: return record.v_inf;
    case ObjectiveSpec::Kind::VInfPlusTime: return record.v_inf + spec.sigma * record.total_T;
    }
    return record.v_inf;
}

inline std::string path_string(const std::vector<int> &path) {
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(path[i]);
    }
    return out;
}

/// Schedules one more leg for every node of the tree (Algorithm 1 inner loop).
/// `nodes` is empty for the launch leg. Branches violating the per-leg or
/// total time-of-flight caps are dropped; an empty result means the plan is
/// infeasible at this leg.
inline std::vector<ArrivalCondition> extend_tree(const TrajectoryProblem &problem,
                                                 const std::vector<ArrivalCondition> &nodes, std::size_t leg_index,
                                                 std::size_t target, const LegParams &params) {
    const BodyCatalog &cat = problem.catalog;
    const Body &target_body = cat.bodies[target];
    const std::optional<double> leg_cap =
        leg_index < problem.tof_leg_max.size() ? problem.tof_leg_max[leg_index] : std::nullopt;

    std::vector<ArrivalCondition> out;
    auto grow = [&](const ArrivalCondition *parent, const PhasingContext &ctx) {
        const std::vector<double> roots = solve_phasing(ctx, problem.phasing_grid);
        for (std::size_t k = 0; k < roots.size(); ++k) {
            auto leg = build_leg(roots[k], ctx);
            if (!leg) continue;
            const double start_t = ctx.planet_state.t;
            const double duration = leg->second.t_int - start_t;
            ArrivalCondition node = parent ? *parent : ArrivalCondition{};
            node.elapsed += duration;
            if (leg_cap && duration > *leg_cap) continue;
            if (problem.tof_total_max && node.elapsed > *problem.tof_total_max) continue;
            node.body = target;
            node.state = leg->second.arrival;
            node.total_dv += std::abs(params.m_dsm);
            if (!parent) node.v0_used = roots[k];
            node.lambda_per_leg.push_back(roots[k]);
            node.path.push_back(static_cast<int>(k));
            node.legs.push_back(std::move(*leg));
            out.push_back(std::move(node));
        }
    };

    if (leg_index == 0) {
        const Body &dep = cat.bodies[problem.departure];
        const State2D planet = body_state(dep, problem.t0, cat.t_ref);
        grow(nullptr, launch_context(dep, target_body, planet, problem.phi0, problem.v0_min, problem.v0_max,
                                     params, cat.central_mu, cat.t_ref, problem.delta_theta_forced));
    } else {
        for (const ArrivalCondition &node : nodes) {
            const Body &dep = cat.bodies[node.body];
            const State2D planet = body_state(dep, node.state.t, cat.t_ref);
            grow(&node, swingby_context(dep, target_body, planet, node.state.v, params, cat.central_mu, cat.t_ref,
                                        problem.delta_theta_forced));
        }
    }
    return out;
}

inline TrajectoryRecord make_record(const TrajectoryProblem &problem, const ArrivalCondition &node) {
    const BodyCatalog &cat = problem.catalog;
    TrajectoryRecord rec;
    rec.lambdas = node.lambda_per_leg;
    for (const LegTrace &leg : node.legs) {
        rec.durations.push_back(leg.second.t_int - leg.departure.t);
        const double dv = norm(leg.first.m_after.v - leg.first.m_before.v);
        const double sign = dot(leg.first.m_after.v - leg.first.m_before.v, leg.first.m_before.v) < 0.0 ? -1.0 : 1.0;
        rec.dv.push_back(sign * dv);
    }
    rec.v0 = node.v0_used;
    const State2D planet = body_state(cat.bodies[node.body], node.state.t, cat.t_ref);
    rec.v_inf = norm(node.state.v - planet.v);
    rec.total_T = node.elapsed;
    rec.total_dv = node.total_dv;
    rec.path_id = path_string(node.path);
    rec.legs = node.legs;
    rec.f_obj = objective(rec, problem.objective);
    return rec;
}

struct PlanOutcome {
    bool feasible{false};
    int l_u{0}; // 1-based leg at which the tree died; 0 when feasible
    double f_obj{0.0};
    std::vector<TrajectoryRecord> records; // sorted by f_obj, then path id
};

/// Ordering of records of one plan: objective, then path id.
inline bool record_less(const TrajectoryRecord &l, const TrajectoryRecord &r) {
    if (l.f_obj != r.f_obj) return l.f_obj < r.f_obj;
    return l.path_id < r.path_id;
}

inline PlanOutcome finish_plan(const TrajectoryProblem &problem, const std::vector<ArrivalCondition> &leaves) {
    PlanOutcome out;
    out.feasible = true;
    for (const ArrivalCondition &node : leaves) out.records.push_back(make_record(problem, node));
    std::sort(out.records.begin(), out.records.end(), record_less);
    out.f_obj = out.records.front().f_obj;
    return out;
}

/// Builds the trajectory tree of a plan (Algorithm 1). The objective of a
/// feasible plan is its best branch.
inline PlanOutcome evaluate_plan(const Plan &plan, const TrajectoryProblem &problem) {
    if (plan.sequence.size() != plan.legs.size() || plan.legs.empty())
        throw Error(ErrorCode::InvalidInput, "plan needs one target and one type per leg");
    std::vector<ArrivalCondition> nodes;
    for (std::size_t i = 0; i < plan.legs.size(); ++i) {
        if (plan.sequence[i] >= problem.catalog.bodies.size())
            throw Error(ErrorCode::UnknownBody, "plan target index out of catalog range");
        nodes = extend_tree(problem, nodes, i, plan.sequence[i], plan.legs[i]);
        if (nodes.empty()) {
            PlanOutcome out;
            out.l_u = static_cast<int>(i) + 1;
            return out;
        }
    }
    return finish_plan(problem, nodes);
}

} // namespace mga
