#pragma once

// Planar two-body geometry: conic elements, Kepler's time law and the
// intersection of two coplanar conics sharing a focus.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mga/core.hpp"
#include "mga/kepler.hpp"

namespace mga {

/// Planar conic about a central body. Motion is always prograde
/// (counter-clockwise); hyperbolic arcs carry a < 0.
struct Orbit2D {
    double a{0.0};        // km
    double e{0.0};
    double lon_peri{0.0}; // rad, inertial direction of pericentre
    double mu{0.0};       // km^3/s^2

    bool is_elliptic() const { return e < 1.0 && a > 0.0; }
    double semi_latus_rectum() const { return a * (1.0 - e * e); }
    double radius_at(double theta) const { return semi_latus_rectum() / (1.0 + e * std::cos(theta)); }
    double mean_motion() const { return std::sqrt(mu / (a * a * a)); } // rad/s
    double period() const { return kTwoPi * std::sqrt(a * a * a / mu); } // s
    double energy() const { return -mu / (2.0 * a); }
    double angular_momentum() const { return std::sqrt(mu * semi_latus_rectum()); }
    double pericentre() const { return a * (1.0 - e); }
    double apocentre() const { return a * (1.0 + e); }
};

struct State2D {
    Vec2 r; // km
    Vec2 v; // km/s
    double t{0.0}; // days MJD2000
};

struct IntersectionPair {
    double theta_sc{0.0};
    double theta_body{0.0};
};

struct OrbitAtAnomaly {
    Orbit2D orbit;
    double theta{0.0};
};

/// Elements and true anomaly of a planar state. Retrograde or rectilinear
/// states fail with RetrogradeOrbit; open orbits are returned (a < 0) and
/// callers that need an ellipse check is_elliptic().
inline Expected<OrbitAtAnomaly> orbit_from_state(const State2D &state, double mu) {
    const double r = norm(state.r);
    const double h = cross(state.r, state.v);
    if (!(r > 0.0) || !std::isfinite(h)) return ErrorCode::InvalidInput;
    if (h <= 1e-12 * r * norm(state.v)) return ErrorCode::RetrogradeOrbit;

    const double v2 = dot(state.v, state.v);
    const double rv = dot(state.r, state.v);
    const Vec2 e_vec = (1.0 / mu) * ((v2 - mu / r) * state.r - rv * state.v);
    const double e = norm(e_vec);
    const double energy = 0.5 * v2 - mu / r;

    OrbitAtAnomaly out;
    out.orbit.mu = mu;
    out.orbit.e = e;
    out.orbit.a = energy == 0.0 ? std::numeric_limits<double>::infinity() : -mu / (2.0 * energy);
    if (e < 1e-14) {
        out.orbit.e = 0.0;
        out.orbit.lon_peri = 0.0;
        out.theta = wrap_two_pi(std::atan2(state.r.y, state.r.x));
    } else {
        out.orbit.lon_peri = wrap_two_pi(std::atan2(e_vec.y, e_vec.x));
        out.theta = wrap_two_pi(std::atan2(cross(e_vec, state.r), dot(e_vec, state.r)));
    }
    return out;
}

/// Conic state at true anomaly theta, stamped with epoch t.
inline Expected<State2D> state_at_anomaly(const Orbit2D &orbit, double theta, double t) {
    const double denom = 1.0 + orbit.e * std::cos(theta);
    if (!(denom > 0.0)) return ErrorCode::NonElliptic;
    const double p = orbit.semi_latus_rectum();
    const double r = p / denom;
    const double u = orbit.lon_peri + theta;
    const double k = std::sqrt(orbit.mu / p);
    State2D s;
    s.r = {r * std::cos(u), r * std::sin(u)};
    s.v = {-k * (std::sin(u) + orbit.e * std::sin(orbit.lon_peri)),
           k * (std::cos(u) + orbit.e * std::cos(orbit.lon_peri))};
    s.t = t;
    return s;
}

/// Seconds to move forward from theta_from to theta_to (the forward angle is
/// taken in [0, 2pi)), plus n_rev complete periods.
inline Expected<double> time_of_flight(const Orbit2D &orbit, double theta_from, double theta_to, int n_rev) {
    if (!orbit.is_elliptic()) return ErrorCode::NonElliptic;
    if (n_rev < 0) return ErrorCode::InvalidInput;
    const double sweep = wrap_two_pi(theta_to - theta_from);
    double dm = 0.0;
    if (sweep > 0.0) dm = mean_from_true(theta_from + sweep, orbit.e) - mean_from_true(theta_from, orbit.e);
    dm = std::max(dm, 0.0);
    const double root = std::sqrt(orbit.a * orbit.a * orbit.a / orbit.mu);
    return dm * root + static_cast<double>(n_rev) * (kTwoPi * root);
}

/// True anomaly reached after dt seconds from theta0 (elliptic only).
inline double propagate_anomaly(const Orbit2D &orbit, double theta0, double dt_seconds) {
    const double m0 = mean_from_true(theta0, orbit.e);
    return wrap_two_pi(true_from_mean(m0 + orbit.mean_motion() * dt_seconds, orbit.e));
}

/// Points shared by two coplanar conics with a common focus.
///
/// Equating r = p/(1 + e cos(phi - varpi)) for both conics at the inertial
/// angle phi gives A cos(phi) + B sin(phi) = C, solved in closed form. Results
/// are sorted by theta_sc in [0, 2pi). Identical conics fail with
/// DegenerateIntersection.
inline Expected<std::vector<IntersectionPair>> intersect_orbits(const Orbit2D &sc, const Orbit2D &body) {
    const double p1 = sc.semi_latus_rectum();
    const double p2 = body.semi_latus_rectum();
    const double scale = std::max(p1, p2);
    const double A = (p1 * body.e * std::cos(body.lon_peri) - p2 * sc.e * std::cos(sc.lon_peri)) / scale;
    const double B = (p1 * body.e * std::sin(body.lon_peri) - p2 * sc.e * std::sin(sc.lon_peri)) / scale;
    const double C = (p2 - p1) / scale;

    constexpr double kDegenerate = 1e-9;
    constexpr double kTangent = 1e-9;
    std::vector<IntersectionPair> out;
    const double R = std::hypot(A, B);
    if (std::abs(A) < kDegenerate && std::abs(B) < kDegenerate && std::abs(C) < kDegenerate)
        return ErrorCode::DegenerateIntersection;
    if (R < kDegenerate) return out; // concentric circles of different size

    const double c = C / R;
    const double phase = std::atan2(B, A);
    std::vector<double> angles;
    if (std::abs(c) > 1.0 + kTangent) return out;
    if (std::abs(c) >= 1.0 - kTangent) {
        angles.push_back(c > 0.0 ? phase : phase + kPi);
    } else {
        const double d = std::acos(c);
        angles.push_back(phase + d);
        angles.push_back(phase - d);
    }
    for (double phi : angles) {
        const double th_sc = wrap_two_pi(phi - sc.lon_peri);
        const double th_body = wrap_two_pi(phi - body.lon_peri);
        // open conics only reach angles inside their asymptotes
        if (!(1.0 + sc.e * std::cos(th_sc) > 0.0) || !(1.0 + body.e * std::cos(th_body) > 0.0)) continue;
        out.push_back({th_sc, th_body});
    }
    std::sort(out.begin(), out.end(),
              [](const IntersectionPair &l, const IntersectionPair &r) { return l.theta_sc < r.theta_sc; });
    return out;
}

} // namespace mga
