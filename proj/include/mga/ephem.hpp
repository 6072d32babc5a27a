#pragma once

// Body catalogs and planar Keplerian ephemerides.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mga/conic.hpp"
#include "mga/core.hpp"
#include "mga/kepler.hpp"

namespace mga {

struct Body {
    std::string name;
    std::string symbol; // short tag used when printing sequences, e.g. "E", "Me"
    double mu_body{0.0};     // km^3/s^2
    double radius{0.0};      // km
    double rp_min_factor{1.0};
    double rp_max_factor{1.0};
    Orbit2D elements;        // about the catalog's central body
    double mean_anomaly_epoch{0.0}; // rad at the catalog epoch

    double rp_min() const { return rp_min_factor * radius; }
    double rp_max() const { return rp_max_factor * radius; }
};

struct BodyCatalog {
    std::string central_name;
    double central_mu{0.0};
    double t_ref{0.0}; // days MJD2000
    std::vector<Body> bodies;

    std::size_t index_of(const std::string &name) const {
        for (std::size_t i = 0; i < bodies.size(); ++i)
            if (bodies[i].name == name) return i;
        throw Error(ErrorCode::UnknownBody, "'" + name + "' is not in the catalog");
    }
    const Body &at(const std::string &name) const { return bodies[index_of(name)]; }
    Body &at(const std::string &name) { return bodies[index_of(name)]; }

    void validate() const {
        if (!(central_mu > 0.0)) throw Error(ErrorCode::InvalidInput, "central_mu must be positive");
        for (std::size_t i = 0; i < bodies.size(); ++i) {
            const Body &b = bodies[i];
            for (std::size_t j = 0; j < i; ++j)
                if (bodies[j].name == b.name) throw Error(ErrorCode::InvalidInput, "duplicate body " + b.name);
            if (!(b.mu_body > 0.0) || !(b.radius > 0.0))
                throw Error(ErrorCode::InvalidInput, b.name + ": mu_body and radius must be positive");
            if (!(b.rp_min_factor >= 1.0 && b.rp_min_factor < b.rp_max_factor))
                throw Error(ErrorCode::InvalidInput, b.name + ": need 1 <= rp_min_factor < rp_max_factor");
            if (!(b.elements.e >= 0.0 && b.elements.e < 1.0) || !(b.elements.a > 0.0))
                throw Error(ErrorCode::InvalidInput, b.name + ": body orbits must be closed");
            if (b.elements.mu != central_mu)
                throw Error(ErrorCode::InvalidInput, b.name + ": elements.mu differs from central_mu");
        }
    }
};

/// True anomaly of a body at epoch t (days MJD2000), in [0, 2pi).
inline double body_true_anomaly(const Body &body, double t, double t_ref) {
    const double m = body.mean_anomaly_epoch + body.elements.mean_motion() * (t - t_ref) * kSecondsPerDay;
    return wrap_two_pi(true_from_mean(m, body.elements.e));
}

inline State2D body_state(const Body &body, double t, double t_ref) {
    return *state_at_anomaly(body.elements, body_true_anomaly(body, t, t_ref), t);
}

inline State2D body_state(const BodyCatalog &catalog, const std::string &name, double t) {
    return body_state(catalog.at(name), t, catalog.t_ref);
}

// ---- JSON ------------------------------------------------------------------

inline void to_json(nlohmann::json &j, const Orbit2D &o) {
    j = nlohmann::json{{"a", o.a}, {"e", o.e}, {"lon_peri", o.lon_peri}, {"mu", o.mu}};
}

inline void from_json(const nlohmann::json &j, Orbit2D &o) {
    j.at("a").get_to(o.a);
    j.at("e").get_to(o.e);
    j.at("lon_peri").get_to(o.lon_peri);
    j.at("mu").get_to(o.mu);
}

inline void to_json(nlohmann::json &j, const Body &b) {
    j = nlohmann::json{{"name", b.name},
                       {"symbol", b.symbol},
                       {"mu_body", b.mu_body},
                       {"radius", b.radius},
                       {"rp_min_factor", b.rp_min_factor},
                       {"rp_max_factor", b.rp_max_factor},
                       {"elements", b.elements},
                       {"mean_anomaly_epoch", b.mean_anomaly_epoch}};
}

inline void from_json(const nlohmann::json &j, Body &b) {
    j.at("name").get_to(b.name);
    b.symbol = j.value("symbol", b.name.substr(0, 1));
    j.at("mu_body").get_to(b.mu_body);
    j.at("radius").get_to(b.radius);
    j.at("rp_min_factor").get_to(b.rp_min_factor);
    j.at("rp_max_factor").get_to(b.rp_max_factor);
    j.at("elements").get_to(b.elements);
    j.at("mean_anomaly_epoch").get_to(b.mean_anomaly_epoch);
}

inline void to_json(nlohmann::json &j, const BodyCatalog &c) {
    j = nlohmann::json{
        {"central_name", c.central_name}, {"central_mu", c.central_mu}, {"t_ref", c.t_ref}, {"bodies", c.bodies}};
}

inline void from_json(const nlohmann::json &j, BodyCatalog &c) {
    c.central_name = j.value("central_name", std::string{});
    j.at("central_mu").get_to(c.central_mu);
    j.at("t_ref").get_to(c.t_ref);
    j.at("bodies").get_to(c.bodies);
}

inline BodyCatalog load_catalog(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open catalog " + path.string());
    BodyCatalog catalog;
    try {
        catalog = nlohmann::json::parse(in).get<BodyCatalog>();
    } catch (const nlohmann::json::exception &ex) {
        throw Error(ErrorCode::InvalidInput, path.string() + ": " + ex.what());
    }
    catalog.validate();
    return catalog;
}

} // namespace mga
