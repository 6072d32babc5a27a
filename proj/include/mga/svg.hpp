#pragma once

// Plain SVG rendering of a scheduled trajectory: body orbits, the spacecraft
// path and its events.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mga/conic.hpp"
#include "mga/legs.hpp"

namespace mga {

inline constexpr double kMaxPlotStep = kPi / 180.0; // 1 deg of true anomaly

/// Points along an orbit from theta0 sweeping `sweep` rad forward, no step
/// larger than kMaxPlotStep.
inline std::vector<Vec2> sample_arc(const Orbit2D &orbit, double theta0, double sweep) {
    const int steps = std::max(1, static_cast<int>(std::ceil(sweep / kMaxPlotStep)));
    std::vector<Vec2> pts;
    pts.reserve(steps + 1);
    for (int k = 0; k <= steps; ++k) {
        const double th = theta0 + sweep * k / steps;
        const double r = orbit.radius_at(th);
        const double u = orbit.lon_peri + th;
        pts.push_back({r * std::cos(u), r * std::sin(u)});
    }
    return pts;
}

struct PlotEvent {
    std::string kind; // launch, dsm, swingby, arrival
    Vec2 r;
};

struct TrajectoryPlot {
    std::vector<std::vector<Vec2>> orbits; // one closed curve per body
    std::vector<std::vector<Vec2>> arcs;   // spacecraft path, two arcs per leg
    std::vector<PlotEvent> events;
};

inline TrajectoryPlot plot_geometry(const TrajectoryProblem &problem, const Plan &plan, const TrajectoryRecord &record) {
    TrajectoryPlot plot;
    std::vector<std::size_t> bodies{problem.departure};
    for (std::size_t b : plan.sequence)
        if (std::find(bodies.begin(), bodies.end(), b) == bodies.end()) bodies.push_back(b);
    for (std::size_t b : bodies) {
        auto ring = sample_arc(problem.catalog.bodies[b].elements, 0.0, kTwoPi);
        ring.pop_back(); // closed by the path itself
        plot.orbits.push_back(std::move(ring));
    }

    for (std::size_t i = 0; i < record.legs.size(); ++i) {
        const LegTrace &leg = record.legs[i];
        const LegParams &params = plan.legs[i];
        const Orbit2D &before = leg.first.orbit_before;
        const double theta_mb = std::atan2(leg.first.m_before.r.y, leg.first.m_before.r.x) - before.lon_peri;
        double sweep1 = wrap_two_pi(theta_mb - leg.first.theta_start);
        if (params.has_dsm()) {
            sweep1 += kTwoPi * params.n_rev1;
            if (sweep1 <= 0.0) sweep1 = kTwoPi; // started on the apsis: one full turn
        }
        plot.arcs.push_back(sample_arc(before, leg.first.theta_start, sweep1));
        const double sweep2 = wrap_two_pi(leg.second.theta_int - leg.first.theta_m) + kTwoPi * params.n_rev2;
        plot.arcs.push_back(sample_arc(leg.first.orbit_after, leg.first.theta_m, sweep2));

        plot.events.push_back({i == 0 ? "launch" : "swingby", leg.departure.r});
        if (params.has_dsm()) plot.events.push_back({"dsm", leg.first.m_before.r});
    }
    if (!record.legs.empty()) plot.events.push_back({"arrival", record.legs.back().second.arrival.r});
    return plot;
}

inline std::string render_svg(const TrajectoryPlot &plot, const std::string &title, int size_px = 800) {
    double extent = 0.0;
    for (const auto &set : {plot.orbits, plot.arcs})
        for (const auto &line : set)
            for (const Vec2 &p : line) extent = std::max({extent, std::abs(p.x), std::abs(p.y)});
    if (!(extent > 0.0)) extent = 1.0;
    const double half = 0.5 * size_px;
    const double scale = 0.95 * half / extent;
    auto px = [&](const Vec2 &p) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.2f,%.2f", half + scale * p.x, half - scale * p.y);
        return std::string(buf);
    };
    auto points = [&](const std::vector<Vec2> &line) {
        std::string out;
        for (std::size_t k = 0; k < line.size(); ++k) {
            if (k) out += ' ';
            out += px(line[k]);
        }
        return out;
    };
    auto escape = [](const std::string &s) {
        std::string out;
        for (char c : s) {
            switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
            }
        }
        return out;
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_px << "\" height=\"" << size_px
        << "\" viewBox=\"0 0 " << size_px << ' ' << size_px << "\">\n"
        << "<title>" << escape(title) << "</title>\n"
        << "<style>.orbit{fill:none;stroke:#999;stroke-width:1}.trajectory{fill:none;stroke:#c22;stroke-width:1.5}"
           ".event{stroke:#000;stroke-width:0.5}.launch{fill:#2a2}.dsm{fill:#fc0}.swingby{fill:#26c}.arrival{fill:#c2c}"
           "</style>\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<circle class=\"central\" cx=\"" << half << "\" cy=\"" << half << "\" r=\"4\" fill=\"#f90\"/>\n";
    for (const auto &ring : plot.orbits) svg << "<polygon class=\"orbit\" points=\"" << points(ring) << "\"/>\n";
    for (const auto &arc : plot.arcs) svg << "<polyline class=\"trajectory\" points=\"" << points(arc) << "\"/>\n";
    for (const PlotEvent &ev : plot.events) {
        const std::string at = px(ev.r);
        const auto comma = at.find(',');
        svg << "<circle class=\"event " << ev.kind << "\" cx=\"" << at.substr(0, comma) << "\" cy=\""
            << at.substr(comma + 1) << "\" r=\"4\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace mga
