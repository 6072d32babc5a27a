#pragma once

#include <cmath>

#include "mga/core.hpp"

namespace mga {

/// Inverts Kepler's equation E - e sin(E) = M for elliptic orbits.
///
/// Newton iteration from E0 = M + e sin(M), safeguarded by the bracket
/// [M - e, M + e] (the residual is monotone in E), so a step that leaves the
/// bracket falls back to bisection. Throws NumericalFailure if the residual is
/// still above 1e-13 after 50 iterations.
inline double solve_kepler(double mean_anomaly, double e) {
    if (!(e >= 0.0 && e < 1.0)) throw Error(ErrorCode::InvalidInput, "solve_kepler needs 0 <= e < 1");
    if (!std::isfinite(mean_anomaly)) throw Error(ErrorCode::InvalidInput, "mean anomaly not finite");
    if (e == 0.0) return mean_anomaly;

    // Reduce to (-pi, pi] so the residual is not swamped by a large M.
    const double turns = std::round(mean_anomaly / kTwoPi);
    const double m = mean_anomaly - turns * kTwoPi;

    constexpr double kTol = 1e-13;
    double lo = m - e;
    double hi = m + e;
    double ecc_anomaly = m + e * std::sin(m);
    for (int iter = 0; iter < 50; ++iter) {
        const double f = ecc_anomaly - e * std::sin(ecc_anomaly) - m;
        if (std::abs(f) < kTol) return ecc_anomaly + turns * kTwoPi;
        if (f > 0.0)
            hi = ecc_anomaly;
        else
            lo = ecc_anomaly;
        const double fp = 1.0 - e * std::cos(ecc_anomaly);
        double next = ecc_anomaly - f / fp;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == ecc_anomaly) return ecc_anomaly + turns * kTwoPi;
        ecc_anomaly = next;
    }
    throw Error(ErrorCode::NumericalFailure, "Kepler iteration did not converge");
}

// Eccentric from true anomaly, continuous across turns.
inline double eccentric_from_true(double theta, double e) {
    const double turns = std::round(theta / kTwoPi);
    const double t = theta - turns * kTwoPi;
    const double half = 0.5 * t;
    const double ecc = 2.0 * std::atan2(std::sqrt(1.0 - e) * std::sin(half), std::sqrt(1.0 + e) * std::cos(half));
    return ecc + turns * kTwoPi;
}

inline double true_from_eccentric(double ecc_anomaly, double e) {
    const double turns = std::round(ecc_anomaly / kTwoPi);
    const double E = ecc_anomaly - turns * kTwoPi;
    const double half = 0.5 * E;
    const double theta = 2.0 * std::atan2(std::sqrt(1.0 + e) * std::sin(half), std::sqrt(1.0 - e) * std::cos(half));
    return theta + turns * kTwoPi;
}

// Mean anomaly as a continuous, monotone function of true anomaly.
inline double mean_from_true(double theta, double e) {
    const double E = eccentric_from_true(theta, e);
    return E - e * std::sin(E);
}

inline double true_from_mean(double mean_anomaly, double e) {
    return true_from_eccentric(solve_kepler(mean_anomaly, e), e);
}

} // namespace mga
