#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

namespace mga {

struct BrentResult {
    double x{0.0};
    double fx{0.0};
    int iterations{0};
};

/// Brent's bracketing root finder (inverse quadratic / secant / bisection).
///
/// `f` returns std::optional<double>; an empty value aborts the search, since
/// the bracketed function is not defined everywhere. `fa` and `fb` must have
/// opposite signs. Stops once |f| <= ftol or the bracket shrinks to round-off.
template <class F>
std::optional<BrentResult> brent_root(F &&f, double a, double b, double fa, double fb, double ftol,
                                      int max_iter = 200) {
    if (fa == 0.0) return BrentResult{a, fa, 0};
    if (fb == 0.0) return BrentResult{b, fb, 0};
    if ((fa > 0.0) == (fb > 0.0)) return std::nullopt;

    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 1; iter <= max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b);
        const double m = 0.5 * (c - b);
        if (std::abs(fb) <= ftol || std::abs(m) <= tol) return BrentResult{b, fb, iter};

        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0)
                q = -q;
            else
                p = -p;
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
        const std::optional<double> next = f(b);
        if (!next) return std::nullopt;
        fb = *next;
    }
    return std::nullopt;
}

} // namespace mga
