#pragma once

#include <cmath>
#include <utility>

namespace cohtherm {

// Golden-section minimization of a unimodal function on [lo, hi].
// Returns the midpoint of the final bracket (width < tol).
template <typename F>
double golden_section_min(F&& f, double lo, double hi, double tol) {
    constexpr double invphi = 0.6180339887498948482;
    double c = hi - invphi * (hi - lo);
    double d = lo + invphi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    while (hi - lo > tol) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - invphi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + invphi * (hi - lo);
            fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

// Coarse grid scan followed by golden-section refinement around the best
// cell.  Guards against converging into the wrong basin when f has more
// than one local minimum.
template <typename F>
double grid_then_golden_min(F&& f, double lo, double hi, int grid_points, double tol) {
    double best_x = lo;
    double best_f = f(lo);
    for (int i = 1; i <= grid_points; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / grid_points;
        const double fx = f(x);
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
    }
    const double cell = (hi - lo) / grid_points;
    const double a = std::max(lo, best_x - cell);
    const double b = std::min(hi, best_x + cell);
    return golden_section_min(f, a, b, tol);
}

}  // namespace cohtherm
