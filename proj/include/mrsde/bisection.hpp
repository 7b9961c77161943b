#pragma once

#include <cmath>
#include <cstddef>

namespace mrsde {

struct BisectionOutcome {
    double root = 0.0;
    double half_width = 0.0;  // achieved argument accuracy
    std::size_t iterations = 0;
};

// Root bracket for a nondecreasing f from its value at zero and a lower
// slope bound m: the root lies within |f0|/m of the origin.  When the slope
// bound is attained exactly the far endpoint IS the root and roundoff can
// flip its sign, so the reach is expanded slightly before the bracket is
// declared invalid.  Returns false when the expansion cannot produce a
// valid bracket, i.e. the declared m genuinely overstates the slope.
template <class F>
bool bracket_from_slope(F&& f, double f0, double m, double& lo, double& hi, double& f_reach) {
    double reach = -f0 / m;
    f_reach = f(reach);
    for (int attempt = 0; attempt < 4; ++attempt) {
        const bool valid = f0 > 0.0 ? f_reach <= 0.0 : f_reach >= 0.0;
        if (valid) break;
        reach = reach * (1.0 + 1e-4) + (f0 > 0.0 ? -1e-12 : 1e-12);
        f_reach = f(reach);
    }
    if (f0 > 0.0) {
        lo = reach;
        hi = 0.0;
        return f_reach <= 0.0;
    }
    lo = 0.0;
    hi = reach;
    return f_reach >= 0.0;
}

// Bisection for a nondecreasing f with f(lo) <= 0 <= f(hi).  Stops when the
// bracket is narrower than 2*tol, so |root - root*| <= max(tol, one ulp of
// the bracket endpoints).  The caller validates the bracket signs.
template <class F>
BisectionOutcome bisect_nondecreasing(F&& f, double lo, double hi, double tol) {
    BisectionOutcome out;
    while (hi - lo > 2.0 * tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket at the ulp floor
        ++out.iterations;
        if (f(mid) >= 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    out.root = 0.5 * (lo + hi);
    out.half_width = 0.5 * (hi - lo);
    return out;
}

}  // namespace mrsde
