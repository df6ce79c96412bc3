#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace noisestab::bounds {

class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bisection on [lo, hi]. Requires f(lo) and f(hi) of opposite sign (zero counts as a root).
/// Stops once the bracket is narrower than `x_tol` or cannot shrink in double precision.
template <class F>
double bisect(F&& f, double lo, double hi, double x_tol = 1e-12)
{
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    if (std::signbit(flo) == std::signbit(fhi))
        throw BracketError("no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                           "]: f = " + std::to_string(flo) + ", " + std::to_string(fhi));
    while (hi - lo > x_tol) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi))
            break;
        const double fm = f(mid);
        if (fm == 0.0)
            return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct Maximum {
    double x;
    double value;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
template <class F>
Maximum golden_max(F&& f, double lo, double hi, double x_tol = 1e-12)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > x_tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if (!(c > a && d < b && c <= d))
            break;
    }
    Maximum best{a, f(a)};
    for (double x : {c, d, b}) {
        const double v = f(x);
        if (v > best.value)
            best = {x, v};
    }
    return best;
}

} // namespace noisestab::bounds
