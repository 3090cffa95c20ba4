#pragma once

#include <cmath>

namespace revbound {

struct Maximum {
    double argmax;
    double value;
};

/// Golden-section search for the maximum of a unimodal `f` on [lo, hi],
/// stopping once the bracket is narrower than `x_tol`.
template <class F>
Maximum golden_section_max(F&& f, double lo, double hi, double x_tol) {
    constexpr double inv_phi = 0.6180339887498948482;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
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
    }
    const double x = 0.5 * (a + b);
    const double fx = f(x);
    if (fc >= fx && fc >= fd) return {c, fc};
    if (fd >= fx) return {d, fd};
    return {x, fx};
}

}  // namespace revbound
