#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library under test.

#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

inline cpp_rational exact(double x) {
    // Every finite double is a dyadic rational.
    int e = 0;
    const double mant = std::frexp(x, &e);
    const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
    cpp_rational r(scaled);
    e -= 53;
    if (e >= 0)
        r *= cpp_rational(cpp_int(1) << e);
    else
        r /= cpp_rational(cpp_int(1) << -e);
    return r;
}

/// Irwin-Hall CDF in exact rational arithmetic.
inline double irwin_hall_exact(int m, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= m) return 1.0;
    const cpp_rational xr = exact(x);
    cpp_rational sum = 0;
    cpp_int binom = 1;
    for (int k = 0; k <= m && k <= x; ++k) {
        cpp_rational t = xr - k;
        cpp_rational p = 1;
        for (int i = 0; i < m; ++i) p *= t;
        sum += (k % 2 == 0 ? 1 : -1) * cpp_rational(binom) * p;
        binom = binom * (m - k) / (k + 1);
    }
    cpp_int fact = 1;
    for (int i = 2; i <= m; ++i) fact *= i;
    sum /= cpp_rational(fact);
    return static_cast<double>(sum);
}

/// CDF of a sum of m U[0,1] variables by m-1 trapezoid convolutions of the
/// uniform density with `per_unit` cells per unit length over [0, m];
/// returns the CDF at the grid nodes i / per_unit.
inline std::vector<double> irwin_hall_convolution(int m, std::size_t per_unit) {
    const double h = 1.0 / static_cast<double>(per_unit);
    const std::size_t nodes = per_unit * static_cast<std::size_t>(m) + 1;
    std::vector<double> density(nodes, 0.0);
    // The jump at 1 sits on a node; the midpoint value keeps the trapezoid
    // rule exact for the step.
    for (std::size_t i = 0; i <= per_unit; ++i) density[i] = i == per_unit ? 0.5 : 1.0;
    for (int step = 1; step < m; ++step) {
        // (f * 1_[0,1])(x) = integral of f over [x-1, x]; done by prefix sums of
        // the trapezoid rule with linear interpolation at x-1.
        std::vector<double> prefix(nodes, 0.0);
        for (std::size_t i = 1; i < nodes; ++i) prefix[i] = prefix[i - 1] + 0.5 * h * (density[i - 1] + density[i]);
        auto integral_to = [&](double x) {
            if (x <= 0.0) return 0.0;
            const double pos = x / h;
            const auto i = static_cast<std::size_t>(pos);
            if (i + 1 >= nodes) return prefix.back();
            const double t = pos - static_cast<double>(i);
            const double fx = density[i] + t * (density[i + 1] - density[i]);
            return prefix[i] + 0.5 * t * h * (density[i] + fx);
        };
        std::vector<double> next(nodes, 0.0);
        for (std::size_t i = 0; i < nodes; ++i) {
            const double x = i * h;
            next[i] = integral_to(x) - integral_to(x - 1.0);
        }
        density = std::move(next);
    }
    std::vector<double> cdf(nodes, 0.0);
    for (std::size_t i = 1; i < nodes; ++i) cdf[i] = cdf[i - 1] + 0.5 * h * (density[i - 1] + density[i]);
    return cdf;
}

/// Upper incomplete gamma for integer order via Boost.
inline double upper_gamma(int m, double w) { return boost::math::tgamma(static_cast<double>(m), w); }

/// g(m, w) = Gamma(m+1, w) - (m+1) Gamma(m, w) via Boost.
inline double g(int m, double w) { return upper_gamma(m + 1, w) - (m + 1) * upper_gamma(m, w); }

/// The real roots of x^3 + a x^2 + b x + c by the trigonometric or Cardano
/// formula; returns the largest real root.
inline double largest_cubic_root(double a, double b, double c) {
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double disc = q * q / 4.0 + p * p * p / 27.0;
    double t;
    if (disc > 0.0) {
        const double s = std::sqrt(disc);
        t = std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s);
    } else {
        const double r = 2.0 * std::sqrt(-p / 3.0);
        const double phi = std::acos(3.0 * q / (p * r));
        t = r * std::cos(phi / 3.0);
    }
    return t - a / 3.0;
}

/// Golden-section maximization of a unimodal function on [lo, hi].
template <class F>
double argmax(F f, double lo, double hi, double tol = 1e-13) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        } else {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace oracle
