#include "revbound/gamma_toolkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "revbound/errors.hpp"

namespace revbound::gamma {
namespace {

constexpr int kDirectLimit = 30;
constexpr int kBisectionCap = 200;

void require_order(int m) {
    if (m < 1) throw InvalidArgument("incomplete gamma order must be >= 1");
}

void require_argument(double w) {
    if (!(w >= 0.0) || std::isnan(w)) throw InvalidArgument("incomplete gamma argument must be >= 0");
}

// ln sum_{k<m} w^k / k!
double log_exp_partial_sum(int m, double w) {
    if (w == 0.0) return 0.0;
    if (m <= kDirectLimit) {
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < m; ++k) {
            term *= w / k;
            sum += term;
        }
        return std::log(sum);
    }
    const double lw = std::log(w);
    double peak = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < m; ++k) peak = std::max(peak, k * lw - std::lgamma(k + 1.0));
    double acc = 0.0;
    for (int k = 0; k < m; ++k) acc += std::exp(k * lw - std::lgamma(k + 1.0) - peak);
    return peak + std::log(acc);
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

double log_power_exp(int m, double w) {
    // ln(w^m e^{-w})
    if (w == 0.0) return -std::numeric_limits<double>::infinity();
    return m * std::log(w) - w;
}

LogReal from_log(double log_abs) {
    return {std::exp(log_abs), log_abs, 1};
}

// sum_{k<m} (m-1)!/k! w^{k-m}; equals Gamma(m,w) / (w^m e^{-w}).
double tail_ratio(int m, double w) {
    if (w == 0.0) return std::numeric_limits<double>::infinity();
    double term = 1.0 / w, sum = term;
    for (int j = 1; j < m; ++j) {
        term *= (m - j) / w;
        sum += term;
    }
    return sum;
}

}  // namespace

LogReal upper_incomplete_gamma(int m, double w) {
    require_order(m);
    require_argument(w);
    if (std::isinf(w)) return {0.0, -std::numeric_limits<double>::infinity(), 0};
    const double log_abs = log_factorial(m - 1) - w + log_exp_partial_sum(m, w);
    if (m <= kDirectLimit) {
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < m; ++k) {
            term *= w / k;
            sum += term;
        }
        const double value = std::tgamma(static_cast<double>(m)) * std::exp(-w) * sum;
        return {value, log_abs, 1};
    }
    return from_log(log_abs);
}

double g(int m, double w) {
    require_order(m);
    require_argument(w);
    const LogReal upper = upper_incomplete_gamma(m + 1, w);
    const LogReal lower = upper_incomplete_gamma(m, w);
    if (m + 1 <= kDirectLimit) return upper.value - (m + 1) * lower.value;
    // Gamma(m+1,w) (1 - (m+1) Gamma(m,w) / Gamma(m+1,w)) with the ratio in logs.
    const double rel = std::exp(std::log(m + 1.0) + lower.log_abs - upper.log_abs);
    return std::exp(upper.log_abs) * (1.0 - rel);
}

double g_alternate(int m, double w) {
    require_order(m);
    require_argument(w);
    const LogReal gam = upper_incomplete_gamma(m, w);
    if (m <= kDirectLimit) return std::pow(w, m) * std::exp(-w) - gam.value;
    const double lp = log_power_exp(m, w);
    if (lp == -INFINITY) return -gam.value;
    return std::exp(lp) * (1.0 - std::exp(gam.log_abs - lp));
}

double g_scale(int m, double w) {
    require_order(m);
    require_argument(w);
    const LogReal upper = upper_incomplete_gamma(m + 1, w);
    return std::exp(std::max(upper.log_abs, log_power_exp(m, w)));
}

double g_derivative(int m, double w) {
    require_order(m);
    require_argument(w);
    if (w == 0.0) return m == 1 ? 2.0 : 0.0;
    return (m + 1 - w) * std::exp((m - 1) * std::log(w) - w);
}

int g_sign(int m, double w) {
    require_order(m);
    require_argument(w);
    const double r = tail_ratio(m, w);
    return r < 1.0 ? 1 : (r > 1.0 ? -1 : 0);
}

double gamma_star(int m, double rel_tol) {
    require_order(m);
    if (!(rel_tol > 0.0)) throw InvalidArgument("bisection tolerance must be positive");
    // g(m,0) = -(m-1)! < 0 < g(m,m+1) and g increases on [0, m+1].
    double lo = 0.0, hi = m + 1.0;
    for (int it = 0; it < kBisectionCap && hi - lo > rel_tol * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (g_sign(m, mid) > 0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

GammaProfile big_g(int m) {
    require_order(m);
    GammaProfile p;
    p.m = m;
    p.gamma_star = gamma_star(m);
    p.log_G = (m + 1) * std::log(p.gamma_star) - p.gamma_star;
    p.G = std::exp(p.log_G);
    p.log_G_over_m_fact = p.log_G - log_factorial(m);
    p.log_G_via_gamma = std::log(p.gamma_star) + upper_incomplete_gamma(m, p.gamma_star).log_abs;
    return p;
}

}  // namespace revbound::gamma
