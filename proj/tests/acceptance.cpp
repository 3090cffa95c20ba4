// One PASS/FAIL line per acceptance criterion; exit status is the number of
// failed criteria. Reference values come from tests/oracles.hpp or from
// direct closed forms, never from the routine under test.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "oracles.hpp"
#include "revbound/bounds.hpp"
#include "revbound/dual_certificates.hpp"
#include "revbound/gamma_toolkit.hpp"
#include "revbound/lp.hpp"
#include "revbound/mechanisms.hpp"
#include "revbound/priors.hpp"

using namespace revbound;
using boost::math::quadrature::gauss_kronrod;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Collects failed checks for one criterion.
class Log {
public:
    void check(bool ok, const std::string& what) {
        if (!ok) failures_.push_back(what);
    }
    __attribute__((format(printf, 3, 4))) void check(bool ok, const char* fmt, ...) {
        if (ok) return;
        char buf[256];
        va_list args;
        va_start(args, fmt);
        std::vsnprintf(buf, sizeof buf, fmt, args);
        va_end(args);
        failures_.emplace_back(buf);
    }
    void note(const std::string& s) { notes_.push_back(s); }
    const std::vector<std::string>& failures() const { return failures_; }
    const std::vector<std::string>& notes() const { return notes_; }

private:
    std::vector<std::string> failures_;
    std::vector<std::string> notes_;
};

struct Criterion {
    int id;
    const char* title;
    double limit_ms;
    std::function<void(Log&)> body;
};

// ---------------------------------------------------------------------------

void closed_form_bounds(Log& log) {
    for (int m : {1, 2, 3, 10, 100}) {
        const double md = m;
        const double want = md * (1.0 + md * md) / (2.0 * (1.0 + md) * (1.0 + md));
        const double got = bounds::uniform_upper_bound(m);
        log.check(std::abs(got - want) <= 1e-12, "m=%d: %.17g vs %.17g", m, got, want);
    }
    log.check(std::abs(bounds::uniform_upper_bound(1) - 0.25) <= 1e-12, "m=1 spot value");
    log.check(std::abs(bounds::uniform_upper_bound(2) - 5.0 / 9.0) <= 1e-12, "m=2 spot value");
    log.check(std::abs(bounds::uniform_upper_bound(3) - 0.9375) <= 1e-12, "m=3 spot value");
}

void gamma_roots_and_profile(Log& log) {
    const double s1 = gamma::gamma_star(1);
    log.check(std::abs(s1 - 1.0) <= 1e-12, "gamma*_1 = %.17g", s1);
    // w^2 - w - 1 = 0
    const double s2_ref = (1.0 + std::sqrt(5.0)) / 2.0;
    const double s2 = gamma::gamma_star(2);
    log.check(std::abs(s2 - s2_ref) <= 1e-10, "gamma*_2 = %.17g vs %.17g", s2, s2_ref);
    const double s3_ref = oracle::largest_cubic_root(-1.0, -2.0, -2.0);
    const double s3 = gamma::gamma_star(3);
    log.check(std::abs(s3 - s3_ref) <= 1e-10, "gamma*_3 = %.17g vs %.17g", s3, s3_ref);
    for (int m = 1; m <= 20; ++m) {
        const gamma::GammaProfile p = gamma::big_g(m);
        const double closed = std::pow(p.gamma_star, m + 1) * std::exp(-p.gamma_star);
        // g is negative below gamma*, so the positive part starts there.
        const double q = gauss_kronrod<double, 61>::integrate(
            [m](double w) { return std::max(0.0, gamma::g(m, w)); }, 0.0, p.gamma_star, 15, 1e-13) +
                         gauss_kronrod<double, 61>::integrate(
            [m](double w) { return std::max(0.0, gamma::g(m, w)); }, p.gamma_star, p.gamma_star + 60.0 + m, 15,
            1e-13);
        log.check(rel(q, closed) <= 1e-8, "G(%d): quadrature %.15g vs %.15g", m, q, closed);
        log.check(rel(p.G, closed) <= 1e-12, "G(%d) profile %.15g vs %.15g", m, p.G, closed);
    }
}

void ratio_curves(Log& log) {
    const double r2 = bounds::ratio_separate_uniform(2);
    log.check(std::abs(r2 - 10.0 / 9.0) <= 1e-15, "uniform ratio m=2 = %.17g", r2);
    const double e2 = bounds::ratio_separate_exponential(2);
    const double e3 = bounds::ratio_separate_exponential(3);
    log.check(std::abs(e2 - 1.14163) <= 2e-3, "exponential ratio m=2 = %.9g", e2);
    log.check(std::abs(e3 - 1.24235) <= 2e-3, "exponential ratio m=3 = %.9g", e3);
    for (int m = 1; m <= 100; ++m) {
        const double sep = bounds::ratio_separate_uniform(m);
        const double bun = bounds::ratio_bundle_uniform(m);
        const double ex = bounds::ratio_separate_exponential(m);
        log.check(std::isfinite(sep) && std::isfinite(bun) && std::isfinite(ex) && sep >= 1.0 - 1e-12 &&
                      ex >= 1.0 - 1e-12,
                  "curve value at m=%d", m);
    }
    std::ostringstream s;
    s << "ratios m=2: " << e2 << ", m=3: " << e3;
    log.note(s.str());
}

void dual_certificates(Log& log) {
    const std::vector<std::pair<int, int>> uniform{{1, 200}, {2, 200}, {3, 100}};
    for (auto [m, grid] : uniform) {
        const duals::FeasibilityReport r = duals::verify_uniform_dual(m, grid);
        const double tol = m == 3 ? 5e-3 : 1e-3;
        const double want = bounds::uniform_upper_bound(m);
        log.check(r.derivative_violations == 0 && r.max_derivative_residual <= 1e-6,
                  "uniform m=%d: %zu derivative violations", m, r.derivative_violations);
        log.check(r.max_boundary_residual <= 1e-12, "uniform m=%d boundary residual", m);
        log.check(rel(r.objective_numeric, want) <= tol, "uniform m=%d objective %.9g vs %.9g", m,
                  r.objective_numeric, want);
    }
    const std::vector<std::vector<double>> rates{{1.0}, {1.0, 1.0}, {2.0, 1.0}};
    for (const auto& lam : rates) {
        const duals::FeasibilityReport r = duals::verify_exponential_dual(lam);
        // Closed form G(m)/m! sum_j 1/lambda_j, with G from the oracle's incomplete gamma.
        const int m = static_cast<int>(lam.size());
        const double s = gamma::gamma_star(m);
        const double g_m = s * oracle::upper_gamma(m, s);
        double inverse_sum = 0.0;
        for (double x : lam) inverse_sum += 1.0 / x;
        const double want = g_m / std::tgamma(m + 1.0) * inverse_sum;
        log.check(r.derivative_violations == 0 && r.max_derivative_residual <= 1e-6,
                  "exponential m=%d: %zu derivative violations", m, r.derivative_violations);
        log.check(r.max_boundary_residual <= 1e-12, "exponential m=%d boundary residual", m);
        log.check(rel(r.objective_numeric, want) <= 1e-3, "exponential m=%d objective %.9g vs %.9g", m,
                  r.objective_numeric, want);
    }
}

void exact_identities(Log& log) {
    using oracle::cpp_int;
    for (int m = 1; m <= 30; ++m) {
        const duals::IdentityCheck c = duals::appendix_c_identity(m);
        // Right side m (1 + m^2) (m+1)^(m-2), checked as m (1+m^2) (m+1)^m = rhs (m+1)^2.
        cpp_int lhs = 0, binom = 1;
        for (int k = 1; k <= m; ++k) {
            binom = binom * (m - k + 1) / k;
            cpp_int pw = 1;
            for (int i = 1; i < k; ++i) pw *= m;
            lhs += binom * k * k * pw;
        }
        cpp_int rhs_scaled = cpp_int(m) * (1 + m * m);
        for (int i = 0; i < m; ++i) rhs_scaled *= m + 1;
        log.check(lhs * (m + 1) * (m + 1) == rhs_scaled, "identity fails independently at m=%d", m);
        log.check(c.holds && c.lhs == lhs.str(), "library identity at m=%d", m);
    }
    for (int m = 1; m <= 100; ++m) {
        const gamma::GammaProfile p = gamma::big_g(m);
        // ln G - ln m! from the root alone.
        const double log_ratio = (m + 1) * std::log(p.gamma_star) - p.gamma_star - std::lgamma(m + 1.0);
        log.check(log_ratio < 0.0 && p.log_G_over_m_fact < 0.0, "G(m)/m! >= 1 at m=%d", m);
    }
    for (int m = 1; m <= 50; ++m) {
        const double s = gamma::gamma_star(m);
        for (double a : {0.5, s, 1.0 * m, m + 2.0}) {
            const double want = a * oracle::upper_gamma(m, a);
            double T = 80.0;
            while ((a + T) * oracle::upper_gamma(m, a + T) >= 1e-12 * want) T += 20.0;
            const double q =
                gauss_kronrod<double, 61>::integrate([m](double w) { return gamma::g(m, w); }, a, a + T, 20, 1e-13);
            log.check(rel(q, want) <= 1e-7, "tail integral m=%d a=%g: %.15g vs %.15g", m, a, q, want);
        }
    }
}

void mechanism_simulation(Log& log) {
    const std::vector<std::vector<double>> cases{{1.0}, {2.0, 1.0}, {1.0, 1.0, 1.0}};
    std::uint64_t seed = 20240501;
    for (const auto& lam : cases) {
        const int m = static_cast<int>(lam.size());
        const double s = gamma::gamma_star(m);
        const double want = s * oracle::upper_gamma(m, s) / std::tgamma(m) / lam.front();
        const RevenueEstimate est = simulate_revenue(proportional(lam), ProductPrior::exponential(lam), 10'000'000,
                                                     seed++);
        log.check(std::abs(est.mean - want) <= 3.0 * est.std_err, "proportional m=%d: %.7g vs %.7g (se %.2g)", m,
                  est.mean, want, est.std_err);
    }
    const RevenueEstimate sep =
        simulate_revenue(Mechanism::separate({0.5, 0.5}), ProductPrior::uniform_iid(2), 10'000'000, seed++);
    log.check(std::abs(sep.mean - 0.5) <= 3.0 * sep.std_err, "separate U2: %.7g (se %.2g)", sep.mean, sep.std_err);
    // Bundle at price gamma*/lambda sells when a Gamma(m, lambda) draw exceeds it.
    for (int m = 1; m <= 20; ++m) {
        for (double lam : {0.5, 1.0, 3.0}) {
            const double s = gamma::gamma_star(m);
            const double revenue = s / lam * boost::math::gamma_q(static_cast<double>(m), s);
            const std::vector<double> rates(m, lam);
            const double bound = bounds::exponential_upper_bound(rates);
            log.check(rel(revenue, bound) <= 1e-12, "bundle m=%d rate %g: %.17g vs %.17g", m, lam, revenue, bound);
        }
    }
}

void lp_sandwich(Log& log) {
    struct Case {
        const char* name;
        ProductPrior prior;
        std::size_t n;
        double lo, hi;
    };
    const std::vector<double> e2{1.0, 1.0};
    const double g2 = gamma::big_g(2).G;
    const std::vector<Case> cases{
        {"U1 n=101", ProductPrior::uniform_iid(1), 101, 0.24, 0.26},
        {"U2 n=11", ProductPrior::uniform_iid(2), 11, 0.50, 5.0 / 9.0 + 0.02},
        {"E(1)^2 n=11", ProductPrior::exponential(e2), 11, g2 - 0.05, g2 + 0.05},
    };
    for (const Case& c : cases) {
        const lp::LpInstance inst = lp::build_lp(c.prior, c.n);
        const lp::LpSolution sol = lp::solve_lp(inst);
        const lp::LpAudit a = lp::audit(inst, sol);
        log.check(sol.status == lp::LpStatus::Optimal, "%s: not optimal", c.name);
        log.check(a.feasible(), "%s: audit IC %.2g IR %.2g range %.2g", c.name, a.max_ic_violation,
                  a.max_ir_violation, a.max_range_violation);
        log.check(sol.value >= c.lo && sol.value <= c.hi, "%s: value %.9g outside [%.6g, %.6g]", c.name, sol.value,
                  c.lo, c.hi);
        std::ostringstream s;
        s << c.name << " value " << sol.value;
        log.note(s.str());
    }
}

void bundle_dominance(Log& log) {
    for (int m = 1; m <= 100; ++m) {
        const double brev = brev_uniform(m).revenue;
        log.check(brev >= m / 4.0 - 1e-12, "brev(%d) = %.15g < m/4", m, brev);
        const double rb = bounds::ratio_bundle_uniform(m);
        const double rs = bounds::ratio_separate_uniform(m);
        log.check(rb <= rs + 1e-12, "bundle ratio %.15g above separate %.15g at m=%d", rb, rs, m);
    }
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "closed-form uniform bounds", 1.0, closed_form_bounds},
        {2, "gamma roots and G profile", 1000.0, gamma_roots_and_profile},
        {3, "ratio curve anchors", 5000.0, ratio_curves},
        {4, "dual certificate verification", 60000.0, dual_certificates},
        {5, "exact identities", 5000.0, exact_identities},
        {6, "mechanism simulation vs closed forms", 30000.0, mechanism_simulation},
        {7, "LP oracle sandwich", 60000.0, lp_sandwich},
        {8, "bundle revenue dominance", 10000.0, bundle_dominance},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        Log log;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.body(log);
        } catch (const std::exception& e) {
            log.check(false, std::string("exception: ") + e.what());
        }
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        char buf[96];
        std::snprintf(buf, sizeof buf, "runtime %.3g ms over limit %.0f ms", ms, c.limit_ms);
        log.check(ms <= c.limit_ms, std::string(buf));
        const bool ok = log.failures().empty();
        failed += !ok;
        std::printf("%s %d %s (%.3g ms, limit %.0f ms)\n", ok ? "PASS" : "FAIL", c.id, c.title, ms, c.limit_ms);
        for (const std::string& n : log.notes()) std::printf("    %s\n", n.c_str());
        for (const std::string& f : log.failures()) std::printf("    - %s\n", f.c_str());
        std::fflush(stdout);
    }
    return failed;
}
