#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "revbound/bounds.hpp"
#include "revbound/errors.hpp"
#include "revbound/lp.hpp"
#include "revbound/mechanisms.hpp"
#include "revbound/random.hpp"

using namespace revbound;

namespace {

// Brute-force optimum of max c.y, A y <= b, y >= 0 by enumerating every
// vertex: choose `cols` tight constraints among the rows and y_i = 0 bounds.
double vertex_enumeration(const lp::DenseLp& p) {
    const std::size_t n = p.cols, total = p.rows + p.cols;
    double best = -INFINITY;
    std::vector<bool> pick(total, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(n), true);
    do {
        // Solve the n x n system by Gaussian elimination with pivoting.
        std::vector<double> m(n * (n + 1), 0.0);
        std::size_t r = 0;
        for (std::size_t k = 0; k < total; ++k) {
            if (!pick[k]) continue;
            if (k < p.rows) {
                for (std::size_t j = 0; j < n; ++j) m[r * (n + 1) + j] = p.a[k * n + j];
                m[r * (n + 1) + n] = p.b[k];
            } else {
                m[r * (n + 1) + (k - p.rows)] = 1.0;
            }
            ++r;
        }
        bool singular = false;
        for (std::size_t c = 0; c < n && !singular; ++c) {
            std::size_t piv = c;
            for (std::size_t i = c + 1; i < n; ++i)
                if (std::abs(m[i * (n + 1) + c]) > std::abs(m[piv * (n + 1) + c])) piv = i;
            if (std::abs(m[piv * (n + 1) + c]) < 1e-12) {
                singular = true;
                break;
            }
            for (std::size_t j = 0; j <= n; ++j) std::swap(m[c * (n + 1) + j], m[piv * (n + 1) + j]);
            for (std::size_t i = 0; i < n; ++i) {
                if (i == c) continue;
                const double f = m[i * (n + 1) + c] / m[c * (n + 1) + c];
                for (std::size_t j = c; j <= n; ++j) m[i * (n + 1) + j] -= f * m[c * (n + 1) + j];
            }
        }
        if (singular) continue;
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = m[i * (n + 1) + n] / m[i * (n + 1) + i];
        bool feasible = std::all_of(y.begin(), y.end(), [](double v) { return v >= -1e-9; });
        for (std::size_t k = 0; k < p.rows && feasible; ++k) {
            double lhs = 0.0;
            for (std::size_t j = 0; j < n; ++j) lhs += p.a[k * n + j] * y[j];
            feasible = lhs <= p.b[k] + 1e-9;
        }
        if (feasible) best = std::max(best, std::inner_product(p.c.begin(), p.c.end(), y.begin(), 0.0));
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return best;
}

// Best single posted price on a one-dimensional grid instance.
double best_posted_price(const lp::LpInstance& inst) {
    double best = 0.0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        double above = 0.0;
        for (std::size_t k = i; k < inst.size(); ++k) above += inst.masses[k];
        best = std::max(best, inst.point(i)[0] * above);
    }
    return best;
}

}  // namespace

TEST_CASE("dense simplex on a textbook problem") {
    lp::DenseLp p;
    p.rows = 2;
    p.cols = 2;
    p.a = {1, 2, 3, 1};
    p.b = {4, 6};
    p.c = {1, 1};
    const lp::SimplexResult r = lp::solve_dense(p);
    CHECK(r.status == lp::LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(2.8).epsilon(1e-12));
    CHECK(r.y[0] == doctest::Approx(1.6).epsilon(1e-12));
    CHECK(r.y[1] == doctest::Approx(1.2).epsilon(1e-12));
}

TEST_CASE("dense simplex terminates on a cycling example") {
    // Beale's example cycles under the textbook largest-coefficient rule.
    lp::DenseLp p;
    p.rows = 3;
    p.cols = 4;
    p.a = {0.25, -60, -0.04, 9, 0.5, -90, -0.02, 3, 0, 0, 1, 0};
    p.b = {0, 0, 1};
    p.c = {0.75, -150, 0.02, -6};
    lp::SolverOptions opts;
    opts.degenerate_streak = 2;
    const lp::SimplexResult r = lp::solve_dense(p, opts);
    CHECK(r.status == lp::LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(r.objective == doctest::Approx(vertex_enumeration(p)).epsilon(1e-9));
}

TEST_CASE("dense simplex matches vertex enumeration on random programs") {
    Stream s(2718, 0);
    for (int trial = 0; trial < 200; ++trial) {
        lp::DenseLp p;
        p.cols = 2 + trial % 3;
        p.rows = 3 + trial % 4;
        for (std::size_t i = 0; i < p.rows * p.cols; ++i) p.a.push_back(2.0 * s.uniform() - 0.5);
        for (std::size_t i = 0; i < p.rows; ++i) p.b.push_back(trial % 5 == 0 && i % 2 == 0 ? 0.0 : s.uniform());
        for (std::size_t j = 0; j < p.cols; ++j) p.c.push_back(2.0 * s.uniform() - 0.5);
        // Bound the region so the program has a finite optimum.
        for (std::size_t j = 0; j < p.cols; ++j) {
            for (std::size_t k = 0; k < p.cols; ++k) p.a.push_back(k == j ? 1.0 : 0.0);
            p.b.push_back(1.0 + s.uniform());
            ++p.rows;
        }
        const lp::SimplexResult r = lp::solve_dense(p);
        CHECK(r.status == lp::LpStatus::Optimal);
        CHECK(std::abs(r.objective - vertex_enumeration(p)) <= 1e-9);
    }
}

TEST_CASE("dense simplex rejects bad input") {
    lp::DenseLp p;
    p.rows = 1;
    p.cols = 1;
    p.a = {1};
    p.b = {-1};
    p.c = {1};
    CHECK_THROWS_AS(lp::solve_dense(p), InvalidArgument);
    p.b = {1};
    p.a = {-1};
    CHECK_THROWS_AS(lp::solve_dense(p), Error);
}

TEST_CASE("grid construction") {
    const lp::LpInstance u1 = lp::build_lp(ProductPrior::uniform_iid(1), 11);
    CHECK(u1.size() == 11);
    CHECK(u1.point(10)[0] == 1.0);
    CHECK(std::abs(std::accumulate(u1.masses.begin(), u1.masses.end(), 0.0) - 1.0) <= 1e-12);
    CHECK(u1.masses[0] == doctest::Approx(0.1).epsilon(1e-12));

    const lp::LpInstance u2 = lp::build_lp(ProductPrior::uniform_iid(2), 11);
    CHECK(u2.size() == 121);
    CHECK(std::abs(std::accumulate(u2.masses.begin(), u2.masses.end(), 0.0) - 1.0) <= 1e-12);
    for (std::size_t i = 1; i < u2.size(); ++i) {
        const auto a = u2.point(i - 1), b = u2.point(i);
        CHECK(std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()));
    }

    const std::vector<double> one{1.0};
    const lp::LpInstance e1 = lp::build_lp(ProductPrior::exponential(one), 11, 0.999);
    CHECK(e1.point(0)[0] == 0.0);
    CHECK(e1.point(10)[0] == doctest::Approx(std::log(1000.0)).epsilon(1e-14));
    CHECK(std::abs(std::accumulate(e1.masses.begin(), e1.masses.end(), 0.0) - 1.0) <= 1e-12);
    CHECK(e1.masses[10] == doctest::Approx(0.001).epsilon(1e-12));
    for (double w : e1.masses) CHECK(w >= 0.0);
}

TEST_CASE("grid size limits") {
    CHECK_THROWS_AS(lp::build_lp(ProductPrior::uniform_iid(3), 3), SizeLimit);
    CHECK_THROWS_AS(lp::build_lp(ProductPrior::uniform_iid(2), 12), SizeLimit);
    CHECK_THROWS_AS(lp::build_lp(ProductPrior::uniform_iid(1), 129), SizeLimit);
    CHECK_NOTHROW(lp::build_lp(ProductPrior::uniform_iid(1), 128));
    CHECK_THROWS_AS(lp::build_lp(ProductPrior::uniform_iid(1), 1), InvalidArgument);
}

TEST_CASE("one-item programs equal the best posted price") {
    const std::vector<double> rate{1.0};
    for (std::size_t n : {6, 11, 21, 41}) {
        for (const ProductPrior& prior : {ProductPrior::uniform_iid(1), ProductPrior::exponential(rate)}) {
            const lp::LpInstance inst = lp::build_lp(prior, n);
            const lp::LpSolution sol = lp::solve_lp(inst);
            CHECK(sol.status == lp::LpStatus::Optimal);
            CHECK(sol.value == doctest::Approx(best_posted_price(inst)).epsilon(1e-7));
            CHECK(lp::audit(inst, sol).feasible());
        }
    }
}

TEST_CASE("uniform single item at 101 points") {
    const lp::LpInstance inst = lp::build_lp(ProductPrior::uniform_iid(1), 101);
    const lp::LpSolution sol = lp::solve_lp(inst);
    CHECK(std::abs(sol.value - 0.25) <= 0.01);
    const lp::LpAudit a = lp::audit(inst, sol);
    CHECK(a.feasible(1e-8));
    CHECK(a.recomputed_value == doctest::Approx(sol.value).epsilon(1e-12));
    CHECK(sol.value <= bounds::uniform_upper_bound(1) + 0.02);
}

TEST_CASE("nested grids") {
    std::vector<double> values;
    std::vector<lp::LpInstance> insts;
    std::vector<lp::LpSolution> sols;
    for (std::size_t n : {6, 11, 21}) {
        insts.push_back(lp::build_lp(ProductPrior::uniform_iid(1), n));
        sols.push_back(lp::solve_lp(insts.back()));
        values.push_back(sols.back().value);
    }
    CHECK(values[0] <= values[1] + 1e-9);
    CHECK(values[1] <= values[2] + 1e-9);
    // A coarse optimum, offered as a menu on the finer grid, never beats the
    // finer optimum.
    for (std::size_t k = 0; k + 1 < insts.size(); ++k)
        CHECK(lp::menu_revenue(insts[k + 1], lp::menu_of(insts[k], sols[k])) <= values[k + 1] + 1e-8);
}

TEST_CASE("two uniform items") {
    const lp::LpInstance inst = lp::build_lp(ProductPrior::uniform_iid(2), 11);
    const lp::LpSolution sol = lp::solve_lp(inst);
    CHECK(sol.status == lp::LpStatus::Optimal);
    CHECK(lp::audit(inst, sol).feasible(1e-8));
    CHECK(sol.value >= 0.50);
    CHECK(sol.value <= 5.0 / 9.0 + 0.02);
    // Any menu evaluated on the grid is a lower bound.
    CHECK(lp::menu_revenue(inst, Mechanism::separate({0.5, 0.5})) <= sol.value + 1e-8);
    for (int i = 1; i < 20; ++i)
        CHECK(lp::menu_revenue(inst, Mechanism::full_bundle(2, 0.1 * i)) <= sol.value + 1e-8);
    const lp::LpSolution again = lp::solve_lp(inst);
    CHECK(again.value == sol.value);
}

TEST_CASE("two exponential items") {
    const std::vector<double> rates{1.0, 1.0};
    const lp::LpInstance inst = lp::build_lp(ProductPrior::exponential(rates), 11, 0.999);
    const lp::LpSolution sol = lp::solve_lp(inst);
    CHECK(sol.status == lp::LpStatus::Optimal);
    CHECK(lp::audit(inst, sol).feasible(1e-8));
    CHECK(sol.value <= bounds::exponential_upper_bound(rates) + 0.02);
    for (int i = 1; i < 40; ++i)
        CHECK(lp::menu_revenue(inst, Mechanism::full_bundle(2, 0.1 * i)) <= sol.value + 1e-8);
    CHECK(lp::menu_revenue(inst, proportional(rates)) <= sol.value + 1e-8);
}

TEST_CASE("iteration cap is reported") {
    const lp::LpInstance inst = lp::build_lp(ProductPrior::uniform_iid(1), 41);
    lp::SolverOptions opts;
    opts.max_pivots = 3;
    CHECK(lp::solve_lp(inst, opts).status == lp::LpStatus::IterationLimit);
}
