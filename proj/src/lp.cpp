#include "revbound/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "revbound/errors.hpp"

namespace revbound::lp {
namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kFeasTol = 1e-12;
constexpr double kCostEps = 1e-9;
constexpr double kDropEps = 1e-14;
constexpr double kSlack = 1e-9;

class Tableau {
public:
    explicit Tableau(const DenseLp& lp)
        : rows_(lp.rows), cols_(lp.cols), t_(lp.a), rhs_(lp.b), cost_(lp.c),
          basic_(lp.rows), nonbasic_(lp.cols) {
        std::iota(nonbasic_.begin(), nonbasic_.end(), std::size_t{0});
        std::iota(basic_.begin(), basic_.end(), lp.cols);
    }

    // Entering column under Dantzig (largest reduced cost) or Bland (smallest
    // variable id); npos at optimality.
    std::size_t entering(bool bland) const {
        std::size_t best = npos;
        for (std::size_t j = 0; j < cols_; ++j) {
            if (cost_[j] <= kCostEps) continue;
            if (best == npos) {
                best = j;
                continue;
            }
            if (bland ? nonbasic_[j] < nonbasic_[best]
                      : (cost_[j] > cost_[best] ||
                         (cost_[j] == cost_[best] && nonbasic_[j] < nonbasic_[best])))
                best = j;
        }
        return best;
    }

    // Two-pass (Harris) ratio test. The first pass finds the smallest ratio
    // with every rhs relaxed by kFeasTol; the second picks, among rows within
    // that relaxed bound, the largest pivot, or under Bland's rule the
    // smallest basic variable id.
    std::size_t leaving(std::size_t e, bool bland) const {
        double bound = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < rows_; ++i) {
            const double a = t_[i * cols_ + e];
            if (a > kPivotEps) bound = std::min(bound, (std::max(0.0, rhs_[i]) + kFeasTol) / a);
        }
        std::size_t best = npos;
        for (std::size_t i = 0; i < rows_; ++i) {
            const double a = t_[i * cols_ + e];
            if (a <= kPivotEps) continue;
            const double q = std::max(0.0, rhs_[i]) / a;
            if (q > bound) continue;
            if (best == npos ||
                (bland ? basic_[i] < basic_[best]
                       : (a > t_[best * cols_ + e] ||
                          (a == t_[best * cols_ + e] && basic_[i] < basic_[best])))) {
                best = i;
            }
        }
        return best;
    }

    void pivot(std::size_t r, std::size_t e) {
        double* prow = &t_[r * cols_];
        const double p = prow[e];
        for (std::size_t j = 0; j < cols_; ++j) prow[j] /= p;
        prow[e] = 1.0 / p;
        rhs_[r] /= p;

        nz_.clear();
        for (std::size_t j = 0; j < cols_; ++j)
            if (j != e && prow[j] != 0.0) nz_.push_back(j);

        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == r) continue;
            double* row = &t_[i * cols_];
            const double f = row[e];
            if (f == 0.0) continue;
            for (std::size_t j : nz_) {
                double v = row[j] - f * prow[j];
                if (std::abs(v) < kDropEps) v = 0.0;
                row[j] = v;
            }
            row[e] = -f * prow[e];
            rhs_[i] -= f * rhs_[r];
            if (std::abs(rhs_[i]) < kDropEps) rhs_[i] = 0.0;
        }
        const double f = cost_[e];
        for (std::size_t j : nz_) cost_[j] -= f * prow[j];
        cost_[e] = -f * prow[e];
        objective_ += f * rhs_[r];
        std::swap(basic_[r], nonbasic_[e]);
    }

    double objective() const noexcept { return objective_; }

    std::vector<double> primal(std::size_t originals) const {
        std::vector<double> y(originals, 0.0);
        for (std::size_t i = 0; i < rows_; ++i)
            if (basic_[i] < originals) y[basic_[i]] = rhs_[i];
        return y;
    }

    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

private:
    std::size_t rows_, cols_;
    std::vector<double> t_;
    std::vector<double> rhs_;
    std::vector<double> cost_;
    std::vector<std::size_t> basic_;
    std::vector<std::size_t> nonbasic_;
    std::vector<std::size_t> nz_;
    double objective_ = 0.0;
};

}  // namespace

SimplexResult solve_dense(const DenseLp& lp, const SolverOptions& options) {
    if (lp.a.size() != lp.rows * lp.cols || lp.b.size() != lp.rows || lp.c.size() != lp.cols)
        throw InvalidArgument("LP dimensions do not match its data");
    for (double bi : lp.b)
        if (!(bi >= 0.0)) throw InvalidArgument("dense simplex needs b >= 0");

    Tableau tab(lp);
    SimplexResult out;
    std::size_t streak = 0;
    bool bland = false;
    while (true) {
        const std::size_t e = tab.entering(bland);
        if (e == Tableau::npos) break;
        if (out.pivots >= options.max_pivots) {
            out.status = LpStatus::IterationLimit;
            break;
        }
        const std::size_t r = tab.leaving(e, bland);
        if (r == Tableau::npos) throw Error("linear program is unbounded");
        const double before = tab.objective();
        tab.pivot(r, e);
        ++out.pivots;
        if (bland) ++out.bland_pivots;
        if (tab.objective() - before > 1e-12 * (1.0 + std::abs(before))) {
            streak = 0;
            bland = false;
        } else if (++streak > options.degenerate_streak) {
            bland = true;
        }
    }
    out.objective = tab.objective();
    out.y = tab.primal(lp.cols);
    return out;
}

LpInstance build_lp(const ProductPrior& prior, std::size_t n, double quantile) {
    const std::size_t m = prior.items();
    if (m > 2) throw SizeLimit("LP oracle supports at most 2 items");
    if (n < 2) throw InvalidArgument("LP oracle needs at least 2 points per axis");
    std::size_t points = 1;
    for (std::size_t j = 0; j < m; ++j) points *= n;
    if (points > kMaxGridPoints) {
        std::ostringstream msg;
        msg << "LP oracle supports at most " << kMaxGridPoints << " grid points (got " << points << ")";
        throw SizeLimit(msg.str());
    }
    if (prior.family() == Family::Exponential && !(quantile > 0.0 && quantile < 1.0))
        throw InvalidArgument("truncation quantile must lie in (0, 1)");

    std::vector<std::vector<double>> axis_points(m), axis_mass(m);
    for (std::size_t j = 0; j < m; ++j) {
        const Prior& f = prior[j];
        const double upper = f.family() == Family::UniformUnit ? 1.0 : f.quantile(quantile);
        const double h = upper / static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = i + 1 == n ? upper : h * static_cast<double>(i);
            // Each point stands for the cell above it (types rounded down); the
            // last point carries the tail.
            const double right = i + 1 == n ? f.support_upper() : h * static_cast<double>(i + 1);
            axis_points[j].push_back(x);
            axis_mass[j].push_back((std::isinf(right) ? 1.0 : f.cdf(right)) - f.cdf(x));
        }
    }

    LpInstance inst;
    inst.m = static_cast<int>(m);
    inst.points_per_axis = n;
    inst.truncation_quantile = prior.family() == Family::Exponential ? quantile : 1.0;
    std::size_t total = 1;
    for (std::size_t j = 0; j < m; ++j) total *= n;
    inst.grid.reserve(total * m);
    inst.masses.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        double mass = 1.0;
        std::vector<double> pt(m);
        for (std::size_t j = m; j-- > 0;) {
            const std::size_t i = rest % n;
            rest /= n;
            pt[j] = axis_points[j][i];
            mass *= axis_mass[j][i];
        }
        inst.grid.insert(inst.grid.end(), pt.begin(), pt.end());
        inst.masses.push_back(mass);
    }
    return inst;
}

namespace {

struct IcPair {
    std::size_t type;
    std::size_t option;
    bool operator<(const IcPair& o) const noexcept {
        return type != o.type ? type < o.type : option < o.option;
    }
};

DenseLp assemble(const LpInstance& instance, const std::set<IcPair>& pairs) {
    const std::size_t m = static_cast<std::size_t>(instance.m);
    const std::size_t pts = instance.size();
    const std::size_t width = m + 1;  // a_1..a_m, p per type
    DenseLp lp;
    lp.cols = pts * width;
    lp.rows = pts + pairs.size() + pts * m;
    lp.a.assign(lp.rows * lp.cols, 0.0);
    lp.b.assign(lp.rows, 0.0);
    lp.c.assign(lp.cols, 0.0);
    for (std::size_t i = 0; i < pts; ++i) lp.c[i * width + m] = instance.masses[i];

    std::size_t row = 0;
    auto truthful_side = [&](std::size_t r, std::size_t i) {
        // -(a_i . x_i) + p_i
        const auto x = instance.point(i);
        for (std::size_t d = 0; d < m; ++d) lp.a[r * lp.cols + i * width + d] = -x[d];
        lp.a[r * lp.cols + i * width + m] = 1.0;
    };
    // IR and IC rows get a tiny deterministic slack so the all-zero start is
    // not degenerate; it stays well inside the audit tolerance.
    auto slack = [&](std::size_t r) {
        lp.b[r] = kSlack * (1.0 + std::fmod(0.6180339887498949 * static_cast<double>(r), 1.0));
    };
    for (std::size_t i = 0; i < pts; ++i) {
        slack(row);
        truthful_side(row++, i);  // IR
    }
    for (const IcPair& pr : pairs) {
        slack(row);
        const auto x = instance.point(pr.type);
        truthful_side(row, pr.type);  // IC: a_k . x_i - p_k <= a_i . x_i - p_i
        for (std::size_t d = 0; d < m; ++d) lp.a[row * lp.cols + pr.option * width + d] = x[d];
        lp.a[row * lp.cols + pr.option * width + m] = -1.0;
        ++row;
    }
    for (std::size_t i = 0; i < pts; ++i)
        for (std::size_t d = 0; d < m; ++d) {
            lp.a[row * lp.cols + i * width + d] = 1.0;
            lp.b[row] = 1.0;
            ++row;
        }
    return lp;
}

}  // namespace

LpSolution solve_lp(const LpInstance& instance, const SolverOptions& options) {
    // Constraint generation: start from IC between grid neighbours, then add
    // every violated pairwise IC constraint until the solution satisfies all.
    const std::size_t m = static_cast<std::size_t>(instance.m);
    const std::size_t pts = instance.size();
    const std::size_t n = instance.points_per_axis;
    const std::size_t width = m + 1;
    std::set<IcPair> pairs;
    for (std::size_t i = 0; i < pts; ++i) {
        std::size_t stride = 1;
        for (std::size_t d = 0; d < m; ++d, stride *= n) {
            const std::size_t coord = (i / stride) % n;
            if (coord > 0) pairs.insert({i, i - stride});
            if (coord + 1 < n) pairs.insert({i, i + stride});
        }
    }

    LpSolution sol;
    sol.allocations.resize(pts * m);
    sol.payments.resize(pts);
    SolverOptions budget = options;
    while (true) {
        const DenseLp lp = assemble(instance, pairs);
        const SimplexResult res = solve_dense(lp, budget);
        sol.status = res.status;
        sol.pivots += res.pivots;
        sol.constraints = lp.rows;
        for (std::size_t i = 0; i < pts; ++i) {
            for (std::size_t d = 0; d < m; ++d) sol.allocations[i * m + d] = res.y[i * width + d];
            sol.payments[i] = res.y[i * width + m];
        }
        if (res.status != LpStatus::Optimal) break;
        budget.max_pivots = options.max_pivots > sol.pivots ? options.max_pivots - sol.pivots : 0;

        std::size_t added = 0;
        for (std::size_t i = 0; i < pts; ++i) {
            const auto x = instance.point(i);
            auto utility = [&](std::size_t k) {
                double u = -sol.payments[k];
                for (std::size_t d = 0; d < m; ++d) u += sol.allocations[k * m + d] * x[d];
                return u;
            };
            const double truthful = utility(i);
            for (std::size_t k = 0; k < pts; ++k)
                if (k != i && utility(k) - truthful > 4.0 * kSlack && pairs.insert({i, k}).second) ++added;
        }
        if (added == 0) break;
    }
    sol.value = 0.0;
    for (std::size_t i = 0; i < pts; ++i) sol.value += instance.masses[i] * sol.payments[i];
    return sol;
}

LpAudit audit(const LpInstance& instance, const LpSolution& solution) {
    const std::size_t m = static_cast<std::size_t>(instance.m);
    const std::size_t pts = instance.size();
    LpAudit out;
    auto utility = [&](std::size_t type, std::size_t option) {
        const auto x = instance.point(type);
        double u = -solution.payments[option];
        for (std::size_t d = 0; d < m; ++d) u += solution.allocations[option * m + d] * x[d];
        return u;
    };
    for (std::size_t i = 0; i < pts; ++i) {
        const double truthful = utility(i, i);
        out.max_ir_violation = std::max(out.max_ir_violation, -truthful);
        for (std::size_t k = 0; k < pts; ++k)
            if (k != i) out.max_ic_violation = std::max(out.max_ic_violation, utility(i, k) - truthful);
        for (std::size_t d = 0; d < m; ++d) {
            const double a = solution.allocations[i * m + d];
            out.max_range_violation = std::max({out.max_range_violation, -a, a - 1.0});
        }
        out.recomputed_value += instance.masses[i] * solution.payments[i];
    }
    return out;
}

Mechanism menu_of(const LpInstance& instance, const LpSolution& solution) {
    const std::size_t m = static_cast<std::size_t>(instance.m);
    std::vector<MenuOption> options;
    options.reserve(instance.size());
    for (std::size_t i = 0; i < instance.size(); ++i) {
        MenuOption o;
        o.allocation.assign(solution.allocations.begin() + static_cast<std::ptrdiff_t>(i * m),
                            solution.allocations.begin() + static_cast<std::ptrdiff_t>((i + 1) * m));
        for (double& a : o.allocation) a = std::clamp(a, 0.0, 1.0);
        o.price = std::max(0.0, solution.payments[i]);
        options.push_back(std::move(o));
    }
    return Mechanism("lp-menu", m, std::move(options));
}

double menu_revenue(const LpInstance& instance, const Mechanism& menu) {
    double total = 0.0;
    for (std::size_t i = 0; i < instance.size(); ++i)
        total += instance.masses[i] * menu.payment(instance.point(i));
    return total;
}

}  // namespace revbound::lp
