#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "revbound/mechanisms.hpp"
#include "revbound/priors.hpp"

namespace revbound::lp {

enum class LpStatus { Optimal, IterationLimit };

/// Dense LP in the form  max c.y  s.t.  A y <= b,  y >= 0,  with b >= 0 so
/// the slack basis is feasible.
struct DenseLp {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;  ///< row-major rows x cols
    std::vector<double> b;
    std::vector<double> c;
};

struct SimplexResult {
    LpStatus status = LpStatus::Optimal;
    double objective = 0.0;
    std::vector<double> y;
    std::size_t pivots = 0;
    std::size_t bland_pivots = 0;
};

struct SolverOptions {
    std::size_t max_pivots = 1'000'000;
    /// Consecutive degenerate pivots tolerated under the largest-coefficient
    /// rule before switching to Bland's rule.
    std::size_t degenerate_streak = 50;
};

/// Tableau simplex: Dantzig pricing, falling back to Bland's smallest-index
/// rule through runs of degenerate pivots. Deterministic for a given input.
/// Throws Error if the LP is unbounded.
SimplexResult solve_dense(const DenseLp& lp, const SolverOptions& options = {});

/// Discretized single-buyer revenue program on a tensor grid.
struct LpInstance {
    int m = 0;
    std::size_t points_per_axis = 0;
    double truncation_quantile = 0.0;
    std::vector<double> grid;    ///< row-major points x m, lexicographic order
    std::vector<double> masses;  ///< probability of each grid cell

    std::size_t size() const noexcept { return masses.size(); }
    std::span<const double> point(std::size_t i) const {
        return {grid.data() + i * static_cast<std::size_t>(m), static_cast<std::size_t>(m)};
    }
};

/// Largest grid accepted by build_lp(); keeps the pairwise-IC program near
/// 16k dense constraints.
inline constexpr std::size_t kMaxGridPoints = 128;

/// Grids each axis with n evenly spaced points on [0, 1] (uniform) or
/// [0, F^{-1}(q)] (exponential). Each point owns the cell between it and the
/// next point (types rounded down); the last point owns the tail beyond the
/// grid, which has zero mass for uniform priors.
/// Throws SizeLimit for m > 2 or more than kMaxGridPoints points.
LpInstance build_lp(const ProductPrior& prior, std::size_t n, double quantile = 0.999);

struct LpSolution {
    double value = 0.0;
    std::vector<double> allocations;  ///< points x m
    std::vector<double> payments;
    LpStatus status = LpStatus::Optimal;
    std::size_t pivots = 0;
    std::size_t constraints = 0;
};

/// Maximizes expected payment subject to IR, pairwise IC between all grid
/// types, and allocations in [0,1]. IC rows are generated lazily: the program
/// starts with neighbouring pairs and adds every violated pair until none
/// remains. IR and IC rows carry a deterministic slack of at most 2e-9 to
/// avoid a degenerate start; `constraints` reports the final row count.
LpSolution solve_lp(const LpInstance& instance, const SolverOptions& options = {});

struct LpAudit {
    double max_ic_violation = 0.0;
    double max_ir_violation = 0.0;
    double max_range_violation = 0.0;
    double recomputed_value = 0.0;

    bool feasible(double tol = 1e-8) const noexcept {
        return max_ic_violation <= tol && max_ir_violation <= tol && max_range_violation <= tol;
    }
};

/// Re-checks every constraint by direct enumeration over the grid.
LpAudit audit(const LpInstance& instance, const LpSolution& solution);

/// The solution's (allocation, payment) pairs as a menu mechanism.
Mechanism menu_of(const LpInstance& instance, const LpSolution& solution);

/// Expected payment when the types of `instance` choose from `menu`.
double menu_revenue(const LpInstance& instance, const Mechanism& menu);

}  // namespace revbound::lp
