#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace revbound::duals {

/// Dual solution certifying the U[0,1]^m revenue bound.
///
/// With t = 1/(m+1), v_j = [x_j > t], k = sum v_j and c_k = 1 - k/(m+1):
/// z_j(x) = 0 when v_j = 0, else max{0, (m+1)/k (x_j - c_k)}.
class UniformDual {
public:
    explicit UniformDual(int m);

    int items() const noexcept { return m_; }
    double threshold() const noexcept { return 1.0 / (m_ + 1); }
    /// Every location i/(m+1), i = 1..m, where some z_j is non-smooth.
    std::vector<double> kinks() const;

    double z(std::size_t j, std::span<const double> x) const;
    /// Piecewise-constant derivative of z_j along x_j, taken from the
    /// construction (0 or (m+1)/k).
    double analytic_partial(std::size_t j, std::span<const double> x) const;

private:
    int active_count(std::span<const double> x) const;
    int m_;
};

/// Dual solution certifying the independent-exponential revenue bound:
/// z_j(x) = max{0, L x_j w^{-m} g(m, w)}, w = sum rate_j x_j, L = prod rate_j.
class ExponentialDual {
public:
    explicit ExponentialDual(std::vector<double> rates);

    int items() const noexcept { return static_cast<int>(rates_.size()); }
    const std::vector<double>& rates() const noexcept { return rates_; }
    double rate_product() const noexcept { return rate_product_; }
    double gamma_star() const noexcept { return gamma_star_; }

    double w(std::span<const double> x) const;
    double z(std::size_t j, std::span<const double> x) const;
    /// The unclamped formula L x_j w^{-m} g(m, w), valid on w >= gamma*.
    double positive_branch(std::size_t j, std::span<const double> x) const;
    double analytic_partial(std::size_t j, std::span<const double> x) const;
    /// Right-hand side of the derivative constraint: L (m+1-w) e^{-w}.
    double derivative_cap(std::span<const double> x) const;

private:
    std::vector<double> rates_;
    double rate_product_;
    double gamma_star_;
};

struct FeasibilityReport {
    int m = 0;
    double max_boundary_residual = 0.0;
    /// Largest excess of the finite-difference partial sum over its cap
    /// (or below zero, for the uniform family).
    double max_derivative_residual = 0.0;
    /// Largest |finite difference - analytic partial| on checked cells.
    double max_analytic_gap = 0.0;
    std::size_t derivative_violations = 0;
    double derivative_tolerance = 0.0;
    std::size_t cells_checked = 0;
    std::size_t cells_skipped_at_kinks = 0;
    double objective_numeric = 0.0;
    double objective_closed_form = 0.0;
    double relative_gap = 0.0;
    /// Analytic bound on the dual objective outside the integration box.
    double truncation_tail_bound = 0.0;
    std::string integration_method;
    std::size_t integration_points = 0;
};

/// Checks the uniform dual on a grid with `grid_points_per_axis` cells per
/// axis (m in 1..4, grid >= 50). Throws GridTooCoarse when more than 20% of
/// cells straddle a kink.
FeasibilityReport verify_uniform_dual(int m, int grid_points_per_axis);

struct ExponentialGridSpec {
    int points_per_axis = 400;
    /// Box is prod [0, w_max / rate_j]; 0 selects gamma*_m + 40.
    double w_max = 0.0;
    /// Sobol points for the m = 3 objective.
    std::size_t qmc_points = 10'000'000;
    /// Cells per axis of the m = 3 derivative grid.
    int derivative_grid_3d = 64;
};

/// Checks the exponential dual for m <= 3. Throws InvalidArgument when
/// w_max < gamma* + 40 and TruncationInsufficient when the analytic tail
/// beyond the box exceeds 1e-6 of the closed form.
FeasibilityReport verify_exponential_dual(const std::vector<double>& rates,
                                          const ExponentialGridSpec& spec = {});

struct IdentityCheck {
    int m = 0;
    std::string lhs;  ///< sum_{k=1}^m C(m,k) k^2 m^{k-1}
    std::string rhs;  ///< m (1 + m^2) (m+1)^{m-2}, as an exact rational
    bool holds = false;
};

/// Exact-arithmetic check of the binomial identity that closes the uniform
/// dual-objective computation.
IdentityCheck appendix_c_identity(int m);

struct SimplexMoments {
    int m = 0;
    double volume = 0.0;        ///< 1/(m-1)!
    double first_moment = 0.0;  ///< 1/m!
    double log_volume = 0.0;
    double log_first_moment = 0.0;
    bool estimated = false;
    double volume_estimate = 0.0;
    double moment_estimate = 0.0;
    std::size_t points = 0;
};

/// Volume and first coordinate moment of {t in R_+^{m-1} : sum t <= 1}.
/// For m <= 6 also estimates both by Sobol hit counting in the unit box.
SimplexMoments simplex_moments(int m, std::size_t qmc_points = 10'000'000);

}  // namespace revbound::duals
