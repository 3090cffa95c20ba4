#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "revbound/priors.hpp"

namespace revbound {

/// One menu entry: item-wise allocation probabilities and a total price.
struct MenuOption {
    std::vector<double> allocation;
    double price = 0.0;
};

/// A truthful mechanism given as a finite menu; the buyer takes the option
/// maximizing allocation . x - price. The zero option at price 0 is always
/// present, so the induced utility is nonnegative and convex.
///
/// Allocation ranges are not enforced on construction so that malformed menus
/// can be audited with check_truthful(); see validate().
class Mechanism {
public:
    /// Throws InvalidArgument on an empty item dimension, ragged allocations,
    /// or a negative/non-finite price. Appends the null option if missing.
    Mechanism(std::string label, std::size_t items, std::vector<MenuOption> options);

    /// Separate take-it-or-leave-it prices; the product menu over all 2^m
    /// subsets (m <= 16). Option index = bitmask of purchased items.
    static Mechanism separate(std::vector<double> item_prices);
    /// Deterministic grand bundle at `price`.
    static Mechanism full_bundle(std::size_t items, double price);

    const std::string& label() const noexcept { return label_; }
    std::size_t items() const noexcept { return items_; }
    const std::vector<MenuOption>& options() const noexcept { return options_; }
    bool is_product() const noexcept { return item_prices_.has_value(); }
    std::span<const double> item_prices() const;

    /// Buyer's value for option `k` at valuation `x`.
    double option_utility(std::size_t k, std::span<const double> x) const;
    /// Index of the chosen option; ties go to the lowest price, then lowest index.
    std::size_t best_response(std::span<const double> x) const;
    double utility(std::span<const double> x) const;
    /// Price paid at valuation x.
    double payment(std::span<const double> x) const;

    /// Throws InvalidArgument if any allocation leaves [0,1].
    void validate() const;

private:
    std::string label_;
    std::size_t items_;
    std::vector<MenuOption> options_;
    std::optional<std::vector<double>> item_prices_;
};

struct PriceRevenue {
    double price;
    double revenue;
};

/// Optimal single-item posted price and revenue, in closed form.
PriceRevenue myerson_price(const Prior& prior);
/// Same quantity by golden-section maximization of p (1 - F(p)).
PriceRevenue myerson_price_numeric(const Prior& prior, double tol = 1e-10);

/// Sum of per-item Myerson revenues.
double srev(const ProductPrior& prior);

/// Optimal grand-bundle price and revenue for U[0,1]^m: the maximum of
/// x (1 - F_S(x)) over [0, m]. A 1000-point scan picks the bracket, then
/// golden-section search refines it.
PriceRevenue brev_uniform(int m, unsigned precision_bits = default_precision_bits());

/// Proportional lottery for independent exponential rates: item j with
/// probability rate_j / max rate, total price gamma*_m / max rate.
/// Rates may be given in any order; allocations follow the input order.
Mechanism proportional(std::span<const double> rates);

/// Closed-form expected revenue of proportional(): G(m) / ((m-1)! max rate).
double proportional_revenue_closed_form(std::span<const double> rates);

struct RevenueEstimate {
    double mean = 0.0;
    double std_err = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

/// Monte Carlo revenue; draws follow sample(prior, n, seed) row for row.
/// Requires n >= 1000.
RevenueEstimate simulate_revenue(const Mechanism& mech, const ProductPrior& prior,
                                 std::size_t n, std::uint64_t seed);

struct TruthViolation {
    enum class Kind { AllocationRange, IncentiveCompatibility };
    Kind kind;
    std::size_t option = 0;
    std::vector<double> truth;
    std::vector<double> report;
    double gain = 0.0;  ///< utility gained by misreporting, or the range excess
};

struct TruthfulnessReport {
    std::size_t pairs_checked = 0;
    std::size_t ic_violations = 0;
    std::size_t range_violations = 0;
    std::optional<TruthViolation> first_violation;

    bool ok() const noexcept { return ic_violations == 0 && range_violations == 0; }
};

/// Samples n_points (truth, report) pairs and checks that misreporting never
/// helps, plus that every allocation lies in [0,1]^m.
TruthfulnessReport check_truthful(const Mechanism& mech, const ProductPrior& prior,
                                  std::size_t n_points, std::uint64_t seed,
                                  double tolerance = 1e-12);

}  // namespace revbound
