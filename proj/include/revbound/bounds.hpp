#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "revbound/priors.hpp"

namespace revbound::bounds {

/// m (1 + m^2) / (2 (1 + m)^2): dual-certificate upper bound on optimal
/// revenue for m i.i.d. U[0,1] items.
double uniform_upper_bound(int m);

/// G(m)/m! * sum 1/rate_j for independent exponential items; the factorial
/// ratio is taken from the log-domain profile.
double exponential_upper_bound(std::span<const double> rates);

/// Expected total value m/2, the trivial upper bound for U[0,1]^m.
double surplus_bound_uniform(int m);

// The ratios below divide an *upper bound* on optimal revenue by the revenue
// of a simple mechanism, so each is an upper bound on that mechanism's
// approximation ratio.

/// 2 (1 + m^2) / (1 + m)^2; below 2 for every m.
double ratio_separate_uniform(int m);

/// uniform_upper_bound(m) / BRev(U^m). Propagates PrecisionInsufficient.
double ratio_bundle_uniform(int m, unsigned precision_bits = default_precision_bits());

/// e G(m) / m!; below e for every m.
double ratio_separate_exponential(int m);

struct ProportionalRatio {
    double mean_form;  ///< (1/m)(1 + l1/l2 + ... + l1/lm) with rates sorted descending
    double max_form;   ///< l1 / lm
    std::vector<std::size_t> order;  ///< order[i] = input index of the i-th largest rate
};

/// Approximation-ratio bound of the proportional lottery.
ProportionalRatio ratio_proportional(std::span<const double> rates);

struct BoundReport {
    enum class Setting { UniformIid, ExponentialIndependent };
    Setting setting;
    int m = 0;
    std::vector<double> rates;  ///< empty for the uniform setting
    double upper_bound = 0.0;
    double surplus_bound = 0.0;
    double srev = 0.0;
    std::optional<double> brev;
    std::optional<double> brev_price;
    double ratio_sep = 0.0;
    std::optional<double> ratio_bundle;
};

BoundReport uniform_report(int m, unsigned precision_bits = default_precision_bits());

/// For equal rates the grand bundle at gamma*/rate is reported as BRev
/// (it coincides with the proportional lottery); otherwise BRev is omitted.
BoundReport exponential_report(std::span<const double> rates);

}  // namespace revbound::bounds
