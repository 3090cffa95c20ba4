#include "revbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "revbound/errors.hpp"
#include "revbound/gamma_toolkit.hpp"
#include "revbound/mechanisms.hpp"

namespace revbound::bounds {
namespace {

void require_items(int m) {
    if (m < 1) throw InvalidArgument("item count must be at least 1");
}

void require_rates(std::span<const double> rates) {
    if (rates.empty()) throw InvalidArgument("need at least one exponential rate");
    for (double r : rates)
        if (!(std::isfinite(r) && r > 0.0)) throw InvalidArgument("rates must be positive and finite");
}

}  // namespace

double uniform_upper_bound(int m) {
    require_items(m);
    const double mm = m;
    return mm * (1.0 + mm * mm) / (2.0 * (1.0 + mm) * (1.0 + mm));
}

double exponential_upper_bound(std::span<const double> rates) {
    require_rates(rates);
    const auto profile = gamma::big_g(static_cast<int>(rates.size()));
    double inverse_sum = 0.0;
    for (double r : rates) inverse_sum += 1.0 / r;
    return std::exp(profile.log_G_over_m_fact) * inverse_sum;
}

double surplus_bound_uniform(int m) {
    require_items(m);
    return 0.5 * m;
}

double ratio_separate_uniform(int m) {
    require_items(m);
    const double mm = m;
    return 2.0 * (1.0 + mm * mm) / ((1.0 + mm) * (1.0 + mm));
}

double ratio_bundle_uniform(int m, unsigned precision_bits) {
    require_items(m);
    return uniform_upper_bound(m) / brev_uniform(m, precision_bits).revenue;
}

double ratio_separate_exponential(int m) {
    require_items(m);
    return std::exp(gamma::big_g(m).log_G_over_m_fact + 1.0);
}

ProportionalRatio ratio_proportional(std::span<const double> rates) {
    require_rates(rates);
    ProportionalRatio out;
    out.order.resize(rates.size());
    std::iota(out.order.begin(), out.order.end(), std::size_t{0});
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](std::size_t a, std::size_t b) { return rates[a] > rates[b]; });
    const double top = rates[out.order.front()];
    double sum = 0.0;
    for (std::size_t idx : out.order) sum += top / rates[idx];
    out.mean_form = sum / static_cast<double>(rates.size());
    out.max_form = top / rates[out.order.back()];
    return out;
}

BoundReport uniform_report(int m, unsigned precision_bits) {
    require_items(m);
    BoundReport r;
    r.setting = BoundReport::Setting::UniformIid;
    r.m = m;
    r.upper_bound = uniform_upper_bound(m);
    r.surplus_bound = surplus_bound_uniform(m);
    r.srev = srev(ProductPrior::uniform_iid(m));
    const PriceRevenue bundle = brev_uniform(m, precision_bits);
    r.brev = bundle.revenue;
    r.brev_price = bundle.price;
    r.ratio_sep = r.upper_bound / r.srev;
    r.ratio_bundle = r.upper_bound / bundle.revenue;
    return r;
}

BoundReport exponential_report(std::span<const double> rates) {
    require_rates(rates);
    BoundReport r;
    r.setting = BoundReport::Setting::ExponentialIndependent;
    r.m = static_cast<int>(rates.size());
    r.rates.assign(rates.begin(), rates.end());
    r.upper_bound = exponential_upper_bound(rates);
    r.surplus_bound = 0.0;
    for (double x : rates) r.surplus_bound += 1.0 / x;
    r.srev = srev(ProductPrior::exponential(rates));
    r.ratio_sep = r.upper_bound / r.srev;
    const bool iid = std::all_of(rates.begin(), rates.end(), [&](double x) { return x == rates[0]; });
    if (iid) {
        r.brev = proportional_revenue_closed_form(rates);
        r.brev_price = gamma::gamma_star(r.m) / rates[0];
        r.ratio_bundle = r.upper_bound / *r.brev;
    }
    return r;
}

}  // namespace revbound::bounds
