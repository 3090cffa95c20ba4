#include "revbound/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "revbound/errors.hpp"
#include "revbound/gamma_toolkit.hpp"
#include "revbound/optimize.hpp"
#include "revbound/parallel.hpp"

namespace revbound {

Mechanism::Mechanism(std::string label, std::size_t items, std::vector<MenuOption> options)
    : label_(std::move(label)), items_(items), options_(std::move(options)) {
    if (items_ == 0) throw InvalidArgument("mechanism needs at least one item");
    bool has_null = false;
    for (const auto& o : options_) {
        if (o.allocation.size() != items_)
            throw InvalidArgument("menu option allocation has the wrong dimension");
        if (!(std::isfinite(o.price) && o.price >= 0.0))
            throw InvalidArgument("menu prices must be finite and nonnegative");
        if (o.price == 0.0 &&
            std::all_of(o.allocation.begin(), o.allocation.end(), [](double a) { return a == 0.0; }))
            has_null = true;
    }
    if (!has_null) options_.insert(options_.begin(), MenuOption{std::vector<double>(items_, 0.0), 0.0});
}

Mechanism Mechanism::separate(std::vector<double> item_prices) {
    const std::size_t m = item_prices.size();
    if (m == 0 || m > 16) throw InvalidArgument("separate pricing supports 1..16 items");
    std::vector<MenuOption> options;
    options.reserve(std::size_t{1} << m);
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        MenuOption o{std::vector<double>(m, 0.0), 0.0};
        for (std::size_t j = 0; j < m; ++j) {
            if (mask >> j & 1u) {
                o.allocation[j] = 1.0;
                o.price += item_prices[j];
            }
        }
        options.push_back(std::move(o));
    }
    Mechanism mech("separate", m, std::move(options));
    mech.item_prices_ = std::move(item_prices);
    return mech;
}

Mechanism Mechanism::full_bundle(std::size_t items, double price) {
    return Mechanism("full-bundle", items, {MenuOption{std::vector<double>(items, 1.0), price}});
}

std::span<const double> Mechanism::item_prices() const {
    if (!item_prices_) return {};
    return *item_prices_;
}

double Mechanism::option_utility(std::size_t k, std::span<const double> x) const {
    const MenuOption& o = options_[k];
    double value = 0.0;
    for (std::size_t j = 0; j < items_; ++j) value += o.allocation[j] * x[j];
    return value - o.price;
}

std::size_t Mechanism::best_response(std::span<const double> x) const {
    if (item_prices_) {
        // Items are independent: buy j exactly when x_j > p_j.
        std::size_t mask = 0;
        for (std::size_t j = 0; j < items_; ++j)
            if (x[j] > (*item_prices_)[j]) mask |= std::size_t{1} << j;
        return mask;
    }
    std::size_t best = 0;
    double best_u = option_utility(0, x);
    for (std::size_t k = 1; k < options_.size(); ++k) {
        const double u = option_utility(k, x);
        if (u > best_u || (u == best_u && options_[k].price < options_[best].price)) {
            best = k;
            best_u = u;
        }
    }
    return best;
}

double Mechanism::utility(std::span<const double> x) const {
    return option_utility(best_response(x), x);
}

double Mechanism::payment(std::span<const double> x) const {
    return options_[best_response(x)].price;
}

void Mechanism::validate() const {
    for (const auto& o : options_)
        for (double a : o.allocation)
            if (!(a >= 0.0 && a <= 1.0))
                throw InvalidArgument("menu allocation outside [0,1] in mechanism '" + label_ + "'");
}

PriceRevenue myerson_price(const Prior& prior) {
    if (prior.family() == Family::UniformUnit) return {0.5, 0.25};
    const double lambda = prior.rate();
    return {1.0 / lambda, 1.0 / (lambda * std::numbers::e)};
}

PriceRevenue myerson_price_numeric(const Prior& prior, double tol) {
    // p (1 - F(p)) is unimodal for both families; 40 / rate covers the exponential peak.
    const double hi = prior.family() == Family::UniformUnit ? 1.0 : 40.0 / prior.rate();
    const Maximum best = golden_section_max(
        [&](double p) { return p * (1.0 - prior.cdf(p)); }, 0.0, hi, tol);
    return {best.argmax, best.value};
}

double srev(const ProductPrior& prior) {
    double total = 0.0;
    for (const auto& f : prior.factors()) total += myerson_price(f).revenue;
    return total;
}

PriceRevenue brev_uniform(int m, unsigned precision_bits) {
    if (m < 1) throw InvalidArgument("item count must be at least 1");
    const IrwinHall ih(m, precision_bits);
    auto objective = [&](double x) { return x * ih.survival(x); };

    constexpr int kScan = 1000;
    const double step = static_cast<double>(m) / kScan;
    int best = 0;
    double best_value = -1.0;
    for (int i = 0; i <= kScan; ++i) {
        const double v = objective(i * step);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    const double lo = std::max(0, best - 1) * step;
    const double hi = std::min(kScan, best + 1) * step;
    const Maximum refined = golden_section_max(objective, lo, hi, 1e-9);
    if (refined.value < best_value) return {best * step, best_value};
    return {refined.argmax, refined.value};
}

Mechanism proportional(std::span<const double> rates) {
    if (rates.empty()) throw InvalidArgument("proportional mechanism needs at least one rate");
    for (double r : rates)
        if (!(std::isfinite(r) && r > 0.0)) throw InvalidArgument("rates must be positive and finite");
    const double top = *std::max_element(rates.begin(), rates.end());
    MenuOption lottery{std::vector<double>(rates.size()), 0.0};
    for (std::size_t j = 0; j < rates.size(); ++j) lottery.allocation[j] = rates[j] / top;
    lottery.price = gamma::gamma_star(static_cast<int>(rates.size())) / top;
    return Mechanism("proportional", rates.size(), {std::move(lottery)});
}

double proportional_revenue_closed_form(std::span<const double> rates) {
    if (rates.empty()) throw InvalidArgument("proportional mechanism needs at least one rate");
    for (double r : rates)
        if (!(std::isfinite(r) && r > 0.0)) throw InvalidArgument("rates must be positive and finite");
    const int m = static_cast<int>(rates.size());
    const double top = *std::max_element(rates.begin(), rates.end());
    const gamma::GammaProfile profile = gamma::big_g(m);
    return std::exp(profile.log_G - std::lgamma(static_cast<double>(m))) / top;
}

namespace {

struct Moments {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        count += 1.0;
        const double delta = x - mean;
        mean += delta / count;
        m2 += delta * (x - mean);
    }

    void merge(const Moments& o) {
        if (o.count == 0.0) return;
        const double total = count + o.count;
        const double delta = o.mean - mean;
        mean += delta * o.count / total;
        m2 += o.m2 + delta * delta * count * o.count / total;
        count = total;
    }
};

}  // namespace

RevenueEstimate simulate_revenue(const Mechanism& mech, const ProductPrior& prior,
                                 std::size_t n, std::uint64_t seed) {
    if (n < 1000) throw InvalidArgument("simulation needs at least 1000 draws");
    if (mech.items() != prior.items())
        throw InvalidArgument("mechanism and prior disagree on the number of items");
    const std::size_t m = prior.items();
    const std::size_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
    std::vector<Moments> partial(chunks);
    for_each_chunk(chunks, [&](std::size_t c) {
        Stream stream(seed, c);
        std::vector<double> x(m);
        Moments acc;
        const std::size_t end = std::min(n, (c + 1) * kSampleChunk);
        for (std::size_t i = c * kSampleChunk; i < end; ++i) {
            prior.draw(stream, x);
            acc.add(mech.payment(x));
        }
        partial[c] = acc;
    });
    Moments total;
    for (const auto& p : partial) total.merge(p);
    const double variance = total.m2 / (total.count - 1.0);
    return {total.mean, std::sqrt(variance / total.count), n, seed};
}

TruthfulnessReport check_truthful(const Mechanism& mech, const ProductPrior& prior,
                                  std::size_t n_points, std::uint64_t seed, double tolerance) {
    if (mech.items() != prior.items())
        throw InvalidArgument("mechanism and prior disagree on the number of items");
    TruthfulnessReport report;
    const auto& options = mech.options();
    for (std::size_t k = 0; k < options.size(); ++k) {
        for (double a : options[k].allocation) {
            if (a >= 0.0 && a <= 1.0) continue;
            ++report.range_violations;
            if (!report.first_violation) {
                const double excess = a < 0.0 ? -a : a - 1.0;
                report.first_violation =
                    TruthViolation{TruthViolation::Kind::AllocationRange, k, {}, {}, excess};
            }
        }
    }

    const std::size_t m = prior.items();
    std::vector<double> truth(m), lie(m);
    Stream stream(seed, 0);
    for (std::size_t i = 0; i < n_points; ++i) {
        prior.draw(stream, truth);
        prior.draw(stream, lie);
        const std::size_t honest = mech.best_response(truth);
        const std::size_t deviant = mech.best_response(lie);
        const double gain = mech.option_utility(deviant, truth) - mech.option_utility(honest, truth);
        ++report.pairs_checked;
        if (gain > tolerance) {
            ++report.ic_violations;
            if (!report.first_violation)
                report.first_violation = TruthViolation{
                    TruthViolation::Kind::IncentiveCompatibility, deviant, truth, lie, gain};
        }
    }
    return report;
}

}  // namespace revbound
