#include "revbound/priors.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "revbound/errors.hpp"
#include "revbound/parallel.hpp"

namespace revbound {

Prior Prior::exponential(double rate) {
    if (!(std::isfinite(rate) && rate > 0.0)) {
        std::ostringstream msg;
        msg << "exponential rate must be positive and finite, got " << rate;
        throw InvalidArgument(msg.str());
    }
    return Prior(Family::Exponential, rate);
}

double Prior::cdf(double x) const noexcept {
    if (!(x > 0.0)) return 0.0;
    if (family_ == Family::UniformUnit) return x >= 1.0 ? 1.0 : x;
    return -std::expm1(-rate_ * x);
}

double Prior::density(double x) const noexcept {
    if (x < 0.0) return 0.0;
    if (family_ == Family::UniformUnit) return x <= 1.0 ? 1.0 : 0.0;
    return rate_ * std::exp(-rate_ * x);
}

double Prior::quantile(double q) const {
    if (!(q >= 0.0 && q < 1.0)) {
        if (q == 1.0 && family_ == Family::UniformUnit) return 1.0;
        throw InvalidArgument("quantile level must lie in [0, 1)");
    }
    if (family_ == Family::UniformUnit) return q;
    return -std::log1p(-q) / rate_;
}

double Prior::support_upper() const noexcept {
    return family_ == Family::UniformUnit ? 1.0 : std::numeric_limits<double>::infinity();
}

double Prior::mean() const noexcept {
    return family_ == Family::UniformUnit ? 0.5 : 1.0 / rate_;
}

std::string Prior::describe() const {
    if (family_ == Family::UniformUnit) return "U[0,1]";
    std::ostringstream out;
    out << "Exp(" << rate_ << ")";
    return out.str();
}

ProductPrior::ProductPrior(std::vector<Prior> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw InvalidArgument("product prior needs at least one factor");
    for (const auto& f : factors_) {
        if (f.family() != factors_.front().family())
            throw InvalidArgument("mixed uniform/exponential products are not supported");
    }
}

ProductPrior ProductPrior::uniform_iid(int m) {
    if (m < 1) throw InvalidArgument("item count must be at least 1");
    return ProductPrior(std::vector<Prior>(static_cast<std::size_t>(m), Prior::uniform_unit()));
}

ProductPrior ProductPrior::exponential(std::span<const double> rates) {
    std::vector<Prior> factors;
    factors.reserve(rates.size());
    for (double r : rates) factors.push_back(Prior::exponential(r));
    return ProductPrior(std::move(factors));
}

std::vector<double> ProductPrior::rates() const {
    std::vector<double> out;
    out.reserve(factors_.size());
    for (const auto& f : factors_) out.push_back(f.rate());
    return out;
}

std::string ProductPrior::describe() const {
    if (family() == Family::UniformUnit) {
        std::ostringstream out;
        out << "U[0,1]^" << factors_.size();
        return out.str();
    }
    std::string s;
    for (std::size_t j = 0; j < factors_.size(); ++j) {
        if (j) s += " x ";
        s += factors_[j].describe();
    }
    return s;
}

SampleMatrix sample(const ProductPrior& prior, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw InvalidArgument("sample count must be at least 1");
    SampleMatrix out;
    out.rows = n;
    out.cols = prior.items();
    out.values.resize(n * out.cols);
    const std::size_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
    for_each_chunk(chunks, [&](std::size_t c) {
        Stream stream(seed, c);
        const std::size_t end = std::min(n, (c + 1) * kSampleChunk);
        for (std::size_t i = c * kSampleChunk; i < end; ++i) {
            prior.draw(stream, {out.values.data() + i * out.cols, out.cols});
        }
    });
    return out;
}

unsigned default_precision_bits() {
    if (const char* env = std::getenv("REVBOUND_PRECISION_BITS")) {
        char* end = nullptr;
        const unsigned long bits = std::strtoul(env, &end, 10);
        if (end == env || *end != '\0' || bits < 64 || bits > 65536)
            throw InvalidArgument("REVBOUND_PRECISION_BITS must be an integer in [64, 65536]");
        return static_cast<unsigned>(bits);
    }
    return 256;
}

}  // namespace revbound
