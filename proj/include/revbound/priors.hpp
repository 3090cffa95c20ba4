#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "revbound/random.hpp"

namespace revbound {

enum class Family { UniformUnit, Exponential };

/// One-dimensional valuation distribution: U[0,1] or Exponential(rate).
class Prior {
public:
    static Prior uniform_unit() { return Prior(Family::UniformUnit, 1.0); }
    /// Throws InvalidArgument unless `rate` is finite and positive.
    static Prior exponential(double rate);

    Family family() const noexcept { return family_; }
    /// Exponential rate; 1 for the uniform prior (unused there).
    double rate() const noexcept { return rate_; }

    /// CDF, clamped outside the support.
    double cdf(double x) const noexcept;
    double density(double x) const noexcept;
    /// Inverse CDF for q in [0, 1).
    double quantile(double q) const;
    double support_upper() const noexcept;
    double mean() const noexcept;

    double draw(Stream& stream) const noexcept {
        return family_ == Family::UniformUnit ? stream.uniform() : stream.exponential(rate_);
    }

    std::string describe() const;

    friend bool operator==(const Prior&, const Prior&) = default;

private:
    Prior(Family family, double rate) : family_(family), rate_(rate) {}

    Family family_;
    double rate_;
};

/// Independent product of same-family priors.
class ProductPrior {
public:
    /// Throws InvalidArgument on an empty list or mixed families.
    explicit ProductPrior(std::vector<Prior> factors);

    static ProductPrior uniform_iid(int m);
    static ProductPrior exponential(std::span<const double> rates);

    std::size_t items() const noexcept { return factors_.size(); }
    const std::vector<Prior>& factors() const noexcept { return factors_; }
    const Prior& operator[](std::size_t j) const { return factors_[j]; }
    Family family() const noexcept { return factors_.front().family(); }
    std::vector<double> rates() const;

    /// Writes one valuation vector drawn from `stream` into `out`.
    void draw(Stream& stream, std::span<double> out) const noexcept {
        for (std::size_t j = 0; j < factors_.size(); ++j) out[j] = factors_[j].draw(stream);
    }

    std::string describe() const;

private:
    std::vector<Prior> factors_;
};

/// Row-major n-by-m matrix of sampled valuation vectors.
struct SampleMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * cols, cols};
    }
};

/// Rows per independently seeded sampling chunk.
inline constexpr std::size_t kSampleChunk = std::size_t{1} << 16;

/// Draws n valuation vectors. Row i comes from Stream(seed, i / kSampleChunk),
/// so the output is identical for any thread count.
SampleMatrix sample(const ProductPrior& prior, std::size_t n, std::uint64_t seed);

/// Default working precision for Irwin-Hall sums; reads
/// REVBOUND_PRECISION_BITS when set, otherwise 256.
unsigned default_precision_bits();

/// Distribution of the sum of m independent U[0,1] variables.
///
/// The CDF is the alternating binomial sum evaluated in MPFR at the
/// configured precision, together with a running error bound. Evaluation
/// throws PrecisionInsufficient when that bound exceeds 1e-9 relative.
class IrwinHall {
public:
    explicit IrwinHall(int m, unsigned precision_bits = default_precision_bits());

    int m() const noexcept { return m_; }
    unsigned precision_bits() const noexcept { return bits_; }

    /// P(S <= x), clamped outside [0, m].
    double cdf(double x) const;
    /// P(S > x); uses the reflection S -> m - S so the small tail is never
    /// obtained by subtraction from 1.
    double survival(double x) const;

    /// Relative error bound of the last-stage sum at x (for diagnostics).
    double error_bound(double x) const;

private:
    struct Sum {
        double value;
        double relative_error_bound;
    };
    // Direct alternating sum F_S(y) for y in [0, m/2].
    Sum lower_half(double y) const;

    int m_;
    unsigned bits_;
};

double irwin_hall_cdf(const IrwinHall& ih, double x);

}  // namespace revbound
