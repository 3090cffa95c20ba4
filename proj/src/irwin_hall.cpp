#include <gmp.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "revbound/errors.hpp"
#include "revbound/priors.hpp"

namespace revbound {
namespace {

class Real {
public:
    explicit Real(mpfr_prec_t bits) { mpfr_init2(v_, bits); }
    ~Real() { mpfr_clear(v_); }
    Real(const Real&) = delete;
    Real& operator=(const Real&) = delete;
    mpfr_ptr get() { return v_; }

private:
    mpfr_t v_;
};

class Integer {
public:
    explicit Integer(unsigned long init) { mpz_init_set_ui(v_, init); }
    ~Integer() { mpz_clear(v_); }
    Integer(const Integer&) = delete;
    Integer& operator=(const Integer&) = delete;
    mpz_ptr get() { return v_; }

private:
    mpz_t v_;
};

constexpr double kCertifiedRelativeError = 1e-9;

}  // namespace

IrwinHall::IrwinHall(int m, unsigned precision_bits) : m_(m), bits_(precision_bits) {
    if (m < 1) throw InvalidArgument("Irwin-Hall needs m >= 1");
    if (precision_bits < 64) throw InvalidArgument("Irwin-Hall precision must be at least 64 bits");
}

IrwinHall::Sum IrwinHall::lower_half(double y) const {
    if (y <= 0.0) return {0.0, 0.0};
    const auto bits = static_cast<mpfr_prec_t>(bits_);
    const auto m = static_cast<unsigned long>(m_);
    const long last = static_cast<long>(std::floor(y));

    Real sum(bits), abs_sum(bits), base(bits), term(bits), fact(bits);
    Integer binom(1);
    mpfr_set_zero(sum.get(), 1);
    mpfr_set_zero(abs_sum.get(), 1);

    for (long k = 0; k <= last && k <= m_; ++k) {
        if (k > 0) {
            mpz_mul_ui(binom.get(), binom.get(), m - static_cast<unsigned long>(k) + 1);
            mpz_divexact_ui(binom.get(), binom.get(), static_cast<unsigned long>(k));
        }
        mpfr_set_d(base.get(), y, MPFR_RNDN);
        mpfr_sub_ui(base.get(), base.get(), static_cast<unsigned long>(k), MPFR_RNDN);
        mpfr_pow_ui(term.get(), base.get(), m, MPFR_RNDN);
        mpfr_mul_z(term.get(), term.get(), binom.get(), MPFR_RNDN);
        if (k % 2 == 0)
            mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
        else
            mpfr_sub(sum.get(), sum.get(), term.get(), MPFR_RNDN);
        mpfr_add(abs_sum.get(), abs_sum.get(), term.get(), MPFR_RNDN);
    }

    // Rounding model: each term carries <= 2 ulps, each addition <= 1 ulp of
    // the running magnitude (bounded by abs_sum), and the final division one
    // more. The bound below doubles that count.
    const double terms = static_cast<double>(std::min<long>(last, m_) + 1);
    double cancellation = 1.0;
    if (!mpfr_zero_p(sum.get())) {
        Real ratio(bits);
        mpfr_div(ratio.get(), abs_sum.get(), sum.get(), MPFR_RNDU);
        mpfr_abs(ratio.get(), ratio.get(), MPFR_RNDU);
        cancellation = mpfr_get_d(ratio.get(), MPFR_RNDU);
    } else if (!mpfr_zero_p(abs_sum.get())) {
        cancellation = INFINITY;
    }
    const double bound = 2.0 * (terms + 4.0) * std::ldexp(cancellation, -static_cast<int>(bits_));

    mpfr_fac_ui(fact.get(), m, MPFR_RNDN);
    mpfr_div(sum.get(), sum.get(), fact.get(), MPFR_RNDN);
    return {mpfr_get_d(sum.get(), MPFR_RNDN), bound};
}

double IrwinHall::error_bound(double x) const {
    const double half = 0.5 * m_;
    const double y = x <= half ? x : m_ - x;
    return lower_half(std::clamp(y, 0.0, half)).relative_error_bound;
}

namespace {
void certify(const IrwinHall& ih, double x, double bound) {
    if (!(bound <= kCertifiedRelativeError)) {
        std::ostringstream msg;
        msg << "Irwin-Hall m=" << ih.m() << " at x=" << x << ": " << ih.precision_bits()
            << "-bit arithmetic certifies only " << bound
            << " relative error; raise REVBOUND_PRECISION_BITS";
        throw PrecisionInsufficient(msg.str());
    }
}
}  // namespace

double IrwinHall::cdf(double x) const {
    if (!(x > 0.0)) return 0.0;
    if (x >= m_) return 1.0;
    if (x <= 0.5 * m_) {
        const Sum s = lower_half(x);
        certify(*this, x, s.relative_error_bound);
        return s.value;
    }
    const Sum s = lower_half(m_ - x);
    certify(*this, x, s.relative_error_bound);
    return 1.0 - s.value;
}

double IrwinHall::survival(double x) const {
    if (!(x > 0.0)) return 1.0;
    if (x >= m_) return 0.0;
    if (x >= 0.5 * m_) {
        const Sum s = lower_half(m_ - x);
        certify(*this, x, s.relative_error_bound);
        return s.value;
    }
    const Sum s = lower_half(x);
    certify(*this, x, s.relative_error_bound);
    return 1.0 - s.value;
}

double irwin_hall_cdf(const IrwinHall& ih, double x) { return ih.cdf(x); }

}  // namespace revbound
