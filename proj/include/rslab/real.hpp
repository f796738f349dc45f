// Working-precision arithmetic for the whole library.
//
// All table entries and downstream analysis use MPFR floats with a runtime
// precision of >= 30 significant decimal digits (default 40).  The evaluation
// of Delta_1(x) = x*S0 - S1 - (C/2)x^2 - Z0*x cancels ~x^{7/8} of relative
// magnitude inside sums of size x^2, so at x = 1e7 roughly 16 digits are
// burned by cancellation; a 40-digit budget keeps the absolute error of
// Delta_1 below 1e-3 throughout the supported range.
//
// Precision semantics (boost.multiprecision, variable-precision backend):
// values carry their construction-time precision and binary operations
// produce the max precision of their operands.  Seed every value from the
// current default precision and derived results never lose digits.

#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <boost/math/constants/constants.hpp>

#include <string>
#include <utility>

namespace rslab {

using Real = boost::multiprecision::mpfr_float;       // variable precision
using BigInt = boost::multiprecision::mpz_int;        // exact integers
using Rational = boost::multiprecision::mpq_rational; // exact rationals

inline unsigned working_digits() { return Real::default_precision(); }

inline void set_working_digits(unsigned digits10) {
    Real::default_precision(digits10);
}

// Scoped precision switch (used by the separation certificate and the
// double-precision rebuild checks).
class PrecisionGuard {
  public:
    explicit PrecisionGuard(unsigned digits10) : saved_(Real::default_precision()) {
        Real::default_precision(digits10);
    }
    ~PrecisionGuard() { Real::default_precision(saved_); }
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

  private:
    unsigned saved_;
};

inline Real pi_value() { return boost::math::constants::pi<Real>(); }

// Exact rational -> one correctly rounded float at the current precision.
inline Real round_once(const Rational& q) { return Real(q); }

// Neumaier-compensated accumulator.  Prefix sums over 1e5..1e6 terms must
// not lose the x^{9/8}-sized oscillation riding on x^2-sized totals.
class KahanSum {
  public:
    KahanSum() : sum_(0), comp_(0) {}

    void add(const Real& v) {
        Real t = sum_ + v;
        if (abs(sum_) >= abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = std::move(t);
    }

    Real value() const { return sum_ + comp_; }

  private:
    Real sum_, comp_;
};

// Fourth root via exp(log/4) with one Newton refinement.  The refinement
// pins the last ulps so that phases 8*pi*(nx)^{1/4} up to ~1e5 rad keep
// errors below 1e-20 rad at >= 30 digits.
inline Real quartic_root(const Real& u) {
    Real r = exp(log(u) / 4);
    r -= (r * r * r * r - u) / (4 * r * r * r);
    return r;
}

inline double to_double(const Real& x) { return x.convert_to<double>(); }

// Rounds a (possibly higher-precision) value to the current working
// precision.  Used when constants are prepared at doubled precision.
inline Real demote(const Real& v) {
    Real out(0);
    mpfr_set(out.backend().data(), v.backend().data(), MPFR_RNDN);
    return out;
}

inline std::string to_decimal(const Real& x, unsigned digits10 = 0) {
    return x.str(digits10 == 0 ? working_digits() : digits10);
}

} // namespace rslab
