#pragma once

#include <mpfr.h>

#include <algorithm>
#include <string>
#include <utility>

#include "rational.hpp"

namespace scatter {

// RAII wrapper over an mpfr_t. Every value carries its own precision;
// binary operations compute at the larger of the two operand precisions.
// Rounding is always to nearest.
class Real {
  public:
    explicit Real(mpfr_prec_t bits = 64) { mpfr_init2(v_, bits); }
    Real(const Real& o) {
        mpfr_init2(v_, o.precision());
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, 2); // cheap shell; swap takes the payload
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, o.precision());
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    static Real of(long x, mpfr_prec_t bits) {
        Real r(bits);
        mpfr_set_si(r.v_, x, MPFR_RNDN);
        return r;
    }
    static Real of(double x, mpfr_prec_t bits) {
        Real r(bits);
        mpfr_set_d(r.v_, x, MPFR_RNDN);
        return r;
    }
    static Real of(const Rat& x, mpfr_prec_t bits) {
        Real r(bits);
        mpfr_set_q(r.v_, x.get_mpq_t(), MPFR_RNDN);
        return r;
    }
    static Real pi(mpfr_prec_t bits) {
        Real r(bits);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    const mpfr_t& raw() const { return v_; }
    mpfr_t& raw() { return v_; }

    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    // exact hex-float representation, e.g. "0x1.8p+1"; round-trips bit-for-bit
    std::string hex_str() const {
        char* s = nullptr;
        mpfr_asprintf(&s, "%Ra", v_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }
    static Real from_hex(const std::string& s, mpfr_prec_t bits) {
        Real r(bits);
        if (mpfr_set_str(r.v_, s.c_str(), 0, MPFR_RNDN) != 0)
            fail(errc::config, "bad real literal: " + s);
        return r;
    }

    // decimal rendering for reports (round-trips at ~bits/3.32 digits)
    std::string dec_str(size_t digits = 0) const {
        if (digits == 0) digits = static_cast<size_t>(precision() * 0.3011) + 3;
        char* s = nullptr;
        mpfr_asprintf(&s, "%.*Rg", static_cast<int>(digits), v_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

    friend Real operator+(const Real& a, const Real& b) {
        Real r(join(a, b));
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator-(const Real& a, const Real& b) {
        Real r(join(a, b));
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator*(const Real& a, const Real& b) {
        Real r(join(a, b));
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator/(const Real& a, const Real& b) {
        Real r(join(a, b));
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    Real operator-() const {
        Real r(precision());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }
    Real& operator+=(const Real& o) { return *this = *this + o; }
    Real& operator-=(const Real& o) { return *this = *this - o; }
    Real& operator*=(const Real& o) { return *this = *this * o; }
    Real& operator/=(const Real& o) { return *this = *this / o; }

    Real abs() const {
        Real r(precision());
        mpfr_abs(r.v_, v_, MPFR_RNDN);
        return r;
    }
    Real sqrt() const {
        Real r(precision());
        mpfr_sqrt(r.v_, v_, MPFR_RNDN);
        return r;
    }
    Real ln() const {
        Real r(precision());
        mpfr_log(r.v_, v_, MPFR_RNDN);
        return r;
    }
    Real exp() const {
        Real r(precision());
        mpfr_exp(r.v_, v_, MPFR_RNDN);
        return r;
    }
    Real atan() const {
        Real r(precision());
        mpfr_atan(r.v_, v_, MPFR_RNDN);
        return r;
    }
    Real pow(const Real& e) const {
        Real r(join(*this, e));
        mpfr_pow(r.v_, v_, e.v_, MPFR_RNDN);
        return r;
    }
    Real pow_si(long e) const {
        Real r(precision());
        mpfr_pow_si(r.v_, v_, e, MPFR_RNDN);
        return r;
    }
    // x^(p/q) for x > 0 (or integral exponent); exact-rational exponent route
    Real pow_q(const Rat& e) const {
        if (is_integer(e) && e.get_num().fits_slong_p()) return pow_si(e.get_num().get_si());
        return pow(Real::of(e, precision()));
    }

    friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) == 0; }
    friend bool operator!=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) != 0; }

    static const Real& max(const Real& a, const Real& b) { return a < b ? b : a; }

  private:
    static mpfr_prec_t join(const Real& a, const Real& b) {
        return std::max(a.precision(), b.precision());
    }
    mpfr_t v_;
};

} // namespace scatter
