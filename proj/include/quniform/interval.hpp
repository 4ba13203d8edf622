#pragma once

// Arbitrary-precision floats (MPFR) and outward-rounded intervals on top of
// them. Every operation on Interval returns an enclosure of the exact result.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <array>
#include <ostream>
#include <string>
#include <utility>

#include "quniform/error.hpp"

namespace quniform {

using Integer = mpz_class;
using Rational = mpq_class;

class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t bits = 128) {
    mpfr_init2(v_, bits);
    mpfr_set_zero(v_, 1);
  }
  BigFloat(const BigFloat& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& other) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
  }
  BigFloat& operator=(BigFloat other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  static BigFloat from(const Rational& q, mpfr_prec_t bits, mpfr_rnd_t rnd) {
    BigFloat r(bits);
    mpfr_set_q(r.v_, q.get_mpq_t(), rnd);
    return r;
  }
  static BigFloat from(const Integer& z, mpfr_prec_t bits, mpfr_rnd_t rnd) {
    BigFloat r(bits);
    mpfr_set_z(r.v_, z.get_mpz_t(), rnd);
    return r;
  }
  static BigFloat from(long x, mpfr_prec_t bits, mpfr_rnd_t rnd = MPFR_RNDN) {
    BigFloat r(bits);
    mpfr_set_si(r.v_, x, rnd);
    return r;
  }
  static BigFloat infinity(mpfr_prec_t bits = 64) {
    BigFloat r(bits);
    mpfr_set_inf(r.v_, 1);
    return r;
  }

  mpfr_ptr get() noexcept { return v_; }
  mpfr_srcptr get() const noexcept { return v_; }
  mpfr_prec_t precision() const noexcept { return mpfr_get_prec(v_); }

  bool is_inf() const noexcept { return mpfr_inf_p(v_) != 0; }
  bool is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }
  int sign() const noexcept { return mpfr_sgn(v_); }

  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(v_, rnd); }

  /// Exact conversion; the value must be finite.
  Rational to_rational() const {
    Rational q;
    mpfr_get_q(q.get_mpq_t(), v_);
    return q;
  }

  /// Scientific notation with `digits` significant digits, rounded with `rnd`.
  std::string to_string(int digits, mpfr_rnd_t rnd = MPFR_RNDN) const {
    if (is_inf()) return sign() > 0 ? "inf" : "-inf";
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*R*e", std::max(digits, 1) - 1, rnd, v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

  friend int compare(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_); }
  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_); }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.v_, b.v_); }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.v_, b.v_); }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.v_, b.v_); }
  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_); }

  friend int compare(const BigFloat& a, const Rational& q) { return mpfr_cmp_q(a.v_, q.get_mpq_t()); }

 private:
  mpfr_t v_;
};

/// Closed interval [lo, hi] with MPFR endpoints.
class Interval {
 public:
  explicit Interval(mpfr_prec_t bits = 128) : lo_(bits), hi_(bits) {}
  Interval(BigFloat lo, BigFloat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (hi_ < lo_) throw DomainError("interval with lo > hi");
  }

  static Interval point(const Rational& q, mpfr_prec_t bits) {
    return {BigFloat::from(q, bits, MPFR_RNDD), BigFloat::from(q, bits, MPFR_RNDU)};
  }
  static Interval point(long x, mpfr_prec_t bits) {
    return {BigFloat::from(x, bits, MPFR_RNDD), BigFloat::from(x, bits, MPFR_RNDU)};
  }
  static Interval hull(const Rational& lo, const Rational& hi, mpfr_prec_t bits) {
    const bool swap = hi < lo;
    return {BigFloat::from(swap ? hi : lo, bits, MPFR_RNDD),
            BigFloat::from(swap ? lo : hi, bits, MPFR_RNDU)};
  }

  const BigFloat& lo() const noexcept { return lo_; }
  const BigFloat& hi() const noexcept { return hi_; }
  mpfr_prec_t precision() const noexcept { return std::max(lo_.precision(), hi_.precision()); }

  BigFloat width() const {
    BigFloat w(precision());
    mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    return w;
  }

  /// True iff hi - lo <= 2^exponent.
  bool width_at_most_pow2(long exponent) const {
    BigFloat w = width();
    return mpfr_cmp_si_2exp(w.get(), 1, exponent) <= 0;
  }

  bool contains(const Rational& q) const { return compare(lo_, q) <= 0 && compare(hi_, q) >= 0; }
  bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  bool overlaps(const Interval& o) const { return !(hi_ < o.lo_) && !(o.hi_ < lo_); }
  bool strictly_positive() const { return lo_.sign() > 0; }
  bool certainly_less(const Interval& o) const { return hi_ < o.lo_; }

  std::array<std::string, 2> to_strings(int digits) const {
    return {lo_.to_string(digits, MPFR_RNDD), hi_.to_string(digits, MPFR_RNDU)};
  }

  friend Interval operator+(const Interval& a, const Interval& b) {
    const auto p = std::max(a.precision(), b.precision());
    BigFloat lo(p), hi(p);
    mpfr_add(lo.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_add(hi.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return {std::move(lo), std::move(hi)};
  }
  friend Interval operator-(const Interval& a, const Interval& b) {
    const auto p = std::max(a.precision(), b.precision());
    BigFloat lo(p), hi(p);
    mpfr_sub(lo.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
    mpfr_sub(hi.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
    return {std::move(lo), std::move(hi)};
  }
  friend Interval operator*(const Interval& a, const Interval& b) {
    const auto p = std::max(a.precision(), b.precision());
    const BigFloat* ends_a[2] = {&a.lo_, &a.hi_};
    const BigFloat* ends_b[2] = {&b.lo_, &b.hi_};
    BigFloat lo = BigFloat::infinity(p), hi(p);
    mpfr_set_inf(hi.get(), -1);
    BigFloat t(p);
    for (const BigFloat* x : ends_a) {
      for (const BigFloat* y : ends_b) {
        mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDD);
        if (t < lo) lo = t;
        mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDU);
        if (t > hi) hi = t;
      }
    }
    return {std::move(lo), std::move(hi)};
  }
  friend Interval operator/(const Interval& a, const Interval& b) {
    if (b.lo_.sign() <= 0 && b.hi_.sign() >= 0) throw DomainError("interval division by an interval containing 0");
    const auto p = std::max(a.precision(), b.precision());
    BigFloat rlo(p), rhi(p);
    mpfr_ui_div(rlo.get(), 1, b.hi_.get(), MPFR_RNDD);
    mpfr_ui_div(rhi.get(), 1, b.lo_.get(), MPFR_RNDU);
    return a * Interval(std::move(rlo), std::move(rhi));
  }

  friend Interval min(const Interval& a, const Interval& b) {
    return {a.lo_ < b.lo_ ? a.lo_ : b.lo_, a.hi_ < b.hi_ ? a.hi_ : b.hi_};
  }
  friend Interval max(const Interval& a, const Interval& b) {
    return {a.lo_ > b.lo_ ? a.lo_ : b.lo_, a.hi_ > b.hi_ ? a.hi_ : b.hi_};
  }
  friend Interval sqrt(const Interval& a) {
    if (a.lo_.sign() < 0) throw DomainError("sqrt of an interval reaching below 0");
    BigFloat lo(a.precision()), hi(a.precision());
    mpfr_sqrt(lo.get(), a.lo_.get(), MPFR_RNDD);
    mpfr_sqrt(hi.get(), a.hi_.get(), MPFR_RNDU);
    return {std::move(lo), std::move(hi)};
  }

  friend std::ostream& operator<<(std::ostream& os, const Interval& x) {
    const auto s = x.to_strings(20);
    return os << '[' << s[0] << ", " << s[1] << ']';
  }

 private:
  BigFloat lo_;
  BigFloat hi_;
};

/// Exact rational enclosure [lo, hi]; lo == hi when the value is known exactly.
struct RationalInterval {
  Rational lo;
  Rational hi;

  bool exact() const { return lo == hi; }
  Rational width() const { return hi - lo; }
  Interval to_interval(mpfr_prec_t bits) const { return Interval::hull(lo, hi, bits); }
};

/// Scientific-notation string of an exact rational rounded with `rnd`.
inline std::string decimal_string(const Rational& q, int digits, mpfr_rnd_t rnd = MPFR_RNDN) {
  const mpfr_prec_t bits = static_cast<mpfr_prec_t>(digits * 3.33) + 16;
  return BigFloat::from(q, bits, rnd).to_string(digits, rnd);
}

}  // namespace quniform
