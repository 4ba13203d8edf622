#pragma once

// Exact point values used by the sequence generators and the metrics.
//
//   Rational    exact rationals (van der Corput, greedy packing, test data)
//   AlphaValue  u*alpha_0 + v with rational u, v over a shared AlphaField
//
// Both provide the same small vocabulary (ordering, subtraction, halving,
// constants, scaling, enclosure), which is all the metrics templates need.
// AlphaValue carries a certified double enclosure so that almost every
// comparison is settled without touching GMP; ties fall back to the exact
// sign of the difference.

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <utility>

#include "quniform/contfrac.hpp"

namespace quniform {

namespace detail {

inline double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

// Certified double enclosure of an exact rational.
inline std::pair<double, double> double_bounds(const Rational& q) {
  if (q == 0) return {0.0, 0.0};
  const double d = q.get_d();  // truncates toward zero
  return {down(d), up(d)};
}

}  // namespace detail

/// alpha mod 1 together with everything needed to compare forms u*alpha_0 + v.
class AlphaField {
 public:
  AlphaField(CFExpansion exp, PrecisionContext ctx) : exp_(std::move(exp)), ctx_(ctx) {
    ctx_.validate();
    fine_ = alpha0_enclosure(exp_, -(2 * ctx_.bits + 64), true);
    const auto lo = BigFloat::from(fine_.lo, 53, MPFR_RNDD);
    const auto hi = BigFloat::from(fine_.hi, 53, MPFR_RNDU);
    lo_ = lo.to_double(MPFR_RNDD);
    hi_ = hi.to_double(MPFR_RNDU);
  }

  const CFExpansion& expansion() const noexcept { return exp_; }
  const PrecisionContext& context() const noexcept { return ctx_; }
  bool rational() const noexcept { return exp_.finite(); }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

  /// Cached tight enclosure of alpha_0 (width about 2^-(2 bits + 64)).
  const RationalInterval& fine() const noexcept { return fine_; }

  int sign(const Rational& u, const Rational& v) const {
    if (sgn(u) == 0) return sgn(v);
    const Rational a = u * fine_.lo + v;
    if (fine_.exact()) return sgn(a);
    const Rational b = u * fine_.hi + v;
    if (sgn(a) == sgn(b) && sgn(a) != 0) return sgn(a);
    return sign_at_alpha0(exp_, u, v, ctx_);
  }

  /// floor(i * alpha_0).
  Integer floor_multiple(std::uint64_t i) const {
    if (i < (std::uint64_t{1} << 52)) {
      const double x = static_cast<double>(i);
      const double lo = detail::down(x * lo_);
      const double hi = detail::up(x * hi_);
      const double f = std::floor(lo);
      if (f == std::floor(hi) && hi < f + 1.0) return Integer(static_cast<long>(f));
    }
    return quniform::floor_multiple(exp_, Integer(static_cast<unsigned long>(i)), ctx_);
  }

  RationalInterval enclose(const Rational& u, const Rational& v, long width_exp) const {
    const long scale = sgn(u) == 0 ? 0 : static_cast<long>(mpz_sizeinbase(u.get_num_mpz_t(), 2));
    const auto a = (fine_.exact() || fine_.width() * abs(u) <= pow2(width_exp)) ? fine_
                                                                               : alpha0_enclosure(exp_, width_exp - scale, true);
    Rational lo = u * a.lo + v, hi = u * a.hi + v;
    if (hi < lo) std::swap(lo, hi);
    return {lo, hi};
  }

  static Rational pow2(long e) {
    Rational r(Integer(1) << static_cast<mp_bitcnt_t>(std::abs(e)));
    return e >= 0 ? r : Rational(1) / r;
  }

 private:
  CFExpansion exp_;
  PrecisionContext ctx_;
  RationalInterval fine_;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

class AlphaValue {
 public:
  AlphaValue() = default;
  AlphaValue(std::shared_ptr<const AlphaField> field, Rational u, Rational v)
      : field_(std::move(field)), u_(std::move(u)), v_(std::move(v)) {
    refresh_bounds();
  }

  const std::shared_ptr<const AlphaField>& field() const noexcept { return field_; }
  const Rational& u() const noexcept { return u_; }
  const Rational& v() const noexcept { return v_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

  /// Same field, constant value c.
  AlphaValue constant(const Rational& c) const { return AlphaValue(field_, 0, c); }

  friend int compare(const AlphaValue& a, const AlphaValue& b) {
    if (a.hi_ < b.lo_) return -1;
    if (a.lo_ > b.hi_) return 1;
    const auto& f = a.field_ ? a.field_ : b.field_;
    return f->sign(a.u_ - b.u_, a.v_ - b.v_);
  }
  friend bool operator<(const AlphaValue& a, const AlphaValue& b) { return compare(a, b) < 0; }
  friend bool operator>(const AlphaValue& a, const AlphaValue& b) { return compare(a, b) > 0; }
  friend bool operator<=(const AlphaValue& a, const AlphaValue& b) { return compare(a, b) <= 0; }
  friend bool operator>=(const AlphaValue& a, const AlphaValue& b) { return compare(a, b) >= 0; }
  friend bool operator==(const AlphaValue& a, const AlphaValue& b) { return compare(a, b) == 0; }

  /// Same represented form (not just the same real number).
  bool same_form(const AlphaValue& o) const { return u_ == o.u_ && v_ == o.v_; }

  friend AlphaValue operator-(const AlphaValue& a, const AlphaValue& b) {
    AlphaValue r;
    r.field_ = a.field_ ? a.field_ : b.field_;
    r.u_ = a.u_ - b.u_;
    r.v_ = a.v_ - b.v_;
    r.lo_ = detail::down(a.lo_ - b.hi_);
    r.hi_ = detail::up(a.hi_ - b.lo_);
    return r;
  }
  friend AlphaValue operator+(const AlphaValue& a, const AlphaValue& b) {
    AlphaValue r;
    r.field_ = a.field_ ? a.field_ : b.field_;
    r.u_ = a.u_ + b.u_;
    r.v_ = a.v_ + b.v_;
    r.lo_ = detail::down(a.lo_ + b.lo_);
    r.hi_ = detail::up(a.hi_ + b.hi_);
    return r;
  }
  friend AlphaValue operator*(const Rational& c, const AlphaValue& a) {
    return AlphaValue(a.field_, c * a.u_, c * a.v_);
  }

  /// Enclosure with relative width about 2^-bits (absolute 2^-max_bits near 0).
  Interval enclose(long bits) const {
    const auto& ctx = field_->context();
    for (long w = bits + 8;; w = std::min(2 * w, ctx.max_bits + bits)) {
      const auto r = field_->enclose(u_, v_, -w);
      const Rational mag = std::max(abs(r.lo), abs(r.hi));
      if (r.exact() || r.width() <= mag * AlphaField::pow2(-bits) || w >= ctx.max_bits + bits) {
        return r.to_interval(bits);
      }
      if (field_->expansion().prefix_only() && r.width() > AlphaField::pow2(-w + 1)) {
        return r.to_interval(bits);  // known digits exhausted
      }
    }
  }

 private:
  void refresh_bounds() {
    if (!field_) {
      std::tie(lo_, hi_) = detail::double_bounds(v_);
      return;
    }
    const auto [ul, uh] = detail::double_bounds(u_);
    const auto [vl, vh] = detail::double_bounds(v_);
    // u * [alo, ahi] via the four endpoint products, rounded outward.
    const double c[4] = {ul * field_->lo(), ul * field_->hi(), uh * field_->lo(), uh * field_->hi()};
    double lo = c[0], hi = c[0];
    for (double x : c) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    lo_ = detail::down(detail::down(lo) + vl);
    hi_ = detail::up(detail::up(hi) + vh);
  }

  std::shared_ptr<const AlphaField> field_;
  Rational u_ = 0;
  Rational v_ = 0;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

// Uniform vocabulary over the two value types.

inline Rational constant_like(const Rational&, const Rational& c) { return c; }
inline AlphaValue constant_like(const AlphaValue& x, const Rational& c) { return x.constant(c); }

inline Rational half(const Rational& x) { return x / 2; }
inline AlphaValue half(const AlphaValue& x) { return Rational(1, 2) * x; }

inline Rational scale(const Rational& c, const Rational& x) { return c * x; }
inline AlphaValue scale(const Rational& c, const AlphaValue& x) { return c * x; }

inline Interval enclose(const Rational& x, long bits) { return Interval::point(x, bits); }
inline Interval enclose(const AlphaValue& x, long bits) { return x.enclose(bits); }

inline bool is_zero(const Rational& x) { return x == 0; }
inline bool is_zero(const AlphaValue& x) { return x == x.constant(0); }

}  // namespace quniform
