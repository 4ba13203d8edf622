#pragma once

// Closed-form three-gap structure of the first n Kronecker points.
//
// Every gap length is an integer linear form u*alpha_0 + v, so the identities
// between the three lengths are checked with exact integer arithmetic;
// enclosures are computed only when a length has to be reported.

#include <array>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "quniform/contfrac.hpp"

namespace quniform {

/// The real number u*alpha_0 + v, alpha_0 = alpha mod 1.
struct LinearForm {
  Integer u = 0;
  Integer v = 0;

  friend bool operator==(const LinearForm&, const LinearForm&) = default;
  friend LinearForm operator+(const LinearForm& a, const LinearForm& b) { return {a.u + b.u, a.v + b.v}; }
  friend LinearForm operator-(const LinearForm& a, const LinearForm& b) { return {a.u - b.u, a.v - b.v}; }
  friend LinearForm operator*(const Integer& c, const LinearForm& a) { return {c * a.u, c * a.v}; }

  friend std::ostream& operator<<(std::ostream& os, const LinearForm& f) {
    return os << '(' << f.u << ", " << f.v << ')';
  }
};

/// Exact rational enclosure of the form's value, no wider than 2^width_exp
/// (or as tight as the known digits allow for prefix-only expansions).
inline RationalInterval enclose_rational(const LinearForm& f, const CFExpansion& exp, long width_exp) {
  const long scale = static_cast<long>(mpz_sizeinbase(f.u.get_mpz_t(), 2));
  const auto a = alpha0_enclosure(exp, width_exp - scale, true);
  Rational lo = Rational(f.u) * a.lo + Rational(f.v);
  Rational hi = Rational(f.u) * a.hi + Rational(f.v);
  if (hi < lo) std::swap(lo, hi);
  return {lo, hi};
}

/// Certified enclosure at ctx.bits, width <= 2^(-bits + guard), escalated
/// further (up to max_bits) until the sign is resolved.
inline Interval enclose(const LinearForm& f, const CFExpansion& exp, const PrecisionContext& ctx) {
  ctx.validate();
  for (long w = ctx.bits - ctx.guard + 1;; w = std::min(2 * w, ctx.max_bits)) {
    const auto r = enclose_rational(f, exp, -w);
    const bool narrow = r.width() <= Rational(1) / Rational(Integer(1) << static_cast<mp_bitcnt_t>(ctx.bits - ctx.guard + 1));
    const bool signed_ok = f.u == 0 || r.exact() || sgn(r.lo) == sgn(r.hi);
    if (narrow && signed_ok) return r.to_interval(ctx.bits);
    if (w >= ctx.max_bits || (exp.prefix_only() && !narrow)) {
      throw PrecisionUnresolved("linear form enclosure unresolved", exp.prefix_only() ? *exp.last_index() + 1 : 0);
    }
  }
}

/// eta_m as a linear form: eta_{-1} = 1, eta_0 = alpha_0,
/// eta_{m+1} = eta_{m-1} - a_{m+1} eta_m.
inline LinearForm eta(const CFExpansion& exp, long m) {
  if (m < -1) throw OutOfRange("eta_m needs m >= -1");
  LinearForm prev{0, 1}, cur{1, 0};
  if (m == -1) return prev;
  for (long j = 0; j < m; ++j) {
    const std::size_t idx = static_cast<std::size_t>(j) + 1;
    if (!exp.has_digit(idx)) {
      if (exp.finite()) throw OutOfRange("eta_" + std::to_string(m) + " beyond the finite expansion");
      throw PrecisionUnresolved("eta_" + std::to_string(m) + " needs more digits", idx);
    }
    LinearForm next = prev - exp.digit(idx) * cur;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// n = n_m + h*s_m + k with n_m <= n < n_{m+1}.
struct Decomposition {
  std::size_t m = 0;
  Integer h = 0;
  Integer k = 0;
  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

inline Decomposition decompose(const CFExpansion& exp, const Integer& n) {
  if (n < 1) throw DomainError("decompose: n must be >= 1");
  std::size_t m = 0;
  while (true) {
    if (!exp.has_digit(m + 1)) {
      if (exp.finite()) {
        throw Unsupported("n = " + n.get_str() + " reaches past the final n_m of a rational alpha (periodic points)");
      }
      throw PrecisionUnresolved("decompose: n_" + std::to_string(m + 1) + " needs more digits", m + 1);
    }
    if (n < exp.n(m + 1)) break;
    ++m;
  }
  const Integer s = exp.s(static_cast<long>(m));
  const Integer rest = n - exp.n(m);
  Decomposition d;
  d.m = m;
  mpz_fdiv_qr(d.h.get_mpz_t(), d.k.get_mpz_t(), rest.get_mpz_t(), s.get_mpz_t());
  if (d.h > exp.digit(m + 1) - 1) throw Error("decompose: h exceeds a_{m+1} - 1 (internal inconsistency)");
  return d;
}

struct GapEntry {
  LinearForm length;
  Integer multiplicity;
};

/// Entries ordered (eta_m, eta_{m-1} - h eta_m, eta_{m-1} - (h+1) eta_m).
/// Zero multiplicities are kept so there are always three entries.
struct GapStructure {
  Integer n;
  Decomposition decomposition;
  std::array<GapEntry, 3> entries;
};

inline GapStructure gap_structure(const CFExpansion& exp, const Integer& n) {
  if (exp.finite()) throw Unsupported("three-gap structure needs an irrational alpha");
  const Decomposition d = decompose(exp, n);
  const long m = static_cast<long>(d.m);
  const LinearForm eta_m = eta(exp, m);
  const LinearForm eta_prev = eta(exp, m - 1);
  const Integer s_m = exp.s(m);
  const Integer s_prev = exp.s(m - 1);
  GapStructure gs;
  gs.n = n;
  gs.decomposition = d;
  gs.entries[0] = {eta_m, s_prev + d.h * s_m + d.k};
  gs.entries[1] = {eta_prev - d.h * eta_m, s_m - d.k};
  gs.entries[2] = {eta_prev - (d.h + 1) * eta_m, d.k};
  return gs;
}

struct IdentityCheck {
  std::string name;
  bool passed;
};

struct LengthsReport {
  std::vector<IdentityCheck> checks;
  bool all_passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }
};

inline LengthsReport lengths_check(const GapStructure& gs) {
  const auto& e = gs.entries;
  LinearForm total;
  Integer count = 0;
  for (const auto& entry : e) {
    total = total + entry.multiplicity * entry.length;
    count += entry.multiplicity;
  }
  LengthsReport r;
  r.checks.push_back({"middle = first + third", e[1].length == e[0].length + e[2].length});
  r.checks.push_back({"sum of multiplicity*length = 1", total == LinearForm{0, 1}});
  r.checks.push_back({"multiplicities sum to n", count == gs.n});
  return r;
}

}  // namespace quniform
