#pragma once

// Quasi-uniformity metrics of point prefixes on [0, 1]:
//
//   fill distance      h_n = sup_{x in [0,1]} min_i |x - x_i|
//   separation radius  q_n = min_{i<j} |x_i - x_j| / 2
//   mesh ratio         rho_n = h_n / q_n
//
// plus closed-form upper/lower bounds on rho_n for Kronecker prefixes
// derived from the three-gap structure.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "quniform/contfrac.hpp"
#include "quniform/sequences.hpp"
#include "quniform/threegap.hpp"
#include "quniform/values.hpp"

namespace quniform {

enum class Provenance { oracle_exact, formula_bound };

inline const char* to_string(Provenance p) {
  return p == Provenance::oracle_exact ? "oracle-exact" : "formula-bound";
}

template <class T>
struct SortedGaps {
  std::vector<T> sorted;
  std::vector<T> interior;  // n - 1 adjacent differences
  T left;                   // x^(0) - 0
  T right;                  // 1 - x^(n-1)
};

template <class T>
SortedGaps<T> sorted_gaps(const PointSet<T>& ps) {
  if (ps.n() < 1) throw DomainError("sorted_gaps: empty point set");
  SortedGaps<T> out;
  out.sorted = ps.points;
  std::stable_sort(out.sorted.begin(), out.sorted.end(), [](const T& a, const T& b) { return a < b; });
  out.interior.reserve(out.sorted.size() - 1);
  for (std::size_t i = 1; i < out.sorted.size(); ++i) out.interior.push_back(out.sorted[i] - out.sorted[i - 1]);
  out.left = out.sorted.front() - constant_like(out.sorted.front(), 0);
  out.right = constant_like(out.sorted.front(), 1) - out.sorted.back();
  return out;
}

namespace detail {

template <class T>
T fill_from(const T& left, const T& right, const T* max_interior) {
  T h = std::max(left, right);
  if (max_interior) h = std::max(h, half(*max_interior));
  return h;
}

}  // namespace detail

/// max(left boundary, right boundary, largest interior gap / 2).
template <class T>
T fill_distance(const PointSet<T>& ps) {
  if (ps.n() < 1) throw DomainError("fill_distance: empty point set");
  const auto g = sorted_gaps(ps);
  const T* widest = g.interior.empty() ? nullptr : &*std::max_element(g.interior.begin(), g.interior.end());
  return detail::fill_from(g.left, g.right, widest);
}

template <class T>
T separation_radius(const PointSet<T>& ps) {
  if (ps.n() < 2) throw DomainError("separation_radius: needs at least two points");
  const auto g = sorted_gaps(ps);
  return half(*std::min_element(g.interior.begin(), g.interior.end()));
}

template <class T>
struct QUMetrics {
  std::size_t n = 0;
  T fill;
  T separation;
  bool infinite = false;  // separation == 0, rho_n = +inf
  Provenance provenance = Provenance::oracle_exact;

  /// rho_n <= c, decided exactly as fill <= c * separation.
  bool ratio_at_most(const Rational& c) const { return !infinite && fill <= scale(c, separation); }
  bool ratio_at_least(const Rational& c) const { return infinite || fill >= scale(c, separation); }

  /// Enclosure of rho_n; nullopt encodes +inf.
  std::optional<Interval> ratio(long bits) const {
    if (infinite) return std::nullopt;
    return enclose(fill, bits + 8) / enclose(separation, bits + 8);
  }
};

/// Exact rho_n for rational point sets; nullopt encodes +inf.
inline std::optional<Rational> exact_ratio(const QUMetrics<Rational>& q) {
  if (q.infinite) return std::nullopt;
  return Rational(q.fill / q.separation);
}

template <class T>
QUMetrics<T> mesh_ratio(const PointSet<T>& ps) {
  if (ps.n() < 2) throw DomainError("mesh_ratio: needs at least two points");
  const auto g = sorted_gaps(ps);
  const auto [lo, hi] = std::minmax_element(g.interior.begin(), g.interior.end());
  QUMetrics<T> out;
  out.n = ps.n();
  out.fill = detail::fill_from(g.left, g.right, &*hi);
  out.separation = half(*lo);
  out.infinite = is_zero(out.separation);
  out.provenance = Provenance::oracle_exact;
  return out;
}

/// Sorted prefix maintained under insertion: O(log n) per point.
template <class T>
class IncrementalMesh {
 public:
  void insert(const T& x) {
    const auto it = points_.insert(x);
    const bool has_left = it != points_.begin();
    const bool has_right = std::next(it) != points_.end();
    if (has_left && has_right) {
      const T& l = *std::prev(it);
      const T& r = *std::next(it);
      gaps_.erase(gaps_.find(r - l));
      gaps_.insert(x - l);
      gaps_.insert(r - x);
    } else if (has_left) {
      gaps_.insert(x - *std::prev(it));
    } else if (has_right) {
      gaps_.insert(*std::next(it) - x);
    }
  }

  std::size_t size() const noexcept { return points_.size(); }

  QUMetrics<T> metrics() const {
    if (points_.size() < 2) throw DomainError("mesh ratio needs at least two points");
    const T& first = *points_.begin();
    const T& last = *points_.rbegin();
    QUMetrics<T> out;
    out.n = points_.size();
    out.fill = detail::fill_from(T(first - constant_like(first, 0)), T(constant_like(first, 1) - last), &*gaps_.rbegin());
    out.separation = half(*gaps_.begin());
    out.infinite = is_zero(out.separation);
    return out;
  }

 private:
  std::multiset<T> points_;
  std::multiset<T> gaps_;
};

/// Metrics for every n in [n_lo, n_hi], computed incrementally.
template <class T>
std::vector<QUMetrics<T>> sweep(const PointSet<T>& ps, std::size_t n_lo, std::size_t n_hi) {
  if (n_lo < 2 || n_hi < n_lo) throw DomainError("sweep: need 2 <= n_lo <= n_hi");
  if (ps.n() < n_hi) throw DomainError("sweep: point set shorter than n_hi");
  IncrementalMesh<T> mesh;
  std::vector<QUMetrics<T>> out;
  out.reserve(n_hi - n_lo + 1);
  for (std::size_t i = 0; i < n_hi; ++i) {
    mesh.insert(ps.points[i]);
    if (i + 1 >= n_lo) out.push_back(mesh.metrics());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Kronecker prefixes at large n.

namespace detail {

using u128 = unsigned __int128;

inline u128 to_u128(const Integer& z) {
  const Integer hi = z >> 64;
  const Integer lo = z - (hi << 64);
  return (static_cast<u128>(hi.get_ui()) << 64) | static_cast<u128>(lo.get_ui());
}

}  // namespace detail

/// rho_n of the first n Kronecker points without materializing them.
///
/// One fixed-point pass over i*alpha_0 (128-bit, with a certified error
/// budget) locates the smallest and largest nonzero points x_a and x_b;
/// near-ties are settled exactly. The circular neighbours of an irrational
/// rotation then have lengths {a alpha} (n - a times), 1 - {b alpha}
/// (n - b times) and their sum (a + b - n times); the wrap-around gap is the
/// right boundary and is excluded from the interior gaps. Memory is O(1).
inline QUMetrics<AlphaValue> kronecker_metrics_streaming(const std::shared_ptr<const AlphaField>& field, std::uint64_t n) {
  using detail::u128;
  if (field->rational()) throw Unsupported("streaming Kronecker metrics need an irrational alpha");
  if (n < 2) throw DomainError("mesh ratio needs at least two points");

  const Integer two128 = Integer(1) << 128;
  const Rational lo_scaled = field->fine().lo * Rational(two128);
  const Rational hi_scaled = field->fine().hi * Rational(two128);
  Integer a_fixed, b_fixed;
  mpz_fdiv_q(a_fixed.get_mpz_t(), lo_scaled.get_num_mpz_t(), lo_scaled.get_den_mpz_t());
  mpz_cdiv_q(b_fixed.get_mpz_t(), hi_scaled.get_num_mpz_t(), hi_scaled.get_den_mpz_t());
  const Integer budget = Integer(static_cast<unsigned long>(n)) * (b_fixed - a_fixed) + 1;
  if (b_fixed >= two128 || budget >= (Integer(1) << 120)) {
    throw PrecisionUnresolved("alpha enclosure too wide for a streaming scan of n = " + std::to_string(n),
                              field->expansion().prefix_only() ? *field->expansion().last_index() + 1 : 0);
  }
  const u128 step = detail::to_u128(a_fixed);
  const u128 err = detail::to_u128(budget);
  const u128 top = ~u128{0};

  // True {i alpha} * 2^128 lies in [key, key + err] unless key is within
  // err of 2^128 (possible wrap, treated as ambiguous).
  u128 key = 0, min_upper = top, max_lower = 0;
  for (std::uint64_t i = 1; i < n; ++i) {
    key += step;
    if (key > top - err) continue;
    min_upper = std::min(min_upper, key + err);
    max_lower = std::max(max_lower, key);
  }
  std::vector<std::uint64_t> min_cands, max_cands;
  key = 0;
  for (std::uint64_t i = 1; i < n; ++i) {
    key += step;
    const bool ambiguous = key > top - err;
    if (ambiguous || key <= min_upper) min_cands.push_back(i);
    if (ambiguous || key + err >= max_lower) max_cands.push_back(i);
    if (min_cands.size() + max_cands.size() > 4096) {
      throw PrecisionUnresolved("streaming scan: too many unresolved near-ties", 0);
    }
  }

  auto point = [&](std::uint64_t i) {
    return AlphaValue(field, Rational(Integer(static_cast<unsigned long>(i))), Rational(-field->floor_multiple(i)));
  };
  auto pick = [&](const std::vector<std::uint64_t>& cands, bool want_min) {
    std::uint64_t best = cands.front();
    AlphaValue best_v = point(best);
    for (std::size_t j = 1; j < cands.size(); ++j) {
      AlphaValue v = point(cands[j]);
      if (want_min ? v < best_v : v > best_v) {
        best = cands[j];
        best_v = std::move(v);
      }
    }
    return std::pair{best, best_v};
  };
  const auto [a, xa] = pick(min_cands, true);
  const auto [b, xb] = pick(max_cands, false);

  const AlphaValue one = xa.constant(1);
  const AlphaValue shortest_up = xa;       // {a alpha}
  const AlphaValue shortest_down = one - xb;  // 1 - {b alpha}
  const AlphaValue combined = shortest_up + shortest_down;
  const auto count_up = static_cast<std::int64_t>(n - a);
  const auto count_down = static_cast<std::int64_t>(n - b);
  const auto count_both = static_cast<std::int64_t>(a + b) - static_cast<std::int64_t>(n);
  if (count_up < 1 || count_down < 1 || count_both < 0) {
    throw Error("streaming scan: inconsistent neighbour counts (internal error)");
  }

  std::vector<const AlphaValue*> interior;
  if (count_up > 0) interior.push_back(&shortest_up);
  if (count_down - 1 > 0) interior.push_back(&shortest_down);
  if (count_both > 0) interior.push_back(&combined);
  const auto cmp = [](const AlphaValue* x, const AlphaValue* y) { return *x < *y; };
  const AlphaValue& widest = **std::max_element(interior.begin(), interior.end(), cmp);
  const AlphaValue& narrowest = **std::min_element(interior.begin(), interior.end(), cmp);

  QUMetrics<AlphaValue> out;
  out.n = n;
  out.fill = detail::fill_from(one.constant(0), shortest_down, &widest);
  out.separation = half(narrowest);
  out.infinite = false;
  out.provenance = Provenance::oracle_exact;
  return out;
}

/// Exact rho_n of the first n Kronecker points: sorted prefix up to
/// `sort_limit` points, streaming scan beyond.
inline QUMetrics<AlphaValue> kronecker_metrics(const AlphaSpec& alpha, std::uint64_t n, const PrecisionContext& ctx,
                                               std::uint64_t sort_limit = std::uint64_t{1} << 20) {
  if (n <= sort_limit || alpha.is_rational()) return mesh_ratio(kronecker(alpha, n, ctx));
  auto field = std::make_shared<const AlphaField>(CFExpansion(alpha), ctx);
  return kronecker_metrics_streaming(field, n);
}

// ---------------------------------------------------------------------------
// Closed-form bounds.

struct BoundReport {
  Integer n;
  Decomposition decomposition;
  Interval upper;                            // 2(1 - h a_m) / min(a_m, 1 - (h+1) a_m)
  std::optional<Interval> lower_at_nm;       // 1 / alpha_m, only at n = n_m with m >= 3
  std::optional<Rational> lower_digit_form;  // a_{m+1} + 1/a_{m+2}, same condition
  std::optional<Integer> global_upper;       // 2 + 2 sup a_j when the sup is exact
};

/// Computes BoundReports for one expansion, caching alpha_m enclosures.
class BoundCalculator {
 public:
  BoundCalculator(CFExpansion exp, PrecisionContext ctx) : exp_(std::move(exp)), ctx_(ctx) {
    ctx_.validate();
    if (exp_.finite()) throw Unsupported("Kronecker bounds need an irrational alpha");
    const auto sup = digit_supremum(exp_, 0);
    if (sup.certainty == Certainty::exact) global_ = 2 + 2 * sup.value;
  }

  BoundReport operator()(const Integer& n) {
    const Decomposition d = decompose(exp_, n);
    const Interval& am = alpha_m(d.m);
    const long bits = ctx_.bits;
    const Interval one = Interval::point(1, bits);
    const Interval hh = Interval::point(Rational(d.h), bits);
    const Interval h1 = Interval::point(Rational(d.h + 1), bits);
    const Interval numer = Interval::point(2, bits) * (one - hh * am);
    const Interval denom = min(am, one - h1 * am);

    BoundReport r{n, d, numer / denom, std::nullopt, std::nullopt, global_};
    if (d.h == 0 && d.k == 0 && d.m >= 3) {
      r.lower_at_nm = one / am;
      r.lower_digit_form = Rational(exp_.digit(d.m + 1)) + Rational(1) / Rational(exp_.digit(d.m + 2));
    }
    return r;
  }

  const CFExpansion& expansion() const noexcept { return exp_; }

 private:
  const Interval& alpha_m(std::size_t m) {
    auto it = cache_.find(m);
    if (it == cache_.end()) {
      // a prefix-only expansion may not pin alpha_m to the working precision;
      // its widest certified enclosure is still a valid bound
      Interval am = exp_.prefix_only()
                        ? tail_enclosure_best(exp_, m, -ctx_.bits + ctx_.guard - 1).to_interval(ctx_.bits)
                        : alpha_tail(exp_, m, ctx_);
      it = cache_.emplace(m, std::move(am)).first;
    }
    return it->second;
  }

  CFExpansion exp_;
  PrecisionContext ctx_;
  std::optional<Integer> global_;
  std::map<std::size_t, Interval> cache_;
};

inline BoundReport kronecker_bounds(const CFExpansion& exp, const Integer& n, const PrecisionContext& ctx) {
  BoundCalculator calc(exp, ctx);
  return calc(n);
}

/// One sweep row for a Kronecker prefix: exact metrics plus the bounds.
struct KroneckerRow {
  QUMetrics<AlphaValue> metrics;
  std::optional<BoundReport> bounds;  // absent for rational alpha
};

inline std::vector<KroneckerRow> sweep_kronecker(const AlphaSpec& alpha, std::size_t n_lo, std::size_t n_hi,
                                                 const PrecisionContext& ctx) {
  const auto ps = kronecker(alpha, n_hi, ctx);
  auto rows = sweep(ps, n_lo, n_hi);
  const auto& exp = ps.points.front().field()->expansion();
  std::optional<BoundCalculator> calc;
  if (!exp.finite()) calc.emplace(exp, ctx);
  std::vector<KroneckerRow> out;
  out.reserve(rows.size());
  for (auto& m : rows) {
    std::optional<BoundReport> b;
    if (calc) b = (*calc)(Integer(static_cast<unsigned long>(m.n)));
    out.push_back({std::move(m), std::move(b)});
  }
  return out;
}

}  // namespace quniform
