#pragma once

// Point-prefix generators: Kronecker i*alpha mod 1, van der Corput radical
// inverses, and greedy farthest-point packing on [0, 1].

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "quniform/contfrac.hpp"
#include "quniform/values.hpp"

namespace quniform {

enum class GeneratorTag { kronecker, vdc, greedy, explicit_points };

inline const char* to_string(GeneratorTag t) {
  switch (t) {
    case GeneratorTag::kronecker: return "kronecker";
    case GeneratorTag::vdc: return "vdc";
    case GeneratorTag::greedy: return "greedy";
    case GeneratorTag::explicit_points: return "explicit";
  }
  return "?";
}

/// First n points of a sequence, in generation order. Values are exact;
/// `precision_bits` is the accuracy used when they are rendered.
template <class T>
struct PointSet {
  std::vector<T> points;
  long precision_bits = 128;
  GeneratorTag tag = GeneratorTag::explicit_points;

  std::size_t n() const noexcept { return points.size(); }

  /// The first `count` points as their own set.
  PointSet prefix(std::size_t count) const {
    PointSet out{{}, precision_bits, tag};
    out.points.assign(points.begin(), points.begin() + static_cast<std::ptrdiff_t>(std::min(count, points.size())));
    return out;
  }
};

/// x_i = i*alpha mod 1 for i = 0..n-1, each stored as the exact form
/// i*alpha_0 - floor(i*alpha_0).
inline PointSet<AlphaValue> kronecker(const AlphaSpec& alpha, std::size_t n, const PrecisionContext& ctx) {
  if (n < 1) throw DomainError("kronecker: n must be >= 1");
  auto field = std::make_shared<const AlphaField>(CFExpansion(alpha), ctx);
  PointSet<AlphaValue> ps{{}, ctx.bits, GeneratorTag::kronecker};
  ps.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Integer f = field->floor_multiple(i);
    ps.points.emplace_back(field, Rational(Integer(static_cast<unsigned long>(i))), Rational(-f));
  }
  return ps;
}

/// Radical inverse of i in `base`, exact.
inline Rational radical_inverse(std::uint64_t i, unsigned base) {
  Integer num = 0, den = 1;
  while (i > 0) {
    num = num * base + (i % base);
    den *= base;
    i /= base;
  }
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline PointSet<Rational> van_der_corput(long base, std::size_t n) {
  if (base < 2) throw DomainError("van_der_corput: base must be >= 2");
  if (n < 1) throw DomainError("van_der_corput: n must be >= 1");
  PointSet<Rational> ps{{}, 0, GeneratorTag::vdc};
  ps.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ps.points.push_back(radical_inverse(i, static_cast<unsigned>(base)));
  return ps;
}

enum class TieBreak { leftmost, rightmost };

/// Greedy packing on [0, 1] from a first point at 1/2: every new point
/// maximizes the distance to the nearest placed point. Candidates are the
/// midpoints of interior gaps and the endpoints 0 and 1 (at their unhalved
/// boundary distance).
inline PointSet<Rational> greedy_packing(std::size_t n, TieBreak tie = TieBreak::leftmost) {
  if (n < 1) throw DomainError("greedy_packing: n must be >= 1");
  PointSet<Rational> ps{{Rational(1, 2)}, 0, GeneratorTag::greedy};

  struct Candidate {
    Rational distance;
    Rational position;
  };
  // Best first: larger distance, then the tie-break position order.
  auto better = [tie](const Candidate& a, const Candidate& b) {
    if (a.distance != b.distance) return a.distance > b.distance;
    return tie == TieBreak::leftmost ? a.position < b.position : a.position > b.position;
  };
  std::set<Candidate, decltype(better)> candidates(better);
  std::set<Rational> placed{Rational(1, 2)};

  auto add_gap = [&](const Rational& a, const Rational& b) {
    if (a < b) candidates.insert({(b - a) / 2, (a + b) / 2});
  };
  auto remove_gap = [&](const Rational& a, const Rational& b) {
    if (a < b) candidates.erase({(b - a) / 2, (a + b) / 2});
  };
  candidates.insert({Rational(1, 2), Rational(0)});
  candidates.insert({Rational(1, 2), Rational(1)});

  while (ps.points.size() < n) {
    const Candidate best = *candidates.begin();
    candidates.erase(candidates.begin());
    const Rational& x = best.position;
    ps.points.push_back(x);
    const auto it = placed.insert(x).first;
    const bool has_left = it != placed.begin();
    const bool has_right = std::next(it) != placed.end();
    if (has_left && has_right) {
      const Rational& l = *std::prev(it);
      const Rational& r = *std::next(it);
      remove_gap(l, r);
      add_gap(l, x);
      add_gap(x, r);
    } else if (!has_left) {
      // x is the new minimum: the endpoint-0 candidate changes.
      const Rational& r = *std::next(it);
      candidates.erase({r, Rational(0)});
      if (x > 0) candidates.insert({x, Rational(0)});
      add_gap(x, r);
    } else {
      const Rational& l = *std::prev(it);
      candidates.erase({1 - l, Rational(1)});
      if (x < 1) candidates.insert({1 - x, Rational(1)});
      add_gap(l, x);
    }
  }
  return ps;
}

}  // namespace quniform
