#pragma once

// Exact continued-fraction engine.
//
// alpha is described exactly (quadratic surd, rational, or explicit digit
// list), expanded into partial quotients a_0; a_1, a_2, ..., and every
// derived quantity (convergents, s_m, n_m, tails alpha_m) is computed from
// the digits with integer or rational arithmetic. Floating point only
// appears at the very end, as outward-rounded enclosures.

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "quniform/error.hpp"
#include "quniform/interval.hpp"

namespace quniform {

struct PrecisionContext {
  long bits = 128;      // working precision of reported enclosures
  long max_bits = 4096; // escalation ceiling
  long guard = 4;

  void validate() const {
    if (bits < 64) throw DomainError("precision context: bits must be >= 64");
    if (max_bits < bits) throw DomainError("precision context: max_bits must be >= bits");
    if (guard < 0 || guard >= bits) throw DomainError("precision context: guard out of range");
  }
};

namespace detail {

inline Integer parse_integer(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) throw ParseError("expected an integer, got '" + std::string(text) + "'");
  for (std::size_t j = i; j < s.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(s[j])))
      throw ParseError("expected an integer, got '" + std::string(text) + "'");
  }
  if (s[0] == '+') s.erase(0, 1);
  return Integer(s, 10);
}

inline std::vector<Integer> parse_digit_list(std::string_view text) {
  std::vector<Integer> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(parse_integer(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string join(const std::vector<Integer>& xs, std::size_t from = 0) {
  std::string out;
  for (std::size_t i = from; i < xs.size(); ++i) {
    if (i > from) out += ',';
    out += xs[i].get_str();
  }
  return out;
}

}  // namespace detail

/// (P + sqrt(D)) / Q, kept in the normal form Q | D - P^2.
struct QuadraticSurd {
  Integer P;
  Integer D;
  Integer Q;
  friend bool operator==(const QuadraticSurd&, const QuadraticSurd&) = default;
};

struct RationalAlpha {
  Integer num;
  Integer den;  // > 0, coprime to num
  friend bool operator==(const RationalAlpha&, const RationalAlpha&) = default;
};

/// Digits a_0; a_1, ... given explicitly. `preperiod` starts with a_0.
/// An empty period means only a prefix of an irrational alpha is known.
struct ExplicitCF {
  std::vector<Integer> preperiod;
  std::vector<Integer> period;
  friend bool operator==(const ExplicitCF&, const ExplicitCF&) = default;
};

class AlphaSpec {
 public:
  using Variant = std::variant<QuadraticSurd, RationalAlpha, ExplicitCF>;

  static AlphaSpec quadratic(Integer P, Integer D, Integer Q) {
    if (Q == 0) throw ParseError("quadratic surd: Q must be nonzero");
    if (D <= 0) throw ParseError("quadratic surd: D must be positive");
    if (mpz_perfect_square_p(D.get_mpz_t())) throw ParseError("quadratic surd: D must not be a perfect square");
    const Integer r = D - P * P;
    if (!mpz_divisible_p(r.get_mpz_t(), Q.get_mpz_t())) {
      const Integer absq = abs(Q);
      P *= absq;
      D *= Q * Q;
      Q *= absq;
    }
    return AlphaSpec(QuadraticSurd{std::move(P), std::move(D), std::move(Q)});
  }

  static AlphaSpec sqrt_of(const Integer& D) { return quadratic(0, D, 1); }

  /// (sqrt(5) - 1) / 2, the golden ratio conjugate.
  static AlphaSpec golden() { return quadratic(-1, 5, 2); }

  static AlphaSpec rational(Integer num, Integer den) {
    if (den == 0) throw ParseError("rational: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return AlphaSpec(RationalAlpha{q.get_num(), q.get_den()});
  }

  static AlphaSpec explicit_cf(std::vector<Integer> preperiod, std::vector<Integer> period = {}) {
    if (preperiod.empty()) throw ParseError("cf: a_0 is required");
    if (preperiod[0] < 0) throw ParseError("cf: a_0 must be >= 0");
    for (std::size_t j = 1; j < preperiod.size(); ++j) {
      if (preperiod[j] < 1) throw ParseError("cf: partial quotients a_j (j >= 1) must be >= 1");
    }
    for (const auto& a : period) {
      if (a < 1) throw ParseError("cf: periodic partial quotients must be >= 1");
    }
    return AlphaSpec(ExplicitCF{std::move(preperiod), std::move(period)});
  }

  /// golden | sqrt:D | quad:P,D,Q | rat:p/q | cf:a0;a1,a2,...[(period)]
  static AlphaSpec parse(std::string_view text) {
    auto starts = [&](std::string_view prefix) { return text.substr(0, prefix.size()) == prefix; };
    if (text == "golden") return golden();
    if (starts("sqrt:")) return sqrt_of(detail::parse_integer(text.substr(5)));
    if (starts("quad:")) {
      const auto parts = detail::parse_digit_list(text.substr(5));
      if (parts.size() != 3) throw ParseError("quad: expected P,D,Q");
      return quadratic(parts[0], parts[1], parts[2]);
    }
    if (starts("rat:")) {
      const auto body = text.substr(4);
      const auto slash = body.find('/');
      if (slash == std::string_view::npos) return rational(detail::parse_integer(body), 1);
      return rational(detail::parse_integer(body.substr(0, slash)), detail::parse_integer(body.substr(slash + 1)));
    }
    if (starts("cf:")) {
      auto body = text.substr(3);
      const auto semi = body.find(';');
      std::vector<Integer> pre{detail::parse_integer(body.substr(0, semi))};
      std::vector<Integer> period;
      if (semi != std::string_view::npos) {
        auto rest = body.substr(semi + 1);
        const auto open = rest.find('(');
        if (open != std::string_view::npos) {
          if (rest.back() != ')') throw ParseError("cf: period must be the final '(...)' group");
          period = detail::parse_digit_list(rest.substr(open + 1, rest.size() - open - 2));
          if (period.empty()) throw ParseError("cf: empty period '()'");
          rest = rest.substr(0, open);
          if (!rest.empty() && rest.back() == ',') rest.remove_suffix(1);
        }
        for (auto& a : detail::parse_digit_list(rest)) pre.push_back(std::move(a));
      }
      return explicit_cf(std::move(pre), std::move(period));
    }
    throw ParseError("unrecognized alpha spec '" + std::string(text) + "'");
  }

  std::string to_string() const {
    if (const auto* s = std::get_if<QuadraticSurd>(&v_))
      return "quad:" + s->P.get_str() + "," + s->D.get_str() + "," + s->Q.get_str();
    if (const auto* r = std::get_if<RationalAlpha>(&v_)) return "rat:" + r->num.get_str() + "/" + r->den.get_str();
    const auto& cf = std::get<ExplicitCF>(v_);
    std::string out = "cf:" + cf.preperiod[0].get_str();
    if (cf.preperiod.size() > 1 || !cf.period.empty()) out += ';';
    out += detail::join(cf.preperiod, 1);
    if (!cf.period.empty()) {
      if (cf.preperiod.size() > 1) out += ',';
      out += "(" + detail::join(cf.period) + ")";
    }
    return out;
  }

  const Variant& variant() const noexcept { return v_; }
  bool is_rational() const noexcept { return std::holds_alternative<RationalAlpha>(v_); }

  friend bool operator==(const AlphaSpec&, const AlphaSpec&) = default;

 private:
  explicit AlphaSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

struct Periodicity {
  std::size_t preperiod;  // number of digits before the repeating block (a_0 included)
  std::size_t period;
};

/// Continued-fraction digits plus lazily extended convergent tables.
///
/// Digits are fixed at construction (a finite list, or a preperiod plus a
/// repeating block). The convergent and s_m tables grow on demand; growth is
/// serialized by a mutex shared among copies, so concurrent reads are safe.
class CFExpansion {
 public:
  enum class Kind { finite, periodic, prefix_only };

  explicit CFExpansion(const AlphaSpec& alpha) : state_(std::make_shared<State>()) {
    state_->alpha = alpha;
    std::visit([this](const auto& v) { init(v); }, alpha.variant());
  }

  const AlphaSpec& alpha() const noexcept { return state_->alpha; }
  Kind kind() const noexcept { return state_->kind; }
  bool finite() const noexcept { return state_->kind == Kind::finite; }
  bool prefix_only() const noexcept { return state_->kind == Kind::prefix_only; }

  std::optional<Periodicity> periodic() const {
    if (state_->kind != Kind::periodic) return std::nullopt;
    return Periodicity{state_->pre.size(), state_->period.size()};
  }

  /// Index of the last digit for finite and prefix-only expansions.
  std::optional<std::size_t> last_index() const {
    if (state_->kind == Kind::periodic) return std::nullopt;
    return state_->pre.size() - 1;
  }

  bool has_digit(std::size_t j) const { return state_->kind == Kind::periodic || j < state_->pre.size(); }

  const Integer& digit(std::size_t j) const {
    const State& s = *state_;
    if (j < s.pre.size()) return s.pre[j];
    if (s.period.empty()) {
      if (s.kind == Kind::finite) throw OutOfRange("digit a_" + std::to_string(j) + " beyond finite expansion");
      throw PrecisionUnresolved("digit a_" + std::to_string(j) + " beyond the known prefix", j);
    }
    return s.period[(j - s.pre.size()) % s.period.size()];
  }

  /// Digits a_0..a_count-1 (or fewer when the expansion ends first).
  std::vector<Integer> digits(std::size_t count) const {
    std::vector<Integer> out;
    for (std::size_t j = 0; j < count && has_digit(j); ++j) out.push_back(digit(j));
    return out;
  }

  /// Convergent denominator of [0; a_1, a_2, ...]; s(-1) = 0, s(0) = 1.
  Integer s(long m) const {
    if (m < -1) throw OutOfRange("s_m needs m >= -1");
    if (m == -1) return 0;
    return table(static_cast<std::size_t>(m)).second;
  }

  /// n_0 = 1, n_m = s_m + s_{m-1}.
  Integer n(std::size_t m) const { return s(static_cast<long>(m)) + s(static_cast<long>(m) - 1); }

  /// Convergent numerator of [0; a_1, a_2, ...] (the reduced alpha_0).
  Integer p(std::size_t m) const { return table(m).first; }

  /// Convergent p_m/q_m of alpha itself (a_0 included).
  std::pair<Integer, Integer> convergent(std::size_t m) const {
    const auto [p0, q0] = table(m);
    return {p0 + digit(0) * q0, q0};
  }

 private:
  struct State {
    AlphaSpec alpha = AlphaSpec::golden();
    Kind kind = Kind::finite;
    std::vector<Integer> pre;
    std::vector<Integer> period;
    std::mutex mu;
    std::vector<Integer> p{0, 1};  // p_0, p_1, ... of [0; a_1, ...]
    std::vector<Integer> q{1};     // q_0, q_1, ...
  };

  void init(const RationalAlpha& r) {
    state_->kind = Kind::finite;
    Integer num = r.num, den = r.den;
    while (den != 0) {
      Integer a;
      mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
      state_->pre.push_back(a);
      Integer rem = num - a * den;
      num = den;
      den = rem;
    }
  }

  void init(const ExplicitCF& cf) {
    state_->kind = cf.period.empty() ? Kind::prefix_only : Kind::periodic;
    state_->pre = cf.preperiod;
    state_->period = cf.period;
  }

  // Exact Gauss map on normal-form triples; the first repeated (P, Q)
  // state closes the period (Lagrange).
  void init(const QuadraticSurd& surd) {
    state_->kind = Kind::periodic;
    Integer P = surd.P, Q = surd.Q;
    const Integer& D = surd.D;
    Integer root;
    mpz_sqrt(root.get_mpz_t(), D.get_mpz_t());
    std::map<std::pair<Integer, Integer>, std::size_t> seen;
    std::vector<Integer> digits;
    while (true) {
      auto [it, fresh] = seen.try_emplace({P, Q}, digits.size());
      if (!fresh) {
        const std::size_t start = it->second;
        state_->pre.assign(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(start));
        state_->period.assign(digits.begin() + static_cast<std::ptrdiff_t>(start), digits.end());
        return;
      }
      Integer a, numer = P + root + (Q < 0 ? 1 : 0);
      mpz_fdiv_q(a.get_mpz_t(), numer.get_mpz_t(), Q.get_mpz_t());
      digits.push_back(a);
      P = a * Q - P;
      const Integer rest = D - P * P;
      mpz_divexact(Q.get_mpz_t(), rest.get_mpz_t(), Q.get_mpz_t());
    }
  }

  std::pair<Integer, Integer> table(std::size_t m) const {
    State& s = *state_;
    std::lock_guard lock(s.mu);
    while (s.q.size() <= m) {
      const std::size_t j = s.q.size();
      const Integer& a = digit(j);  // throws past the end
      const Integer q_prev2 = j >= 2 ? s.q[j - 2] : Integer(0);
      s.q.push_back(a * s.q[j - 1] + q_prev2);
      if (s.p.size() <= j) s.p.push_back(a * s.p[j - 1] + s.p[j - 2]);
    }
    return {s.p[m], s.q[m]};
  }

  std::shared_ptr<State> state_;
};

/// Expansion with convergent tables filled through m_max (or the end of a
/// finite expansion).
inline CFExpansion expand(const AlphaSpec& alpha, std::size_t m_max) {
  if (m_max < 1) throw DomainError("expand: m_max must be >= 1");
  CFExpansion exp(alpha);
  std::size_t top = m_max;
  if (const auto last = exp.last_index()) top = std::min(top, *last);
  (void)exp.s(static_cast<long>(top));
  return exp;
}

/// Exact enclosure of alpha_m = [0; a_{m+1}, a_{m+2}, ...] of width at most
/// 2^width_exp, from the window [0; a_{m+1}, ..., a_{m+w} + r], r in [0, 1].
/// Finite tails are returned exactly.
inline RationalInterval tail_enclosure(const CFExpansion& exp, std::size_t m, long width_exp) {
  if (exp.finite() && m + 1 > *exp.last_index()) {
    throw DomainError("alpha_" + std::to_string(m) + " has an empty tail");
  }
  Integer p_prev = 1, p_cur = 0, q_prev = 0, q_cur = 1;
  Integer target;
  mpz_ui_pow_ui(target.get_mpz_t(), 2, static_cast<unsigned long>(std::max(-width_exp, 0L)));
  for (std::size_t w = 1;; ++w) {
    const Integer& a = exp.digit(m + w);  // PrecisionUnresolved past a known prefix
    Integer p_next = a * p_cur + p_prev;
    Integer q_next = a * q_cur + q_prev;
    p_prev = std::move(p_cur);
    p_cur = std::move(p_next);
    q_prev = std::move(q_cur);
    q_cur = std::move(q_next);
    if (exp.finite() && m + w == *exp.last_index()) {
      Rational v(p_cur, q_cur);
      v.canonicalize();
      return {v, v};
    }
    if (q_cur * (q_cur + q_prev) >= target) {
      Rational a0(p_cur, q_cur), a1(p_cur + p_prev, q_cur + q_prev);
      a0.canonicalize();
      a1.canonicalize();
      if (a1 < a0) std::swap(a0, a1);
      return {a0, a1};
    }
  }
}

/// Like tail_enclosure, but a prefix-only expansion that runs out of digits
/// yields the tightest enclosure its known digits allow instead of throwing.
inline RationalInterval tail_enclosure_best(const CFExpansion& exp, std::size_t m, long width_exp) {
  try {
    return tail_enclosure(exp, m, width_exp);
  } catch (const PrecisionUnresolved&) {
    const std::size_t last = *exp.last_index();
    if (last <= m) throw;
    Integer p_prev = 1, p_cur = 0, q_prev = 0, q_cur = 1;
    for (std::size_t j = m + 1; j <= last; ++j) {
      Integer p_next = exp.digit(j) * p_cur + p_prev;
      Integer q_next = exp.digit(j) * q_cur + q_prev;
      p_prev = std::move(p_cur);
      p_cur = std::move(p_next);
      q_prev = std::move(q_cur);
      q_cur = std::move(q_next);
    }
    Rational a0(p_cur, q_cur), a1(p_cur + p_prev, q_cur + q_prev);
    a0.canonicalize();
    a1.canonicalize();
    if (a1 < a0) std::swap(a0, a1);
    return {a0, a1};
  }
}

/// Certified enclosure of alpha_m with width <= 2^(-bits + guard).
inline Interval alpha_tail(const CFExpansion& exp, std::size_t m, const PrecisionContext& ctx) {
  ctx.validate();
  const auto r = tail_enclosure(exp, m, -ctx.bits + ctx.guard - 1);
  return r.to_interval(ctx.bits);
}

/// Exact enclosure of alpha mod 1 = [0; a_1, a_2, ...]. With `best_effort`,
/// prefix-only expansions return their tightest enclosure instead of throwing.
inline RationalInterval alpha0_enclosure(const CFExpansion& exp, long width_exp, bool best_effort = false) {
  if (exp.finite() && *exp.last_index() == 0) return {Rational(0), Rational(0)};
  if (exp.prefix_only() && *exp.last_index() == 0) {
    if (!best_effort) throw PrecisionUnresolved("no digits of alpha mod 1 are known", 1);
    return {Rational(0), Rational(1)};
  }
  return best_effort ? tail_enclosure_best(exp, 0, width_exp) : tail_enclosure(exp, 0, width_exp);
}

inline std::pair<Integer, Integer> s_and_n(const CFExpansion& exp, std::size_t m) {
  try {
    return {exp.s(static_cast<long>(m)), exp.n(m)};
  } catch (const PrecisionUnresolved& e) {
    throw OutOfRange(std::string("s_and_n: ") + e.what());
  }
}

namespace detail {

// Escalates the alpha_0 enclosure until `decide` returns a value.
template <class Decide>
auto escalate_alpha0(const CFExpansion& exp, const PrecisionContext& ctx, const char* what, Decide decide) {
  for (long bits = 64;; bits = std::min(bits * 2, ctx.max_bits)) {
    const auto enc = alpha0_enclosure(exp, -bits, true);
    if (auto r = decide(enc)) return *r;
    if (exp.prefix_only() && enc.width() > Rational(1, 1) / Rational(Integer(1) << static_cast<mp_bitcnt_t>(bits))) {
      throw PrecisionUnresolved(std::string(what) + ": known digits exhausted", *exp.last_index() + 1);
    }
    if (bits >= ctx.max_bits) {
      throw PrecisionUnresolved(std::string(what) + " at " + std::to_string(ctx.max_bits) + " bits",
                                exp.prefix_only() ? *exp.last_index() + 1 : 0);
    }
  }
}

}  // namespace detail

/// Sign of u*alpha_0 + v, escalating the enclosure of alpha_0 until the sign
/// is certain or ctx.max_bits is exhausted.
inline int sign_at_alpha0(const CFExpansion& exp, const Rational& u, const Rational& v, const PrecisionContext& ctx) {
  if (sgn(u) == 0) return sgn(v);
  return detail::escalate_alpha0(exp, ctx, "sign of u*alpha+v unresolved", [&](const RationalInterval& enc) -> std::optional<int> {
    const Rational a = u * enc.lo + v;
    if (enc.exact()) return sgn(a);
    const Rational b = u * enc.hi + v;
    if (sgn(a) == sgn(b) && sgn(a) != 0) return sgn(a);
    return std::nullopt;
  });
}

/// floor(i * alpha_0) for i >= 0, exact.
inline Integer floor_multiple(const CFExpansion& exp, const Integer& i, const PrecisionContext& ctx) {
  if (i < 0) throw DomainError("floor_multiple: i must be >= 0");
  if (i == 0) return 0;
  return detail::escalate_alpha0(exp, ctx, "floor(i*alpha) unresolved", [&](const RationalInterval& enc) -> std::optional<Integer> {
    const Rational lo = i * enc.lo;
    Integer k;
    mpz_fdiv_q(k.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
    // alpha_0 lies strictly inside non-exact enclosures.
    if (enc.exact() || i * enc.hi <= Rational(k + 1)) return k;
    return std::nullopt;
  });
}

enum class Certainty { exact, prefix_only };

struct DigitSupremum {
  Integer value;  // 0 when no digit with j >= 1 was examined
  Certainty certainty;
};

/// sup over a_j, j >= 1.
inline DigitSupremum digit_supremum(const CFExpansion& exp, std::size_t probe_depth) {
  Integer best = 0;
  if (const auto per = exp.periodic()) {
    const std::size_t end = per->preperiod + per->period;
    for (std::size_t j = 1; j < end; ++j) best = std::max(best, exp.digit(j));
    return {best, Certainty::exact};
  }
  if (exp.finite()) {
    for (std::size_t j = 1; j <= *exp.last_index(); ++j) best = std::max(best, exp.digit(j));
    return {best, Certainty::exact};
  }
  for (std::size_t j = 1; j <= probe_depth && exp.has_digit(j); ++j) best = std::max(best, exp.digit(j));
  return {best, Certainty::prefix_only};
}

enum class Verdict { yes, no, unknown };

struct BadlyApproximable {
  Verdict verdict;
  DigitSupremum supremum;
};

inline BadlyApproximable is_badly_approximable(const AlphaSpec& alpha, std::size_t probe_depth) {
  const CFExpansion exp(alpha);
  const auto sup = digit_supremum(exp, probe_depth);
  if (exp.finite()) return {Verdict::no, sup};
  if (sup.certainty == Certainty::exact) return {Verdict::yes, sup};
  return {Verdict::unknown, sup};
}

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::unknown: return "unknown";
  }
  return "?";
}

}  // namespace quniform
