#pragma once

// CSV and JSON renderings. Exact values are printed as correctly rounded
// decimals; enclosures are printed as [lo, hi] pairs rounded outward.

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "quniform/metrics.hpp"
#include "quniform/threegap.hpp"

namespace quniform {

inline constexpr int kDefaultDigits = 40;

inline long bits_for_digits(int digits) { return static_cast<long>(digits * 3.33) + 32; }

inline std::string render(const Rational& x, int digits) { return decimal_string(x, digits, MPFR_RNDN); }

inline std::string render(const AlphaValue& x, int digits) {
  return enclose(x, bits_for_digits(digits)).lo().to_string(digits, MPFR_RNDN);
}

template <class T>
std::string render_ratio(const QUMetrics<T>& q, int digits) {
  if (q.infinite) return "inf";
  if constexpr (std::is_same_v<T, Rational>) {
    return render(*exact_ratio(q), digits);
  } else {
    return q.ratio(bits_for_digits(digits))->lo().to_string(digits, MPFR_RNDN);
  }
}

/// Integers as JSON numbers when they fit in 64 bits, decimal strings otherwise.
inline nlohmann::json int_json(const Integer& z) {
  if (mpz_fits_slong_p(z.get_mpz_t())) return z.get_si();
  return z.get_str();
}

inline nlohmann::json interval_json(const Interval& x, int digits) {
  const auto s = x.to_strings(digits);
  return nlohmann::json::array({s[0], s[1]});
}

inline nlohmann::json to_json(const GapStructure& gs, const CFExpansion& exp, const PrecisionContext& ctx,
                              int digits = kDefaultDigits) {
  nlohmann::json j;
  j["n"] = int_json(gs.n);
  j["m"] = gs.decomposition.m;
  j["h"] = int_json(gs.decomposition.h);
  j["k"] = int_json(gs.decomposition.k);
  j["entries"] = nlohmann::json::array();
  for (const auto& e : gs.entries) {
    j["entries"].push_back({{"u", int_json(e.length.u)},
                            {"v", int_json(e.length.v)},
                            {"multiplicity", int_json(e.multiplicity)},
                            {"interval", interval_json(enclose(e.length, exp, ctx), digits)}});
  }
  return j;
}

inline nlohmann::json to_json(const LengthsReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back({{"identity", c.name}, {"passed", c.passed}});
  return {{"checks", checks}, {"all_passed", r.all_passed()}};
}

inline nlohmann::json to_json(const BoundReport& b, int digits = kDefaultDigits) {
  nlohmann::json j;
  j["n"] = int_json(b.n);
  j["m"] = b.decomposition.m;
  j["h"] = int_json(b.decomposition.h);
  j["k"] = int_json(b.decomposition.k);
  j["upper"] = interval_json(b.upper, digits);
  j["lower_at_nm"] = b.lower_at_nm ? interval_json(*b.lower_at_nm, digits) : nlohmann::json(nullptr);
  j["lower_digit_form"] = b.lower_digit_form ? nlohmann::json(render(*b.lower_digit_form, digits)) : nlohmann::json(nullptr);
  j["global_upper"] = b.global_upper ? int_json(*b.global_upper) : nlohmann::json(nullptr);
  return j;
}

template <class T>
void write_points_csv(std::ostream& os, const PointSet<T>& ps, int digits = kDefaultDigits) {
  os << "index,value\n";
  for (std::size_t i = 0; i < ps.n(); ++i) os << i << ',' << render(ps.points[i], digits) << '\n';
}

template <class T>
nlohmann::json points_json(const PointSet<T>& ps, int digits = kDefaultDigits) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& x : ps.points) pts.push_back(render(x, digits));
  return {{"generator", to_string(ps.tag)}, {"n", ps.n()}, {"precision_bits", ps.precision_bits}, {"points", pts}};
}

/// One rendered sweep row; empty strings where a column is undefined.
struct SweepTableRow {
  std::size_t n = 0;
  std::string fill, separation, rho;
  std::string upper_lo, upper_hi, lower_lo, lower_hi, global_upper;
};

template <class T>
SweepTableRow table_row(const QUMetrics<T>& q, const BoundReport* bounds, int digits) {
  SweepTableRow r;
  r.n = q.n;
  r.fill = render(q.fill, digits);
  r.separation = render(q.separation, digits);
  r.rho = render_ratio(q, digits);
  if (bounds) {
    const auto up = bounds->upper.to_strings(digits);
    r.upper_lo = up[0];
    r.upper_hi = up[1];
    if (bounds->lower_at_nm) {
      const auto lo = bounds->lower_at_nm->to_strings(digits);
      r.lower_lo = lo[0];
      r.lower_hi = lo[1];
    }
    if (bounds->global_upper) r.global_upper = bounds->global_upper->get_str();
  }
  return r;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepTableRow>& rows) {
  os << "n,h_n,q_n,rho_n,upper_bound_lo,upper_bound_hi,lower_bound_lo,lower_bound_hi,global_upper\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.fill << ',' << r.separation << ',' << r.rho << ',' << r.upper_lo << ',' << r.upper_hi << ','
       << r.lower_lo << ',' << r.lower_hi << ',' << r.global_upper << '\n';
  }
}

inline nlohmann::json sweep_json(const std::vector<SweepTableRow>& rows) {
  auto opt = [](const std::string& s) { return s.empty() ? nlohmann::json(nullptr) : nlohmann::json(s); };
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"n", r.n},
                   {"h_n", r.fill},
                   {"q_n", r.separation},
                   {"rho_n", r.rho},
                   {"upper_bound", r.upper_lo.empty() ? nlohmann::json(nullptr) : nlohmann::json::array({r.upper_lo, r.upper_hi})},
                   {"lower_bound", r.lower_lo.empty() ? nlohmann::json(nullptr) : nlohmann::json::array({r.lower_lo, r.lower_hi})},
                   {"global_upper", opt(r.global_upper)}});
  }
  return out;
}

}  // namespace quniform
