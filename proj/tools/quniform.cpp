// quniform: command-line front end.
//
// Exit codes: 0 success, 1 usage/parse error, 2 unsupported input class,
// 3 precision unresolved, 4 infinite mesh ratio (analyze), 5 identity check
// failure (gaps).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "quniform/io.hpp"

namespace {

using namespace quniform;

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kUnsupported = 2,
  kPrecision = 3,
  kInfinite = 4,
  kIdentityFailure = 5,
};

struct RunConfig {
  std::string alpha = "golden";
  std::string gen = "kronecker";
  long base = 2;
  std::string tie = "leftmost";
  std::string n;
  std::string n_range;
  std::string n_at;
  std::string m_range;
  long bits = 128;
  long max_bits = 4096;
  std::string format;
  int digits = kDefaultDigits;
  std::string out;
  std::size_t probe = 64;

  PrecisionContext context() const {
    PrecisionContext ctx{bits, max_bits, 4};
    ctx.validate();
    return ctx;
  }
};

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  auto num = [](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("expected a positive integer or range a..b, got '" + s + "'");
    }
    return static_cast<std::uint64_t>(std::stoull(s));
  };
  if (dots == std::string::npos) {
    const auto v = num(text);
    return {v, v};
  }
  const auto lo = num(text.substr(0, dots));
  const auto hi = num(text.substr(dots + 2));
  if (lo == 0 || hi < lo) throw ParseError("range bounds must be positive and ordered: '" + text + "'");
  return {lo, hi};
}

std::uint64_t single_n(const RunConfig& cfg) {
  if (cfg.n.empty()) throw ParseError("--n is required");
  const auto [lo, hi] = parse_range(cfg.n);
  if (lo != hi) throw ParseError("expected a single n, got a range");
  return lo;
}

TieBreak tie_break(const RunConfig& cfg) {
  return cfg.tie == "rightmost" ? TieBreak::rightmost : TieBreak::leftmost;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ParseError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

int cmd_gaps(const RunConfig& cfg) {
  if (cfg.gen != "kronecker") throw Unsupported("gaps applies to Kronecker sequences only");
  const auto ctx = cfg.context();
  const AlphaSpec alpha = AlphaSpec::parse(cfg.alpha);
  const CFExpansion exp(alpha);
  const auto gs = gap_structure(exp, Integer(static_cast<unsigned long>(single_n(cfg))));
  const auto report = lengths_check(gs);
  Output out(cfg.out);
  auto& os = out.stream();
  if (cfg.format == "csv") {
    os << "entry,u,v,multiplicity,interval_lo,interval_hi\n";
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& e = gs.entries[i];
      const auto iv = enclose(e.length, exp, ctx).to_strings(cfg.digits);
      os << i << ',' << e.length.u << ',' << e.length.v << ',' << e.multiplicity << ',' << iv[0] << ',' << iv[1] << '\n';
    }
    os << "\nidentity,passed\n";
    for (const auto& c : report.checks) os << c.name << ',' << (c.passed ? "true" : "false") << '\n';
  } else {
    nlohmann::json j = to_json(gs, exp, ctx, cfg.digits);
    j["alpha"] = alpha.to_string();
    j["lengths_check"] = to_json(report);
    os << j.dump(2) << '\n';
  }
  return report.all_passed() ? kOk : kIdentityFailure;
}

template <class T>
void emit_metrics(std::ostream& os, const RunConfig& cfg, const QUMetrics<T>& q, const BoundReport* bounds) {
  const auto row = table_row(q, bounds, cfg.digits);
  if (cfg.format == "csv") {
    write_sweep_csv(os, {row});
    return;
  }
  nlohmann::json j;
  j["generator"] = cfg.gen;
  if (cfg.gen == "kronecker") j["alpha"] = AlphaSpec::parse(cfg.alpha).to_string();
  j["n"] = q.n;
  j["h_n"] = row.fill;
  j["q_n"] = row.separation;
  j["rho_n"] = row.rho;
  j["provenance"] = to_string(q.provenance);
  if (bounds) j["bounds"] = to_json(*bounds, cfg.digits);
  os << j.dump(2) << '\n';
}

int cmd_analyze(const RunConfig& cfg) {
  const std::uint64_t n = single_n(cfg);
  Output out(cfg.out);
  bool infinite = false;
  if (cfg.gen == "kronecker") {
    const auto ctx = cfg.context();
    const AlphaSpec alpha = AlphaSpec::parse(cfg.alpha);
    const auto q = kronecker_metrics(alpha, n, ctx);
    std::optional<BoundReport> bounds;
    if (!alpha.is_rational()) bounds = kronecker_bounds(CFExpansion(alpha), Integer(static_cast<unsigned long>(n)), ctx);
    emit_metrics(out.stream(), cfg, q, bounds ? &*bounds : nullptr);
    infinite = q.infinite;
  } else {
    const auto ps = cfg.gen == "vdc" ? van_der_corput(cfg.base, n) : greedy_packing(n, tie_break(cfg));
    const auto q = mesh_ratio(ps);
    emit_metrics(out.stream(), cfg, q, nullptr);
    infinite = q.infinite;
  }
  return infinite ? kInfinite : kOk;
}

int cmd_sweep(const RunConfig& cfg) {
  std::vector<SweepTableRow> rows;
  if (cfg.n_at == "nm") {
    if (cfg.gen != "kronecker") throw Unsupported("--n-at nm applies to Kronecker sequences only");
    if (cfg.m_range.empty()) throw ParseError("--n-at nm needs --m a..b");
    const auto ctx = cfg.context();
    const AlphaSpec alpha = AlphaSpec::parse(cfg.alpha);
    if (alpha.is_rational()) throw Unsupported("--n-at nm needs an irrational alpha");
    const CFExpansion exp(alpha);
    BoundCalculator calc(exp, ctx);
    const auto [m_lo, m_hi] = parse_range(cfg.m_range);
    for (std::uint64_t m = m_lo; m <= m_hi; ++m) {
      const Integer n = exp.n(m);
      if (!mpz_fits_ulong_p(n.get_mpz_t())) throw Unsupported("n_m does not fit in 64 bits");
      const auto q = kronecker_metrics(alpha, n.get_ui(), ctx);
      const auto b = calc(n);
      rows.push_back(table_row(q, &b, cfg.digits));
    }
  } else {
    if (!cfg.n_at.empty()) throw ParseError("--n-at accepts only 'nm'");
    const std::string& text = cfg.n_range.empty() ? cfg.n : cfg.n_range;
    if (text.empty()) throw ParseError("--n a..b (or --n-range) is required");
    const auto [lo, hi] = parse_range(text);
    if (cfg.gen == "kronecker") {
      for (const auto& r : sweep_kronecker(AlphaSpec::parse(cfg.alpha), lo, hi, cfg.context())) {
        rows.push_back(table_row(r.metrics, r.bounds ? &*r.bounds : nullptr, cfg.digits));
      }
    } else {
      const auto ps = cfg.gen == "vdc" ? van_der_corput(cfg.base, hi) : greedy_packing(hi, tie_break(cfg));
      for (const auto& q : sweep(ps, lo, hi)) rows.push_back(table_row(q, nullptr, cfg.digits));
    }
  }
  Output out(cfg.out);
  if (cfg.format == "json") {
    out.stream() << sweep_json(rows).dump(2) << '\n';
  } else {
    write_sweep_csv(out.stream(), rows);
  }
  return kOk;
}

int cmd_classify(const RunConfig& cfg) {
  const AlphaSpec alpha = AlphaSpec::parse(cfg.alpha);
  const auto r = is_badly_approximable(alpha, cfg.probe);
  const bool exact = r.supremum.certainty == Certainty::exact;
  Output out(cfg.out);
  auto& os = out.stream();
  if (cfg.format == "csv") {
    os << "alpha,verdict,digit_sup,certainty,c_bound\n"
       << alpha.to_string() << ',' << to_string(r.verdict) << ',' << r.supremum.value << ','
       << (exact ? "exact" : "prefix-only") << ',';
    if (r.verdict == Verdict::yes) os << (2 + 2 * r.supremum.value);
    os << '\n';
    return kOk;
  }
  nlohmann::json j;
  j["alpha"] = alpha.to_string();
  j["verdict"] = to_string(r.verdict);
  j["digit_sup"] = int_json(r.supremum.value);
  j["certainty"] = exact ? "exact" : "prefix-only";
  j["c_bound"] = r.verdict == Verdict::yes ? int_json(2 + 2 * r.supremum.value) : nlohmann::json(nullptr);
  if (alpha.is_rational()) j["reason"] = "rational alpha has a finite continued fraction";
  os << j.dump(2) << '\n';
  return kOk;
}

int cmd_points(const RunConfig& cfg) {
  const std::uint64_t n = single_n(cfg);
  Output out(cfg.out);
  auto emit = [&](const auto& ps) {
    if (cfg.format == "json") {
      out.stream() << points_json(ps, cfg.digits).dump(2) << '\n';
    } else {
      write_points_csv(out.stream(), ps, cfg.digits);
    }
  };
  if (cfg.gen == "kronecker") {
    emit(kronecker(AlphaSpec::parse(cfg.alpha), n, cfg.context()));
  } else if (cfg.gen == "vdc") {
    emit(van_der_corput(cfg.base, n));
  } else {
    emit(greedy_packing(n, tie_break(cfg)));
  }
  return kOk;
}

void add_common(CLI::App* sub, RunConfig& cfg, const std::string& default_format) {
  cfg.format = default_format;
  sub->add_option("--alpha", cfg.alpha, "golden | sqrt:D | quad:P,D,Q | rat:p/q | cf:a0;a1,...[(period)]");
  sub->add_option("--gen", cfg.gen, "generator")->check(CLI::IsMember({"kronecker", "vdc", "greedy"}));
  sub->add_option("--base", cfg.base, "van der Corput base");
  sub->add_option("--tie-break", cfg.tie, "greedy tie rule")->check(CLI::IsMember({"leftmost", "rightmost"}));
  sub->add_option("--n", cfg.n, "n, or a range a..b for sweep");
  sub->add_option("--n-range", cfg.n_range, "range a..b");
  sub->add_option("--bits", cfg.bits, "working precision in bits");
  sub->add_option("--max-bits", cfg.max_bits, "precision escalation ceiling");
  sub->add_option("--format", cfg.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--digits", cfg.digits, "significant decimal digits")->check(CLI::Range(1, 10000));
  sub->add_option("--out", cfg.out, "output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quniform: Kronecker, van der Corput and greedy sequences; three-gap structure; mesh ratios"};
  app.require_subcommand(1);

  RunConfig gaps_cfg, analyze_cfg, sweep_cfg, classify_cfg, points_cfg;
  auto* gaps = app.add_subcommand("gaps", "three-gap structure of the first n Kronecker points");
  add_common(gaps, gaps_cfg, "json");
  auto* analyze = app.add_subcommand("analyze", "fill distance, separation radius and mesh ratio at one n");
  add_common(analyze, analyze_cfg, "json");
  auto* sweep_cmd = app.add_subcommand("sweep", "metrics over a range of n");
  add_common(sweep_cmd, sweep_cfg, "csv");
  sweep_cmd->add_option("--n-at", sweep_cfg.n_at, "'nm': evaluate at n = n_m instead of a range");
  sweep_cmd->add_option("--m", sweep_cfg.m_range, "range of m for --n-at nm");
  auto* classify = app.add_subcommand("classify", "badly-approximable verdict for alpha");
  add_common(classify, classify_cfg, "json");
  classify->add_option("--probe", classify_cfg.probe, "digits examined when only a prefix is known");
  auto* points = app.add_subcommand("points", "dump a point prefix");
  add_common(points, points_cfg, "csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gaps) return cmd_gaps(gaps_cfg);
    if (*analyze) return cmd_analyze(analyze_cfg);
    if (*sweep_cmd) return cmd_sweep(sweep_cfg);
    if (*classify) return cmd_classify(classify_cfg);
    if (*points) return cmd_points(points_cfg);
  } catch (const Unsupported& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return kUnsupported;
  } catch (const PrecisionUnresolved& e) {
    std::cerr << "precision unresolved: " << e.what() << '\n';
    return kPrecision;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
