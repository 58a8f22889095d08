/**
 * @file cli.hpp
 * @brief Command-line front end. Exit codes: 0 all checks pass, 1 a
 * mathematical mismatch was found, 2 usage or validation error.
 */
#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coefficients.hpp"
#include "psi_series.hpp"
#include "verifier.hpp"

namespace fleck::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_mismatch = 1;
inline constexpr int exit_usage = 2;

/// Relative --out paths resolve against this directory when it is set.
inline constexpr const char* output_dir_env = "FLECK_OUTPUT_DIR";

/// A user-facing validation error; maps to exit code 2.
class usage_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Format { Plain, Json, Csv };

namespace detail {

inline const std::map<std::string, Format>& format_names() {
  static const std::map<std::string, Format> names{
      {"plain", Format::Plain}, {"json", Format::Json}, {"csv", Format::Csv}};
  return names;
}

/// Writes to --out when given, otherwise to `out`.
class Sink {
public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) return;
    std::filesystem::path target(path);
    if (target.is_relative()) {
      if (const char* dir = std::getenv(output_dir_env); dir != nullptr && *dir != '\0')
        target = std::filesystem::path(dir) / target;
    }
    file_.open(target, std::ios::out | std::ios::trunc | std::ios::binary);
    if (!file_) throw usage_error("cannot open output path '" + target.string() + "'");
    stream_ = &file_;
  }
  std::ostream& get() { return *stream_; }

private:
  std::ofstream file_;
  std::ostream* stream_;
};

/// Range flags shared by table, verify, psi-check and explore.
struct GridFlags {
  std::vector<std::int64_t> primes;
  std::optional<std::int64_t> a, a_min, a_max;
  std::optional<std::int64_t> n, n_min, n_max;
  std::optional<std::int64_t> l, l_min, l_max;
  std::optional<std::int64_t> m_min, m_max;
  std::optional<std::int64_t> d_max, q_max;
  std::optional<std::int64_t> s, t;
  std::vector<std::int64_t> r;

  void attach(CLI::App* app, bool with_primes = true) {
    if (with_primes)
      app->add_option("--p", primes, "prime(s), comma separated")->delimiter(',');
    app->add_option("--a", a, "fixed exponent a");
    app->add_option("--a-min", a_min);
    app->add_option("--a-max", a_max);
    app->add_option("--n", n, "fixed row n");
    app->add_option("--n-min", n_min);
    app->add_option("--n-max", n_max);
    app->add_option("--l", l, "fixed order l");
    app->add_option("--l-min", l_min);
    app->add_option("--l-max", l_max, "upper bound for l (also the psi series depth)");
    app->add_option("--m-min", m_min);
    app->add_option("--m-max", m_max);
    app->add_option("--d-max", d_max);
    app->add_option("--q-max", q_max);
    app->add_option("--s", s, "fixed digit s");
    app->add_option("--t", t, "fixed digit t");
    app->add_option("--r", r, "explicit r values, comma separated")->delimiter(',');
  }

  static void apply(IntRange& rng, const std::optional<std::int64_t>& fixed,
                    const std::optional<std::int64_t>& lo, const std::optional<std::int64_t>& hi) {
    if (fixed) rng = {*fixed, *fixed};
    if (lo) rng.lo = *lo;
    if (hi) rng.hi = *hi;
  }

  void apply(SweepGrid& g) const {
    if (!primes.empty()) g.primes = primes;
    apply(g.a, a, a_min, a_max);
    apply(g.n, n, n_min, n_max);
    apply(g.l, l, l_min, l_max);
    apply(g.m, std::nullopt, m_min, m_max);
    apply(g.d, std::nullopt, std::nullopt, d_max);
    apply(g.q, std::nullopt, std::nullopt, q_max);
    apply(g.s, s, std::nullopt, std::nullopt);
    apply(g.t, t, std::nullopt, std::nullopt);
    if (l_max) g.l_max = *l_max;
    if (!r.empty()) {
      g.full_residue_system = false;
      g.r_values = r;
    }
  }

  static void validate(const SweepGrid& g) {
    for (auto p : g.primes)
      if (!is_prime(p)) throw usage_error("p must be prime (got " + std::to_string(p) + ")");
    if (g.a.lo < 1 && !g.a.empty()) throw usage_error("a must be at least 1");
    if (g.n.lo < 0 && !g.n.empty()) throw usage_error("n must be nonnegative");
    if (g.l.lo < 0 && !g.l.empty()) throw usage_error("l must be nonnegative");
    for (auto p : g.primes)
      if ((g.s.lo == g.s.hi && g.s.lo >= p) || (g.t.lo == g.t.hi && g.t.lo >= p))
        throw usage_error("s and t must be less than p");
  }
};

inline std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void render_report(std::ostream& os, const VerificationReport& rep, Format fmt,
                          bool timing) {
  switch (fmt) {
    case Format::Json:
      os << to_json(rep, timing).dump(2) << '\n';
      break;
    case Format::Csv:
      os << "theorem,params,expected,actual\n";
      for (const auto& f : rep.failures)
        os << rep.theorem << ',' << csv_quote(f.params.dump()) << ',' << csv_quote(f.expected)
           << ',' << csv_quote(f.actual) << '\n';
      break;
    case Format::Plain:
      os << rep.theorem << ": " << rep.verdict() << " (checked " << rep.checked << ", failures "
         << rep.failures.size();
      if (timing) os << ", " << rep.elapsed.count() << " ms";
      os << ")\n";
      for (const auto& f : rep.failures)
        os << "  " << f.params.dump() << " expected " << f.expected << " got " << f.actual
           << '\n';
      if (rep.observations) os << "  observations: " << rep.observations->dump() << '\n';
      break;
  }
}

inline void require_valid_query(const CoeffQuery& q) {
  if (!is_prime(q.p)) throw usage_error("p must be prime (got " + std::to_string(q.p) + ")");
  if (q.a < 1) throw usage_error("a must be at least 1");
  if (q.n < 0) throw usage_error("n must be nonnegative");
  if (q.l < 0) throw usage_error("l must be nonnegative");
}

}  // namespace detail

/// Parsed options for every subcommand; filled by CLI11 callbacks.
struct CliConfig {
  Format format = Format::Plain;
  std::string out_path;
  unsigned workers = 1;
  bool no_timing = false;

  // coeff / psi-check single tuple
  std::int64_t p = 2, a = 1, n = 0, r = 0, l = 0;
  bool want_t_coeff = false;
  std::int64_t l_max = 4;

  // verify
  std::string theorem;
  bool inject_sign_flip = false;
  bool self_test = false;

  detail::GridFlags grid;
};

inline int cmd_coeff(const CliConfig& cfg, std::ostream& os) {
  CoeffQuery q{cfg.p, cfg.a, cfg.n, cfg.r, cfg.l};
  detail::require_valid_query(q);
  NormalizedCoeff c = normalized_coeff(q);
  std::optional<PAdicRational> t;
  if (cfg.want_t_coeff) t = t_coeff(q);
  switch (cfg.format) {
    case Format::Json: {
      json j{{"p", q.p}, {"a", q.a}, {"n", q.n}, {"r", q.r}, {"l", q.l},
             {"raw_sum", c.raw_sum.str()}, {"exponent", c.exponent},
             {"normalized", c.normalized.str()}};
      if (t) j["t_coeff"] = t->str();
      os << j.dump(2) << '\n';
      break;
    }
    case Format::Csv:
      os << "p,a,n,r,l,raw_sum,exponent,normalized" << (t ? ",t_coeff" : "") << '\n';
      os << q.p << ',' << q.a << ',' << q.n << ',' << q.r << ',' << q.l << ',' << c.raw_sum << ','
         << c.exponent << ',' << c.normalized;
      if (t) os << ',' << t->str();
      os << '\n';
      break;
    case Format::Plain:
      os << "raw_sum: " << c.raw_sum << '\n'
         << "exponent: " << c.exponent << '\n'
         << "normalized: " << c.normalized << '\n';
      if (t) os << "t_coeff: " << t->str() << '\n';
      break;
  }
  return exit_ok;
}

/// One row per (p, a, n, r, l) in lexicographic order.
inline int cmd_table(const CliConfig& cfg, std::ostream& os) {
  SweepGrid g;
  g.r_values = {0};
  g.full_residue_system = false;
  cfg.grid.apply(g);
  detail::GridFlags::validate(g);

  json rows = json::array();
  if (cfg.format == Format::Csv) os << "p,a,n,r,l,raw,exponent,normalized,normalized_mod_p\n";
  for (auto p : g.primes)
    for (auto a = g.a.lo; a <= g.a.hi; ++a)
      for (auto n = g.n.lo; n <= g.n.hi; ++n)
        for (auto r : g.residues(ipow(p, a)))
          for (auto l = g.l.lo; l <= g.l.hi; ++l) {
            NormalizedCoeff c = normalized_coeff({p, a, n, r, l});
            ExactInt mod_p = residue(c.normalized, ExactInt(p));
            switch (cfg.format) {
              case Format::Csv:
                os << p << ',' << a << ',' << n << ',' << r << ',' << l << ',' << c.raw_sum << ','
                   << c.exponent << ',' << c.normalized << ',' << mod_p << '\n';
                break;
              case Format::Json:
                rows.push_back(json{{"p", p}, {"a", a}, {"n", n}, {"r", r}, {"l", l},
                                    {"raw", c.raw_sum.str()}, {"exponent", c.exponent},
                                    {"normalized", c.normalized.str()},
                                    {"normalized_mod_p", static_cast<std::int64_t>(mod_p)}});
                break;
              case Format::Plain:
                os << "p=" << p << " a=" << a << " n=" << n << " r=" << r << " l=" << l
                   << "  raw=" << c.raw_sum << " exponent=" << c.exponent
                   << " normalized=" << c.normalized << " (mod p: " << mod_p << ")\n";
                break;
            }
          }
  if (cfg.format == Format::Json) os << rows.dump(2) << '\n';
  return exit_ok;
}

inline std::string valid_check_ids() {
  std::string ids;
  for (const auto& info : check_table) ids += (ids.empty() ? "" : ", ") + std::string(info.id);
  return ids;
}

inline int cmd_verify(const CliConfig& cfg, std::ostream& os) {
  if (cfg.self_test) {
    VerificationReport rep = self_test_report();
    detail::render_report(os, rep, cfg.format, !cfg.no_timing);
    return rep.passed() ? exit_ok : exit_mismatch;
  }
  auto check = parse_check(cfg.theorem);
  if (!check)
    throw usage_error("unknown theorem id '" + cfg.theorem + "'; valid ids: " + valid_check_ids());
  SweepGrid g = default_grid(*check);
  cfg.grid.apply(g);
  detail::GridFlags::validate(g);
  if (cfg.workers == 0) throw usage_error("--workers must be positive");
  VerificationReport rep =
      run_check(*check, g, {.workers = cfg.workers, .inject_sign_flip = cfg.inject_sign_flip});
  detail::render_report(os, rep, cfg.format, !cfg.no_timing);
  return rep.passed() ? exit_ok : exit_mismatch;
}

inline int cmd_psi_check(const CliConfig& cfg, std::ostream& os) {
  const bool grid_mode = cfg.grid.n_max.has_value() || cfg.grid.primes.size() > 1;
  if (grid_mode) {
    SweepGrid g = default_grid(Check::PsiIdentity);
    g.primes = cfg.grid.primes.empty() ? std::vector<std::int64_t>{cfg.p} : cfg.grid.primes;
    g.a = {cfg.a, cfg.a};
    g.l_max = cfg.l_max;
    if (cfg.grid.n_max) g.n = {0, *cfg.grid.n_max};
    if (!cfg.grid.r.empty()) g.r_values = cfg.grid.r;
    detail::GridFlags::validate(g);
    if (g.l_max < 0) throw usage_error("--l-max must be nonnegative");
    VerificationReport rep = verify_psi_identity(g, {.workers = cfg.workers});
    detail::render_report(os, rep, cfg.format, !cfg.no_timing);
    return rep.passed() ? exit_ok : exit_mismatch;
  }

  const std::int64_t p = cfg.grid.primes.empty() ? cfg.p : cfg.grid.primes.front();
  const std::int64_t r = cfg.grid.r.empty() ? cfg.r : cfg.grid.r.front();
  detail::require_valid_query({p, cfg.a, cfg.n, r, 0});
  if (cfg.l_max < 0) throw usage_error("--l-max must be nonnegative");
  PsiResult psi = monomial_twisted(cfg.n, r, p, cfg.a, static_cast<std::size_t>(cfg.l_max));
  bool match = true;
  json rows = json::array();
  std::ostringstream body;
  for (std::int64_t l = 0; l <= cfg.l_max; ++l) {
    ExactInt lhs = psi.series[static_cast<std::size_t>(l)];
    ExactInt rhs = sign_of_power(cfg.n) * fleck_sum({p, cfg.a, cfg.n, r, l});
    match = match && lhs == rhs;
    rows.push_back(json{{"l", l}, {"psi", lhs.str()}, {"signed_sum", rhs.str()}});
    body << l << ',' << lhs << ',' << rhs << '\n';
  }
  switch (cfg.format) {
    case Format::Json:
      os << json{{"p", p}, {"a", cfg.a}, {"n", cfg.n}, {"r", r}, {"l_max", cfg.l_max},
                 {"rows", rows}, {"match", match}}
                .dump(2)
         << '\n';
      break;
    case Format::Csv:
      os << "l,psi,signed_sum\n" << body.str();
      break;
    case Format::Plain:
      os << "p=" << p << " a=" << cfg.a << " n=" << cfg.n << " r=" << r << '\n'
         << "l,psi,signed_sum\n"
         << body.str() << (match ? "match" : "MISMATCH") << '\n';
      break;
  }
  return match ? exit_ok : exit_mismatch;
}

/// Margins against the conjectured lift exponent. Informational: exit 0.
inline int cmd_explore(const CliConfig& cfg, std::ostream& os) {
  SweepGrid g;
  g.primes = {3, 5};
  g.a = {1, 2};
  g.n = {1, 20};
  g.l = {0, 2};
  cfg.grid.apply(g);
  detail::GridFlags::validate(g);
  VerificationReport rep = explore_lift_exponent(g, {.workers = cfg.workers});
  detail::render_report(os, rep, cfg.format, !cfg.no_timing);
  return exit_ok;
}

/// Parses argv and dispatches. Never throws; errors become exit code 2.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Normalized cyclotomic psi-coefficients: computation and congruence sweeps",
               "fleck"};
  app.require_subcommand(1);
  CliConfig cfg;
  std::string format_name;
  std::map<const CLI::App*, std::string> default_format;

  auto add_common = [&](CLI::App* sub, const std::string& fallback) {
    default_format[sub] = fallback;
    sub->add_option("--format", format_name, "plain, json or csv (default " + fallback + ")")
        ->check(CLI::IsMember({"plain", "json", "csv"}));
    sub->add_option("--out", cfg.out_path, "output file (default stdout)");
  };

  auto* coeff = app.add_subcommand("coeff", "one normalized coefficient");
  coeff->add_option("--p", cfg.p)->required();
  coeff->add_option("--a", cfg.a)->required();
  coeff->add_option("--n", cfg.n)->required();
  coeff->add_option("--r", cfg.r)->required();
  coeff->add_option("--l", cfg.l)->required();
  coeff->add_flag("--t-coeff", cfg.want_t_coeff, "also print the rational T-coefficient");
  add_common(coeff, "plain");

  auto* table = app.add_subcommand("table", "tabulate coefficients over a range");
  cfg.grid.attach(table);
  add_common(table, "csv");

  auto* verify = app.add_subcommand("verify", "run one congruence sweep");
  verify->add_option("theorem", cfg.theorem, "one of: " + valid_check_ids());
  cfg.grid.attach(verify);
  verify->add_option("--workers", cfg.workers)->default_val(1U);
  verify->add_flag("--inject-sign-flip", cfg.inject_sign_flip,
                   "negate every expected value (harness sanity check)");
  verify->add_flag("--self-test", cfg.self_test, "run the built-in fault-injection sweep");
  verify->add_flag("--no-timing", cfg.no_timing, "report elapsed_ms as 0");
  add_common(verify, "json");

  auto* psi = app.add_subcommand("psi-check", "compare psi^a coefficients with signed sums");
  psi->add_option("--p", cfg.grid.primes)->delimiter(',');
  psi->add_option("--a", cfg.a);
  psi->add_option("--n", cfg.n);
  psi->add_option("--n-max", cfg.grid.n_max, "grid mode over n in [0, n-max]");
  psi->add_option("--r", cfg.grid.r)->delimiter(',');
  psi->add_option("--l-max", cfg.l_max)->default_val(4);
  psi->add_option("--workers", cfg.workers)->default_val(1U);
  psi->add_flag("--no-timing", cfg.no_timing);
  add_common(psi, "plain");

  auto* explore = app.add_subcommand("explore", "margins against the conjectured lift exponent");
  cfg.grid.attach(explore);
  explore->add_option("--workers", cfg.workers)->default_val(1U);
  explore->add_flag("--no-timing", cfg.no_timing);
  add_common(explore, "json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }

  try {
    if (format_name.empty())
      for (const auto& [sub, fallback] : default_format)
        if (sub->parsed()) format_name = fallback;
    cfg.format = detail::format_names().at(format_name.empty() ? "plain" : format_name);
    detail::Sink sink(cfg.out_path, out);
    std::ostream& os = sink.get();
    if (*coeff) return cmd_coeff(cfg, os);
    if (*table) return cmd_table(cfg, os);
    if (*verify) {
      if (cfg.theorem.empty() && !cfg.self_test)
        throw usage_error("missing theorem id; valid ids: " + valid_check_ids());
      return cmd_verify(cfg, os);
    }
    if (*psi) return cmd_psi_check(cfg, os);
    if (*explore) return cmd_explore(cfg, os);
  } catch (const usage_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const integrity_error& e) {
    err << "integrity failure: " << e.what() << '\n';
    return exit_mismatch;
  }
  return exit_usage;
}

}  // namespace fleck::cli
