/**
 * @file sweep.hpp
 * @brief Parameter grids, verification reports and the chunked sweep engine.
 *
 * Tuples are produced lazily in lexicographic order and evaluated in
 * fixed-size chunks. Inside a chunk, workers take strided slices; results
 * are written to per-index slots and merged in index order, so the report
 * does not depend on the worker count.
 */
#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "exactmath.hpp"

namespace fleck {

using json = nlohmann::ordered_json;

/// Closed integer interval; empty when lo > hi.
struct IntRange {
  std::int64_t lo = 0;
  std::int64_t hi = -1;

  [[nodiscard]] bool empty() const { return lo > hi; }
  [[nodiscard]] IntRange clamp_below(std::int64_t min) const { return {std::max(lo, min), hi}; }
  [[nodiscard]] IntRange clamp_above(std::int64_t max) const { return {lo, std::min(hi, max)}; }
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct SweepGrid {
  std::vector<std::int64_t> primes{2, 3, 5};
  IntRange a{1, 2};
  IntRange n{0, 40};
  IntRange l{0, 3};
  /// Thm-1.5 style multiplier m, or the modulus range for the order recurrence.
  IntRange m{1, 6};
  IntRange d{1, 9};
  IntRange q{1, 9};
  /// Digit ranges, clipped to [0, p-1] per prime at expansion time.
  IntRange s{0, 1'000'000};
  IntRange t{0, 1'000'000};
  /// When set, r runs over {0, ..., M-1} plus {-1, -M+1} for the relevant
  /// modulus M; otherwise over r_values.
  bool full_residue_system = true;
  std::vector<std::int64_t> r_values;
  /// How far below zero the shift t goes in the convolution sweep.
  std::int64_t negative_t_depth = 2;
  std::int64_t l_max = 4;

  /// r-values for modulus M, deduplicated, in a fixed order.
  [[nodiscard]] std::vector<std::int64_t> residues(std::int64_t modulus) const {
    if (!full_residue_system) return r_values;
    std::vector<std::int64_t> out;
    for (std::int64_t r = 0; r < modulus; ++r) out.push_back(r);
    for (std::int64_t r : {std::int64_t{-1}, -modulus + 1})
      if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
    return out;
  }

  [[nodiscard]] IntRange digits(const IntRange& rng, std::int64_t p) const {
    return rng.clamp_below(0).clamp_above(p - 1);
  }
};

inline json to_json(const IntRange& r) { return json::array({r.lo, r.hi}); }

inline json to_json(const SweepGrid& g) {
  json j;
  j["primes"] = g.primes;
  j["a"] = to_json(g.a);
  j["n"] = to_json(g.n);
  j["l"] = to_json(g.l);
  j["m"] = to_json(g.m);
  j["d"] = to_json(g.d);
  j["q"] = to_json(g.q);
  j["s"] = to_json(g.s);
  j["t"] = to_json(g.t);
  if (g.full_residue_system)
    j["r"] = "full";
  else
    j["r"] = g.r_values;
  j["negative_t_depth"] = g.negative_t_depth;
  j["l_max"] = g.l_max;
  return j;
}

struct Failure {
  json params;
  std::string expected;
  std::string actual;
};

struct VerificationReport {
  std::string theorem;
  SweepGrid grid;
  std::uint64_t checked = 0;
  std::vector<Failure> failures;
  std::chrono::milliseconds elapsed{0};
  /// Informational findings (exploration sweeps only).
  std::optional<json> observations;

  [[nodiscard]] bool passed() const { return failures.empty(); }
  [[nodiscard]] std::string verdict() const { return passed() ? "pass" : "fail"; }
};

/// Report JSON. Big values are carried as decimal strings inside
/// expected/actual; params are small native integers.
inline json to_json(const VerificationReport& rep, bool with_timing = true) {
  json j;
  j["theorem"] = rep.theorem;
  j["checked"] = rep.checked;
  json failures = json::array();
  for (const auto& f : rep.failures)
    failures.push_back(json{{"params", f.params}, {"expected", f.expected}, {"actual", f.actual}});
  j["failures"] = std::move(failures);
  j["elapsed_ms"] = with_timing ? rep.elapsed.count() : 0;
  j["verdict"] = rep.verdict();
  j["grid"] = to_json(rep.grid);
  if (rep.observations) j["observations"] = *rep.observations;
  return j;
}

struct SweepOptions {
  unsigned workers = 1;
  /// Negate the expected side of every congruence and identity. Used by
  /// the harness self-test; a correct engine must then report failures.
  bool inject_sign_flip = false;
};

namespace detail {

inline constexpr std::size_t sweep_chunk = 1U << 14;

template <class Tuple, class Check>
void evaluate_chunk(const std::vector<Tuple>& chunk, Check& check, unsigned workers,
                    VerificationReport& rep) {
  std::vector<std::optional<Failure>> slots(chunk.size());
  auto run_slice = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < chunk.size(); i += stride) {
      try {
        slots[i] = check(chunk[i]);
      } catch (const std::exception& e) {
        slots[i] = Failure{to_params(chunk[i]), "no exception", std::string("exception: ") + e.what()};
      }
    }
  };
  if (workers <= 1 || chunk.size() < 2 * workers) {
    run_slice(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_slice, w, workers);
  }
  rep.checked += chunk.size();
  for (auto& s : slots)
    if (s) rep.failures.push_back(std::move(*s));
}

}  // namespace detail

/// Drives a sweep. `enumerate(emit)` must call emit(tuple) for every grid
/// point in lexicographic order; `check(tuple)` returns a Failure or
/// nullopt. Tuple types provide a free function to_params(tuple) -> json.
template <class Tuple, class Enumerate, class Check>
VerificationReport run_sweep(std::string theorem, const SweepGrid& grid, Enumerate&& enumerate,
                             Check&& check, const SweepOptions& opts) {
  VerificationReport rep;
  rep.theorem = std::move(theorem);
  rep.grid = grid;
  const auto start = std::chrono::steady_clock::now();

  std::vector<Tuple> chunk;
  chunk.reserve(detail::sweep_chunk);
  auto flush = [&] {
    detail::evaluate_chunk(chunk, check, opts.workers, rep);
    chunk.clear();
  };
  enumerate([&](Tuple tup) {
    chunk.push_back(std::move(tup));
    if (chunk.size() == detail::sweep_chunk) flush();
  });
  if (!chunk.empty()) flush();

  rep.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  return rep;
}

}  // namespace fleck
