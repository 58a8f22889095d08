// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fleck/cli.hpp>
#include <fleck/fleck.hpp>

using namespace fleck;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

void require(Outcome& o, bool cond, const std::string& what) {
  if (!cond) {
    o.ok = false;
    o.detail += (o.detail.empty() ? "" : "; ") + what;
  }
}

void require_report(Outcome& o, const VerificationReport& rep, std::uint64_t* checked) {
  *checked += rep.checked;
  if (!rep.passed()) {
    std::ostringstream s;
    s << rep.failures.size() << " failure(s) in " << rep.theorem << ", first "
      << rep.failures.front().params.dump() << " expected " << rep.failures.front().expected
      << " got " << rep.failures.front().actual;
    require(o, false, s.str());
  }
  if (rep.checked == 0) require(o, false, rep.theorem + " checked nothing");
}

SweepGrid grid(std::vector<std::int64_t> primes, IntRange a, IntRange n, IntRange l) {
  SweepGrid g;
  g.primes = std::move(primes);
  g.a = a;
  g.n = n;
  g.l = l;
  return g;
}

SweepGrid with_r(SweepGrid g, std::int64_t lo, std::int64_t hi) {
  g.full_residue_system = false;
  g.r_values.clear();
  for (auto r = lo; r <= hi; ++r) g.r_values.push_back(r);
  return g;
}

int failures = 0;

void criterion(int id, const std::string& title, double limit_s,
               const std::function<Outcome(std::uint64_t&)>& body) {
  const auto start = Clock::now();
  std::uint64_t checked = 0;
  Outcome o;
  try {
    o = body(checked);
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_s > 0 && secs >= limit_s) {
    o.ok = false;
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("runtime over limit");
  }
  if (!o.ok) ++failures;
  std::printf("[%s] %2d  %-58s checked=%-8llu %7.2fs%s%s\n", o.ok ? "PASS" : "FAIL", id,
              title.c_str(), static_cast<unsigned long long>(checked), secs,
              limit_s > 0 ? (" (limit " + std::to_string(static_cast<int>(limit_s)) + "s)").c_str()
                          : "",
              o.detail.empty() ? "" : ("  " + o.detail).c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  criterion(1, "integrality, p<=7, a<=3, n<=120, l<=4", 60, [](auto& checked) {
    Outcome o;
    require_report(o, verify_integrality(grid({2, 3, 5, 7}, {1, 3}, {0, 120}, {0, 4})), &checked);
    return o;
  });

  criterion(2, "lift p^a -> p^(a+1), a in {2,3}, all s,t", 0, [](auto& checked) {
    Outcome o;
    auto g = grid({2, 3, 5}, {2, 3}, {0, 40}, {0, 3});
    require_report(o, verify_lucas_lift(g), &checked);
    // <9,0>_{0,8} = 5 and <4,0>_{0,4} = 1, congruent mod 2.
    require(o, normalized(2, 3, 9, 0, 0) == 5 && normalized(2, 2, 4, 0, 0) == 1,
            "hand instance values");
    auto one = grid({2}, {2, 2}, {4, 4}, {0, 0});
    one.s = {1, 1};
    one.t = {0, 0};
    one = with_r(one, 0, 0);
    auto rep = verify_lucas_lift(one);
    require(o, rep.checked == 1 && rep.passed(), "hand instance not in passing set");
    return o;
  });

  criterion(3, "lift p -> p^2, both branches", 0, [](auto& checked) {
    Outcome o;
    auto g = grid({2, 3, 5}, {1, 1}, {0, 40}, {0, 3});
    require_report(o, verify_lucas_base(g), &checked);
    require(o, normalized(3, 2, 15, 1, 0) == 332, "<15,1>_{0,9} != 332");
    require(o, classify_base_case(3, 5, 0, 0, 1) == BaseBranch::Exceptional,
            "332 instance not in the exceptional branch");
    require(o, residue(ExactInt(332), ExactInt(3)) == 2, "332 mod 3");
    auto one = grid({3}, {1, 1}, {5, 5}, {0, 0});
    one.s = {0, 0};
    one.t = {1, 1};
    one = with_r(one, 0, 0);
    auto rep = verify_lucas_base(one);
    require(o, rep.checked == 1 && rep.passed(), "332 instance not in passing set");
    return o;
  });

  criterion(4, "T-coefficient lift, n<=60, both sides p-integral", 0, [](auto& checked) {
    Outcome o;
    require_report(o, verify_t_coeff_lucas(grid({2, 3, 5}, {2, 2}, {0, 60}, {0, 3})), &checked);
    return o;
  });

  criterion(5, "valuation of the s=t=0 lift, n<=40 incl. ord_p(n)=2", 0, [](auto& checked) {
    Outcome o;
    auto g = grid({2, 3, 5}, {1, 2}, {1, 40}, {0, 2});
    require_report(o, verify_valuation_lift(g), &checked);
    for (std::int64_t p : {2, 3, 5}) {
      bool has_square = false;
      for (auto n = g.n.lo; n <= g.n.hi; ++n)
        has_square = has_square || ord_p(ExactInt(n), p) == Valuation(2);
      require(o, has_square, "no n with ord_p(n) = 2 for p = " + std::to_string(p));
    }
    return o;
  });

  criterion(6, "sharp rows, l<=3, m<=6, all r mod p^a", 0, [](auto& checked) {
    Outcome o;
    auto g = grid({2, 3, 5}, {1, 2}, {0, 40}, {0, 3});
    g.m = {1, 6};
    require_report(o, verify_sharpness(g), &checked);
    for (std::int64_t r = 0; r < 3; ++r)
      require(o, residue(normalized(3, 1, 2, r, 0), ExactInt(3)) == 1,
              "<2," + std::to_string(r) + ">_{0,3} not 1 mod 3");
    return o;
  });

  criterion(7, "exact identities: order recurrence and convolution", 0, [](auto& checked) {
    Outcome o;
    auto rec = with_r(grid({2}, {1, 1}, {1, 30}, {1, 4}), -10, 10);
    rec.m = {1, 8};
    require_report(o, verify_order_recurrence(rec), &checked);
    auto conv = default_grid(Check::Convolution);
    conv.d = {1, 9};
    conv.q = {1, 9};
    conv.n = {0, 30};
    require_report(o, verify_convolution(conv), &checked);
    return o;
  });

  criterion(8, "correction lift, top coeff, diagonal, recurrence mod p", 0,
            [](auto& checked) {
              Outcome o;
              for (Check c : {Check::LiftCorrection, Check::TopCoefficient, Check::Diagonal,
                              Check::RecurrenceModP})
                require_report(o, run_check(c, default_grid(c)), &checked);
              for (std::int64_t p : {2, 3, 5, 7})
                for (std::int64_t n = 1; n <= 20; ++n)
                  for (std::int64_t s = 0; s <= p - 2; ++s)
                    for (std::int64_t t = 0; t <= s; ++t) {
                      ++checked;
                      require(o, congruent_mod_p_power(top_sigma(p, n, s, t), 0, p, 1),
                              "sigma_st at p=" + std::to_string(p) + " n=" + std::to_string(n));
                    }
              return o;
            });

  criterion(9, "psi operator: round trip, projection rule, coefficients", 120, [](auto& checked) {
    Outcome o;
    std::mt19937_64 rng(60);
    std::uniform_int_distribution<std::int64_t> coeff(-1000, 1000);
    auto random_poly = [&](std::size_t deg) {
      std::vector<ExactInt> c(deg + 1);
      for (auto& x : c) x = coeff(rng);
      return TruncPoly(std::move(c));
    };
    for (std::int64_t p : {2, 3, 5, 7})
      for (std::size_t deg = 0; deg <= 60; ++deg) {
        ++checked;
        auto y = random_poly(deg);
        require(o, same_polynomial(psi_apply(phi_apply(y, p), p), y),
                "round trip p=" + std::to_string(p) + " deg=" + std::to_string(deg));
      }
    for (std::int64_t p : {2, 3, 5, 7})
      for (int i = 0; i < 50; ++i) {
        ++checked;
        require(o, projection_rule_check(random_poly(20), random_poly(8), p),
                "projection rule p=" + std::to_string(p));
      }
    auto g = with_r(grid({2, 3, 5}, {1, 2}, {0, 30}, {0, 3}), -6, 6);
    g.l_max = 4;
    require_report(o, verify_psi_identity(g), &checked);
    return o;
  });

  criterion(10, "residue permutation, p in {3,5,7}, n<=40", 0, [](auto& checked) {
    Outcome o;
    require_report(o, verify_permutation(grid({3, 5, 7}, {2, 2}, {0, 40}, {0, 0})), &checked);
    return o;
  });

  criterion(11, "harness self-test: sign flip must fail, exit 1", 0, [](auto& checked) {
    Outcome o;
    auto rep = self_test_report();
    checked += rep.checked;
    require(o, !rep.passed() && rep.verdict() == "fail", "self-test sweep passed");
    const char* argv[] = {"fleck", "verify", "--self-test"};
    std::ostringstream out, err;
    int code = cli::run(3, argv, out, err);
    require(o, code == 1, "CLI self-test exit code " + std::to_string(code));
    return o;
  });

  std::printf("%s: %d of 11 criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES",
              failures);
  return failures == 0 ? 0 : 1;
}
