// Test-only reference computations. Deliberately independent of the
// library: native 128-bit integers, binomials by repeated addition, and
// the residue-class sum by scanning every k in a window around [0, n].
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

using i128 = __int128;

inline std::string str(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  std::string s;
  while (v != 0) {
    int digit = static_cast<int>(v % 10);
    s.insert(s.begin(), static_cast<char>('0' + (neg ? -digit : digit)));
    v /= 10;
  }
  return neg ? "-" + s : s;
}

/// binom(n, k) for 0 <= n <= 120 by Pascal's rule.
inline i128 pascal(int n, int k) {
  static std::vector<std::vector<i128>> rows = [] {
    std::vector<std::vector<i128>> t(121);
    for (int i = 0; i <= 120; ++i) {
      t[i].assign(i + 1, 1);
      for (int j = 1; j < i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
    }
    return t;
  }();
  if (n < 0 || n > 120) throw std::out_of_range("oracle::pascal");
  if (k < 0 || k > n) return 0;
  return rows[n][k];
}

/// Generalized binomial binom(x, k) = x(x-1)...(x-k+1)/k!, small k only.
inline i128 gbinom(std::int64_t x, std::int64_t k) {
  if (k < 0) return 0;
  i128 num = 1, den = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    num *= (x - i);
    den *= (i + 1);
  }
  if (num % den != 0) throw std::logic_error("oracle::gbinom not exact");
  return num / den;
}

/// Sum over k = r (mod m), scanning k across a window wider than [0, n].
inline i128 direct_sum(std::int64_t n, std::int64_t r, std::int64_t m, std::int64_t l) {
  i128 total = 0;
  for (std::int64_t k = -2 * m - 5; k <= n + 2 * m + 5; ++k) {
    if (((k - r) % m) != 0) continue;
    i128 b = pascal(static_cast<int>(n), static_cast<int>(k));
    if (b == 0) continue;
    total += ((k % 2 == 0) ? 1 : -1) * b * gbinom((k - r) / m, l);
  }
  return total;
}

inline std::int64_t ipow(std::int64_t b, std::int64_t e) {
  std::int64_t out = 1;
  for (std::int64_t i = 0; i < e; ++i) out *= b;
  return out;
}

/// Normalized coefficient from the direct sum; p^e is divided out by
/// repeated exact division.
inline i128 normalized(std::int64_t p, std::int64_t a, std::int64_t n, std::int64_t r,
                       std::int64_t l) {
  const std::int64_t q = ipow(p, a);
  const std::int64_t phi = ipow(p, a - 1) * (p - 1);
  std::int64_t num = n - ipow(p, a - 1) - l * q;
  std::int64_t e = num / phi;
  if (num % phi != 0 && num < 0) --e;
  i128 v = direct_sum(n, r, q, l);
  for (; e > 0; --e) {
    if (v % p != 0) throw std::logic_error("oracle::normalized not divisible");
    v /= p;
  }
  for (; e < 0; ++e) v *= p;
  return v;
}

/// Product of two polynomials with 128-bit coefficients.
inline std::vector<i128> poly_mul(const std::vector<i128>& x, const std::vector<i128>& y) {
  std::vector<i128> out(x.size() + y.size() - 1, 0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) out[i + j] += x[i] * y[j];
  return out;
}

}  // namespace oracle
