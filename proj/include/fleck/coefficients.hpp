/**
 * @file coefficients.hpp
 * @brief Alternating residue-class binomial sums C_{l,p^a}(n,r), their
 * p-power normalization, the rational T-coefficients, and the two exact
 * structural identities these sums satisfy.
 */
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "exactmath.hpp"

namespace fleck {

/// Parameter tuple (p, a, n, r, l) naming one coefficient.
struct CoeffQuery {
  std::int64_t p = 2;
  std::int64_t a = 1;
  std::int64_t n = 0;
  std::int64_t r = 0;
  std::int64_t l = 0;

  [[nodiscard]] std::int64_t modulus() const { return ipow(p, a); }
  [[nodiscard]] std::int64_t totient() const { return totient_prime_power(p, a); }

  void validate() const {
    require_prime(p);
    if (a < 1) throw std::invalid_argument("a must be at least 1");
    if (n < 0) throw std::invalid_argument("n must be nonnegative");
    if (l < 0) throw std::invalid_argument("l must be nonnegative");
  }

  friend bool operator==(const CoeffQuery&, const CoeffQuery&) = default;
};

/// Sum over k = r (mod m) of (-1)^k binom(n,k) binom((k-r)/m, l), for any
/// modulus m >= 1. Only k in [0, n] contribute.
inline ExactInt alternating_sum(std::int64_t n, std::int64_t r, std::int64_t m, std::int64_t l) {
  if (m < 1) throw std::invalid_argument("alternating_sum: modulus must be positive");
  if (n < 0) throw std::invalid_argument("alternating_sum: n must be nonnegative");
  ExactInt total = 0;
  for (std::int64_t k = residue(r, m); k <= n; k += m) {
    ExactInt term = binom(n, k) * binom((k - r) / m, l);
    if (k % 2 == 0)
      total += term;
    else
      total -= term;
  }
  return total;
}

inline ExactInt fleck_sum(const CoeffQuery& q) {
  q.validate();
  return alternating_sum(q.n, q.r, q.modulus(), q.l);
}

/// floor((n - p^(a-1) - l p^a) / phi(p^a)); may be negative.
inline std::int64_t normalization_exponent(const CoeffQuery& q) {
  return floor_div(q.n - ipow(q.p, q.a - 1) - q.l * q.modulus(), q.totient());
}

struct NormalizedCoeff {
  CoeffQuery query;
  ExactInt raw_sum;
  std::int64_t exponent = 0;
  ExactInt normalized;
};

/// Divides the raw sum by p^exponent, or scales it by p^(-exponent) when the
/// exponent is negative. A nonzero remainder throws integrity_error.
inline NormalizedCoeff normalized_coeff(const CoeffQuery& q) {
  NormalizedCoeff out{q, fleck_sum(q), normalization_exponent(q), 0};
  if (out.exponent >= 0) {
    ExactInt scale = pow(ExactInt(q.p), static_cast<unsigned>(out.exponent));
    ExactInt rem;
    boost::multiprecision::divide_qr(out.raw_sum, scale, out.normalized, rem);
    if (rem != 0)
      throw integrity_error("p^" + std::to_string(out.exponent) + " does not divide C(p=" +
                            std::to_string(q.p) + ",a=" + std::to_string(q.a) +
                            ",n=" + std::to_string(q.n) + ",r=" + std::to_string(q.r) +
                            ",l=" + std::to_string(q.l) + ") = " + out.raw_sum.str());
  } else {
    out.normalized = out.raw_sum * pow(ExactInt(q.p), static_cast<unsigned>(-out.exponent));
  }
  return out;
}

/// Shorthand for the normalized value alone.
inline ExactInt normalized(std::int64_t p, std::int64_t a, std::int64_t n, std::int64_t r,
                           std::int64_t l) {
  return normalized_coeff({p, a, n, r, l}).normalized;
}

/// l! p^l / floor(n / p^(a-1))! times the raw sum.
inline PAdicRational t_coeff(const CoeffQuery& q) {
  ExactInt sum = fleck_sum(q);
  ExactInt num = factorial(q.l) * pow(ExactInt(q.p), static_cast<unsigned>(q.l)) * sum;
  return {num, factorial(q.n / ipow(q.p, q.a - 1))};
}

/// Residue mod p of the recurrence in l: minus the sum over the index set J
/// of binom(n,j) <j,r>_{0,p^a} <n-j-1, r-j+p^a-1>_{l-1,p^a}. Needs l, n >= 1.
inline ExactInt recurrence_mod_p(const CoeffQuery& q) {
  q.validate();
  if (q.l < 1 || q.n < 1)
    throw std::invalid_argument("recurrence_mod_p requires l >= 1 and n >= 1");
  const std::int64_t m = q.modulus();
  const std::int64_t phi = q.totient();
  const std::int64_t base = ipow(q.p, q.a - 1);
  const std::int64_t threshold = residue(q.n - (q.l + 1) * base, phi);
  ExactInt total = 0;
  for (std::int64_t j = 0; j < q.n; ++j) {
    if (residue(j - base, phi) < threshold) continue;
    total += binom(q.n, j) * normalized(q.p, q.a, j, q.r, 0) *
             normalized(q.p, q.a, q.n - j - 1, q.r - j + m - 1, q.l - 1);
  }
  return residue(ExactInt(-total), ExactInt(q.p));
}

/// Both sides of an exact integer identity.
struct IdentitySides {
  ExactInt lhs;
  ExactInt rhs;
  [[nodiscard]] bool holds() const { return lhs == rhs; }
};

/// Recurrence in l for an arbitrary modulus m:
///   lhs = S_l(n,r) - binom(floor((n-r)/m), l) S_0(n,r)
///   rhs = -sum_{j<n} binom(n,j) S_0(j,r) S_{l-1}(n-j-1, r-j+m-1)
/// where S_l(n,r) = alternating_sum(n, r, m, l).
inline IdentitySides order_recurrence_sides(std::int64_t n, std::int64_t r, std::int64_t l,
                                            std::int64_t m) {
  if (n < 1 || l < 1 || m < 1)
    throw std::invalid_argument("order_recurrence_sides requires n, l, m >= 1");
  IdentitySides out;
  out.lhs = alternating_sum(n, r, m, l) - binom(floor_div(n - r, m), l) * alternating_sum(n, r, m, 0);
  ExactInt acc = 0;
  for (std::int64_t j = 0; j < n; ++j) {
    ExactInt head = alternating_sum(j, r, m, 0);
    if (head == 0) continue;
    acc += binom(n, j) * head * alternating_sum(n - j - 1, r - j + m - 1, m, l - 1);
  }
  out.rhs = -acc;
  return out;
}

/// Convolution of a d-sum with a q-sum collapsing to a single dq-sum:
///   lhs = sum_j (-1)^j [sum_{d|k-t} (-1)^k binom(n,k) binom((k-t)/d, j)]
///                      [sum_{q|i-r} (-1)^i binom(j,i) binom((i-r)/q, l)]
///   rhs = alternating_sum(n, d r + t, d q, l)
/// The j-sum stops at floor((n-t)/d); the first vanishing factor past that
/// bound is checked, not assumed.
inline IdentitySides convolution_identity(std::int64_t d, std::int64_t q, std::int64_t n,
                                          std::int64_t r, std::int64_t t, std::int64_t l) {
  if (d < 1 || q < 1) throw std::invalid_argument("convolution_identity: d, q must be positive");
  if (n < 0 || l < 0) throw std::invalid_argument("convolution_identity: n, l must be nonnegative");
  if (t >= d) throw std::invalid_argument("convolution_identity requires t < d");

  auto outer = [&](std::int64_t j) {
    ExactInt s = 0;
    for (std::int64_t k = residue(t, d); k <= n; k += d) {
      ExactInt term = binom(n, k) * binom((k - t) / d, j);
      if (k % 2 == 0)
        s += term;
      else
        s -= term;
    }
    return s;
  };

  const std::int64_t j_max = floor_div(n - t, d);
  if (outer(j_max + 1) != 0)
    throw integrity_error("convolution_identity: j-sum does not vanish past its bound");

  IdentitySides out;
  out.lhs = 0;
  for (std::int64_t j = 0; j <= j_max; ++j) {
    ExactInt first = outer(j);
    if (first == 0) continue;
    ExactInt term = first * alternating_sum(j, r, q, l);
    if (j % 2 == 0)
      out.lhs += term;
    else
      out.lhs -= term;
  }
  out.rhs = alternating_sum(n, d * r + t, d * q, l);
  return out;
}

}  // namespace fleck
