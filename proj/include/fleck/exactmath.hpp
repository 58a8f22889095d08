/**
 * @file exactmath.hpp
 * @brief Exact integer and rational primitives: generalized binomials,
 * memoized factorials, p-adic valuations, residues and floor division.
 *
 * Everything here is exact. There is no floating point anywhere in the
 * library and no modular shortcut that could lose information about a
 * valuation.
 */
#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace fleck {

using ExactInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Raised when a computed value contradicts a proven divisibility property.
/// This is a bug trap, never a user error.
class integrity_error : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Raised when a congruence is requested between values that are not
/// p-integral. Distinct from a congruence that simply fails.
class not_p_integral : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

inline std::string to_string(const ExactInt& x) { return x.str(); }

// ---------------------------------------------------------------------------
// primes

/// Trial division; parameters reaching this are desk-scale.
constexpr bool is_prime(std::int64_t n) noexcept {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (std::int64_t d = 3; d <= n / d; d += 2)
    if (n % d == 0) return false;
  return true;
}

inline void require_prime(std::int64_t p) {
  if (!is_prime(p))
    throw std::invalid_argument("p must be prime (got " + std::to_string(p) + ")");
}

// ---------------------------------------------------------------------------
// integer helpers on native widths

constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  if (b <= 0) throw std::invalid_argument("floor_div: divisor must be positive");
  std::int64_t q = a / b;
  if ((a % b != 0) && (a < 0)) --q;
  return q;
}

constexpr std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return -floor_div(-a, b);
}

/// Least nonnegative residue {x}_m.
constexpr std::int64_t residue(std::int64_t x, std::int64_t m) {
  if (m <= 0) throw std::invalid_argument("residue: modulus must be positive");
  std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

constexpr std::int64_t ipow(std::int64_t base, std::int64_t e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= base;
  return r;
}

/// Euler's totient at a prime power: p^(a-1) (p-1).
constexpr std::int64_t totient_prime_power(std::int64_t p, std::int64_t a) {
  return ipow(p, a - 1) * (p - 1);
}

constexpr int sign_of_power(std::int64_t k) { return (k % 2 == 0) ? 1 : -1; }

/// floor(a/m) + floor(b/m) + 1 - floor((a+b+1)/m); always 0 or 1.
constexpr std::int64_t floor_sum_gap(std::int64_t a, std::int64_t b, std::int64_t m) {
  return floor_div(a, m) + floor_div(b, m) + 1 - floor_div(a + b + 1, m);
}

// ---------------------------------------------------------------------------
// integer helpers on ExactInt

inline ExactInt floor_div(const ExactInt& a, const ExactInt& b) {
  if (b <= 0) throw std::invalid_argument("floor_div: divisor must be positive");
  ExactInt q, r;
  boost::multiprecision::divide_qr(a, b, q, r);
  if (r != 0 && a < 0) --q;
  return q;
}

inline ExactInt residue(const ExactInt& x, const ExactInt& m) {
  if (m <= 0) throw std::invalid_argument("residue: modulus must be positive");
  ExactInt r = x % m;
  if (r < 0) r += m;
  return r;
}

inline ExactInt pow(const ExactInt& base, unsigned e) {
  return boost::multiprecision::pow(base, e);
}

// ---------------------------------------------------------------------------
// factorials and binomials

namespace detail {

/// Per-thread memo tables. Sweep workers never share them.
struct binomial_cache {
  static constexpr std::int64_t pascal_rows = 400;

  std::vector<ExactInt> factorials{ExactInt(1)};
  std::vector<std::vector<ExactInt>> rows;

  const ExactInt& factorial(std::int64_t n) {
    while (static_cast<std::int64_t>(factorials.size()) <= n) {
      auto k = static_cast<std::int64_t>(factorials.size());
      factorials.push_back(factorials.back() * k);
    }
    return factorials[static_cast<std::size_t>(n)];
  }

  const ExactInt& pascal(std::int64_t n, std::int64_t k) {
    while (static_cast<std::int64_t>(rows.size()) <= n) {
      auto m = rows.size();
      std::vector<ExactInt> row(m + 1);
      row[0] = 1;
      row[m] = 1;
      for (std::size_t i = 1; i < m; ++i) row[i] = rows[m - 1][i - 1] + rows[m - 1][i];
      rows.push_back(std::move(row));
    }
    return rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
  }

  static binomial_cache& local() {
    thread_local binomial_cache cache;
    return cache;
  }
};

}  // namespace detail

inline const ExactInt& factorial(std::int64_t n) {
  if (n < 0) throw std::invalid_argument("factorial of a negative integer");
  return detail::binomial_cache::local().factorial(n);
}

/// Generalized binomial coefficient: 1 for k = 0, 0 for k < 0, otherwise
/// x(x-1)...(x-k+1)/k! for any integer x.
inline ExactInt binom(std::int64_t x, std::int64_t k) {
  if (k < 0) return 0;
  if (k == 0) return 1;
  if (x < 0) {
    // (-1)^k binom(k - x - 1, k)
    ExactInt v = binom(k - x - 1, k);
    return (k % 2 == 0) ? v : ExactInt(-v);
  }
  if (k > x) return 0;
  auto& cache = detail::binomial_cache::local();
  if (x < detail::binomial_cache::pascal_rows) return cache.pascal(x, k);
  if (k > x - k) k = x - k;
  ExactInt falling = 1;
  for (std::int64_t i = 0; i < k; ++i) falling *= (x - i);
  ExactInt q, rem;
  boost::multiprecision::divide_qr(falling, cache.factorial(k), q, rem);
  if (rem != 0) throw integrity_error("binom: falling factorial not divisible by k!");
  return q;
}

inline ExactInt binom(const ExactInt& x, const ExactInt& k) {
  if (k < 0) return 0;
  if (k == 0) return 1;
  constexpr auto lim = std::numeric_limits<std::int64_t>::max() / 4;
  if (x >= 0 && k > x) return 0;
  if (k > lim || x > lim || x < -lim)
    throw std::out_of_range("binom: arguments beyond supported range");
  return binom(static_cast<std::int64_t>(x), static_cast<std::int64_t>(k));
}

// ---------------------------------------------------------------------------
// valuations

/// p-adic valuation: a nonnegative (or, for rationals, any) integer, or
/// +infinity for zero. Finite values order below infinity.
class Valuation {
public:
  constexpr Valuation() = default;
  constexpr explicit Valuation(std::int64_t v) : value_(v) {}
  static constexpr Valuation infinite() { return Valuation{}; }

  [[nodiscard]] constexpr bool is_infinite() const { return !value_.has_value(); }
  [[nodiscard]] constexpr std::int64_t finite() const {
    if (!value_) throw std::logic_error("Valuation: infinite value has no finite part");
    return *value_;
  }

  friend constexpr bool operator==(const Valuation&, const Valuation&) = default;
  friend constexpr std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
    if (a.is_infinite() || b.is_infinite())
      return static_cast<int>(a.is_infinite()) <=> static_cast<int>(b.is_infinite());
    return *a.value_ <=> *b.value_;
  }
  friend constexpr bool operator>=(const Valuation& a, std::int64_t e) {
    return a.is_infinite() || *a.value_ >= e;
  }

  [[nodiscard]] std::string str() const {
    return is_infinite() ? std::string("inf") : std::to_string(*value_);
  }
  friend std::ostream& operator<<(std::ostream& os, const Valuation& v) { return os << v.str(); }

private:
  std::optional<std::int64_t> value_;
};

namespace detail {
inline std::int64_t strip_prime(ExactInt& x, std::int64_t p) {
  std::int64_t e = 0;
  ExactInt q, r;
  const ExactInt pp = p;
  for (;;) {
    boost::multiprecision::divide_qr(x, pp, q, r);
    if (r != 0) return e;
    x = std::move(q);
    ++e;
  }
}
}  // namespace detail

inline Valuation ord_p(const ExactInt& x, std::int64_t p) {
  require_prime(p);
  if (x == 0) return Valuation::infinite();
  ExactInt y = abs(x);
  return Valuation(detail::strip_prime(y, p));
}

// ---------------------------------------------------------------------------
// rationals with p-adic valuation

/// Exact rational in lowest terms with positive denominator.
class PAdicRational {
public:
  PAdicRational() = default;
  PAdicRational(const ExactInt& n) : value_(n) {}  // NOLINT(google-explicit-constructor)
  PAdicRational(std::int64_t n) : value_(n) {}     // NOLINT(google-explicit-constructor)
  PAdicRational(const ExactInt& num, const ExactInt& den) {
    if (den == 0) throw std::domain_error("PAdicRational: zero denominator");
    value_ = den < 0 ? Rational(-num, -den) : Rational(num, den);
  }
  explicit PAdicRational(Rational r) : value_(std::move(r)) {}

  [[nodiscard]] ExactInt numerator() const { return boost::multiprecision::numerator(value_); }
  [[nodiscard]] ExactInt denominator() const {
    return boost::multiprecision::denominator(value_);
  }
  [[nodiscard]] const Rational& value() const { return value_; }
  [[nodiscard]] bool is_zero() const { return value_ == 0; }

  [[nodiscard]] Valuation valuation(std::int64_t p) const {
    require_prime(p);
    if (value_ == 0) return Valuation::infinite();
    ExactInt n = abs(numerator());
    ExactInt d = denominator();
    return Valuation(detail::strip_prime(n, p) - detail::strip_prime(d, p));
  }

  [[nodiscard]] bool is_p_integral(std::int64_t p) const { return valuation(p) >= 0; }

  /// Image in Z/pZ of a p-integral rational, as a value in [0, p).
  [[nodiscard]] std::int64_t residue_mod(std::int64_t p) const {
    if (!is_p_integral(p)) throw not_p_integral("residue_mod: value is not p-integral");
    const ExactInt pp = p;
    auto num = static_cast<std::int64_t>(fleck::residue(numerator(), pp));
    auto den = static_cast<std::int64_t>(fleck::residue(denominator(), pp));
    // den is a unit mod p; invert by Fermat.
    std::int64_t inv = 1, b = den, e = p - 2;
    while (e > 0) {
      if (e & 1) inv = inv * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return num * inv % p;
  }

  [[nodiscard]] std::string str() const {
    if (denominator() == 1) return numerator().str();
    return numerator().str() + "/" + denominator().str();
  }

  friend PAdicRational operator+(const PAdicRational& a, const PAdicRational& b) {
    return PAdicRational(Rational(a.value_ + b.value_));
  }
  friend PAdicRational operator-(const PAdicRational& a, const PAdicRational& b) {
    return PAdicRational(Rational(a.value_ - b.value_));
  }
  friend PAdicRational operator*(const PAdicRational& a, const PAdicRational& b) {
    return PAdicRational(Rational(a.value_ * b.value_));
  }
  friend PAdicRational operator/(const PAdicRational& a, const PAdicRational& b) {
    if (b.value_ == 0) throw std::domain_error("PAdicRational: division by zero");
    return PAdicRational(Rational(a.value_ / b.value_));
  }
  PAdicRational operator-() const { return PAdicRational(Rational(-value_)); }
  friend bool operator==(const PAdicRational& a, const PAdicRational& b) {
    return a.value_ == b.value_;
  }
  friend std::ostream& operator<<(std::ostream& os, const PAdicRational& x) {
    return os << x.str();
  }

private:
  Rational value_{0};
};

/// x == y (mod p^e) for p-integral rationals: ord_p(x - y) >= e.
/// Throws not_p_integral when either side has negative valuation.
inline bool congruent_mod_p_power(const PAdicRational& x, const PAdicRational& y, std::int64_t p,
                                  std::int64_t e) {
  require_prime(p);
  if (e < 1) throw std::invalid_argument("congruent_mod_p_power: exponent must be positive");
  if (!x.is_p_integral(p))
    throw not_p_integral("congruence argument " + x.str() + " is not " + std::to_string(p) +
                         "-integral");
  if (!y.is_p_integral(p))
    throw not_p_integral("congruence argument " + y.str() + " is not " + std::to_string(p) +
                         "-integral");
  return (x - y).valuation(p) >= e;
}

}  // namespace fleck
