/**
 * @file psi_series.hpp
 * @brief Frobenius phi: T -> (1+T)^p - 1 and its left inverse psi on exact
 * integer polynomials in T, plus the twisted-monomial evaluation
 * psi^a(T^n (1+T)^(-r)) as a truncated series.
 *
 * psi is realized by a decomposition in the basis S^i (S^p - 1)^j with
 * S = 1 + T. Writing x = sum_m c_m S^m, the component of x in
 * phi(A) is sum_j c_{pj} S^{pj}, and its phi-preimage is
 * sum_j c_{pj} (1+T)^j. Every step is integer-linear, so no division by p
 * ever occurs.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "exactmath.hpp"

namespace fleck {

/// Integer polynomial in T with an explicit degree bound D. Coefficients
/// are stored for degrees 0..D; trailing zeros are allowed.
class TruncPoly {
public:
  TruncPoly() : coeffs_(1) {}
  explicit TruncPoly(std::vector<ExactInt> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.resize(1);
  }
  TruncPoly(std::vector<ExactInt> coeffs, std::size_t degree_bound) : coeffs_(std::move(coeffs)) {
    coeffs_.resize(degree_bound + 1);
  }

  static TruncPoly constant(const ExactInt& c) { return TruncPoly({c}); }
  static TruncPoly monomial(std::size_t n, const ExactInt& c = 1) {
    std::vector<ExactInt> v(n + 1);
    v[n] = c;
    return TruncPoly(std::move(v));
  }
  /// (1+T)^e for e >= 0.
  static TruncPoly one_plus_t_pow(std::int64_t e) {
    if (e < 0) throw std::invalid_argument("one_plus_t_pow: negative exponent is not a polynomial");
    std::vector<ExactInt> v(static_cast<std::size_t>(e) + 1);
    for (std::int64_t k = 0; k <= e; ++k) v[static_cast<std::size_t>(k)] = binom(e, k);
    return TruncPoly(std::move(v));
  }

  [[nodiscard]] std::size_t degree_bound() const { return coeffs_.size() - 1; }
  [[nodiscard]] const std::vector<ExactInt>& coeffs() const { return coeffs_; }
  [[nodiscard]] const ExactInt& operator[](std::size_t i) const { return coeffs_[i]; }
  [[nodiscard]] ExactInt coeff(std::size_t i) const {
    return i < coeffs_.size() ? coeffs_[i] : ExactInt(0);
  }

  /// Highest index with a nonzero coefficient, or -1 for the zero polynomial.
  [[nodiscard]] std::int64_t degree() const {
    for (std::size_t i = coeffs_.size(); i-- > 0;)
      if (coeffs_[i] != 0) return static_cast<std::int64_t>(i);
    return -1;
  }

  [[nodiscard]] TruncPoly truncated(std::size_t bound) const {
    std::vector<ExactInt> v(coeffs_.begin(),
                            coeffs_.begin() + static_cast<std::ptrdiff_t>(
                                                  std::min(bound + 1, coeffs_.size())));
    return TruncPoly(std::move(v), bound);
  }

  friend TruncPoly operator+(const TruncPoly& x, const TruncPoly& y) {
    std::vector<ExactInt> v(std::max(x.coeffs_.size(), y.coeffs_.size()));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = x.coeff(i) + y.coeff(i);
    return TruncPoly(std::move(v));
  }
  friend TruncPoly operator-(const TruncPoly& x, const TruncPoly& y) {
    std::vector<ExactInt> v(std::max(x.coeffs_.size(), y.coeffs_.size()));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = x.coeff(i) - y.coeff(i);
    return TruncPoly(std::move(v));
  }
  friend TruncPoly operator*(const TruncPoly& x, const TruncPoly& y) {
    std::vector<ExactInt> v(x.coeffs_.size() + y.coeffs_.size() - 1);
    for (std::size_t i = 0; i < x.coeffs_.size(); ++i) {
      if (x.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < y.coeffs_.size(); ++j)
        if (y.coeffs_[j] != 0) v[i + j] += x.coeffs_[i] * y.coeffs_[j];
    }
    return TruncPoly(std::move(v));
  }

  friend std::ostream& operator<<(std::ostream& os, const TruncPoly& x) {
    os << '[';
    for (std::size_t i = 0; i < x.coeffs_.size(); ++i) os << (i ? ", " : "") << x.coeffs_[i];
    return os << ']';
  }

private:
  std::vector<ExactInt> coeffs_;
};

/// Outcome of comparing two truncated values on their shared range.
struct TruncComparison {
  bool equal = true;
  std::size_t compared_through = 0;  ///< degrees 0..compared_through were compared
  std::size_t first_mismatch = 0;    ///< meaningful only when !equal
};

inline TruncComparison compare_truncated(const TruncPoly& x, const TruncPoly& y) {
  TruncComparison out;
  out.compared_through = std::min(x.degree_bound(), y.degree_bound());
  for (std::size_t i = 0; i <= out.compared_through; ++i) {
    if (x[i] != y[i]) {
      out.equal = false;
      out.first_mismatch = i;
      break;
    }
  }
  return out;
}

/// Exact polynomial equality; trailing zeros and degree bounds are ignored.
inline bool same_polynomial(const TruncPoly& x, const TruncPoly& y) {
  const std::size_t n = std::max(x.coeffs().size(), y.coeffs().size());
  for (std::size_t i = 0; i < n; ++i)
    if (x.coeff(i) != y.coeff(i)) return false;
  return true;
}

/// Series coefficient result of psi^a on a twisted monomial.
struct PsiResult {
  TruncPoly series;
  std::size_t valid_degree = 0;
};

/// x((1+T)^p - 1), degree bound p * D.
inline TruncPoly phi_apply(const TruncPoly& x, std::int64_t p) {
  require_prime(p);
  TruncPoly frob = TruncPoly::one_plus_t_pow(p) - TruncPoly::constant(1);
  // Horner from the top coefficient down.
  TruncPoly acc = TruncPoly::constant(x[x.degree_bound()]);
  for (std::size_t i = x.degree_bound(); i-- > 0;) acc = acc * frob + TruncPoly::constant(x[i]);
  return acc.truncated(static_cast<std::size_t>(p) * x.degree_bound());
}

/// x_0 in the decomposition x = sum_{i<p} (1+T)^i phi(x_i). Degree bound
/// floor(D / p).
inline TruncPoly psi_apply(const TruncPoly& x, std::int64_t p) {
  require_prime(p);
  const auto d = static_cast<std::int64_t>(x.degree_bound());

  // T-basis -> S-basis, S = 1 + T: c_m = sum_{n>=m} (-1)^(n-m) binom(n,m) a_n.
  // Only the indices m = p j are needed.
  const std::int64_t out_bound = d / p;
  std::vector<ExactInt> frob_part(static_cast<std::size_t>(out_bound) + 1);
  for (std::int64_t j = 0; j <= out_bound; ++j) {
    const std::int64_t m = p * j;
    ExactInt c = 0;
    for (std::int64_t n = m; n <= d; ++n) {
      const ExactInt& a = x[static_cast<std::size_t>(n)];
      if (a == 0) continue;
      ExactInt term = binom(n, m) * a;
      if ((n - m) % 2 == 0)
        c += term;
      else
        c -= term;
    }
    frob_part[static_cast<std::size_t>(j)] = std::move(c);
  }

  // sum_j c_{pj} (1+T)^j back into the T-basis.
  std::vector<ExactInt> out(static_cast<std::size_t>(out_bound) + 1);
  for (std::int64_t j = 0; j <= out_bound; ++j) {
    const ExactInt& c = frob_part[static_cast<std::size_t>(j)];
    if (c == 0) continue;
    for (std::int64_t k = 0; k <= j; ++k) out[static_cast<std::size_t>(k)] += c * binom(j, k);
  }
  return TruncPoly(std::move(out));
}

inline TruncPoly psi_power(TruncPoly x, std::int64_t p, std::int64_t a) {
  if (a < 1) throw std::invalid_argument("psi_power: a must be at least 1");
  for (std::int64_t i = 0; i < a; ++i) x = psi_apply(x, p);
  return x;
}

/// psi^a(T^n (1+T)^(-r)) through degree l_max.
///
/// With r' = ceil(r / p^a) and e = p^a r' - r >= 0,
///   T^n (1+T)^(-r) = T^n (1+T)^e * phi^a((1+T)^(-r')),
/// so psi^a of it is (1+T)^(-r') psi^a(T^n (1+T)^e). The inner argument is a
/// polynomial and the unit factor is expanded coefficientwise.
inline PsiResult monomial_twisted(std::int64_t n, std::int64_t r, std::int64_t p, std::int64_t a,
                                  std::size_t l_max) {
  require_prime(p);
  if (n < 0) throw std::invalid_argument("monomial_twisted: n must be nonnegative");
  if (a < 1) throw std::invalid_argument("monomial_twisted: a must be at least 1");
  const std::int64_t q = ipow(p, a);
  const std::int64_t r_twist = ceil_div(r, q);
  const std::int64_t e = q * r_twist - r;

  TruncPoly inner = TruncPoly::monomial(static_cast<std::size_t>(n)) * TruncPoly::one_plus_t_pow(e);
  TruncPoly reduced = psi_power(inner, p, a);

  std::vector<ExactInt> unit(l_max + 1);
  for (std::size_t k = 0; k <= l_max; ++k) unit[k] = binom(-r_twist, static_cast<std::int64_t>(k));

  std::vector<ExactInt> out(l_max + 1);
  for (std::size_t i = 0; i <= std::min(l_max, reduced.degree_bound()); ++i) {
    if (reduced[i] == 0) continue;
    for (std::size_t k = 0; i + k <= l_max; ++k) out[i + k] += reduced[i] * unit[k];
  }
  return {TruncPoly(std::move(out), l_max), l_max};
}

/// psi(x phi(y)) == psi(x) y. Both sides are exact polynomials, so beyond
/// the common degree range the longer side must vanish as well.
inline bool projection_rule_check(const TruncPoly& x, const TruncPoly& y, std::int64_t p) {
  TruncPoly lhs = psi_apply(x * phi_apply(y, p), p);
  TruncPoly rhs = psi_apply(x, p) * y;
  return compare_truncated(lhs, rhs).equal && same_polynomial(lhs, rhs);
}

}  // namespace fleck
