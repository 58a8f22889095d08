#include <gtest/gtest.h>

#include <fleck/coefficients.hpp>

#include "oracle.hpp"

using fleck::CoeffQuery;
using fleck::ExactInt;
using fleck::PAdicRational;

TEST(FleckSum, FrozenExamples) {
  // -9 = C(5,0) - C(5,3); 2988 = -C(15,1) + C(15,10).
  EXPECT_EQ(fleck::fleck_sum({3, 1, 5, 0, 0}), -9);
  EXPECT_EQ(fleck::fleck_sum({3, 2, 15, 1, 0}), 2988);
  for (std::int64_t p : {2, 3, 5})
    for (std::int64_t a : {1, 2, 3}) {
      EXPECT_EQ(fleck::fleck_sum({p, a, 0, 0, 0}), 1);
      for (std::int64_t l : {1, 2, 5}) EXPECT_EQ(fleck::fleck_sum({p, a, 0, 0, l}), 0);
    }
}

TEST(FleckSum, AgreesWithWindowedOracle) {
  for (std::int64_t p : {2, 3, 5})
    for (std::int64_t a : {1, 2})
      for (std::int64_t n = 0; n <= 40; ++n)
        for (std::int64_t r = -7; r <= 12; ++r)
          for (std::int64_t l = 0; l <= 3; ++l) {
            auto m = oracle::ipow(p, a);
            ASSERT_EQ(fleck::fleck_sum({p, a, n, r, l}).str(),
                      oracle::str(oracle::direct_sum(n, r, m, l)))
                << p << " " << a << " " << n << " " << r << " " << l;
          }
}

TEST(FleckSum, RejectsInvalidQuery) {
  EXPECT_THROW(fleck::fleck_sum({4, 1, 3, 0, 0}), std::invalid_argument);
  EXPECT_THROW(fleck::fleck_sum({3, 0, 3, 0, 0}), std::invalid_argument);
  EXPECT_THROW(fleck::fleck_sum({3, 1, -1, 0, 0}), std::invalid_argument);
}

TEST(NormalizedCoeff, FrozenExamples) {
  auto c = fleck::normalized_coeff({3, 1, 5, 0, 0});
  EXPECT_EQ(c.raw_sum, -9);
  EXPECT_EQ(c.exponent, 2);
  EXPECT_EQ(c.normalized, -1);

  c = fleck::normalized_coeff({3, 2, 15, 1, 0});
  EXPECT_EQ(c.raw_sum, 2988);
  EXPECT_EQ(c.exponent, 2);
  EXPECT_EQ(c.normalized, 332);

  c = fleck::normalized_coeff({2, 1, 4, 0, 0});
  EXPECT_EQ(c.raw_sum, 8);
  EXPECT_EQ(c.exponent, 3);
  EXPECT_EQ(c.normalized, 1);
}

TEST(NormalizedCoeff, NegativeExponentScalesUp) {
  // n = 0: exponent floor((0 - 1) / 2) = -1 at p = 3, so the value is 3 * 1.
  auto c = fleck::normalized_coeff({3, 1, 0, 0, 0});
  EXPECT_EQ(c.exponent, -1);
  EXPECT_EQ(c.normalized, 3);
}

TEST(NormalizedCoeff, AgreesWithOracleAndSatisfiesScaling) {
  for (std::int64_t p : {2, 3, 5, 7})
    for (std::int64_t a : {1, 2})
      for (std::int64_t n = 0; n <= 45; ++n)
        for (std::int64_t r : {-3, -1, 0, 1, 4, 9})
          for (std::int64_t l = 0; l <= 2; ++l) {
            auto c = fleck::normalized_coeff({p, a, n, r, l});
            ASSERT_EQ(c.normalized.str(), oracle::str(oracle::normalized(p, a, n, r, l)));
            if (c.exponent >= 0)
              ASSERT_EQ(c.raw_sum, fleck::pow(ExactInt(p), c.exponent) * c.normalized);
            else
              ASSERT_EQ(c.normalized, c.raw_sum * fleck::pow(ExactInt(p), -c.exponent));
          }
}

TEST(TCoeff, FrozenExamples) {
  EXPECT_EQ(fleck::t_coeff({2, 1, 2, 0, 0}), PAdicRational(1));
  EXPECT_EQ(fleck::t_coeff({2, 2, 2, 0, 0}), PAdicRational(1));
  for (std::int64_t p : {2, 3, 5, 7}) EXPECT_EQ(fleck::t_coeff({p, 1, 0, 0, 0}), PAdicRational(1));
}

TEST(TCoeff, PIntegralOnGrid) {
  for (std::int64_t p : {2, 3, 5})
    for (std::int64_t a : {1, 2})
      for (std::int64_t n = 0; n <= 40; ++n)
        for (std::int64_t r = -2; r < p * p; ++r)
          for (std::int64_t l = 0; l <= 3; ++l)
            ASSERT_TRUE(fleck::t_coeff({p, a, n, r, l}).is_p_integral(p))
                << p << " " << a << " " << n << " " << r << " " << l;
}

TEST(RecurrenceModP, FrozenExamplesMatchNormalized) {
  for (CoeffQuery q : {CoeffQuery{3, 1, 5, 0, 1}, CoeffQuery{2, 1, 3, 0, 1}, CoeffQuery{2, 2, 4, 1, 1}}) {
    ExactInt direct = fleck::residue(fleck::normalized_coeff(q).normalized, ExactInt(q.p));
    EXPECT_EQ(fleck::recurrence_mod_p(q), direct) << q.p << " " << q.a << " " << q.n;
  }
}

TEST(RecurrenceModP, RejectsZeroOrderOrRow) {
  EXPECT_THROW(fleck::recurrence_mod_p({3, 1, 5, 0, 0}), std::invalid_argument);
  EXPECT_THROW(fleck::recurrence_mod_p({3, 1, 0, 0, 1}), std::invalid_argument);
}

TEST(OrderRecurrence, FrozenExamples) {
  for (auto [n, r, l, m] : std::vector<std::array<std::int64_t, 4>>{
           {4, 0, 1, 3}, {1, 0, 1, 2}, {5, -2, 2, 4}}) {
    auto sides = fleck::order_recurrence_sides(n, r, l, m);
    EXPECT_TRUE(sides.holds()) << sides.lhs << " vs " << sides.rhs;
  }
  // Values from an independent summation: (4,0,1,3) has both sides -1.
  EXPECT_EQ(fleck::order_recurrence_sides(4, 0, 1, 3).lhs, -1);
}

TEST(OrderRecurrence, HoldsOnCompositeModuli) {
  for (std::int64_t m : {4, 6, 8})
    for (std::int64_t n = 1; n <= 18; ++n)
      for (std::int64_t r = -5; r <= 5; ++r)
        for (std::int64_t l = 1; l <= 3; ++l)
          ASSERT_TRUE(fleck::order_recurrence_sides(n, r, l, m).holds()) << n << r << l << m;
}

TEST(Convolution, FrozenExamples) {
  EXPECT_TRUE(fleck::convolution_identity(2, 2, 5, 0, 1, 0).holds());
  EXPECT_TRUE(fleck::convolution_identity(3, 9, 10, 0, 2, 1).holds());
  auto trivial = fleck::convolution_identity(2, 3, 0, 0, 0, 0);
  EXPECT_EQ(trivial.lhs, 1);
  EXPECT_EQ(trivial.rhs, 1);
  // Right side against the oracle: k = 2 (mod 27) for n = 10 gives C(10,2)*binom(0,1) = 0.
  EXPECT_EQ(fleck::convolution_identity(3, 9, 10, 0, 2, 1).rhs.str(),
            oracle::str(oracle::direct_sum(10, 2, 27, 1)));
}

TEST(Convolution, NegativeShiftAndResidue) {
  for (std::int64_t t = -3; t < 3; ++t)
    for (std::int64_t r = -4; r <= 4; ++r)
      EXPECT_TRUE(fleck::convolution_identity(3, 4, 17, r, t, 2).holds()) << t << " " << r;
}

TEST(Convolution, RejectsShiftAtLeastModulus) {
  EXPECT_THROW(fleck::convolution_identity(3, 2, 5, 0, 3, 0), std::invalid_argument);
}
