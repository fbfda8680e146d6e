#include "degen/surd.hpp"

#include <gtest/gtest.h>

#include <random>

using degen::Rational;
using degen::SurdValue;

TEST(Rational, ParsesExactly)
{
  EXPECT_EQ(degen::parse_rational("3/4"), Rational(3, 4));
  EXPECT_EQ(degen::parse_rational("-6/8"), Rational(-3, 4));
  EXPECT_EQ(degen::parse_rational(" 7 "), Rational(7));
  EXPECT_THROW(degen::parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(degen::parse_rational("0.5"), std::invalid_argument);
  EXPECT_THROW(degen::parse_rational("1/-2"), std::invalid_argument);
  EXPECT_THROW(degen::parse_rational(""), std::invalid_argument);
}

TEST(SurdValue, PerfectSquaresFoldIntoRationalPart)
{
  // sqrt(1/4 + 2) = 3/2
  const SurdValue s = SurdValue::sqrt_of(Rational(9, 4));
  EXPECT_TRUE(s.is_rational());
  EXPECT_EQ(s, SurdValue(Rational(3, 2)));
  EXPECT_TRUE(SurdValue::sqrt_of(Rational(0)).is_zero());
}

TEST(SurdValue, RadicandIsSquarefreeInteger)
{
  // sqrt(5/4) = (1/2) sqrt(5);  sqrt(12) = 2 sqrt(3)
  const SurdValue a = SurdValue::sqrt_of(Rational(5, 4));
  EXPECT_EQ(a.r(), Rational(5));
  EXPECT_EQ(a.q(), Rational(1, 2));
  const SurdValue b = SurdValue::sqrt_of(Rational(12));
  EXPECT_EQ(b.r(), Rational(3));
  EXPECT_EQ(b.q(), Rational(2));
  EXPECT_EQ(SurdValue::sqrt_of(Rational(3, 4)), SurdValue(0, Rational(1, 2), 3));
}

TEST(SurdValue, FieldArithmetic)
{
  const SurdValue s = SurdValue::sqrt_of(Rational(5));
  EXPECT_EQ(s * s, SurdValue(5));
  const SurdValue x = SurdValue(1) + s;
  const SurdValue y = SurdValue(1) - s;
  EXPECT_EQ(x * y, SurdValue(-4));
  EXPECT_EQ((x / y) * y, x);
  EXPECT_THROW(s + SurdValue::sqrt_of(Rational(2)), std::domain_error);
  EXPECT_THROW(x / SurdValue(0), std::domain_error);
}

TEST(SurdValue, ExactSignMatchesFloatingValue)
{
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-20, 20), r(1, 30);
  for (int n = 0; n < 500; ++n) {
    const SurdValue v(Rational(d(rng), r(rng)), Rational(d(rng), r(rng)), Rational(r(rng)));
    const double f = v.to_double();
    if (std::abs(f) < 1e-12) continue;
    EXPECT_EQ(v.sign(), f > 0 ? 1 : -1) << v.str();
  }
  // 3/2 - sqrt(9/4) is exactly zero
  EXPECT_EQ((SurdValue(Rational(3, 2)) - SurdValue::sqrt_of(Rational(9, 4))).sign(), 0);
}

TEST(SurdValue, OrderingIsExactWithinAField)
{
  const SurdValue s = SurdValue::sqrt_of(Rational(2));
  EXPECT_LT(SurdValue(Rational(141, 100)), s);
  EXPECT_LT(s, SurdValue(Rational(142, 100)));
  EXPECT_LT(SurdValue(Rational(3, 2)) - s, SurdValue(Rational(3, 2)) + s);
}

TEST(ParseRational, LeadingZerosAreDecimal)
{
  EXPECT_EQ(degen::parse_rational("025"), Rational(25));
  EXPECT_EQ(degen::parse_rational("-010/008"), Rational(-10, 8));
  EXPECT_EQ(degen::parse_rational("0"), Rational(0));
  EXPECT_EQ(degen::parse_rational("-0"), Rational(0));
}
