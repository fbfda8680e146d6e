#include "degen/remark11.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace degen;

namespace {

TermSum mono(const SurdValue& a, const SurdValue& c = SurdValue(1), unsigned k = 0)
{
  return TermSum::monomial(a, c, k);
}

// Independent oracle: a (a-1) ((a-1)(a-2) - beta), from substituting x^a.
SurdValue residual_polynomial(const Rational& beta, const SurdValue& a)
{
  const SurdValue one(1), two(2);
  return a * (a - one) * ((a - one) * (a - two) - SurdValue(beta));
}

TermSum random_sum(std::mt19937& rng)
{
  std::uniform_int_distribution<int> num(-6, 6), den(1, 4), nterms(0, 4), logp(0, 2);
  std::vector<PowerLogTerm> ts;
  const int n = nterms(rng);
  for (int i = 0; i < n; ++i)
    ts.push_back({SurdValue(Rational(num(rng), den(rng))), SurdValue(Rational(num(rng), den(rng))),
                  static_cast<unsigned>(logp(rng))});
  return TermSum(ts);
}

bool same_set(std::vector<TermSum> a, std::vector<TermSum> b)
{
  auto key = [](const TermSum& t) { return t.str(); };
  auto less = [&](const TermSum& x, const TermSum& y) { return key(x) < key(y); };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  return a == b;
}

const std::vector<Rational> kBetas{Rational(0), Rational(1, 4), Rational(3, 4), Rational(1), Rational(2),
                                   Rational(7, 2), Rational(5, 3), Rational(12)};

} // namespace

TEST(Differentiate, Examples)
{
  EXPECT_EQ(differentiate(mono(1)), TermSum::constant(1));
  // x^2 ln x -> 2 x ln x + x
  EXPECT_EQ(differentiate(mono(2, 1, 1)), mono(1, 2, 1) + mono(1));
  EXPECT_TRUE(differentiate(TermSum{}).empty());
  EXPECT_TRUE(differentiate(TermSum::constant(5)).empty());
}

TEST(TermSum, CanonicalFormDropsZerosAndMergesKeys)
{
  const TermSum s({{SurdValue(1), SurdValue(2), 0}, {SurdValue(-1), SurdValue(2), 0}, {SurdValue(3), SurdValue(1), 0}});
  EXPECT_EQ(s, mono(1, 3));
  EXPECT_TRUE((mono(2) - mono(2)).empty());
  const TermSum t({{SurdValue(1), SurdValue(3), 0}, {SurdValue(1), SurdValue(1), 1}, {SurdValue(1), SurdValue(1), 0}});
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t.terms()[0].logpow, 0u);
  EXPECT_EQ(t.terms()[1].logpow, 1u);
  EXPECT_EQ(t.terms()[2].exponent, SurdValue(3));
}

TEST(ApplyLbeta, Examples)
{
  EXPECT_TRUE(apply_lbeta(Rational(5, 7), mono(1)).empty());
  EXPECT_EQ(apply_lbeta(0, mono(2, 1, 1)), TermSum::constant(2));
  const Rational b(3), beta(5, 2);
  EXPECT_EQ(apply_lbeta(beta, mono(2, SurdValue(Rational(-b / (2 * beta))))), TermSum::constant(b));
  EXPECT_EQ(apply_lbeta(2, mono(-2)), mono(-4, 60));
  EXPECT_THROW(apply_lbeta(-1, mono(1)), std::invalid_argument);
}

TEST(IndicialResidual, Examples)
{
  EXPECT_TRUE(indicial_residual(Rational(9), SurdValue(0)).is_zero());
  EXPECT_TRUE(indicial_residual(Rational(3, 4), SurdValue(Rational(5, 2))).is_zero());
  EXPECT_EQ(indicial_residual(2, SurdValue(-2)), SurdValue(60));
}

TEST(IndicialResidual, AgreesWithSubstitutionPolynomial)
{
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-30, 30), den(1, 6);
  for (const auto& beta : kBetas)
    for (int n = 0; n < 40; ++n) {
      const SurdValue a(Rational(num(rng), den(rng)));
      EXPECT_EQ(indicial_residual(beta, a), residual_polynomial(beta, a));
    }
  const SurdValue s = SurdValue::sqrt_of(Rational(5, 4));
  EXPECT_EQ(indicial_residual(1, SurdValue(Rational(1, 3)) + s), residual_polynomial(1, SurdValue(Rational(1, 3)) + s));
}

TEST(IndicialRoots, Examples)
{
  using V = std::vector<SurdValue>;
  EXPECT_EQ(indicial_roots(0), (V{0, 1, 1, 2}));
  EXPECT_EQ(indicial_roots(Rational(3, 4)), (V{0, SurdValue(Rational(1, 2)), 1, SurdValue(Rational(5, 2))}));
  EXPECT_EQ(indicial_roots(2), (V{0, 0, 1, 3}));
}

TEST(IndicialRoots, EveryRootHasZeroResidualAndOthersDoNot)
{
  for (const auto& beta : kBetas) {
    const auto roots = indicial_roots(beta);
    ASSERT_EQ(roots.size(), 4u);
    for (const auto& r : roots) EXPECT_TRUE(indicial_residual(beta, r).is_zero()) << beta.str() << " " << r.str();
    for (int p = -24; p <= 24; ++p) {
      const SurdValue a(Rational(p, 4));
      if (std::find(roots.begin(), roots.end(), a) != roots.end()) continue;
      EXPECT_FALSE(indicial_residual(beta, a).is_zero()) << beta.str() << " " << a.str();
    }
  }
}

TEST(KernelBasis, Examples)
{
  EXPECT_TRUE(same_set(kernel_basis(0), {TermSum::constant(1), mono(1), mono(2), mono(1, 1, 1)}));
  EXPECT_TRUE(same_set(kernel_basis(Rational(3, 4)),
                       {TermSum::constant(1), mono(1), mono(Rational(1, 2)), mono(Rational(5, 2))}));
  EXPECT_TRUE(same_set(kernel_basis(2), {TermSum::constant(1), mono(0, 1, 1), mono(1), mono(3)}));
  EXPECT_EQ(kernel_basis(Rational(3, 4))[3], mono(Rational(5, 2)));
}

TEST(KernelBasis, ExactlyAnnihilated)
{
  for (const auto& beta : kBetas) {
    const auto basis = kernel_basis(beta);
    ASSERT_EQ(basis.size(), 4u);
    for (const auto& k : basis) EXPECT_TRUE(apply_lbeta(beta, k).empty()) << beta.str() << ": " << k.str();
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = i + 1; j < basis.size(); ++j) EXPECT_NE(basis[i], basis[j]);
  }
}

TEST(ParticularSolution, Examples)
{
  EXPECT_EQ(particular_solution(1, 2), mono(2, -1));
  EXPECT_TRUE(particular_solution(0, 0).empty());
  EXPECT_EQ(particular_solution(0, 2), mono(2, 1, 1));
}

TEST(ParticularSolution, ResidualIsExactlyB)
{
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> num(-20, 20), den(1, 7), bnum(0, 20);
  for (int n = 0; n < 100; ++n) {
    const Rational beta(bnum(rng), den(rng));
    const Rational b(num(rng), den(rng));
    const auto v = particular_solution(beta, b);
    if (b == 0) EXPECT_TRUE(apply_lbeta(beta, v).empty());
    else EXPECT_EQ(apply_lbeta(beta, v), TermSum::constant(SurdValue(b)));
  }
}

TEST(ApplyLbeta, IsLinear)
{
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  for (int n = 0; n < 200; ++n) {
    const Rational beta(std::abs(num(rng)), den(rng));
    const TermSum u = random_sum(rng), v = random_sum(rng);
    const SurdValue al(Rational(num(rng), den(rng))), ga(Rational(num(rng), den(rng)));
    EXPECT_EQ(apply_lbeta(beta, u.scaled(al) + v.scaled(ga)),
              apply_lbeta(beta, u).scaled(al) + apply_lbeta(beta, v).scaled(ga));
  }
}

TEST(Admissible, Examples)
{
  EXPECT_FALSE(admissible(PowerLogTerm{1, 1, 1}));
  EXPECT_TRUE(admissible(PowerLogTerm{1, SurdValue(Rational(5, 2)), 0}));
  EXPECT_TRUE(admissible(PowerLogTerm{1, 2, 0}));
  EXPECT_FALSE(admissible(PowerLogTerm{1, SurdValue(Rational(1, 2)), 0}));
}

TEST(Admissible, PurePowersFollowAnalyticRule)
{
  for (int p = -16; p <= 24; ++p) {
    const Rational a(p, 4);
    const bool rule = a >= 2 || a == 0 || a == 1;
    EXPECT_EQ(admissible(PowerLogTerm{1, SurdValue(a), 0}), rule) << a.str();
  }
  const SurdValue big = SurdValue(Rational(3, 2)) + SurdValue::sqrt_of(Rational(5, 4));  // > 2
  const SurdValue small = SurdValue(Rational(3, 2)) - SurdValue::sqrt_of(Rational(5, 4)); // in (0,1)
  EXPECT_TRUE(admissible(PowerLogTerm{1, big, 0}));
  EXPECT_FALSE(admissible(PowerLogTerm{1, small, 0}));
}

TEST(Evaluate, Examples)
{
  EXPECT_EQ(evaluate(mono(2, 1, 1), 1.0), 0.0);
  EXPECT_DOUBLE_EQ(evaluate(mono(Rational(1, 2)), 4.0), 2.0);
  EXPECT_DOUBLE_EQ(evaluate(kernel_basis(Rational(3, 4))[3], 4.0), 32.0);
  EXPECT_THROW(evaluate(mono(1), 0.0), std::domain_error);
  EXPECT_THROW(evaluate(mono(1), -1.0), std::domain_error);
}

TEST(Evaluate, CentralDifferenceMatchesDerivative)
{
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> xs(0.5, 2.0);
  for (int n = 0; n < 200; ++n) {
    const TermSum v = random_sum(rng);
    const TermSum dv = differentiate(v);
    const double x = xs(rng), h = 1e-5;
    const double fd = (evaluate(v, x + h) - evaluate(v, x - h)) / (2 * h);
    const double ex = evaluate(dv, x);
    double scale = 0;
    for (const auto& t : dv.terms()) scale += std::abs(evaluate(TermSum({t}), x));
    EXPECT_LE(std::abs(fd - ex), 1e-6 * std::max(scale, 1e-3)) << v.str() << " at " << x;
  }
}

TEST(Remark11, BetaZeroReproduction)
{
  const auto rep = remark11_report(0, 1);
  EXPECT_TRUE(same_set(rep.kernel, {TermSum::constant(1), mono(1), mono(2), mono(1, 1, 1)}));
  int inadmissible = 0;
  for (std::size_t i = 0; i < rep.kernel.size(); ++i)
    if (!rep.kernel_admissible[i]) {
      ++inadmissible;
      EXPECT_EQ(rep.kernel[i], mono(1, 1, 1));
    }
  EXPECT_EQ(inadmissible, 1);
  EXPECT_EQ(rep.particular, mono(2, SurdValue(Rational(1, 2)), 1));
  EXPECT_TRUE(rep.particular_residual.empty());
  EXPECT_TRUE(rep.particular_admissible);
  // reference beta = 0 particular term maps to -b
  EXPECT_EQ(rep.reference_beta0_image, TermSum::constant(-1));
}

TEST(Remark11, BetaThreeQuarters)
{
  const auto rep = remark11_report(Rational(3, 4), 0);
  EXPECT_TRUE(same_set(rep.admissible_kernel, {TermSum::constant(1), mono(1), mono(Rational(5, 2))}));
  EXPECT_TRUE(rep.particular.empty());
}

TEST(Remark11, PublishedExponentAuditAtBetaTwo)
{
  const auto rep = remark11_report(2, 0);
  EXPECT_EQ(rep.indicial.paper_a1, SurdValue(-2));
  EXPECT_EQ(rep.indicial.paper_residual_a1, mono(-4, 60));
  EXPECT_FALSE(rep.notes.empty());
  const auto j = to_json(rep);
  EXPECT_EQ(j["derived_roots"].size(), 4u);
  EXPECT_EQ(j["paper_residuals"][0][0]["coeff"]["p"], "60");
}

TEST(Remark11, VietaAuditOfPublishedExponents)
{
  for (const auto& beta : kBetas) {
    const auto r = indicial_report(beta);
    EXPECT_EQ(r.paper_a1 + r.paper_a2, SurdValue(-1));
    EXPECT_EQ(r.paper_a1 * r.paper_a2, SurdValue(-beta));
  }
}
