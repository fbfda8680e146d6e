#ifndef DEGEN_POWER_LOG_HPP
#define DEGEN_POWER_LOG_HPP

#include "degen/surd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace degen {

/// coeff * x^exponent * (ln x)^logpow, x > 0.
struct PowerLogTerm {
  SurdValue coeff{1};
  SurdValue exponent{0};
  unsigned logpow = 0;

  friend bool operator==(const PowerLogTerm&, const PowerLogTerm&) = default;
};

/// Finite sum of power-log terms in canonical form: no two terms share
/// (exponent, logpow), sorted ascending by that key, no zero coefficients.
/// The empty sum is the unique representation of 0.
class TermSum {
public:
  TermSum() = default;
  TermSum(std::vector<PowerLogTerm> terms) : terms_(std::move(terms)) { canonicalize(); } // NOLINT

  static TermSum monomial(const SurdValue& exponent, const SurdValue& coeff = SurdValue(1),
                          unsigned logpow = 0)
  {
    return TermSum({PowerLogTerm{coeff, exponent, logpow}});
  }
  static TermSum constant(const SurdValue& c) { return monomial(SurdValue(0), c); }

  const std::vector<PowerLogTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  friend TermSum operator+(const TermSum& a, const TermSum& b)
  {
    std::vector<PowerLogTerm> all = a.terms_;
    all.insert(all.end(), b.terms_.begin(), b.terms_.end());
    return TermSum(std::move(all));
  }
  friend TermSum operator-(const TermSum& a, const TermSum& b) { return a + (-b); }
  TermSum operator-() const { return scaled(SurdValue(-1)); }

  TermSum scaled(const SurdValue& c) const
  {
    std::vector<PowerLogTerm> out = terms_;
    for (auto& t : out) t.coeff *= c;
    return TermSum(std::move(out));
  }

  /// Multiply by x^shift.
  TermSum times_power(const SurdValue& shift) const
  {
    std::vector<PowerLogTerm> out = terms_;
    for (auto& t : out) t.exponent += shift;
    return TermSum(std::move(out));
  }

  friend bool operator==(const TermSum&, const TermSum&) = default;

  std::string str() const
  {
    if (terms_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const auto& t = terms_[i];
      if (i) s += " + ";
      s += "(" + t.coeff.str() + ")";
      if (!t.exponent.is_zero()) s += "*x^(" + t.exponent.str() + ")";
      if (t.logpow == 1) s += "*ln(x)";
      else if (t.logpow > 1) s += "*ln(x)^" + std::to_string(t.logpow);
    }
    return s;
  }

private:
  void canonicalize()
  {
    auto key_less = [](const PowerLogTerm& a, const PowerLogTerm& b) {
      if (a.exponent != b.exponent) return a.exponent < b.exponent;
      return a.logpow < b.logpow;
    };
    std::sort(terms_.begin(), terms_.end(), key_less);
    std::vector<PowerLogTerm> merged;
    for (const auto& t : terms_) {
      if (!merged.empty() && merged.back().exponent == t.exponent && merged.back().logpow == t.logpow)
        merged.back().coeff += t.coeff;
      else
        merged.push_back(t);
    }
    std::erase_if(merged, [](const PowerLogTerm& t) { return t.coeff.is_zero(); });
    terms_ = std::move(merged);
  }

  std::vector<PowerLogTerm> terms_;
};

/// d/dx[c x^a (ln x)^k] = c a x^{a-1} (ln x)^k + c k x^{a-1} (ln x)^{k-1}
inline TermSum differentiate(const TermSum& v)
{
  std::vector<PowerLogTerm> out;
  out.reserve(2 * v.size());
  for (const auto& t : v.terms()) {
    const SurdValue e = t.exponent - SurdValue(1);
    if (!t.exponent.is_zero()) out.push_back({t.coeff * t.exponent, e, t.logpow});
    if (t.logpow > 0) out.push_back({t.coeff * SurdValue(static_cast<long long>(t.logpow)), e, t.logpow - 1});
  }
  return TermSum(std::move(out));
}

inline TermSum differentiate(const TermSum& v, int order)
{
  TermSum out = v;
  for (int i = 0; i < order; ++i) out = differentiate(out);
  return out;
}

/// l_beta v = d/dx (x^2 v''' - beta v').
inline TermSum apply_lbeta(const Rational& beta, const TermSum& v)
{
  if (beta < 0) throw std::invalid_argument("apply_lbeta: beta must be >= 0");
  const TermSum d1 = differentiate(v);
  const TermSum d3 = differentiate(differentiate(d1));
  return differentiate(d3.times_power(SurdValue(2)) - d1.scaled(SurdValue(beta)));
}

/// Coefficient of x^{a-2} in l_beta x^a, i.e. a(a-1)[(a-1)(a-2) - beta].
inline SurdValue indicial_residual(const Rational& beta, const SurdValue& a)
{
  const TermSum image = apply_lbeta(beta, TermSum::monomial(a));
  if (image.empty()) return SurdValue(0);
  // x^a maps to a single pure power term x^{a-2}
  return image.terms().front().coeff;
}

/// Four exponents spanning ker l_beta, with multiplicity, sorted ascending:
/// {0, 1, 3/2 - sqrt(1/4+beta), 3/2 + sqrt(1/4+beta)}.
inline std::vector<SurdValue> indicial_roots(const Rational& beta)
{
  if (beta < 0) throw std::invalid_argument("indicial_roots: beta must be >= 0");
  const SurdValue s = SurdValue::sqrt_of(Rational(1, 4) + beta);
  const SurdValue mid(Rational(3, 2));
  std::vector<SurdValue> roots{SurdValue(0), SurdValue(1), mid - s, mid + s};
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// Four linearly independent kernel elements of l_beta. A double root a
/// contributes x^a and x^a ln x. Sorted by (exponent, logpow).
inline std::vector<TermSum> kernel_basis(const Rational& beta)
{
  const auto roots = indicial_roots(beta);
  std::vector<TermSum> basis;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    unsigned logpow = 0;
    if (i > 0 && roots[i] == roots[i - 1]) logpow = basis.back().terms().front().logpow + 1;
    basis.push_back(TermSum::monomial(roots[i], SurdValue(1), logpow));
  }
  return basis;
}

/// v with l_beta v = b exactly: -b/(2 beta) x^2 for beta > 0, (b/2) x^2 ln x for beta = 0.
inline TermSum particular_solution(const Rational& beta, const Rational& b)
{
  if (beta < 0) throw std::invalid_argument("particular_solution: beta must be >= 0");
  if (b == 0) return {};
  if (beta > 0) return TermSum::monomial(SurdValue(2), SurdValue(Rational(-b / (2 * beta))));
  return TermSum::monomial(SurdValue(2), SurdValue(Rational(b / 2)), 1);
}

/// c x^e (ln x)^k bounded on (0,1]: e > 0, or e = 0 and k = 0.
inline bool bounded_near_zero(const PowerLogTerm& t)
{
  const int s = t.exponent.sign();
  return s > 0 || (s == 0 && t.logpow == 0);
}

inline bool bounded_near_zero(const TermSum& v)
{
  return std::all_of(v.terms().begin(), v.terms().end(),
                     [](const PowerLogTerm& t) { return bounded_near_zero(t); });
}

/// Weighted regularity near x = 0: x^2 D^4 v and x D^3 v bounded on (0,1].
inline bool admissible(const TermSum& v)
{
  const TermSum d3 = differentiate(v, 3);
  const TermSum d4 = differentiate(d3);
  return bounded_near_zero(d3.times_power(SurdValue(1))) && bounded_near_zero(d4.times_power(SurdValue(2)));
}

inline bool admissible(const PowerLogTerm& term)
{
  return admissible(TermSum({term}));
}

/// Floating evaluation; throws for x <= 0.
inline double evaluate(const TermSum& v, double x)
{
  if (!(x > 0)) throw std::domain_error("evaluate: x must be positive");
  const double lx = std::log(x);
  double sum = 0.0;
  for (const auto& t : v.terms()) {
    double term = t.coeff.to_double();
    if (!t.exponent.is_zero()) {
      const auto& e = t.exponent;
      if (e.is_rational() && boost::multiprecision::denominator(e.p()) == 1 &&
          abs(e.p()) < 64) {
        term *= std::pow(x, e.p().convert_to<int>());
      } else {
        term *= std::pow(x, e.to_double());
      }
    }
    for (unsigned k = 0; k < t.logpow; ++k) term *= lx;
    sum += term;
  }
  return sum;
}

/// Floating-point image of a TermSum for repeated evaluation.
class NumericTermSum {
public:
  NumericTermSum() = default;
  explicit NumericTermSum(const TermSum& v)
  {
    for (const auto& t : v.terms()) {
      Term n{t.coeff.to_double(), t.exponent.to_double(), 0, false, t.logpow};
      const auto& e = t.exponent;
      if (e.is_rational() && boost::multiprecision::denominator(e.p()) == 1 && abs(e.p()) < 64) {
        n.int_exponent = e.p().convert_to<int>();
        n.is_int = true;
      }
      terms_.push_back(n);
    }
  }

  double operator()(double x) const
  {
    if (!(x > 0)) throw std::domain_error("evaluate: x must be positive");
    const double lx = std::log(x);
    double sum = 0.0;
    for (const auto& t : terms_) {
      double term = t.coeff * (t.is_int ? std::pow(x, t.int_exponent) : std::pow(x, t.exponent));
      for (unsigned k = 0; k < t.logpow; ++k) term *= lx;
      sum += term;
    }
    return sum;
  }

private:
  struct Term {
    double coeff, exponent;
    int int_exponent;
    bool is_int;
    unsigned logpow;
  };
  std::vector<Term> terms_;
};

} // namespace degen

#endif // DEGEN_POWER_LOG_HPP
