#ifndef DEGEN_SURD_HPP
#define DEGEN_SURD_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace degen {

/// Exact rational number, always in lowest terms with positive denominator.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parse "p", "p/q" or "-p/q" exactly. Throws std::invalid_argument.
inline Rational parse_rational(const std::string& text)
{
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s.push_back(c);
  if (s.empty()) throw std::invalid_argument("malformed rational: empty");
  auto valid_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  const auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
    throw std::invalid_argument("malformed rational: '" + text + "'");
  // cpp_int reads a leading 0 as an octal prefix
  auto strip_zeros = [](std::string t) {
    const std::size_t sign = t[0] == '-' ? 1 : 0;
    while (t.size() > sign + 1 && t[sign] == '0') t.erase(sign, 1);
    return t;
  };
  BigInt n(strip_zeros(num)), d(strip_zeros(den));
  if (d == 0) throw std::invalid_argument("malformed rational: zero denominator in '" + text + "'");
  return Rational(n, d);
}

inline std::string to_string(const Rational& r)
{
  return r.str();
}

inline double to_double(const Rational& r)
{
  return r.convert_to<double>();
}

namespace detail {

inline BigInt isqrt(const BigInt& n)
{
  return boost::multiprecision::sqrt(n);
}

// n = s^2 * k with k squarefree (trial division; exact for the small
// radicands that occur here, and for any n whose cofactor after removing
// primes below 10^5 is 1, prime, or a perfect square).
inline void split_square(BigInt n, BigInt& s, BigInt& k)
{
  s = 1;
  k = 1;
  for (std::uint32_t p = 2; p < 100000; ++p) {
    const BigInt pp = BigInt(p) * p;
    if (pp > n) break;
    while (n % pp == 0) {
      n /= pp;
      s *= p;
    }
    if (n % p == 0) {
      n /= p;
      k *= p;
    }
  }
  const BigInt r = isqrt(n);
  if (r * r == n) {
    s *= r;
  } else {
    k *= n;
  }
}

} // namespace detail

/// Exact element p + q*sqrt(r) of a real quadratic field.
///
/// Canonical form: the radicand is a squarefree positive integer, or zero
/// (and then q == 0). Rational values always have q == 0 and r == 0, so
/// equality of canonical forms is equality of values.
class SurdValue {
public:
  SurdValue() = default;
  SurdValue(const Rational& p) : p_(p) {}   // NOLINT(implicit)
  SurdValue(long long p) : p_(p) {}         // NOLINT(implicit)
  SurdValue(const Rational& p, const Rational& q, const Rational& r) : p_(p), q_(q), r_(r)
  {
    if (r < 0) throw std::invalid_argument("SurdValue: negative radicand");
    canonicalize();
  }

  /// sqrt(r) for rational r >= 0.
  static SurdValue sqrt_of(const Rational& r) { return SurdValue(0, 1, r); }

  const Rational& p() const { return p_; }
  const Rational& q() const { return q_; }
  const Rational& r() const { return r_; }

  bool is_rational() const { return q_ == 0; }
  bool is_zero() const { return p_ == 0 && q_ == 0; }

  double to_double() const
  {
    if (q_ == 0) return degen::to_double(p_);
    return degen::to_double(p_) + degen::to_double(q_) * std::sqrt(degen::to_double(r_));
  }

  /// Exact sign (-1, 0, +1).
  int sign() const
  {
    const int sp = p_.sign();
    const int sq = q_.sign();
    if (sq == 0) return sp;
    if (sp == 0) return sq;
    if (sp == sq) return sp;
    // opposite signs: compare p^2 against q^2 r
    const Rational lhs = p_ * p_;
    const Rational rhs = q_ * q_ * r_;
    if (lhs == rhs) return 0;
    return lhs > rhs ? sp : sq;
  }

  SurdValue operator-() const
  {
    SurdValue out = *this;
    out.p_ = -out.p_;
    out.q_ = -out.q_;
    return out;
  }

  friend SurdValue operator+(const SurdValue& a, const SurdValue& b)
  {
    const Rational r = common_radicand(a, b);
    SurdValue out;
    out.p_ = a.p_ + b.p_;
    out.q_ = a.q_ + b.q_;
    out.r_ = out.q_ == 0 ? Rational(0) : r;
    return out;
  }
  friend SurdValue operator-(const SurdValue& a, const SurdValue& b) { return a + (-b); }

  friend SurdValue operator*(const SurdValue& a, const SurdValue& b)
  {
    const Rational r = common_radicand(a, b);
    SurdValue out;
    out.p_ = a.p_ * b.p_ + a.q_ * b.q_ * r;
    out.q_ = a.p_ * b.q_ + a.q_ * b.p_;
    out.r_ = out.q_ == 0 ? Rational(0) : r;
    return out;
  }

  friend SurdValue operator/(const SurdValue& a, const SurdValue& b)
  {
    if (b.is_zero()) throw std::domain_error("SurdValue: division by zero");
    if (b.is_rational()) {
      SurdValue out = a;
      out.p_ /= b.p_;
      out.q_ /= b.p_;
      return out;
    }
    const Rational norm = b.p_ * b.p_ - b.q_ * b.q_ * b.r_;
    SurdValue conj = b;
    conj.q_ = -conj.q_;
    SurdValue out = a * conj;
    out.p_ /= norm;
    out.q_ /= norm;
    return out;
  }

  SurdValue& operator+=(const SurdValue& o) { return *this = *this + o; }
  SurdValue& operator-=(const SurdValue& o) { return *this = *this - o; }
  SurdValue& operator*=(const SurdValue& o) { return *this = *this * o; }

  friend bool operator==(const SurdValue& a, const SurdValue& b)
  {
    return a.p_ == b.p_ && a.q_ == b.q_ && a.r_ == b.r_;
  }

  /// Exact ordering within one quadratic field; falls back to floating
  /// comparison (with a structural tie-break) across different radicands.
  friend std::strong_ordering operator<=>(const SurdValue& a, const SurdValue& b)
  {
    if (a == b) return std::strong_ordering::equal;
    if (a.is_rational() || b.is_rational() || a.r_ == b.r_) {
      const int s = (a - b).sign();
      return s < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    const double da = a.to_double(), db = b.to_double();
    if (da != db) return da < db ? std::strong_ordering::less : std::strong_ordering::greater;
    if (a.r_ != b.r_) return a.r_ < b.r_ ? std::strong_ordering::less : std::strong_ordering::greater;
    if (a.q_ != b.q_) return a.q_ < b.q_ ? std::strong_ordering::less : std::strong_ordering::greater;
    return a.p_ < b.p_ ? std::strong_ordering::less : std::strong_ordering::greater;
  }

  std::string str() const
  {
    if (q_ == 0) return p_.str();
    std::string s = p_ == 0 ? std::string() : p_.str() + (q_ > 0 ? " + " : " - ");
    const Rational aq = (p_ == 0) ? q_ : abs(q_);
    if (aq == 1) s += "sqrt(" + r_.str() + ")";
    else if (aq == -1) s += "-sqrt(" + r_.str() + ")";
    else s += aq.str() + "*sqrt(" + r_.str() + ")";
    return s;
  }

private:
  static Rational common_radicand(const SurdValue& a, const SurdValue& b)
  {
    if (a.q_ == 0) return b.r_;
    if (b.q_ == 0) return a.r_;
    if (a.r_ != b.r_)
      throw std::domain_error("SurdValue: operands live in different quadratic fields (sqrt(" +
                              a.r_.str() + ") vs sqrt(" + b.r_.str() + "))");
    return a.r_;
  }

  // sqrt(n/d) = sqrt(n*d)/d = s*sqrt(k)/d
  void canonicalize()
  {
    if (q_ == 0 || r_ == 0) {
      q_ = 0;
      r_ = 0;
      return;
    }
    const BigInt n = boost::multiprecision::numerator(r_);
    const BigInt d = boost::multiprecision::denominator(r_);
    BigInt s, k;
    detail::split_square(n * d, s, k);
    const Rational factor(s, d);
    if (k == 1) {
      p_ += q_ * factor;
      q_ = 0;
      r_ = 0;
    } else {
      q_ *= factor;
      r_ = Rational(k);
    }
  }

  Rational p_{0};
  Rational q_{0};
  Rational r_{0};
};

} // namespace degen

#endif // DEGEN_SURD_HPP
