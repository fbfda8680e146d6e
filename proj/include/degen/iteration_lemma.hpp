#ifndef DEGEN_ITERATION_LEMMA_HPP
#define DEGEN_ITERATION_LEMMA_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace degen {

/// Samples of f >= 0 on [r0, r1] and the constants of the hypothesis
///   f(t) <= theta f(s) + A (s - t)^(-a) + B,  r0 <= t < s <= r1.
struct IterationLemmaInput {
  std::vector<double> r;  // strictly increasing sample points
  std::vector<double> f;
  double theta = 0.5;
  double A = 0.0, B = 0.0, a = 0.0;

  void validate() const
  {
    if (r.size() != f.size() || r.size() < 2) throw std::invalid_argument("iteration lemma: need at least two samples");
    for (std::size_t k = 1; k < r.size(); ++k)
      if (!(r[k] > r[k - 1])) throw std::invalid_argument("iteration lemma: sample points must increase");
    for (double v : f)
      if (!(v >= 0) || !std::isfinite(v)) throw std::invalid_argument("iteration lemma: f must be finite and >= 0");
    if (!(theta >= 0 && theta < 1)) throw std::invalid_argument("iteration lemma: theta must lie in [0, 1)");
    if (A < 0 || B < 0 || a < 0) throw std::invalid_argument("iteration lemma: A, B, a must be >= 0");
  }
};

struct IterationLemmaResult {
  bool hypothesis_ok = true;
  bool vacuous = false;  // A = B = 0 with f > 0 somewhere: no finite constant exists
  double worst_excess = 0.0;  // max over pairs of f(t) - theta f(s) - A(s-t)^-a - B
  double min_constant = 0.0;  // max over pairs of f(t) / (A (s-t)^-a + B)
  std::size_t pairs = 0;
};

/// Checks the hypothesis on every sampled pair t < s and measures the smallest
/// constant C with f(t) <= C [A (s-t)^-a + B] on those pairs.
inline IterationLemmaResult iteration_lemma_check(const IterationLemmaInput& in)
{
  in.validate();
  IterationLemmaResult res;
  double fmax = 0.0;
  for (double v : in.f) fmax = std::max(fmax, v);
  if (in.A == 0 && in.B == 0 && fmax > 0) {
    res.vacuous = true;
    res.min_constant = std::numeric_limits<double>::infinity();
  }
  const double tol = 1e-12 * std::max(1.0, fmax);
  const std::size_t n = in.r.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k < n; ++k) {
      ++res.pairs;
      const double gap = std::pow(in.r[k] - in.r[i], -in.a);
      const double rhs = in.A * gap + in.B;
      const double excess = in.f[i] - in.theta * in.f[k] - rhs;
      if (res.pairs == 1 || excess > res.worst_excess) res.worst_excess = excess;
      if (excess > tol) res.hypothesis_ok = false;
      if (!res.vacuous && rhs > 0) res.min_constant = std::max(res.min_constant, in.f[i] / rhs);
    }
  return res;
}

} // namespace degen

#endif // DEGEN_ITERATION_LEMMA_HPP
