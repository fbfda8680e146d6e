#ifndef DEGEN_INEQUALITIES_HPP
#define DEGEN_INEQUALITIES_HPP

#include "degen/degenerate_operator.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace degen {

struct HardyResult {
  double ratio = std::numeric_limits<double>::quiet_NaN();
  double lhs = 0.0;  // int w^2
  double rhs = 0.0;  // int x^2 (w')^2
  bool defined = false;
};

/// int_0^R w^2 / int_0^R x^2 (w')^2 on nodes 0 = x_0 < ... < x_J = R. The
/// numerator uses the trapezoid rule; the denominator uses cell differences
/// with the weight at cell midpoints.
inline HardyResult hardy_ratio(std::span<const double> x, std::span<const double> w)
{
  if (x.size() != w.size() || x.size() < 2) throw std::invalid_argument("hardy_ratio: need matching node and value arrays");
  double wmax = 0.0;
  for (double v : w) wmax = std::max(wmax, std::abs(v));
  if (std::abs(w.back()) > 1e-12 * wmax) throw std::invalid_argument("hardy_ratio: w(R) must vanish");
  HardyResult r;
  for (std::size_t j = 0; j + 1 < x.size(); ++j) {
    const double h = x[j + 1] - x[j];
    if (!(h > 0)) throw std::invalid_argument("hardy_ratio: nodes must increase");
    const double xf = 0.5 * (x[j] + x[j + 1]);
    const double d = (w[j + 1] - w[j]) / h;
    r.lhs += 0.5 * h * (w[j] * w[j] + w[j + 1] * w[j + 1]);
    r.rhs += h * xf * xf * d * d;
  }
  if (r.rhs > 0) {
    r.ratio = r.lhs / r.rhs;
    r.defined = true;
  }
  return r;
}

struct InterpolationResult {
  double ratio = std::numeric_limits<double>::quiet_NaN();
  double gradient = 0.0;   // int |grad v|^2
  double laplacian = 0.0;  // int (Lap v)^2
  double l2 = 0.0;         // int v^2
  bool defined = false;
  bool compact_support = true;
};

/// int |grad v|^2 / ((int (Lap v)^2)^(1/2) (int v^2)^(1/2)) with the module's
/// matched difference pair, so that int |grad v|^2 = -<Lap v, v> exactly for
/// compactly supported v.
inline InterpolationResult interpolation_check(const StripGrid& g, std::span<const double> v)
{
  if (v.size() != g.size()) throw std::invalid_argument("interpolation_check: field not on grid");
  InterpolationResult r;
  r.compact_support = detail::vanishes_near_boundary(g, v, 2);
  const std::vector<double> zero_slope(g.Mx(), 0.0);
  const auto lap = discrete_laplacian(g, v, zero_slope);
  r.laplacian = node_inner(g, lap, lap);
  r.l2 = node_inner(g, v, v);
  const auto Dv = face_difference(g, v);
  double tang = 0.0;
  for (int j = 1; j < g.J(); ++j) {
    double row = 0.0;
    for (int i = 0; i < g.Mx(); ++i) {
      const double d = (v[g.index((i + 1) % g.Mx(), j)] - v[g.index(i, j)]) / g.hx();
      row += d * d;
    }
    tang += g.normal_weights()[j] * row;
  }
  r.gradient = face_inner(g, Dv, Dv) + tang * g.hx();
  const double den = std::sqrt(r.laplacian) * std::sqrt(r.l2);
  if (den > 0) {
    r.ratio = r.gradient / den;
    r.defined = true;
  }
  return r;
}

} // namespace degen

#endif // DEGEN_INEQUALITIES_HPP
