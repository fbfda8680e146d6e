#ifndef DEGEN_WEIGHTED_CLASS_HPP
#define DEGEN_WEIGHTED_CLASS_HPP

#include "degen/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace degen {

/// Finite-difference weights for derivatives 0..m at z on arbitrary nodes
/// (Fornberg's recursion). Result c[k][j] multiplies the value at nodes[j] in
/// the k-th derivative.
inline std::vector<std::vector<double>> fornberg_weights(double z, std::span<const double> nodes, int m)
{
  const int n = static_cast<int>(nodes.size()) - 1;
  if (n < m) throw std::invalid_argument("fornberg_weights: need more nodes than the derivative order");
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n + 1, 0.0));
  double c1 = 1.0, c4 = nodes[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

struct WeightedClassReport {
  int J = 0;
  double x_first = 0.0;
  double sup_x2_d4 = 0.0;  // sup x^2 |D^4 u| over the first 8 interior nodes
  double sup_x_d3 = 0.0;   // sup x |D^3 u| over the same nodes
  std::vector<double> x2_d4;  // per node j = 1..8, max over x1 and snapshots
  std::vector<double> x_d3;
};

/// Normal derivatives of orders 3 and 4 by 7-point Fornberg stencils on the
/// first 8 interior nodes (stencil nodes max(0, j-3) .. +6).
inline WeightedClassReport weighted_class_report(const FieldSeries& series)
{
  const StripGrid& g = series.grid;
  constexpr int nodes = 8;
  if (g.J() - 1 < nodes + 6) throw std::invalid_argument("weighted_class_report: fewer than 8 interior nodes");
  WeightedClassReport rep;
  rep.J = g.J();
  rep.x_first = g.xn()[1];
  rep.x2_d4.assign(nodes, 0.0);
  rep.x_d3.assign(nodes, 0.0);
  for (int j = 1; j <= nodes; ++j) {
    const int first = std::max(0, j - 3);
    const std::span<const double> stencil(g.xn().data() + first, 7);
    const auto c = fornberg_weights(g.xn()[j], stencil, 4);
    const double x = g.xn()[j];
    for (const auto& u : series.snapshots)
      for (int i = 0; i < g.Mx(); ++i) {
        double d3 = 0.0, d4 = 0.0;
        for (int k = 0; k < 7; ++k) {
          const double v = u[g.index(i, first + k)];
          d3 += c[3][k] * v;
          d4 += c[4][k] * v;
        }
        rep.x2_d4[j - 1] = std::max(rep.x2_d4[j - 1], x * x * std::abs(d4));
        rep.x_d3[j - 1] = std::max(rep.x_d3[j - 1], x * std::abs(d3));
      }
  }
  rep.sup_x2_d4 = *std::max_element(rep.x2_d4.begin(), rep.x2_d4.end());
  rep.sup_x_d3 = *std::max_element(rep.x_d3.begin(), rep.x_d3.end());
  return rep;
}

struct WeightedClassTrend {
  std::vector<double> growth_d4;  // successive ratios of sup x^2 |D^4 u|
  std::vector<double> growth_d3;
  bool bounded = true;            // every ratio <= limit
};

/// Successive refinement ratios of the weighted sups; a bounded (admissible)
/// profile keeps them <= limit, while x ln x grows like 1/x_1.
inline WeightedClassTrend weighted_class_trend(std::span<const WeightedClassReport> reps, double limit = 1.5)
{
  WeightedClassTrend t;
  auto ratio = [](double a, double b) { return b > 0 ? a / b : (a > 0 ? INFINITY : 1.0); };
  for (std::size_t k = 1; k < reps.size(); ++k) {
    t.growth_d4.push_back(ratio(reps[k].sup_x2_d4, reps[k - 1].sup_x2_d4));
    t.growth_d3.push_back(ratio(reps[k].sup_x_d3, reps[k - 1].sup_x_d3));
    // values at rounding level cannot grow meaningfully
    const double floor = 1e-8;
    if ((t.growth_d4.back() > limit && reps[k].sup_x2_d4 > floor) ||
        (t.growth_d3.back() > limit && reps[k].sup_x_d3 > floor))
      t.bounded = false;
  }
  return t;
}

} // namespace degen

#endif // DEGEN_WEIGHTED_CLASS_HPP
