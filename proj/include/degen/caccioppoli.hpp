#ifndef DEGEN_CACCIOPPOLI_HPP
#define DEGEN_CACCIOPPOLI_HPP

#include "degen/degenerate_operator.hpp"
#include "degen/estimate_report.hpp"
#include "degen/evolution.hpp"
#include "degen/tangential_transform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace degen {

namespace detail {

/// k-th tangential derivative of every row of a snapshot, spectrally. The
/// Nyquist mode is dropped for odd k.
inline std::vector<double> tangential_derivative(const StripGrid& g, const std::vector<double>& u, int k)
{
  if (k == 0) return u;
  TangentialTransform tt(g.Mx(), g.J() + 1);
  const int modes = tt.modes();
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(modes) * (g.J() + 1));
  tt.forward(u, spec);
  const double w0 = 2 * std::numbers::pi / g.Lx();
  for (int j = 0; j <= g.J(); ++j)
    for (int m = 0; m < modes; ++m) {
      auto& c = spec[static_cast<std::size_t>(j) * modes + m];
      if (k % 2 == 1 && 2 * m == g.Mx()) {
        c = 0.0;
        continue;
      }
      c *= std::pow(std::complex<double>(0.0, w0 * m), k);
    }
  std::vector<double> out(g.size());
  tt.inverse(spec, out);
  return out;
}

/// Normal derivative at nodes: three-point nonuniform centred formula inside,
/// one-sided three-point formulas at j = 0 and j = J.
inline std::vector<double> normal_derivative(const StripGrid& g, const std::vector<double>& u)
{
  std::vector<double> out(g.size());
  const auto& x = g.xn();
  auto weights = [&](int a, int b, int c, double z) {
    // Lagrange derivative weights at z for nodes a, b, c
    const double xa = x[a], xb = x[b], xc = x[c];
    return std::array<double, 3>{((z - xb) + (z - xc)) / ((xa - xb) * (xa - xc)),
                                 ((z - xa) + (z - xc)) / ((xb - xa) * (xb - xc)),
                                 ((z - xa) + (z - xb)) / ((xc - xa) * (xc - xb))};
  };
  for (int j = 0; j <= g.J(); ++j) {
    const int a = j == 0 ? 0 : (j == g.J() ? j - 2 : j - 1);
    const auto w = weights(a, a + 1, a + 2, x[j]);
    for (int i = 0; i < g.Mx(); ++i)
      out[g.index(i, j)] = w[0] * u[g.index(i, a)] + w[1] * u[g.index(i, a + 1)] + w[2] * u[g.index(i, a + 2)];
  }
  return out;
}

/// Time derivative of the snapshot sequence: centred inside, one-sided at the ends.
inline std::vector<std::vector<double>> time_derivative(std::span<const double> times,
                                                        const std::vector<std::vector<double>>& u)
{
  const std::size_t n = times.size();
  if (n < 2) throw std::invalid_argument("time_derivative: need at least two snapshots");
  std::vector<std::vector<double>> out(n, std::vector<double>(u[0].size()));
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == n ? k : k + 1;
    const double dt = times[hi] - times[lo];
    for (std::size_t p = 0; p < u[k].size(); ++p) out[k][p] = (u[hi][p] - u[lo][p]) / dt;
  }
  return out;
}

inline std::vector<std::vector<double>> squared(const std::vector<std::vector<double>>& u)
{
  auto out = u;
  for (auto& v : out)
    for (double& x : v) x *= x;
  return out;
}

inline void require_unclipped(const CylinderMask& m, const char* what)
{
  if (m.clipped) throw std::invalid_argument(std::string(what) + ": cylinder is clipped by the grid or time window");
  if (m.empty()) throw std::invalid_argument(std::string(what) + ": cylinder covers no nodes");
}

} // namespace detail

/// Ratios for one cylinder. Undefined when the Q_qR mass is below 1e-30.
struct CaccioppoliRow {
  ParabolicCylinder cyl;
  double q = 2.0;
  double mass_outer = 0.0;  // int_{Q_qR} u^2
  double rho1 = NAN, rho1_tangential = NAN, rho1_normal = NAN, rho2 = NAN;
  bool defined = false;
};

/// Derivative fields shared by every cylinder of one series.
struct CaccioppoliFields {
  std::vector<std::vector<double>> u2, ux2, un2, ut2;

  explicit CaccioppoliFields(const FieldSeries& s)
  {
    u2 = detail::squared(s.snapshots);
    std::vector<std::vector<double>> ux, un;
    for (const auto& v : s.snapshots) {
      ux.push_back(detail::tangential_derivative(s.grid, v, 1));
      un.push_back(detail::normal_derivative(s.grid, v));
    }
    ux2 = detail::squared(ux);
    un2 = detail::squared(un);
    ut2 = detail::squared(detail::time_derivative(s.times, s.snapshots));
  }
};

inline CaccioppoliRow caccioppoli_row(const FieldSeries& s, const CaccioppoliFields& f, const ParabolicCylinder& cyl,
                                      double q)
{
  if (!(q > 1)) throw std::invalid_argument("caccioppoli: q must exceed 1");
  const auto inner = cylinder_mask(s.grid, cyl, s.times);
  const auto outer = cylinder_mask(s.grid, cyl.scaled(q), s.times);
  detail::require_unclipped(inner, "caccioppoli");
  detail::require_unclipped(outer, "caccioppoli");
  CaccioppoliRow row{cyl, q};
  row.mass_outer = integrate_cylinder(outer, s.grid, f.u2);
  if (!(row.mass_outer >= 1e-30)) return row;
  row.defined = true;
  const double R = cyl.R;
  row.rho1_tangential = R * R * integrate_cylinder(inner, s.grid, f.ux2) / row.mass_outer;
  row.rho1_normal = R * R * integrate_cylinder(inner, s.grid, f.un2) / row.mass_outer;
  row.rho1 = row.rho1_tangential + row.rho1_normal;
  row.rho2 = std::pow(R, 4) * integrate_cylinder(inner, s.grid, f.ut2) / row.mass_outer;
  return row;
}

/// rho1 = R^2 int_{Q_R} |grad u|^2 / int_{Q_qR} u^2 and
/// rho2 = R^4 int_{Q_R} u_t^2 / int_{Q_qR} u^2 for every cylinder.
inline EstimateReport caccioppoli_report(const FieldSeries& s, const std::vector<ParabolicCylinder>& cylinders,
                                         double q, std::vector<CaccioppoliRow>* rows_out = nullptr)
{
  EstimateReport rep;
  const CaccioppoliFields f(s);
  Table t{"caccioppoli",
          {"x1c", "xNc", "tc", "R", "q", "mass_qR", "rho1", "rho1_tangential", "rho1_normal", "rho2"},
          {}};
  std::vector<CaccioppoliRow> rows;
  for (std::size_t k = 0; k < cylinders.size(); ++k) {
    const auto row = caccioppoli_row(s, f, cylinders[k], q);
    rows.push_back(row);
    t.rows.push_back({row.cyl.x1c, row.cyl.xnc, row.cyl.tc, row.cyl.R, q, row.mass_outer, row.rho1,
                      row.rho1_tangential, row.rho1_normal, row.rho2});
    const std::string tag = "caccioppoli.R=" + std::to_string(row.cyl.R).substr(0, 6) + "#" + std::to_string(k);
    const std::string note = row.defined ? std::string{} : "zero mass on Q_qR";
    rep.inform(tag + ".rho1", row.rho1, note);
    rep.inform(tag + ".rho2", row.rho2, note);
  }
  rep.tables.push_back(std::move(t));
  if (rows_out) *rows_out = std::move(rows);
  return rep;
}

/// R^{2a+4b} int_{Q_R} |D_{x1}^a D_t^b u|^2 / int_{Q_{q^n R}} u^2 with
/// n = max(1, a+b). Time derivatives are repeated snapshot differences.
inline double higher_derivative_ratio(const FieldSeries& s, int alpha, int beta_t, const ParabolicCylinder& cyl,
                                      double q)
{
  if (alpha < 0 || beta_t < 0) throw std::invalid_argument("higher_derivative_ratio: orders must be >= 0");
  if (!(q > 1)) throw std::invalid_argument("higher_derivative_ratio: q must exceed 1");
  const int n = std::max(1, alpha + beta_t);
  const auto inner = cylinder_mask(s.grid, cyl, s.times);
  const auto outer = cylinder_mask(s.grid, cyl.scaled(std::pow(q, n)), s.times);
  detail::require_unclipped(inner, "higher_derivative_ratio");
  detail::require_unclipped(outer, "higher_derivative_ratio");
  const double mass = integrate_cylinder(outer, s.grid, detail::squared(s.snapshots));
  if (!(mass >= 1e-30)) return NAN;
  std::vector<std::vector<double>> d;
  for (const auto& v : s.snapshots) d.push_back(detail::tangential_derivative(s.grid, v, alpha));
  for (int b = 0; b < beta_t; ++b) d = detail::time_derivative(s.times, d);
  const double R = cyl.R;
  return std::pow(R, 2 * alpha + 4 * beta_t) * integrate_cylinder(inner, s.grid, detail::squared(d)) / mass;
}

} // namespace degen

#endif // DEGEN_CACCIOPPOLI_HPP
