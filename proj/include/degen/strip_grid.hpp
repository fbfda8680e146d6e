#ifndef DEGEN_STRIP_GRID_HPP
#define DEGEN_STRIP_GRID_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace degen {

/// Periodic tangential axis x1 in [0, Lx) times graded normal axis
/// x_j = Xmax (j/J)^gamma, j = 0..J. Field data is stored row-major with the
/// tangential index fastest: value(i, j) = data[j * Mx + i].
class StripGrid {
public:
  StripGrid() = default;

  StripGrid(double Lx, int Mx, double Xmax, int J, double gamma)
      : Lx_(Lx), Xmax_(Xmax), gamma_(gamma), Mx_(Mx), J_(J)
  {
    if (!(Lx > 0) || !(Xmax > 0)) throw std::invalid_argument("build_grid: extents must be positive");
    if (Mx % 2 != 0) throw std::invalid_argument("build_grid: Mx must be even");
    if (Mx < 8) throw std::invalid_argument("build_grid: Mx must be >= 8");
    if (J < 8) throw std::invalid_argument("build_grid: J must be >= 8");
    if (!(gamma >= 1)) throw std::invalid_argument("build_grid: gamma must be >= 1");
    hx_ = Lx / Mx;
    x1_.resize(Mx);
    for (int i = 0; i < Mx; ++i) x1_[i] = i * hx_;
    xn_.resize(J + 1);
    for (int j = 0; j <= J; ++j) {
      const double s = static_cast<double>(j) / J;
      xn_[j] = j == J ? Xmax : Xmax * std::pow(s, gamma);
    }
    xn_[0] = 0.0;
    // control-volume widths and face positions
    h_.resize(J);
    for (int j = 0; j < J; ++j) h_[j] = xn_[j + 1] - xn_[j];
    vol_.assign(J + 1, 0.0);
    vol_[0] = 0.5 * h_[0];
    vol_[J] = 0.5 * h_[J - 1];
    for (int j = 1; j < J; ++j) vol_[j] = 0.5 * (h_[j - 1] + h_[j]);
  }

  double Lx() const { return Lx_; }
  int Mx() const { return Mx_; }
  double Xmax() const { return Xmax_; }
  int J() const { return J_; }
  double gamma() const { return gamma_; }
  double hx() const { return hx_; }

  std::size_t size() const { return static_cast<std::size_t>(Mx_) * (J_ + 1); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * Mx_ + i; }

  const std::vector<double>& x1() const { return x1_; }
  const std::vector<double>& xn() const { return xn_; }
  /// h[j] = x_{j+1} - x_j
  const std::vector<double>& spacing() const { return h_; }
  /// Trapezoid weights of the normal axis (interior: (h_{j-1}+h_j)/2).
  const std::vector<double>& normal_weights() const { return vol_; }
  double face(int j) const { return 0.5 * (xn_[j] + xn_[j + 1]); }

  friend bool operator==(const StripGrid& a, const StripGrid& b)
  {
    return a.Lx_ == b.Lx_ && a.Mx_ == b.Mx_ && a.Xmax_ == b.Xmax_ && a.J_ == b.J_ && a.gamma_ == b.gamma_;
  }

private:
  double Lx_ = 0, Xmax_ = 0, gamma_ = 1, hx_ = 0;
  int Mx_ = 0, J_ = 0;
  std::vector<double> x1_, xn_, h_, vol_;
};

inline StripGrid build_grid(double Lx, int Mx, double Xmax, int J, double gamma)
{
  return StripGrid(Lx, Mx, Xmax, J, gamma);
}

/// Box cylinder |x1 - x1c| < R, |xN - xNc| < R (xN > 0), |t - tc| < R^2.
struct ParabolicCylinder {
  double x1c = 0, xnc = 0, tc = 0;
  double R = 1;

  ParabolicCylinder scaled(double q) const { return {x1c, xnc, tc, q * R}; }
};

namespace detail {

// Quadrature weights for integrating over [a, b] on sorted nodes: trapezoid on
// cells fully inside, partial end cells attributed to the nearest inside node.
// Nodes within a relative 1e-12 of an endpoint count as inside.
inline std::vector<double> interval_weights(std::span<const double> nodes, double a, double b)
{
  std::vector<double> w(nodes.size(), 0.0);
  const double tol = 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
  std::ptrdiff_t first = -1, last = -1;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k] >= a - tol && nodes[k] <= b + tol) {
      if (first < 0) first = static_cast<std::ptrdiff_t>(k);
      last = static_cast<std::ptrdiff_t>(k);
    }
  }
  if (first < 0) return w;
  for (std::ptrdiff_t k = first; k < last; ++k) {
    const double hk = nodes[k + 1] - nodes[k];
    w[k] += 0.5 * hk;
    w[k + 1] += 0.5 * hk;
  }
  w[first] += std::max(0.0, nodes[first] - a);
  w[last] += std::max(0.0, b - nodes[last]);
  return w;
}

} // namespace detail

/// Nodes and snapshots covered by a cylinder, with product quadrature weights.
struct CylinderMask {
  std::vector<int> tangential;        // node indices i
  std::vector<int> normal;            // node indices j
  std::vector<int> snapshots;         // snapshot indices n
  std::vector<double> w_tangential;   // aligned with tangential
  std::vector<double> w_normal;       // aligned with normal
  std::vector<double> w_time;         // aligned with snapshots
  bool clipped = false;

  std::size_t count() const { return tangential.size() * normal.size() * snapshots.size(); }
  bool empty() const { return count() == 0; }
};

inline CylinderMask cylinder_mask(const StripGrid& grid, const ParabolicCylinder& cyl,
                                  std::span<const double> times)
{
  CylinderMask m;
  const double R = cyl.R;
  // tangential: periodic distance, box wraps onto itself when 2R > Lx
  const double L = grid.Lx();
  if (2 * R > L) m.clipped = true;
  {
    // unwrap nodes relative to the center
    std::vector<std::pair<double, int>> rel;
    for (int i = 0; i < grid.Mx(); ++i) {
      double d = grid.x1()[i] - cyl.x1c;
      d -= L * std::round(d / L);
      rel.emplace_back(d, i);
    }
    std::sort(rel.begin(), rel.end());
    std::vector<double> pos;
    for (auto& p : rel) pos.push_back(p.first);
    const auto w = detail::interval_weights(pos, -R, R);
    const double tol = 1e-12 * std::max(1.0, R);
    for (std::size_t k = 0; k < rel.size(); ++k) {
      if (pos[k] < -R - tol || pos[k] > R + tol) continue;
      m.tangential.push_back(rel[k].second);
      m.w_tangential.push_back(w[k]);
    }
  }
  {
    const double a = std::max(0.0, cyl.xnc - R);
    const double b = cyl.xnc + R;
    if (b > grid.Xmax() * (1 + 1e-12)) m.clipped = true;
    const auto w = detail::interval_weights(grid.xn(), a, std::min(b, grid.Xmax()));
    for (int j = 0; j <= grid.J(); ++j) {
      const double x = grid.xn()[j];
      if (x >= a - 1e-12 * (1 + a) && x <= b + 1e-12 * (1 + b)) {
        m.normal.push_back(j);
        m.w_normal.push_back(w[j]);
      }
    }
  }
  {
    const double a = cyl.tc - R * R;
    const double b = cyl.tc + R * R;
    if (times.empty() || a < times.front() - 1e-12 * (1 + std::abs(a)) ||
        b > times.back() + 1e-12 * (1 + std::abs(b)))
      m.clipped = true;
    if (!times.empty()) {
      const auto w = detail::interval_weights(times, std::max(a, times.front()), std::min(b, times.back()));
      for (std::size_t n = 0; n < times.size(); ++n) {
        const double t = times[n];
        if (t >= a - 1e-12 * (1 + std::abs(a)) && t <= b + 1e-12 * (1 + std::abs(b))) {
          m.snapshots.push_back(static_cast<int>(n));
          m.w_time.push_back(w[n]);
        }
      }
    }
  }
  return m;
}

/// Quadrature of values[n][grid.index(i, j)] over the cylinder.
inline double integrate_cylinder(const CylinderMask& mask, const StripGrid& grid,
                                 std::span<const std::vector<double>> values)
{
  if (mask.empty()) throw std::domain_error("integrate_cylinder: degenerate cylinder");
  double total = 0.0;
  for (std::size_t n = 0; n < mask.snapshots.size(); ++n) {
    const auto& v = values[mask.snapshots[n]];
    if (v.size() != grid.size()) throw std::invalid_argument("integrate_cylinder: field size mismatch");
    double s = 0.0;
    for (std::size_t b = 0; b < mask.normal.size(); ++b) {
      double row = 0.0;
      for (std::size_t a = 0; a < mask.tangential.size(); ++a)
        row += mask.w_tangential[a] * v[grid.index(mask.tangential[a], mask.normal[b])];
      s += mask.w_normal[b] * row;
    }
    total += mask.w_time[n] * s;
  }
  return total;
}

/// Trapezoid over the whole strip [0, Lx) x [0, Xmax] for one field.
inline double integrate_strip(const StripGrid& grid, std::span<const double> v)
{
  double s = 0.0;
  for (int j = 0; j <= grid.J(); ++j) {
    double row = 0.0;
    for (int i = 0; i < grid.Mx(); ++i) row += v[grid.index(i, j)];
    s += grid.normal_weights()[j] * row;
  }
  return s * grid.hx();
}

/// Per-node space weights of the full strip and trapezoid weights in time.
struct QuadratureWeights {
  std::vector<double> space;
  std::vector<double> time;
};

inline QuadratureWeights quadrature_weights(const StripGrid& grid, std::span<const double> times)
{
  QuadratureWeights q;
  q.space.resize(grid.size());
  for (int j = 0; j <= grid.J(); ++j)
    for (int i = 0; i < grid.Mx(); ++i) q.space[grid.index(i, j)] = grid.hx() * grid.normal_weights()[j];
  q.time.assign(times.size(), 0.0);
  for (std::size_t n = 0; n + 1 < times.size(); ++n) {
    const double dt = times[n + 1] - times[n];
    q.time[n] += 0.5 * dt;
    q.time[n + 1] += 0.5 * dt;
  }
  return q;
}

} // namespace degen

#endif // DEGEN_STRIP_GRID_HPP
