#ifndef DEGEN_CUTOFF_HPP
#define DEGEN_CUTOFF_HPP

#include "degen/strip_grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace degen {

/// Quintic smooth step S(s) = 6s^5 - 15s^4 + 10s^3 on [0, 1] and its first two
/// derivatives.
struct SmoothStep {
  static double value(double s)
  {
    s = std::clamp(s, 0.0, 1.0);
    return s * s * s * (10 + s * (-15 + 6 * s));
  }
  static double d1(double s)
  {
    if (s <= 0 || s >= 1) return 0.0;
    return 30 * s * s * (1 - s) * (1 - s);
  }
  static double d2(double s)
  {
    if (s <= 0 || s >= 1) return 0.0;
    return 60 * s * (1 - s) * (1 - 2 * s);
  }
  /// max |S'| = 15/8, max |S''| = 10/sqrt(3)
  static constexpr double max_d1 = 1.875;
  static constexpr double max_d2 = 5.773502691896258;
};

/// phi(d) = 1 for d <= a, 0 for d >= a + w, 1 - S((d - a)/w) in between.
struct RadialProfile {
  double a = 1.0, w = 1.0;
  double value(double d) const { return 1.0 - SmoothStep::value((d - a) / w); }
  double d1(double d) const { return -SmoothStep::d1((d - a) / w) / w; }
  double d2(double d) const { return -SmoothStep::d2((d - a) / w) / (w * w); }
};

/// eta(x1, xN, t) = phi(|x1 - x1c|) phi(|xN - xNc|) psi(|t - tc|) with
/// transition width (q-1)R in space and ((q-1)R)^2 in time, so eta = 1 on Q_R
/// and eta = 0 outside Q_qR (R^2 + ((q-1)R)^2 < (qR)^2).
class CutoffFunction {
public:
  enum Derivative { d_x1, d_xn, d_x1x1, d_xnxn, d_x1xn, d_t, derivative_count };

  CutoffFunction(const ParabolicCylinder& cyl, double q, double Lx)
      : cyl_(cyl), q_(q), Lx_(Lx)
  {
    if (!(q > 1 && q < 3)) throw std::invalid_argument("build_cutoff: q must lie in (1, 3)");
    if (!(cyl.R > 0)) throw std::invalid_argument("build_cutoff: R must be positive");
    const double w = (q - 1) * cyl.R;
    space_ = {cyl.R, w};
    time_ = {cyl.R * cyl.R, w * w};
  }

  const ParabolicCylinder& cylinder() const { return cyl_; }
  double q() const { return q_; }
  double transition() const { return (q_ - 1) * cyl_.R; }

  double operator()(double x1, double xn, double t) const
  {
    return space_.value(tangential_distance(x1)) * space_.value(std::abs(xn - cyl_.xnc)) *
           time_.value(std::abs(t - cyl_.tc));
  }

  double derivative(Derivative which, double x1, double xn, double t) const
  {
    const double d1 = x1_offset(x1), dn = xn - cyl_.xnc, dt = t - cyl_.tc;
    const double s1 = d1 < 0 ? -1.0 : 1.0, sn = dn < 0 ? -1.0 : 1.0, st = dt < 0 ? -1.0 : 1.0;
    const double a1 = std::abs(d1), an = std::abs(dn), at = std::abs(dt);
    const double p1 = space_.value(a1), pn = space_.value(an), pt = time_.value(at);
    switch (which) {
    case d_x1: return s1 * space_.d1(a1) * pn * pt;
    case d_xn: return p1 * sn * space_.d1(an) * pt;
    case d_x1x1: return space_.d2(a1) * pn * pt;
    case d_xnxn: return p1 * space_.d2(an) * pt;
    case d_x1xn: return s1 * space_.d1(a1) * sn * space_.d1(an) * pt;
    case d_t: return p1 * pn * st * time_.d1(at);
    default: return 0.0;
    }
  }

  /// |alpha| + 2 beta of each derivative.
  static int order(Derivative which)
  {
    switch (which) {
    case d_x1:
    case d_xn: return 1;
    default: return 2;
    }
  }

  /// Supremum of |derivative| * ((q-1)R)^order implied by the profile.
  static double profile_constant(Derivative which)
  {
    switch (which) {
    case d_x1:
    case d_xn:
    case d_t: return SmoothStep::max_d1;
    case d_x1xn: return SmoothStep::max_d1 * SmoothStep::max_d1;
    default: return SmoothStep::max_d2;
    }
  }

private:
  double x1_offset(double x1) const
  {
    double d = x1 - cyl_.x1c;
    return d - Lx_ * std::round(d / Lx_);
  }
  double tangential_distance(double x1) const { return std::abs(x1_offset(x1)); }

  ParabolicCylinder cyl_;
  double q_, Lx_;
  RadialProfile space_, time_;
};

/// Samples of a cutoff on the grid and the measured derivative maxima.
struct CutoffSamples {
  CutoffFunction eta;
  std::vector<std::vector<double>> values;  // [snapshot][node]
  std::array<double, CutoffFunction::derivative_count> max_derivative{};
  /// max_derivative * ((q-1)R)^order
  std::array<double, CutoffFunction::derivative_count> scaled{};
};

/// Cutoff for Q_R inside Q_qR sampled on grid x times. Throws when Q_qR is
/// clipped by the grid or the time window. The cutoff is a product of one-axis
/// profiles, so each sampled derivative maximum is the product of the per-axis
/// maxima of the factors.
inline CutoffSamples build_cutoff(const StripGrid& g, std::span<const double> times, const ParabolicCylinder& cyl,
                                  double q)
{
  CutoffSamples s{CutoffFunction(cyl, q, g.Lx()), {}, {}, {}};
  if (cylinder_mask(g, cyl.scaled(q), times).clipped)
    throw std::invalid_argument("build_cutoff: Q_qR is clipped by the grid or time window");
  // factor samples [order 0, 1, 2] along each axis, read off the full cutoff
  // at the centre of the other two axes where their factors equal 1
  const auto& eta = s.eta;
  using C = CutoffFunction;
  std::vector<std::array<double, 3>> fx(g.Mx()), fn(g.J() + 1);
  std::vector<std::array<double, 2>> ft(times.size());
  for (int i = 0; i < g.Mx(); ++i) {
    const double x = g.x1()[i];
    fx[i] = {eta(x, cyl.xnc, cyl.tc), eta.derivative(C::d_x1, x, cyl.xnc, cyl.tc),
             eta.derivative(C::d_x1x1, x, cyl.xnc, cyl.tc)};
  }
  for (int j = 0; j <= g.J(); ++j) {
    const double x = g.xn()[j];
    fn[j] = {eta(cyl.x1c, x, cyl.tc), eta.derivative(C::d_xn, cyl.x1c, x, cyl.tc),
             eta.derivative(C::d_xnxn, cyl.x1c, x, cyl.tc)};
  }
  for (std::size_t n = 0; n < times.size(); ++n)
    ft[n] = {eta(cyl.x1c, cyl.xnc, times[n]), eta.derivative(C::d_t, cyl.x1c, cyl.xnc, times[n])};
  auto axis_max = [](const auto& f, int k) {
    double m = 0.0;
    for (const auto& v : f) m = std::max(m, std::abs(v[k]));
    return m;
  };
  s.max_derivative[C::d_x1] = axis_max(fx, 1) * axis_max(fn, 0) * axis_max(ft, 0);
  s.max_derivative[C::d_xn] = axis_max(fx, 0) * axis_max(fn, 1) * axis_max(ft, 0);
  s.max_derivative[C::d_x1x1] = axis_max(fx, 2) * axis_max(fn, 0) * axis_max(ft, 0);
  s.max_derivative[C::d_xnxn] = axis_max(fx, 0) * axis_max(fn, 2) * axis_max(ft, 0);
  s.max_derivative[C::d_x1xn] = axis_max(fx, 1) * axis_max(fn, 1) * axis_max(ft, 0);
  s.max_derivative[C::d_t] = axis_max(fx, 0) * axis_max(fn, 0) * axis_max(ft, 1);
  s.values.assign(times.size(), std::vector<double>(g.size(), 0.0));
  for (std::size_t n = 0; n < times.size(); ++n)
    for (int j = 0; j <= g.J(); ++j)
      for (int i = 0; i < g.Mx(); ++i) s.values[n][g.index(i, j)] = fx[i][0] * fn[j][0] * ft[n][0];
  const double w = s.eta.transition();
  for (int d = 0; d < C::derivative_count; ++d)
    s.scaled[d] = s.max_derivative[d] * std::pow(w, C::order(static_cast<C::Derivative>(d)));
  return s;
}

} // namespace degen

#endif // DEGEN_CUTOFF_HPP
