#ifndef DEGEN_MANUFACTURED_HPP
#define DEGEN_MANUFACTURED_HPP

#include "degen/evolution.hpp"
#include "degen/power_log.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace degen {

enum class TangentialKind { one, cosine, sine };

/// u(x1, xN, t) = T(t) * X(x1) * V(xN) with T polynomial, X in {1, cos, sin}
/// of wavenumber 2 pi k / Lx, and V a power-log sum with admissible terms of
/// positive exponent (so V(0+) = 0).
struct ManufacturedSolution {
  std::vector<Rational> time_coeffs{Rational(1)};  // T(t) = sum c_k t^k
  TangentialKind kind = TangentialKind::one;
  int k = 0;
  TermSum normal;

  void validate() const
  {
    if (kind != TangentialKind::one && k <= 0) throw std::invalid_argument("manufactured: wavenumber k must be positive");
    for (const auto& t : normal.terms()) {
      if (t.exponent.sign() <= 0)
        throw std::invalid_argument("manufactured: normal factor exponents must be positive");
      if (!admissible(TermSum({t})))
        throw std::invalid_argument("manufactured: normal term " + TermSum({t}).str() + " is not admissible");
    }
  }

  double time_factor(double t) const
  {
    double s = 0.0;
    for (std::size_t i = time_coeffs.size(); i-- > 0;) s = s * t + to_double(time_coeffs[i]);
    return s;
  }
  double time_derivative(double t) const
  {
    double s = 0.0;
    for (std::size_t i = time_coeffs.size(); i-- > 1;) s = s * t + static_cast<double>(i) * to_double(time_coeffs[i]);
    return s;
  }
  double wavenumber(double Lx) const { return kind == TangentialKind::one ? 0.0 : 2 * std::numbers::pi * k / Lx; }
  double tangential(double x1, double Lx) const
  {
    switch (kind) {
    case TangentialKind::cosine: return std::cos(wavenumber(Lx) * x1);
    case TangentialKind::sine: return std::sin(wavenumber(Lx) * x1);
    default: return 1.0;
    }
  }
};

/// Closed-form forcing f = u_t + A u, factor-wise:
///   A(X V) = X [ l_beta V + kappa^2 P1 + kappa^4 x^2 V ],
///   P1 = -(x^2 V')' - x^2 V'' + beta V.
struct ManufacturedForcing {
  ManufacturedSolution ms;
  Rational beta;
  double Lx = 1.0;
  TermSum V, dV, P0, P1, P2;
  NumericTermSum nV, ndV, nP0, nP1, nP2;

  double exact(double x1, double xn, double t) const
  {
    const double v = xn > 0 ? nV(xn) : 0.0;
    return ms.time_factor(t) * ms.tangential(x1, Lx) * v;
  }
  double exact_slope(double x1, double xn, double t) const
  {
    return ms.time_factor(t) * ms.tangential(x1, Lx) * ndV(xn);
  }
  double forcing(double x1, double xn, double t) const
  {
    if (!(xn > 0)) return 0.0;
    const double kap2 = std::pow(ms.wavenumber(Lx), 2);
    const double X = ms.tangential(x1, Lx);
    const double spatial = nP0(xn) + kap2 * nP1(xn) + kap2 * kap2 * nP2(xn);
    return ms.time_derivative(t) * X * nV(xn) + ms.time_factor(t) * X * spatial;
  }

  FieldSnapshot sample_exact(const StripGrid& g, double t) const
  {
    FieldSnapshot s = FieldSnapshot::zeros(g, t);
    const double T = ms.time_factor(t);
    for (int j = 1; j <= g.J(); ++j) {
      const double v = T * nV(g.xn()[j]);
      for (int i = 0; i < g.Mx(); ++i) s.values[g.index(i, j)] = ms.tangential(g.x1()[i], Lx) * v;
    }
    return s;
  }

  /// Sampled f(., t) on every node (zero on the x_N = 0 row), plus a constant bias.
  ForcingFn sampler(const StripGrid& g, double bias = 0.0) const
  {
    std::vector<double> X(g.Mx()), V0(g.J() + 1, 0.0), S0(g.J() + 1, 0.0);
    const double kap2 = std::pow(ms.wavenumber(Lx), 2);
    for (int i = 0; i < g.Mx(); ++i) X[i] = ms.tangential(g.x1()[i], Lx);
    for (int j = 1; j <= g.J(); ++j) {
      const double x = g.xn()[j];
      V0[j] = nV(x);
      S0[j] = nP0(x) + kap2 * nP1(x) + kap2 * kap2 * nP2(x);
    }
    return [this, g, bias, X, V0, S0](double t, std::vector<double>& out) {
      const double T = ms.time_factor(t), dT = ms.time_derivative(t);
      for (int i = 0; i < g.Mx(); ++i) out[g.index(i, 0)] = bias;
      for (int j = 1; j <= g.J(); ++j) {
        const double r = dT * V0[j] + T * S0[j];
        for (int i = 0; i < g.Mx(); ++i) out[g.index(i, j)] = X[i] * r + bias;
      }
    };
  }

  BoundaryFn boundary(const StripGrid& g) const
  {
    return [this, g](double t) {
      BoundaryData bd = BoundaryData::zero(g.Mx());
      const double X = g.Xmax();
      for (int i = 0; i < g.Mx(); ++i) {
        bd.dirichlet[i] = 0.0;  // V(0+) = 0 for positive exponents
        bd.outer_value[i] = exact(g.x1()[i], X, t);
        bd.outer_slope[i] = exact_slope(g.x1()[i], X, t);
      }
      return bd;
    };
  }
};

inline ManufacturedForcing manufactured_forcing(const ManufacturedSolution& ms, const Rational& beta, double Lx)
{
  ms.validate();
  ManufacturedForcing mf;
  mf.ms = ms;
  mf.beta = beta;
  mf.Lx = Lx;
  mf.V = ms.normal;
  mf.dV = differentiate(ms.normal);
  const SurdValue two(2);
  mf.P0 = apply_lbeta(beta, ms.normal);
  const TermSum d2 = differentiate(mf.dV);
  mf.P1 = -differentiate(mf.dV.times_power(two)) - d2.times_power(two) + ms.normal.scaled(SurdValue(beta));
  mf.P2 = ms.normal.times_power(two);
  mf.nV = NumericTermSum(mf.V);
  mf.ndV = NumericTermSum(mf.dV);
  mf.nP0 = NumericTermSum(mf.P0);
  mf.nP1 = NumericTermSum(mf.P1);
  mf.nP2 = NumericTermSum(mf.P2);
  return mf;
}

} // namespace degen

#endif // DEGEN_MANUFACTURED_HPP
