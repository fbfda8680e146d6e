#ifndef DEGEN_MOLLIFIER_HPP
#define DEGEN_MOLLIFIER_HPP

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace degen {

/// Samples on a uniform (x1, t) lattice: value(i, n) = values[n * nx + i] at
/// x1 = x0 + i dx, t = t0 + n dt.
struct Lattice2D {
  double x0 = 0, dx = 1, t0 = 0, dt = 1;
  int nx = 0, nt = 0;
  std::vector<double> values;

  static Lattice2D zeros(double x0, double dx, int nx, double t0, double dt, int nt)
  {
    return {x0, dx, t0, dt, nx, nt, std::vector<double>(static_cast<std::size_t>(nx) * nt, 0.0)};
  }
  template <class F>
  static Lattice2D sample(double x0, double dx, int nx, double t0, double dt, int nt, F f)
  {
    Lattice2D l = zeros(x0, dx, nx, t0, dt, nt);
    for (int n = 0; n < nt; ++n)
      for (int i = 0; i < nx; ++i) l.at(i, n) = f(l.x(i), l.t(n));
    return l;
  }

  double x(int i) const { return x0 + i * dx; }
  double t(int n) const { return t0 + n * dt; }
  double& at(int i, int n) { return values[static_cast<std::size_t>(n) * nx + i]; }
  double at(int i, int n) const { return values[static_cast<std::size_t>(n) * nx + i]; }
};

/// omega(y, tau) = exp(-1 / (1 - 2(y^2 + tau^2))) on the disc y^2 + tau^2 < 1/2,
/// which lies inside the diamond |y| + |tau| < 1; omega_eps = eps^-2 omega(./eps).
/// Discrete weights are normalized to unit sum on the lattice.
class MollifierKernel {
public:
  MollifierKernel(double eps, double dx, double dt) : eps_(eps), dx_(dx), dt_(dt)
  {
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("mollifier: eps must lie in (0, 1)");
    if (!(dx > 0 && dt > 0)) throw std::invalid_argument("mollifier: lattice spacings must be positive");
    if (dx > eps / 8 * (1 + 1e-12) || dt > eps / 8 * (1 + 1e-12))
      throw std::invalid_argument("mollifier: lattice spacing must not exceed eps/8");
    rx_ = static_cast<int>(std::floor(eps / std::sqrt(2.0) / dx));
    rt_ = static_cast<int>(std::floor(eps / std::sqrt(2.0) / dt));
    raw_mass_ = 1.0;
    weights_ = derivative_weights(0, 0);
    double s = 0.0;
    for (double w : weights_) s += w;
    raw_mass_ = s;
    for (double& w : weights_) w /= s;
  }

  double eps() const { return eps_; }
  int radius_x() const { return rx_; }
  int radius_t() const { return rt_; }
  /// Lattice quadrature of int omega before normalization.
  double raw_mass() const { return raw_mass_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(int a, int b) const { return weights_[static_cast<std::size_t>(b + rt_) * (2 * rx_ + 1) + (a + rx_)]; }

  /// Unscaled profile phi(s) = exp(-1/(1-2s)), s = |z|^2, and its derivatives in s.
  static double phi(double s) { return s < 0.5 ? std::exp(-1.0 / (1 - 2 * s)) : 0.0; }
  static double dphi(double s)
  {
    if (s >= 0.5) return 0.0;
    const double u = 1 - 2 * s;
    return phi(s) * (-2.0 / (u * u));
  }
  static double d2phi(double s)
  {
    if (s >= 0.5) return 0.0;
    const double u = 1 - 2 * s;
    return phi(s) * (4.0 / (u * u * u * u) - 8.0 / (u * u * u));
  }

  /// d^alpha_y d^beta_tau omega at (y, tau), alpha + beta <= 2.
  static double omega_derivative(int alpha, int beta, double y, double tau)
  {
    const double s = y * y + tau * tau;
    if (alpha == 0 && beta == 0) return phi(s);
    if (alpha + beta == 1) return dphi(s) * 2 * (alpha == 1 ? y : tau);
    if (alpha == 2) return d2phi(s) * 4 * y * y + 2 * dphi(s);
    if (beta == 2) return d2phi(s) * 4 * tau * tau + 2 * dphi(s);
    if (alpha == 1 && beta == 1) return d2phi(s) * 4 * y * tau;
    throw std::invalid_argument("mollifier: derivative order alpha + beta must be <= 2");
  }

  /// Lattice weights of d^alpha_x d^beta_t omega_eps times dx dt, divided by
  /// the lattice mass of omega. Weights of derivative order >= 1 are shifted on
  /// the support so that they sum exactly to zero.
  std::vector<double> derivative_weights(int alpha, int beta) const
  {
    const int wx = 2 * rx_ + 1, wt = 2 * rt_ + 1;
    std::vector<double> w(static_cast<std::size_t>(wx) * wt);
    const double scale = std::pow(eps_, -2 - alpha - beta) * dx_ * dt_ / raw_mass_;
    double sum = 0.0;
    std::size_t support = 0;
    for (int b = -rt_; b <= rt_; ++b)
      for (int a = -rx_; a <= rx_; ++a) {
        const double y = a * dx_ / eps_, tau = b * dt_ / eps_;
        const double v = scale * omega_derivative(alpha, beta, y, tau);
        w[static_cast<std::size_t>(b + rt_) * wx + (a + rx_)] = v;
        sum += v;
        if (y * y + tau * tau < 0.5) ++support;
      }
    if (alpha + beta > 0 && support > 0) {
      const double mean = sum / static_cast<double>(support);
      for (int b = -rt_; b <= rt_; ++b)
        for (int a = -rx_; a <= rx_; ++a) {
          const double y = a * dx_ / eps_, tau = b * dt_ / eps_;
          if (y * y + tau * tau < 0.5) w[static_cast<std::size_t>(b + rt_) * wx + (a + rx_)] -= mean;
        }
    }
    return w;
  }

  /// Discrete second moment sum w(a,b) (a dx)^2 / eps^2 of the normalized weights.
  double second_moment_x() const
  {
    double m = 0.0;
    for (int b = -rt_; b <= rt_; ++b)
      for (int a = -rx_; a <= rx_; ++a) m += weight(a, b) * std::pow(a * dx_ / eps_, 2);
    return m;
  }

private:
  double eps_, dx_, dt_;
  int rx_ = 0, rt_ = 0;
  double raw_mass_ = 0.0;
  std::vector<double> weights_;
};

namespace detail {

inline Lattice2D convolve(const Lattice2D& h, const std::vector<double>& w, int rx, int rt)
{
  if (h.nx <= 2 * rx || h.nt <= 2 * rt) throw std::invalid_argument("mollify: lattice smaller than kernel support");
  Lattice2D out = Lattice2D::zeros(h.x(rx), h.dx, h.nx - 2 * rx, h.t(rt), h.dt, h.nt - 2 * rt);
  const int wx = 2 * rx + 1;
  for (int n = 0; n < out.nt; ++n)
    for (int i = 0; i < out.nx; ++i) {
      double s = 0.0;
      for (int b = -rt; b <= rt; ++b)
        for (int a = -rx; a <= rx; ++a)
          s += w[static_cast<std::size_t>(b + rt) * wx + (a + rx)] * h.at(i + rx - a, n + rt - b);
      out.at(i, n) = s;
    }
  return out;
}

} // namespace detail

/// Discrete convolution with omega_eps. The result lives on the sub-lattice
/// where the kernel support fits inside the input.
inline Lattice2D mollify(const Lattice2D& h, const MollifierKernel& k)
{
  return detail::convolve(h, k.weights(), k.radius_x(), k.radius_t());
}

/// d^alpha_x d^beta_t of the mollification, via the differentiated kernel.
inline Lattice2D mollify_derivative(const Lattice2D& h, const MollifierKernel& k, int alpha, int beta)
{
  return detail::convolve(h, k.derivative_weights(alpha, beta), k.radius_x(), k.radius_t());
}

struct DegreeFit {
  int degree = -1;        // smallest total degree whose fit residual is within tolerance
  double residual = 0.0;  // max-norm residual of that fit
  double scale = 0.0;     // max |samples|
};

/// Least-squares fit of lattice samples by polynomials in (x1, t) of increasing
/// total degree (coordinates centred and scaled to [-1, 1]); returns the first
/// degree whose residual is <= rel_tol * scale.
inline DegreeFit fit_total_degree(const Lattice2D& l, int max_degree = 8, double rel_tol = 1e-8)
{
  DegreeFit fit;
  for (double v : l.values) fit.scale = std::max(fit.scale, std::abs(v));
  const double cx = l.x0 + 0.5 * (l.nx - 1) * l.dx, sx = std::max(0.5 * (l.nx - 1) * l.dx, 1e-300);
  const double ct = l.t0 + 0.5 * (l.nt - 1) * l.dt, st = std::max(0.5 * (l.nt - 1) * l.dt, 1e-300);
  const Eigen::Index rows = static_cast<Eigen::Index>(l.values.size());
  Eigen::VectorXd y(rows);
  for (Eigen::Index r = 0; r < rows; ++r) y(r) = l.values[static_cast<std::size_t>(r)];
  for (int d = 0; d <= max_degree; ++d) {
    std::vector<std::pair<int, int>> mono;
    for (int tot = 0; tot <= d; ++tot)
      for (int p = 0; p <= tot; ++p) mono.emplace_back(tot - p, p);
    Eigen::MatrixXd A(rows, static_cast<Eigen::Index>(mono.size()));
    for (int n = 0; n < l.nt; ++n)
      for (int i = 0; i < l.nx; ++i) {
        const double u = (l.x(i) - cx) / sx, v = (l.t(n) - ct) / st;
        const Eigen::Index r = static_cast<Eigen::Index>(n) * l.nx + i;
        for (std::size_t c = 0; c < mono.size(); ++c)
          A(r, static_cast<Eigen::Index>(c)) = std::pow(u, mono[c].first) * std::pow(v, mono[c].second);
      }
    const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(y);
    const double res = (A * coef - y).cwiseAbs().maxCoeff();
    if (res <= rel_tol * std::max(fit.scale, 1e-300) || d == max_degree) {
      fit.degree = res <= rel_tol * std::max(fit.scale, 1e-300) ? d : -1;
      fit.residual = res;
      return fit;
    }
  }
  return fit;
}

struct DegreeCheck {
  int input_degree = -1;
  DegreeFit mollified;
  bool preserved = false;
};

/// Fits p and mollify(p); the degree is preserved when both fits agree.
inline DegreeCheck mollifier_degree_check(const Lattice2D& p, const MollifierKernel& k)
{
  DegreeCheck c;
  c.input_degree = fit_total_degree(p).degree;
  c.mollified = fit_total_degree(mollify(p, k));
  c.preserved = c.input_degree >= 0 && c.mollified.degree == c.input_degree;
  return c;
}

struct DerivativeBound {
  double measured = 0.0;  // max |d^alpha_x d^beta_t u_eps|
  double bound = 0.0;     // C_kernel eps^-(alpha+beta) C R^M
  double c_kernel = 0.0;  // L1 norm of d^alpha d^beta omega
  double ratio = 0.0;
};

/// Checks |D^alpha_x D^beta_t u_eps| <= C_kernel eps^-(alpha+beta) C R^M for
/// data with max |u| <= C R^M.
inline DerivativeBound mollifier_derivative_bound(const Lattice2D& u, const MollifierKernel& k, int alpha, int beta,
                                                  double R, double M, double C = 1.0)
{
  DerivativeBound b;
  const auto d = mollify_derivative(u, k, alpha, beta);
  for (double v : d.values) b.measured = std::max(b.measured, std::abs(v));
  const auto w = k.derivative_weights(alpha, beta);
  double l1 = 0.0;
  for (double v : w) l1 += std::abs(v);
  const double e = std::pow(k.eps(), alpha + beta);
  b.c_kernel = l1 * e;
  b.bound = b.c_kernel / e * C * std::pow(R, M);
  b.ratio = b.bound > 0 ? b.measured / b.bound : 0.0;
  return b;
}

} // namespace degen

#endif // DEGEN_MOLLIFIER_HPP
