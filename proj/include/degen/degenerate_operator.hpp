#ifndef DEGEN_DEGENERATE_OPERATOR_HPP
#define DEGEN_DEGENERATE_OPERATOR_HPP

#include "degen/banded.hpp"
#include "degen/parallel.hpp"
#include "degen/strip_grid.hpp"
#include "degen/tangential_transform.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace degen {

enum class OuterBC { clamped_zero, clamped_manufactured };

/// Parameters of A u = div(x_N^2 grad Lap u - beta grad u) on a strip.
struct OperatorParams {
  double beta = 0.0;
  StripGrid grid;
  OuterBC outer_bc = OuterBC::clamped_zero;
};

/// Values at every grid node (layout of StripGrid) at one instant.
struct FieldSnapshot {
  std::vector<double> values;
  double time = 0.0;

  static FieldSnapshot zeros(const StripGrid& g, double t = 0.0) { return {std::vector<double>(g.size(), 0.0), t}; }
};

/// Dirichlet trace at x_N = 0 and the outer clamp (value and normal slope at
/// x_N = Xmax), one entry per tangential node.
struct BoundaryData {
  std::vector<double> dirichlet;
  std::vector<double> outer_value;
  std::vector<double> outer_slope;

  static BoundaryData zero(int Mx)
  {
    return {std::vector<double>(Mx, 0.0), std::vector<double>(Mx, 0.0), std::vector<double>(Mx, 0.0)};
  }
};

/// Eigenvalue of minus the periodic second difference: (4/hx^2) sin^2(pi m / Mx).
inline double tangential_symbol(int m, const StripGrid& grid)
{
  if (m < 0 || m >= grid.Mx()) throw std::out_of_range("tangential_symbol: mode index");
  const double s = std::sin(std::numbers::pi * m / grid.Mx());
  return 4.0 / (grid.hx() * grid.hx()) * s * s;
}

namespace detail {

// Weights of the three-point second difference at Xmax with a ghost node at
// the next graded position X ((J+1)/J)^gamma, whose value is the quartic p
// through u_{J-3..J} with p'(Xmax) = slope. Returns {w_{J-3}, w_{J-2}, w_{J-1},
// w_J, w_slope}.
inline std::array<double, 5> outer_second_derivative_weights(const StripGrid& g)
{
  const int J = g.J();
  const double X = g.xn()[J];
  const double h = g.spacing()[J - 1];
  const double hg = X * std::pow(static_cast<double>(J + 1) / J, g.gamma()) - X;
  Eigen::Matrix<double, 5, 5> M = Eigen::Matrix<double, 5, 5>::Zero();
  for (int r = 0; r < 4; ++r) {
    const double s = (g.xn()[J - 3 + r] - X) / h;
    double p = 1.0;
    for (int k = 0; k < 5; ++k) {
      M(r, k) = p;
      p *= s;
    }
  }
  M(4, 1) = 1.0;  // dp/ds(0) = h * slope
  const Eigen::Matrix<double, 5, 5> inv = M.fullPivLu().inverse();
  // ghost value p(X + hg) as weights over (u_{J-3..J}, h * slope)
  std::array<double, 5> ghost{};
  const double sg = hg / h;
  for (int c = 0; c < 5; ++c) {
    double p = 1.0;
    for (int k = 0; k < 5; ++k) {
      ghost[c] += inv(k, c) * p;
      p *= sg;
    }
  }
  ghost[4] *= h;
  const double vol = 0.5 * (h + hg);
  std::array<double, 5> w{};
  for (int c = 0; c < 5; ++c) w[c] = ghost[c] / (hg * vol);
  w[3] -= (1.0 / hg + 1.0 / h) / vol;
  w[2] += 1.0 / (h * vol);
  return w;
}

// Flux weight x^2 at face j (between nodes j and j+1). The face adjacent to
// the degenerate boundary sits at x_N = 0, so its weight vanishes.
inline double face_weight(const StripGrid& g, int j)
{
  if (j == 0) return 0.0;
  const double xf = g.face(j);
  return xf * xf;
}

} // namespace detail

/// Pentadiagonal realization of
///   L_m = [D(x^2 D .) - lambda_m x^2 - beta] o [D^2 - lambda_m]
/// on interior normal nodes 1..J-1, with the Dirichlet value u_0, the outer
/// value u_J and the outer slope eliminated into coupling vectors.
struct ModeOperator {
  int mode = 0;
  double lambda = 0.0;
  PentaMatrix band;
  std::vector<double> c_dirichlet;
  std::vector<double> c_outer;
  std::vector<double> c_slope;
  /// Coefficients of the flux through the x_N = 0 face, over (u_0..u_J, slope).
  std::vector<double> boundary_face_flux;

  int interior() const { return static_cast<int>(band.size()); }

  /// y = L_m u for real interior values and boundary data.
  void apply(std::span<const double> u, double u0, double uJ, double slope, std::span<double> y) const
  {
    band.multiply(u, y);
    for (int r = 0; r < interior(); ++r) y[r] += c_dirichlet[r] * u0 + c_outer[r] * uJ + c_slope[r] * slope;
  }

  /// Boundary contribution only.
  void add_boundary(double u0, double uJ, double slope, std::span<double> y) const
  {
    for (int r = 0; r < interior(); ++r) y[r] += c_dirichlet[r] * u0 + c_outer[r] * uJ + c_slope[r] * slope;
  }

  /// Dense dump (row-major, space separated) of the interior matrix.
  void dump_dense(std::ostream& os) const
  {
    const auto n = band.size();
    os.precision(17);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) os << (c ? " " : "") << band.at(r, c);
      os << '\n';
    }
  }
};

inline ModeOperator assemble_mode_operator(const OperatorParams& params, int m)
{
  const StripGrid& g = params.grid;
  if (params.beta < 0) throw std::invalid_argument("assemble_mode_operator: beta must be >= 0");
  const int J = g.J();
  const auto& x = g.xn();
  const auto& h = g.spacing();
  const auto& V = g.normal_weights();
  const double lam = tangential_symbol(m, g);
  const int ext = J + 2;  // u_0..u_J, slope
  const int slope_col = J + 1;

  // w_k = Lap u at node k, k = 1..J, as sparse rows over the extended vector
  std::vector<std::vector<std::pair<int, double>>> w(J + 1);
  for (int k = 1; k < J; ++k) {
    const double a = 1.0 / (V[k] * h[k - 1]);
    const double c = 1.0 / (V[k] * h[k]);
    w[k] = {{k - 1, a}, {k, -a - c - lam}, {k + 1, c}};
  }
  {
    const auto ow = detail::outer_second_derivative_weights(g);
    w[J] = {{J - 3, ow[0]}, {J - 2, ow[1]}, {J - 1, ow[2]}, {J, ow[3] - lam}, {slope_col, ow[4]}};
  }

  ModeOperator op;
  op.mode = m;
  op.lambda = lam;
  op.band.rows.assign(J - 1, {0, 0, 0, 0, 0});
  op.c_dirichlet.assign(J - 1, 0.0);
  op.c_outer.assign(J - 1, 0.0);
  op.c_slope.assign(J - 1, 0.0);

  std::vector<double> row(ext, 0.0);
  auto add_w = [&](int k, double coef) {
    for (auto [col, v] : w[k]) row[col] += coef * v;
  };
  for (int j = 1; j < J; ++j) {
    std::fill(row.begin(), row.end(), 0.0);
    const double right = detail::face_weight(g, j) / (h[j] * V[j]);
    add_w(j + 1, right);
    add_w(j, -right);
    if (j > 1) {
      const double left = detail::face_weight(g, j - 1) / (h[j - 1] * V[j]);
      add_w(j, -left);
      add_w(j - 1, left);
    }
    add_w(j, -lam * x[j] * x[j] - params.beta);

    const int r = j - 1;
    for (int col = 0; col < ext; ++col) {
      const double v = row[col];
      if (v == 0.0) continue;
      if (col == 0) op.c_dirichlet[r] = v;
      else if (col == J) op.c_outer[r] = v;
      else if (col == slope_col) op.c_slope[r] = v;
      else {
        const int off = col - j;
        if (off < -2 || off > 2) throw std::logic_error("assemble_mode_operator: stencil exceeds bandwidth 2");
        op.band.rows[r][off + 2] = v;
      }
    }
  }
  // The face at x_N = 0 carries weight x^2 = 0; record its flux coefficients.
  op.boundary_face_flux.assign(ext, 0.0);
  for (auto [col, v] : w[1]) op.boundary_face_flux[col] += detail::face_weight(g, 0) * v / h[0];
  return op;
}

/// All independent tangential operators m = 0..Mx/2 (mode Mx-m shares lambda_m).
inline std::vector<ModeOperator> assemble_all_modes(const OperatorParams& params)
{
  const int modes = params.grid.Mx() / 2 + 1;
  std::vector<ModeOperator> ops(modes);
  parallel_for(modes, [&](int m) { ops[m] = assemble_mode_operator(params, m); });
  return ops;
}

namespace detail {

inline std::vector<double> column_slope(const OperatorParams& p, std::span<const double> slope)
{
  if (slope.empty() || p.outer_bc == OuterBC::clamped_zero) return std::vector<double>(p.grid.Mx(), 0.0);
  if (slope.size() != static_cast<std::size_t>(p.grid.Mx()))
    throw std::invalid_argument("outer slope must have one entry per tangential node");
  return {slope.begin(), slope.end()};
}

} // namespace detail

/// A u by tangential transform, per-mode banded multiply and inverse
/// transform. Boundary rows are taken from the snapshot; the outer slope is
/// zero for clamped_zero. Rows 0 and J of the result are set to 0.
inline FieldSnapshot apply_operator(const OperatorParams& params, const FieldSnapshot& u,
                                    std::span<const double> outer_slope = {})
{
  const StripGrid& g = params.grid;
  const int Mx = g.Mx(), J = g.J(), modes = Mx / 2 + 1;
  if (u.values.size() != g.size()) throw std::invalid_argument("apply_operator: snapshot not on grid");
  const auto slope = detail::column_slope(params, outer_slope);

  TangentialTransform field_tf(Mx, J + 1);
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(modes) * (J + 1));
  field_tf.forward(u.values, spec);
  TangentialTransform row_tf(Mx, 1);
  std::vector<std::complex<double>> slope_hat(modes);
  row_tf.forward(slope, slope_hat);

  const auto ops = assemble_all_modes(params);
  std::vector<std::complex<double>> out(spec.size(), 0.0);
  parallel_for(modes, [&](int m) {
    std::vector<double> re(J - 1), im(J - 1), yr(J - 1), yi(J - 1);
    for (int j = 1; j < J; ++j) {
      re[j - 1] = spec[j * modes + m].real();
      im[j - 1] = spec[j * modes + m].imag();
    }
    const auto u0 = spec[m], uJ = spec[J * modes + m], d = slope_hat[m];
    ops[m].apply(re, u0.real(), uJ.real(), d.real(), yr);
    ops[m].apply(im, u0.imag(), uJ.imag(), d.imag(), yi);
    for (int j = 1; j < J; ++j) out[j * modes + m] = {yr[j - 1], yi[j - 1]};
  });
  FieldSnapshot res = FieldSnapshot::zeros(g, u.time);
  field_tf.inverse(out, res.values);
  for (int i = 0; i < Mx; ++i) {
    res.values[g.index(i, 0)] = 0.0;
    res.values[g.index(i, J)] = 0.0;
  }
  return res;
}

/// Discrete Laplacian (periodic second difference plus nonuniform three-point
/// normal stencil) at nodes 1..J, using the quartic outer closure at j = J.
/// Row 0 of the result is 0.
inline std::vector<double> discrete_laplacian(const StripGrid& g, std::span<const double> u,
                                              std::span<const double> outer_slope)
{
  const int Mx = g.Mx(), J = g.J();
  const auto& h = g.spacing();
  const auto& V = g.normal_weights();
  const double ihx2 = 1.0 / (g.hx() * g.hx());
  const auto ow = detail::outer_second_derivative_weights(g);
  std::vector<double> w(g.size(), 0.0);
  for (int j = 1; j <= J; ++j)
    for (int i = 0; i < Mx; ++i) {
      const int ip = (i + 1) % Mx, im = (i + Mx - 1) % Mx;
      const double uc = u[g.index(i, j)];
      double d11 = (u[g.index(ip, j)] - 2 * uc + u[g.index(im, j)]) * ihx2;
      double dnn;
      if (j < J) {
        dnn = ((u[g.index(i, j + 1)] - uc) / h[j] - (uc - u[g.index(i, j - 1)]) / h[j - 1]) / V[j];
      } else {
        dnn = ow[0] * u[g.index(i, J - 3)] + ow[1] * u[g.index(i, J - 2)] + ow[2] * u[g.index(i, J - 1)] +
              ow[3] * uc + ow[4] * (outer_slope.empty() ? 0.0 : outer_slope[i]);
      }
      w[g.index(i, j)] = dnn + d11;
    }
  return w;
}

/// D_N(phi D_N w) at nodes 1..J-1 with face weights phi = x_face^2 (zero at the
/// degenerate face). Other rows are 0.
inline std::vector<double> weighted_flux_divergence(const StripGrid& g, std::span<const double> w)
{
  const int Mx = g.Mx(), J = g.J();
  const auto& h = g.spacing();
  const auto& V = g.normal_weights();
  std::vector<double> out(g.size(), 0.0);
  for (int j = 1; j < J; ++j) {
    const double pr = detail::face_weight(g, j), pl = detail::face_weight(g, j - 1);
    for (int i = 0; i < Mx; ++i) {
      const double wc = w[g.index(i, j)];
      const double fr = pr * (w[g.index(i, j + 1)] - wc) / h[j];
      const double fl = pl == 0.0 ? 0.0 : pl * (wc - w[g.index(i, j - 1)]) / h[j - 1];
      out[g.index(i, j)] = (fr - fl) / V[j];
    }
  }
  return out;
}

/// A u by direct real-space stencils (independent of the mode route).
inline FieldSnapshot apply_operator_direct(const OperatorParams& params, const FieldSnapshot& u,
                                           std::span<const double> outer_slope = {})
{
  const StripGrid& g = params.grid;
  const int Mx = g.Mx(), J = g.J();
  const auto slope = detail::column_slope(params, outer_slope);
  const auto w = discrete_laplacian(g, u.values, slope);
  auto res = weighted_flux_divergence(g, w);
  const double ihx2 = 1.0 / (g.hx() * g.hx());
  for (int j = 1; j < J; ++j) {
    const double x2 = g.xn()[j] * g.xn()[j];
    for (int i = 0; i < Mx; ++i) {
      const int ip = (i + 1) % Mx, im = (i + Mx - 1) % Mx;
      const double wc = w[g.index(i, j)];
      const double d11w = (w[g.index(ip, j)] - 2 * wc + w[g.index(im, j)]) * ihx2;
      res[g.index(i, j)] += x2 * d11w - params.beta * wc;
    }
  }
  return {std::move(res), u.time};
}

/// Discrete inner product over interior nodes: sum hx V_j a b, j = 1..J-1.
inline double node_inner(const StripGrid& g, std::span<const double> a, std::span<const double> b)
{
  double s = 0.0;
  for (int j = 1; j < g.J(); ++j) {
    double row = 0.0;
    for (int i = 0; i < g.Mx(); ++i) row += a[g.index(i, j)] * b[g.index(i, j)];
    s += g.normal_weights()[j] * row;
  }
  return s * g.hx();
}

/// Face values F: F[j * Mx + i] lives on the face between nodes j and j+1, j = 0..J-1.
inline double face_inner(const StripGrid& g, std::span<const double> F, std::span<const double> G)
{
  double s = 0.0;
  for (int j = 0; j < g.J(); ++j) {
    double row = 0.0;
    for (int i = 0; i < g.Mx(); ++i) row += F[static_cast<std::size_t>(j) * g.Mx() + i] * G[static_cast<std::size_t>(j) * g.Mx() + i];
    s += g.spacing()[j] * row;
  }
  return s * g.hx();
}

/// Normal difference at faces: (v_{j+1} - v_j) / h_j.
inline std::vector<double> face_difference(const StripGrid& g, std::span<const double> v)
{
  std::vector<double> out(static_cast<std::size_t>(g.J()) * g.Mx());
  for (int j = 0; j < g.J(); ++j)
    for (int i = 0; i < g.Mx(); ++i)
      out[static_cast<std::size_t>(j) * g.Mx() + i] = (v[g.index(i, j + 1)] - v[g.index(i, j)]) / g.spacing()[j];
  return out;
}

/// Node divergence of face values: (F_j - F_{j-1}) / V_j at nodes 1..J-1.
inline std::vector<double> node_divergence(const StripGrid& g, std::span<const double> F)
{
  std::vector<double> out(g.size(), 0.0);
  const auto Mx = static_cast<std::size_t>(g.Mx());
  for (int j = 1; j < g.J(); ++j)
    for (std::size_t i = 0; i < Mx; ++i)
      out[g.index(static_cast<int>(i), j)] = (F[j * Mx + i] - F[(j - 1) * Mx + i]) / g.normal_weights()[j];
  return out;
}

namespace detail {
inline bool vanishes_near_boundary(const StripGrid& g, std::span<const double> v, int layers)
{
  for (int i = 0; i < g.Mx(); ++i)
    for (int k = 0; k < layers; ++k)
      if (v[g.index(i, k)] != 0.0 || v[g.index(i, g.J() - k)] != 0.0) return false;
  return true;
}
} // namespace detail

struct SbpResult {
  double residual = 0.0;
  double scale = 0.0;          // |<D F, v>| + |<F, D v>|
  bool compact_support = true; // v zero in two cells next to each boundary
};

/// |<D_N F, v> + <F, D_N v>| with node and face inner products.
inline SbpResult sbp_residual(const StripGrid& g, std::span<const double> F, std::span<const double> v)
{
  const auto DF = node_divergence(g, F);
  const auto Dv = face_difference(g, v);
  const double a = node_inner(g, DF, v);
  const double b = face_inner(g, F, Dv);
  return {std::abs(a + b), std::abs(a) + std::abs(b), detail::vanishes_near_boundary(g, v, 3)};
}

struct EnergyIdentityResult {
  double operator_term = 0.0;  // <div(x^2 grad Lap u), u>
  double weighted_term = 0.0;  // int x^2 (Lap u)^2
  double cross_term = 0.0;     // 2 int x Lap u u_xN (matched discrete form)
  double residual = 0.0;       // |operator - weighted - cross|
  double scale = 0.0;
  bool compact_support = true;
};

/// Discrete form of <div(x^2 grad Lap u), u> = int x^2 (Lap u)^2 + 2 int x Lap u u_xN
/// for u vanishing near all boundaries. The cross term uses
/// D_N(x^2 D_N u) - x^2 D_NN u as the discrete 2 x u_xN.
inline EnergyIdentityResult energy_identity_residual(const OperatorParams& params, const FieldSnapshot& u)
{
  const StripGrid& g = params.grid;
  const int Mx = g.Mx(), J = g.J();
  EnergyIdentityResult r;
  r.compact_support = detail::vanishes_near_boundary(g, u.values, 4);
  const std::vector<double> zero_slope(Mx, 0.0);
  const auto w = discrete_laplacian(g, u.values, zero_slope);
  auto a1 = weighted_flux_divergence(g, w);
  const double ihx2 = 1.0 / (g.hx() * g.hx());
  std::vector<double> x2w(g.size(), 0.0), cross(g.size(), 0.0);
  const auto flux_u = weighted_flux_divergence(g, u.values);
  const auto& h = g.spacing();
  const auto& V = g.normal_weights();
  for (int j = 1; j < J; ++j) {
    const double x2 = g.xn()[j] * g.xn()[j];
    for (int i = 0; i < Mx; ++i) {
      const int ip = (i + 1) % Mx, im = (i + Mx - 1) % Mx;
      const auto k = g.index(i, j);
      a1[k] += x2 * (w[g.index(ip, j)] - 2 * w[k] + w[g.index(im, j)]) * ihx2;
      x2w[k] = x2 * w[k];
      const double dnn =
          ((u.values[g.index(i, j + 1)] - u.values[k]) / h[j] - (u.values[k] - u.values[g.index(i, j - 1)]) / h[j - 1]) /
          V[j];
      cross[k] = flux_u[k] - x2 * dnn;
    }
  }
  r.operator_term = node_inner(g, a1, u.values);
  r.weighted_term = node_inner(g, x2w, w);
  r.cross_term = node_inner(g, w, cross);
  r.residual = std::abs(r.operator_term - r.weighted_term - r.cross_term);
  r.scale = std::abs(r.operator_term) + std::abs(r.weighted_term) + std::abs(r.cross_term);
  return r;
}

} // namespace degen

#endif // DEGEN_DEGENERATE_OPERATOR_HPP
