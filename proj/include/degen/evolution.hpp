#ifndef DEGEN_EVOLUTION_HPP
#define DEGEN_EVOLUTION_HPP

#include "degen/degenerate_operator.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace degen {

struct SchemeConfig {
  double theta = 1.0;  // 1 = backward Euler, 1/2 = Crank-Nicolson
  double dt = 1e-3;
  double T = 1.0;
  int save_every = 1;

  void validate() const
  {
    if (!(theta >= 0.5 && theta <= 1.0)) throw std::invalid_argument("scheme: theta must lie in [1/2, 1]");
    if (!(dt > 0)) throw std::invalid_argument("scheme: dt must be positive");
    if (!(T > 0)) throw std::invalid_argument("scheme: T must be positive");
    if (dt > T * (1 + 1e-12)) throw std::invalid_argument("scheme: dt must not exceed T");
    if (save_every < 1) throw std::invalid_argument("scheme: save_every must be >= 1");
  }

  long steps() const { return std::max(1L, std::lround(T / dt)); }
};

/// Snapshots at uniformly spaced, strictly increasing save times.
struct FieldSeries {
  StripGrid grid;
  std::vector<double> times;
  std::vector<std::vector<double>> snapshots;

  std::size_t size() const { return times.size(); }
  FieldSnapshot snapshot(std::size_t n) const { return {snapshots[n], times[n]}; }
};

/// Fills out (grid.size()) with f(., t).
using ForcingFn = std::function<void(double t, std::vector<double>& out)>;
using BoundaryFn = std::function<BoundaryData(double t)>;

inline ForcingFn zero_forcing()
{
  return [](double, std::vector<double>& out) { std::fill(out.begin(), out.end(), 0.0); };
}

inline BoundaryFn zero_boundary(int Mx)
{
  return [Mx](double) { return BoundaryData::zero(Mx); };
}

class NonFiniteState : public std::runtime_error {
public:
  NonFiniteState(double t) : std::runtime_error("evolve: non-finite value at t = " + std::to_string(t)), time_(t) {}
  double time() const { return time_; }

private:
  double time_;
};

inline bool all_finite(std::span<const double> v)
{
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

namespace detail {

// Tangential spectra of the three boundary rows.
struct BoundarySpectrum {
  std::vector<std::complex<double>> dirichlet, outer, slope;
};

inline BoundarySpectrum transform_boundary(TangentialTransform& row_tf, const BoundaryData& bd, int Mx,
                                           OuterBC bc)
{
  const int modes = Mx / 2 + 1;
  auto check = [Mx](const std::vector<double>& v, const char* what) {
    if (v.size() != static_cast<std::size_t>(Mx))
      throw std::invalid_argument(std::string("boundary data: ") + what + " needs one entry per tangential node");
  };
  check(bd.dirichlet, "dirichlet");
  check(bd.outer_value, "outer_value");
  BoundarySpectrum s{std::vector<std::complex<double>>(modes), std::vector<std::complex<double>>(modes),
                     std::vector<std::complex<double>>(modes, 0.0)};
  row_tf.forward(bd.dirichlet, s.dirichlet);
  row_tf.forward(bd.outer_value, s.outer);
  if (bc == OuterBC::clamped_manufactured) {
    check(bd.outer_slope, "outer_slope");
    row_tf.forward(bd.outer_slope, s.slope);
  }
  return s;
}

} // namespace detail

/// theta-scheme for u_t + A u = f, one banded factorization per tangential mode:
///   (I + theta dt L_m) u^{n+1} = (I - (1-theta) dt L_m) u^n + dt (theta f^{n+1} + (1-theta) f^n)
/// where L_m includes the eliminated boundary data at the matching time level.
class Stepper {
public:
  Stepper(OperatorParams params, SchemeConfig scheme)
      : params_(std::move(params)), scheme_(scheme), modes_(params_.grid.Mx() / 2 + 1),
        field_tf_(params_.grid.Mx(), params_.grid.J() + 1), row_tf_(params_.grid.Mx(), 1)
  {
    scheme_.validate();
    ops_ = assemble_all_modes(params_);
    lu_.resize(modes_);
    const double c = scheme_.theta * scheme_.dt;
    parallel_for(modes_, [&](int m) {
      PentaMatrix M = ops_[m].band;
      for (std::size_t r = 0; r < M.size(); ++r) {
        for (auto& v : M.rows[r]) v *= c;
        M.rows[r][2] += 1.0;
      }
      lu_[m] = BandedLU(M, "step: mode " + std::to_string(m));
    });
  }

  const OperatorParams& params() const { return params_; }
  const SchemeConfig& scheme() const { return scheme_; }
  const std::vector<ModeOperator>& operators() const { return ops_; }

  /// Advances u_n (time t) by dt; boundary rows of the result equal bd_np1.
  FieldSnapshot step(const FieldSnapshot& u_n, std::span<const double> f_n, std::span<const double> f_np1,
                     const BoundaryData& bd_n, const BoundaryData& bd_np1)
  {
    const StripGrid& g = params_.grid;
    const int J = g.J(), Mx = g.Mx(), modes = modes_;
    const double dt = scheme_.dt, th = scheme_.theta;
    std::vector<std::complex<double>> u_hat(static_cast<std::size_t>(modes) * (J + 1));
    std::vector<std::complex<double>> fn_hat(u_hat.size()), fnp_hat(u_hat.size());
    field_tf_.forward(u_n.values, u_hat);
    field_tf_.forward(f_n, fn_hat);
    field_tf_.forward(f_np1, fnp_hat);
    const auto bn = detail::transform_boundary(row_tf_, bd_n, Mx, params_.outer_bc);
    const auto bnp = detail::transform_boundary(row_tf_, bd_np1, Mx, params_.outer_bc);

    std::vector<std::complex<double>> out(u_hat.size(), 0.0);
    parallel_for(modes, [&](int m) {
      const int n = J - 1;
      std::vector<double> rhs(2 * n), cur(n), Lu(n);
      for (int part = 0; part < 2; ++part) {
        auto comp = [part](std::complex<double> z) { return part == 0 ? z.real() : z.imag(); };
        for (int j = 1; j < J; ++j) cur[j - 1] = comp(u_hat[j * modes + m]);
        std::fill(Lu.begin(), Lu.end(), 0.0);
        if (th < 1.0) ops_[m].apply(cur, comp(bn.dirichlet[m]), comp(bn.outer[m]), comp(bn.slope[m]), Lu);
        std::vector<double> bnext(n, 0.0);
        ops_[m].add_boundary(comp(bnp.dirichlet[m]), comp(bnp.outer[m]), comp(bnp.slope[m]), bnext);
        for (int j = 1; j < J; ++j) {
          const int r = j - 1;
          rhs[part * n + r] = cur[r] - (1 - th) * dt * Lu[r] - th * dt * bnext[r] +
                              dt * (th * comp(fnp_hat[j * modes + m]) + (1 - th) * comp(fn_hat[j * modes + m]));
        }
      }
      lu_[m].solve(rhs, 2);
      for (int j = 1; j < J; ++j) out[j * modes + m] = {rhs[j - 1], rhs[n + j - 1]};
    });
    FieldSnapshot res = FieldSnapshot::zeros(g, u_n.time + dt);
    field_tf_.inverse(out, res.values);
    for (int i = 0; i < Mx; ++i) {
      res.values[g.index(i, 0)] = bd_np1.dirichlet[i];
      res.values[g.index(i, J)] = bd_np1.outer_value[i];
    }
    return res;
  }

private:
  OperatorParams params_;
  SchemeConfig scheme_;
  int modes_;
  std::vector<ModeOperator> ops_;
  std::vector<BandedLU> lu_;
  TangentialTransform field_tf_;
  TangentialTransform row_tf_;
};

/// One theta-step with a freshly assembled operator.
inline FieldSnapshot step(const OperatorParams& params, const SchemeConfig& scheme, const FieldSnapshot& u_n,
                          std::span<const double> f_n, std::span<const double> f_np1, const BoundaryData& bd_n,
                          const BoundaryData& bd_np1)
{
  Stepper s(params, scheme);
  return s.step(u_n, f_n, f_np1, bd_n, bd_np1);
}

/// Integrates from u0 at t = 0 to T; saves t = 0 and every save_every steps
/// (the final time is always saved when it falls on the save lattice).
inline FieldSeries evolve(const OperatorParams& params, const SchemeConfig& scheme, const ForcingFn& f,
                          const BoundaryFn& g, const FieldSnapshot& u0)
{
  const StripGrid& grid = params.grid;
  if (u0.values.size() != grid.size()) throw std::invalid_argument("evolve: initial snapshot not on grid");
  SchemeConfig sc = scheme;
  sc.validate();
  const long N = sc.steps();
  sc.dt = sc.T / static_cast<double>(N);
  Stepper stepper(params, sc);

  FieldSeries series;
  series.grid = grid;
  FieldSnapshot u = u0;
  u.time = 0.0;
  series.times.push_back(0.0);
  series.snapshots.push_back(u.values);

  std::vector<double> f_n(grid.size()), f_np1(grid.size());
  f(0.0, f_n);
  BoundaryData bd_n = g(0.0);
  if (!all_finite(f_n) || !all_finite(u.values)) throw NonFiniteState(0.0);
  for (long n = 0; n < N; ++n) {
    const double t_np1 = sc.T * static_cast<double>(n + 1) / static_cast<double>(N);
    f(t_np1, f_np1);
    BoundaryData bd_np1 = g(t_np1);
    if (!all_finite(f_np1) || !all_finite(bd_np1.dirichlet) || !all_finite(bd_np1.outer_value) ||
        !all_finite(bd_np1.outer_slope))
      throw NonFiniteState(t_np1);
    u = stepper.step(u, f_n, f_np1, bd_n, bd_np1);
    u.time = t_np1;
    if (!all_finite(u.values)) throw NonFiniteState(t_np1);
    if ((n + 1) % sc.save_every == 0) {
      series.times.push_back(t_np1);
      series.snapshots.push_back(u.values);
    }
    std::swap(f_n, f_np1);
    bd_n = std::move(bd_np1);
  }
  return series;
}

/// A u = f with Dirichlet data and outer clamps.
struct SteadyProblem {
  double beta = 0.0;
  StripGrid grid;
  std::vector<double> forcing;
  BoundaryData boundary;
  OuterBC outer_bc = OuterBC::clamped_zero;
};

inline FieldSnapshot solve_steady(const SteadyProblem& prob)
{
  const StripGrid& g = prob.grid;
  const int J = g.J(), Mx = g.Mx(), modes = Mx / 2 + 1;
  if (prob.forcing.size() != g.size()) throw std::invalid_argument("solve_steady: forcing not on grid");
  for (double v : prob.forcing)
    if (!std::isfinite(v)) throw std::invalid_argument("solve_steady: forcing must be finite");
  const OperatorParams params{prob.beta, g, prob.outer_bc};
  TangentialTransform field_tf(Mx, J + 1), row_tf(Mx, 1);
  std::vector<std::complex<double>> f_hat(static_cast<std::size_t>(modes) * (J + 1));
  field_tf.forward(prob.forcing, f_hat);
  const auto bs = detail::transform_boundary(row_tf, prob.boundary, Mx, prob.outer_bc);

  std::vector<std::complex<double>> out(f_hat.size(), 0.0);
  parallel_for(modes, [&](int m) {
    const ModeOperator op = assemble_mode_operator(params, m);
    const BandedLU lu(op.band, "solve_steady: mode " + std::to_string(m));
    const int n = J - 1;
    std::vector<double> rhs(2 * n);
    for (int part = 0; part < 2; ++part) {
      auto comp = [part](std::complex<double> z) { return part == 0 ? z.real() : z.imag(); };
      std::vector<double> b(n, 0.0);
      op.add_boundary(comp(bs.dirichlet[m]), comp(bs.outer[m]), comp(bs.slope[m]), b);
      for (int j = 1; j < J; ++j) rhs[part * n + j - 1] = comp(f_hat[j * modes + m]) - b[j - 1];
    }
    lu.solve(rhs, 2);
    for (int j = 1; j < J; ++j) out[j * modes + m] = {rhs[j - 1], rhs[n + j - 1]};
  });
  FieldSnapshot res = FieldSnapshot::zeros(g);
  field_tf.inverse(out, res.values);
  for (int i = 0; i < Mx; ++i) {
    res.values[g.index(i, 0)] = prob.boundary.dirichlet[i];
    res.values[g.index(i, J)] = prob.boundary.outer_value[i];
  }
  return res;
}

namespace detail {
inline std::string format_double(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
} // namespace detail

/// Writes one CSV per save time (header x1,xN,u) plus times.csv.
inline std::vector<std::filesystem::path> write_series_csv(const FieldSeries& s, const std::filesystem::path& dir)
{
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> files;
  const auto& g = s.grid;
  {
    std::ofstream t(dir / "times.csv");
    t << "index,t\n";
    for (std::size_t n = 0; n < s.size(); ++n) t << n << ',' << detail::format_double(s.times[n]) << '\n';
    files.push_back(dir / "times.csv");
  }
  for (std::size_t n = 0; n < s.size(); ++n) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%05zu.csv", n);
    std::ofstream os(dir / name);
    os << "x1,xN,u\n";
    for (int j = 0; j <= g.J(); ++j)
      for (int i = 0; i < g.Mx(); ++i)
        os << detail::format_double(g.x1()[i]) << ',' << detail::format_double(g.xn()[j]) << ','
           << detail::format_double(s.snapshots[n][g.index(i, j)]) << '\n';
    files.push_back(dir / name);
  }
  return files;
}

/// Reads a directory written by write_series_csv back onto the given grid.
inline FieldSeries read_series_csv(const StripGrid& g, const std::filesystem::path& dir)
{
  FieldSeries s;
  s.grid = g;
  std::ifstream t(dir / "times.csv");
  if (!t) throw std::runtime_error("read_series_csv: missing times.csv in " + dir.string());
  std::string line;
  std::getline(t, line);
  while (std::getline(t, line)) {
    if (line.empty()) continue;
    s.times.push_back(std::stod(line.substr(line.find(',') + 1)));
  }
  for (std::size_t n = 0; n < s.times.size(); ++n) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%05zu.csv", n);
    std::ifstream is(dir / name);
    if (!is) throw std::runtime_error(std::string("read_series_csv: missing ") + name);
    std::getline(is, line);
    std::vector<double> v;
    v.reserve(g.size());
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      v.push_back(std::stod(line.substr(line.rfind(',') + 1)));
    }
    if (v.size() != g.size()) throw std::runtime_error(std::string("read_series_csv: wrong node count in ") + name);
    s.snapshots.push_back(std::move(v));
  }
  return s;
}

} // namespace degen

#endif // DEGEN_EVOLUTION_HPP
