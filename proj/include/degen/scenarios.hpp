#ifndef DEGEN_SCENARIOS_HPP
#define DEGEN_SCENARIOS_HPP

#include "degen/caccioppoli.hpp"
#include "degen/cutoff.hpp"
#include "degen/estimate_report.hpp"
#include "degen/evolution.hpp"
#include "degen/inequalities.hpp"
#include "degen/iteration_lemma.hpp"
#include "degen/manufactured.hpp"
#include "degen/mollifier.hpp"
#include "degen/remark11.hpp"
#include "degen/run_config.hpp"
#include "degen/weighted_class.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace degen {

struct ScenarioResult {
  std::string scenario;
  RunConfig config;
  EstimateReport report;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();  // scenario-specific payload
  std::vector<std::filesystem::path> artifacts;
  std::filesystem::path report_path;
  double duration_s = 0.0;

  bool pass() const { return report.all_pass(); }
};

namespace detail {

inline std::string fmt_tag(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

/// Smallest polynomial degree in t (<= max_degree) fitting the samples to
/// rel_tol * max|samples|; -1 if none does.
inline int fit_time_degree(std::span<const double> t, std::span<const double> y, int max_degree = 4,
                           double rel_tol = 1e-8)
{
  double scale = 0.0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0;
  const double c = 0.5 * (t.front() + t.back()), s = std::max(0.5 * (t.back() - t.front()), 1e-300);
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::VectorXd Y(n);
  for (Eigen::Index k = 0; k < n; ++k) Y(k) = y[k];
  for (int d = 0; d <= max_degree && d < n; ++d) {
    Eigen::MatrixXd A(n, d + 1);
    for (Eigen::Index k = 0; k < n; ++k)
      for (int p = 0; p <= d; ++p) A(k, p) = std::pow((t[k] - c) / s, p);
    const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(Y);
    if ((A * coef - Y).cwiseAbs().maxCoeff() <= rel_tol * scale) return d;
  }
  return -1;
}

/// Numeric verdict on x^2 D^4 v and x D^3 v near 0 from samples at 1e-6 and
/// 1e-9: bounded quantities may not grow by more than a factor 2.
/// FNV-1a of the canonical config text, so identical configs share an id.
inline std::string run_id(const RunConfig& cfg)
{
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : serialize_config(cfg)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline bool admissible_by_sampling(const TermSum& v)
{
  const NumericTermSum d3(differentiate(v, 3)), d4(differentiate(v, 4));
  auto w3 = [&](double x) { return std::abs(x * d3(x)); };
  auto w4 = [&](double x) { return std::abs(x * x * d4(x)); };
  const double a = 1e-6, b = 1e-9;
  return w3(b) <= 2 * w3(a) + 1e-12 && w4(b) <= 2 * w4(a) + 1e-12;
}

} // namespace detail

// ---------------------------------------------------------------- remark11

inline ScenarioResult run_remark11(const RunConfig& cfg)
{
  ScenarioResult res;
  res.scenario = "remark11";
  res.config = cfg;
  auto& r = res.report;
  const auto rep = remark11_report(cfg.beta, cfg.b);
  bool kernel_exact = true;
  for (const auto& k : rep.kernel) kernel_exact = kernel_exact && apply_lbeta(cfg.beta, k).empty();
  r.check_true("kernel_residuals_zero", kernel_exact, "l_beta applied to every kernel element is exactly 0");
  bool roots_ok = rep.indicial.derived_roots.size() == 4;
  for (const auto& a : rep.indicial.derived_roots) roots_ok = roots_ok && indicial_residual(cfg.beta, a).is_zero();
  r.check_true("indicial_roots_verified", roots_ok);
  r.check_true("particular_residual_zero", rep.particular_residual.empty(),
               "l_beta(v_p) - b = " + (rep.particular_residual.empty() ? std::string("0") : rep.particular_residual.str()));
  bool verdicts = true;
  for (std::size_t k = 0; k < rep.kernel.size(); ++k)
    verdicts = verdicts && rep.kernel_admissible[k] == detail::admissible_by_sampling(rep.kernel[k]);
  r.check_true("admissibility_verdicts", verdicts, "symbolic verdicts agree with sampled weighted derivatives");
  r.inform("admissible_kernel_dimension", static_cast<double>(rep.admissible_kernel.size()));
  if (cfg.beta == 0) {
    const SurdValue one(1);
    std::set<std::string> expect{TermSum::constant(one).str(), TermSum::monomial(one).str(),
                                 TermSum::monomial(SurdValue(2)).str(), TermSum::monomial(one, one, 1).str()};
    std::set<std::string> got;
    for (const auto& k : rep.kernel) got.insert(k.str());
    std::size_t inadmissible = 0;
    bool xlnx_excluded = false;
    for (std::size_t k = 0; k < rep.kernel.size(); ++k)
      if (!rep.kernel_admissible[k]) {
        ++inadmissible;
        xlnx_excluded = rep.kernel[k] == TermSum::monomial(one, one, 1);
      }
    r.check_true("beta0_basis_match", got == expect, "kernel {1, x, x^2, x ln x}");
    r.check_true("beta0_xlnx_unique_inadmissible", inadmissible == 1 && xlnx_excluded);
  }
  for (int k = 0; k < 2; ++k) {
    const auto& resid = k == 0 ? rep.indicial.paper_residual_a1 : rep.indicial.paper_residual_a2;
    const auto& a = k == 0 ? rep.indicial.paper_a1 : rep.indicial.paper_a2;
    r.inform(std::string("reference_exponent_a") + char('1' + k) + "_residual_nonzero", resid.empty() ? 0.0 : 1.0,
             "x^(" + a.str() + ") -> " + (resid.empty() ? std::string("0") : resid.str()));
  }
  for (std::size_t n = 0; n < rep.notes.size(); ++n) r.inform("discrepancy_" + std::to_string(n + 1), 1.0, rep.notes[n]);
  res.extra["remark11"] = nlohmann::ordered_json::parse(to_json(rep).dump());
  return res;
}

// ---------------------------------------------------------------- manufactured

inline ManufacturedSolution manufactured_from_config(const RunConfig& cfg)
{
  ManufacturedSolution ms;
  ms.time_coeffs = cfg.ms_time;
  ms.kind = cfg.ms_tangential == "cos" ? TangentialKind::cosine
            : cfg.ms_tangential == "sin" ? TangentialKind::sine
                                         : TangentialKind::one;
  ms.k = cfg.ms_k;
  ms.normal = parse_normal_profile(cfg.ms_normal);
  return ms;
}

struct ManufacturedLevel {
  int J = 0, Mx = 0;
  double dt = 0.0, error = 0.0, scale = 0.0;
};

inline ManufacturedLevel manufactured_level(const RunConfig& cfg, const ManufacturedForcing& mf, int J)
{
  ManufacturedLevel lv;
  lv.J = J;
  const double ratio = static_cast<double>(J) / cfg.levels.front();
  lv.Mx = std::max(8, 2 * static_cast<int>(std::lround(cfg.Mx * ratio / 2)));
  lv.dt = std::min(cfg.T, cfg.dt / (ratio * ratio));
  const StripGrid g = build_grid(cfg.Lx, lv.Mx, cfg.Xmax, J, cfg.gamma);
  const OperatorParams p{to_double(cfg.beta), g, OuterBC::clamped_manufactured};
  SchemeConfig sc{cfg.theta, lv.dt, cfg.T, 1};
  sc.save_every = static_cast<int>(sc.steps());
  const auto s = evolve(p, sc, mf.sampler(g, cfg.forcing_bias), mf.boundary(g), mf.sample_exact(g, 0.0));
  const auto exact = mf.sample_exact(g, s.times.back());
  for (std::size_t k = 0; k < exact.values.size(); ++k) {
    lv.error = std::max(lv.error, std::abs(s.snapshots.back()[k] - exact.values[k]));
    lv.scale = std::max(lv.scale, std::abs(exact.values[k]));
  }
  return lv;
}

inline ScenarioResult run_manufactured(const RunConfig& cfg)
{
  ScenarioResult res;
  res.scenario = "manufactured";
  res.config = cfg;
  auto& r = res.report;
  const auto mf = manufactured_forcing(manufactured_from_config(cfg), cfg.beta, cfg.Lx);
  Table t{"manufactured_errors", {"J", "Mx", "dt", "max_error", "observed_order"}, {}};
  std::vector<ManufacturedLevel> lv;
  for (int J : cfg.levels) {
    lv.push_back(manufactured_level(cfg, mf, J));
    const double order = lv.size() > 1 ? std::log2(lv[lv.size() - 2].error / lv.back().error) /
                                             std::log2(static_cast<double>(J) / lv[lv.size() - 2].J)
                                       : NAN;
    t.rows.push_back({static_cast<double>(J), static_cast<double>(lv.back().Mx), lv.back().dt, lv.back().error, order});
  }
  r.tables.push_back(t);
  const auto& fine = lv.back();
  const auto& mid = lv[lv.size() - 2];
  const double order = std::log2(mid.error / fine.error) / std::log2(static_cast<double>(fine.J) / mid.J);
  // a solution the scheme reproduces exactly has no observable order: both
  // finest errors sit at rounding level
  const double floor = 1e-10 * std::max(1.0, fine.scale);
  const bool exact = fine.error <= floor && mid.error <= floor;
  Metric m{"finest_pair_order", order, 1.8, std::isfinite(order), false, false, {}};
  m.pass = (m.defined && order >= 1.8) || exact;
  if (exact) m.note = "errors at rounding level (<= 1e-10 scale) on both finest levels";
  r.metrics.push_back(m);
  r.inform("finest_error", fine.error);
  r.inform("solution_scale", fine.scale);
  res.extra["forcing_spatial"] = {{"P0", mf.P0.str()}, {"P1", mf.P1.str()}, {"P2", mf.P2.str()}};
  return res;
}

// ---------------------------------------------------------------- liouville-t

inline ScenarioResult run_liouville_t(const RunConfig& cfg)
{
  ScenarioResult res;
  res.scenario = "liouville-t";
  res.config = cfg;
  auto& r = res.report;
  const StripGrid g = cfg.grid();
  const double beta = to_double(cfg.beta);
  const auto zero_bd = BoundaryData::zero(g.Mx());
  std::vector<double> f1(g.size(), cfg.c1);
  const auto a = solve_steady({beta, g, f1, zero_bd, OuterBC::clamped_zero});
  std::vector<double> f0(g.size());
  for (std::size_t k = 0; k < f0.size(); ++k) f0[k] = cfg.c0 - a.values[k];
  const auto b = solve_steady({beta, g, f0, zero_bd, OuterBC::clamped_zero});
  const OperatorParams p{beta, g, OuterBC::clamped_zero};
  const ForcingFn f = [&](double t, std::vector<double>& out) { std::fill(out.begin(), out.end(), cfg.c0 + cfg.c1 * t); };
  const auto s = evolve(p, cfg.scheme(), f, zero_boundary(g.Mx()), b);
  Table t{"liouville_deviation", {"t", "max_deviation"}, {}};
  double worst = 0.0;
  for (std::size_t n = 0; n < s.size(); ++n) {
    double dev = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
      dev = std::max(dev, std::abs(s.snapshots[n][k] - (b.values[k] + a.values[k] * s.times[n])));
    t.rows.push_back({s.times[n], dev});
    worst = std::max(worst, dev / (1 + std::abs(s.times[n])));
  }
  r.tables.push_back(t);
  r.check_le("max_deviation_over_1_plus_t", worst, cfg.tolerance);
  const int deg_f = cfg.c1 != 0 ? 1 : 0;
  const std::pair<int, int> probes[] = {{g.Mx() / 2, g.J() / 4}, {0, g.J() / 2}, {g.Mx() / 4, (3 * g.J()) / 4}};
  bool degree_ok = true;
  int fitted = 0;
  for (auto [i, j] : probes) {
    std::vector<double> y;
    for (const auto& u : s.snapshots) y.push_back(u[g.index(i, j)]);
    fitted = detail::fit_time_degree(s.times, y);
    degree_ok = degree_ok && fitted == deg_f;
  }
  r.check_true("fitted_t_degree_matches_forcing", degree_ok,
               "deg f = " + std::to_string(deg_f) + ", fitted = " + std::to_string(fitted));
  r.inform("fitted_t_degree", fitted);
  double amax = 0.0;
  for (double v : a.values) amax = std::max(amax, std::abs(v));
  r.inform("max_abs_a", amax);
  if (!cfg.out.empty()) {
    const auto dir = std::filesystem::path(cfg.out) / "series";
    for (auto& path : write_series_csv(s, dir)) res.artifacts.push_back(path);
  }
  return res;
}

// ---------------------------------------------------------------- uniqueness

inline ScenarioResult run_uniqueness(const RunConfig& cfg)
{
  ScenarioResult res;
  res.scenario = "uniqueness";
  res.config = cfg;
  auto& r = res.report;
  const StripGrid g = cfg.grid();
  const OperatorParams p{to_double(cfg.beta), g, OuterBC::clamped_zero};
  FieldSnapshot u0 = FieldSnapshot::zeros(g);
  u0.values[g.index(g.Mx() / 2, g.J() / 2)] = cfg.perturbation;
  const auto s = evolve(p, cfg.scheme(), zero_forcing(), zero_boundary(g.Mx()), u0);
  double maxabs = 0.0;
  bool bitwise = true;
  for (const auto& u : s.snapshots)
    for (double v : u) {
      maxabs = std::max(maxabs, std::abs(v));
      bitwise = bitwise && v == 0.0;
    }
  if (cfg.perturbation == 0.0) {
    r.check_true("all_snapshots_exactly_zero", bitwise);
    r.check_le("max_abs_u", maxabs, 0.0);
  } else {
    double last = 0.0;
    for (double v : s.snapshots.back()) last = std::max(last, std::abs(v));
    r.check_le("final_over_initial_max", last / std::abs(cfg.perturbation), 1.0 - 1e-12,
               "injected perturbation decays");
  }
  r.inform("snapshots", static_cast<double>(s.size()));
  return res;
}

// ---------------------------------------------------------------- estimates

inline EstimateReport hardy_battery(int J, unsigned seed)
{
  EstimateReport r;
  const double R = 1.0;
  std::vector<double> x(J + 1), w(J + 1);
  for (int j = 0; j <= J; ++j) x[j] = R * j / J;
  for (int j = 0; j <= J; ++j) w[j] = R - x[j];
  r.check_le("analytic_linear_rel_error", std::abs(hardy_ratio(x, w).ratio - 1.0), 0.01, "w = R - x, ratio 1");
  for (int j = 0; j <= J; ++j) w[j] = x[j] * (R - x[j]);
  r.check_le("analytic_quadratic_rel_error", std::abs(hardy_ratio(x, w).ratio / 0.25 - 1.0), 0.01,
             "w = x(R - x), ratio 1/4");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int knots = 5;
    std::vector<double> kv(knots + 1), ks(knots + 1);
    for (int k = 0; k <= knots; ++k) {
      kv[k] = U(rng);
      ks[k] = 3 * U(rng);
    }
    kv[knots] = 0.0;
    const StripGrid g(1.0, 8, R, J, trial % 2 ? 2.0 : 1.0);
    for (int j = 0; j <= J; ++j) {
      const double sk = g.xn()[j] / R * knots;
      const int k = std::min(static_cast<int>(sk), knots - 1);
      const double u = sk - k;
      w[j] = (2 * u * u * u - 3 * u * u + 1) * kv[k] + (u * u * u - 2 * u * u + u) * ks[k] +
             (-2 * u * u * u + 3 * u * u) * kv[k + 1] + (u * u * u - u * u) * ks[k + 1];
    }
    w[J] = 0.0;
    worst = std::max(worst, hardy_ratio(g.xn(), w).ratio);
  }
  r.check_le("random_piecewise_cubic_max_ratio", worst, 4.04, "100 samples, constant 4 (1 + 1e-2)");
  return r;
}

inline EstimateReport interpolation_battery(int n, unsigned seed)
{
  EstimateReport r;
  const StripGrid g(2.0, n, 2.0, n, 1.0);
  std::vector<double> v(g.size(), 0.0);
  for (int j = 0; j <= g.J(); ++j)
    for (int i = 0; i < g.Mx(); ++i) {
      const double a = (g.x1()[i] - 1.0) / 0.6, b = (g.xn()[j] - 1.0) / 0.6, s = a * a + b * b;
      v[g.index(i, j)] = s < 1 ? std::pow(1 - s, 4) : 0.0;
    }
  r.check_le("bump_ratio", interpolation_check(g, v).ratio, 1.05);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::fill(v.begin(), v.end(), 0.0);
    for (int j = 3; j <= g.J() - 3; ++j)
      for (int i = 0; i < g.Mx(); ++i) v[g.index(i, j)] = U(rng);
    worst = std::max(worst, interpolation_check(g, v).ratio);
  }
  r.check_le("random_compact_max_ratio", worst, 1 + 10 * g.Xmax() / g.J());
  return r;
}

inline EstimateReport cutoff_battery()
{
  EstimateReport r;
  const StripGrid g(8.0, 256, 8.0, 256, 1.0);
  Table t{"scaling", {"R", "q_minus_1", "derivative", "measured_max", "scaled", "profile_constant"}, {}};
  double lo = INFINITY, hi = 0.0;
  bool unit_range = true;
  for (double R : {0.5, 1.0})
    for (double qm1 : {0.25, 0.5, 1.0}) {
      const ParabolicCylinder c{4.0, 4.0, 2.0, R};
      const double w = qm1 * R, tq = (1 + qm1) * R;
      std::vector<double> times;
      const int nt = static_cast<int>(std::lround(2 * tq * tq / (w * w / 4))) + 1;
      for (int k = 0; k < nt; ++k) times.push_back(c.tc - tq * tq + k * w * w / 4);
      const auto s = build_cutoff(g, times, c, 1 + qm1);
      for (int d = 0; d < CutoffFunction::derivative_count; ++d) {
        const double C = CutoffFunction::profile_constant(static_cast<CutoffFunction::Derivative>(d));
        lo = std::min(lo, s.scaled[d] / C);
        hi = std::max(hi, s.scaled[d] / C);
        t.rows.push_back({R, qm1, static_cast<double>(d), s.max_derivative[d], s.scaled[d], C});
      }
      for (const auto& v : s.values)
        for (double e : v) unit_range = unit_range && e >= 0 && e <= 1;
      unit_range = unit_range && s.eta(c.x1c, c.xnc, c.tc) == 1.0 && s.eta(c.x1c + (1 + qm1) * R, c.xnc, c.tc) == 0.0;
    }
  r.tables.push_back(t);
  r.check_le("max_scaled_over_profile_constant", hi, 1.0 + 1e-12, "(q-1)R)^order max|D eta| <= C_profile");
  r.check_ge("min_scaled_over_profile_constant", lo, 0.85, "scaling ((q-1)R)^-order within 15%");
  r.check_true("values_in_unit_interval_one_on_QR_zero_outside", unit_range);
  return r;
}

inline EstimateReport mollifier_battery(double eps, double M, double C, unsigned seed)
{
  EstimateReport r;
  const double d = eps / 8;
  const MollifierKernel k(eps, d, d);
  const int n = 6 * k.radius_x() + 12;
  const auto one = Lattice2D::sample(0, d, n, 0, d, n, [](double, double) { return 1.0; });
  double cdev = 0.0;
  for (double v : mollify(one, k).values) cdev = std::max(cdev, std::abs(v - 1.0));
  r.check_le("constant_preservation", cdev, 1e-10);
  bool preserved = true;
  double worst_res = 0.0;
  for (int deg = 0; deg <= 6; ++deg)
    for (int b = 0; b <= deg; ++b) {
      const auto p = Lattice2D::sample(-0.5, 0.025, 48, 0.0, 0.025, 48, [&](double x, double t) {
        return std::pow(x, deg - b) * std::pow(t, b) + 0.5;
      });
      const MollifierKernel kk(0.2, 0.025, 0.025);
      const auto chk = mollifier_degree_check(p, kk);
      preserved = preserved && chk.preserved && chk.input_degree == deg;
      worst_res = std::max(worst_res, chk.mollified.residual / std::max(chk.mollified.scale, 1e-300));
    }
  r.check_true("degree_preserved_up_to_6", preserved);
  r.check_le("degree_fit_relative_residual", worst_res, 1e-8);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  auto u = Lattice2D::zeros(0, d, n, 0, d, n);
  const double R = 1.0, amp = C * std::pow(R, M);
  for (double& v : u.values) v = amp * U(rng);
  double worst_ratio = 0.0;
  for (auto [a, b] : {std::pair{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}})
    worst_ratio = std::max(worst_ratio, mollifier_derivative_bound(u, k, a, b, R, M, C).ratio);
  r.check_le("derivative_bound_ratio", worst_ratio, 1.0, "|D u_eps| <= C_kernel eps^-(|a|+b) C R^M");

  // eps -> eps/2 on data with a jump: first derivatives double, second quadruple
  const double dx = eps / 16;
  const int m = static_cast<int>(std::lround(2.5 * eps / dx)) * 2 + 1;
  auto jump_x = Lattice2D::sample(-1.25 * eps, dx, m, 0, dx, m, [](double x, double) { return x < 0 ? 0.0 : 1.0; });
  auto jump_t = Lattice2D::sample(0, dx, m, -1.25 * eps, dx, m, [](double, double t) { return t < 0 ? 0.0 : 1.0; });
  const MollifierKernel k1(eps, dx, dx), k2(eps / 2, dx, dx);
  auto growth = [&](const Lattice2D& h, int a, int b) {
    return mollifier_derivative_bound(h, k2, a, b, 1, 0).measured / mollifier_derivative_bound(h, k1, a, b, 1, 0).measured;
  };
  r.check_le("scaling_dx_rel_error", std::abs(growth(jump_x, 1, 0) / 2 - 1), 0.2);
  r.check_le("scaling_dt_rel_error", std::abs(growth(jump_t, 0, 1) / 2 - 1), 0.2);
  r.check_le("scaling_dxx_rel_error", std::abs(growth(jump_x, 2, 0) / 4 - 1), 0.2);
  return r;
}

inline EstimateReport iteration_battery()
{
  EstimateReport r;
  IterationLemmaInput c;
  for (int k = 0; k <= 40; ++k) {
    c.r.push_back(1.0 + k / 40.0);
    c.f.push_back(2.0);
  }
  c.theta = 0.5;
  c.A = 1.0;
  c.a = 2.0;
  c.B = 2.0;
  const auto rc = iteration_lemma_check(c);
  r.check_true("constant_hypothesis_ok", rc.hypothesis_ok);
  r.check_le("constant_min_constant", rc.min_constant, 1.0);

  bool power_ok = true;
  double worst = 0.0;
  for (double a : {0.5, 1.0, 2.0, 4.0}) {
    IterationLemmaInput p;
    for (int k = 0; k <= 50; ++k) {
      const double t = 0.5 + 0.5 * k / 50.0;
      p.r.push_back(t);
      p.f.push_back(2.0 * std::pow(1.01 - t, -a));
    }
    p.theta = 0.5;
    p.A = 2.0;
    p.a = a;
    const auto rp = iteration_lemma_check(p);
    power_ok = power_ok && rp.hypothesis_ok && std::isfinite(rp.min_constant);
    worst = std::max(worst, rp.min_constant);
  }
  r.check_true("power_family_hypothesis_ok", power_ok);
  r.check_le("power_family_min_constant", worst, 1.0 + 1e-12);

  IterationLemmaInput s;
  for (int k = 0; k <= 50; ++k) {
    s.r.push_back(k / 50.0);
    s.f.push_back(k == 25 ? 1000.0 : 1.0);
  }
  s.A = 1.0;
  s.a = 1.0;
  s.B = 1.0;
  r.check_true("spike_detected", !iteration_lemma_check(s).hypothesis_ok);

  IterationLemmaInput v{{0.0, 0.5, 1.0}, {1.0, 0.5, 0.0}, 0.5, 0.0, 0.0, 1.0};
  r.check_true("zero_constants_vacuous", iteration_lemma_check(v).vacuous);
  return r;
}

/// Free decay (f = 0, g = 0) of a compact bump, or of zero data.
inline FieldSeries decay_series(const RunConfig& cfg, int refine)
{
  const StripGrid g = build_grid(cfg.Lx, cfg.Mx * refine, cfg.Xmax, cfg.J * refine, cfg.gamma);
  const OperatorParams p{to_double(cfg.beta), g, OuterBC::clamped_zero};
  SchemeConfig sc = cfg.scheme();
  sc.dt /= refine * refine;
  sc.save_every *= refine * refine;
  FieldSnapshot u0 = FieldSnapshot::zeros(g);
  if (cfg.initial == "bump") {
    const double c1 = cfg.x1c, cn = 0.3 * cfg.Xmax, r1 = 0.25 * cfg.Lx, rn = 0.25 * cfg.Xmax;
    for (int j = 0; j <= g.J(); ++j)
      for (int i = 0; i < g.Mx(); ++i) {
        double d1 = g.x1()[i] - c1;
        d1 -= cfg.Lx * std::round(d1 / cfg.Lx);
        const double a = d1 / r1, b = (g.xn()[j] - cn) / rn, s = a * a + b * b;
        u0.values[g.index(i, j)] = s < 1 ? std::pow(1 - s, 4) : 0.0;
      }
  }
  return evolve(p, sc, zero_forcing(), zero_boundary(g.Mx()), u0);
}

struct CaccioppoliStudy {
  std::vector<CaccioppoliRow> coarse, fine;
};

inline EstimateReport caccioppoli_battery(const RunConfig& cfg, CaccioppoliStudy* study = nullptr)
{
  EstimateReport r;
  const auto cyls = cfg.cylinders();
  const auto s1 = decay_series(cfg, 1);
  const auto s2 = decay_series(cfg, 2);
  CaccioppoliStudy st;
  auto rc = caccioppoli_report(s1, cyls, cfg.q, &st.coarse);
  auto rf = caccioppoli_report(s2, cyls, cfg.q, &st.fine);
  rc.tables[0].name = "coarse";
  rf.tables[0].name = "fine";
  r.tables.push_back(rc.tables[0]);
  r.tables.push_back(rf.tables[0]);
  for (std::size_t k = 0; k < cyls.size(); ++k) {
    const auto& c = st.coarse[k];
    const auto& f = st.fine[k];
    const std::string tag = "R=" + detail::fmt_tag(cyls[k].R) + ".";
    if (!c.defined || !f.defined) {
      r.inform(tag + "rho1", NAN, "undefined: zero mass on Q_qR");
      r.inform(tag + "rho2", NAN, "undefined: zero mass on Q_qR");
      continue;
    }
    r.inform(tag + "rho1", c.rho1);
    r.inform(tag + "rho2", c.rho2);
    r.inform(tag + "rho1_fine", f.rho1);
    r.inform(tag + "rho2_fine", f.rho2);
    r.check_le(tag + "rho1_refinement_change", std::abs(f.rho1 / c.rho1 - 1), 0.25);
    r.check_le(tag + "rho2_refinement_change", std::abs(f.rho2 / c.rho2 - 1), 0.25);
    const double h10 = higher_derivative_ratio(s1, 1, 0, cyls[k], cfg.q);
    const double h01 = higher_derivative_ratio(s1, 0, 1, cyls[k], cfg.q);
    const double h00 = higher_derivative_ratio(s1, 0, 0, cyls[k], cfg.q);
    r.check_le(tag + "higher_a1_vs_rho1_tangential", std::abs(h10 - c.rho1_tangential), 1e-10 * c.rho1);
    r.check_le(tag + "higher_b1_vs_rho2", std::abs(h01 - c.rho2), 1e-10 * c.rho2);
    r.check_le(tag + "higher_a0_b0", h00, 1.0, "int_{Q_R} u^2 / int_{Q_qR} u^2");
  }
  if (cyls.size() > 1 && st.coarse.front().defined && st.coarse.back().defined) {
    r.inform("rho1_ratio_largest_to_smallest_R", st.coarse.back().rho1 / st.coarse.front().rho1);
    r.inform("rho2_ratio_largest_to_smallest_R", st.coarse.back().rho2 / st.coarse.front().rho2);
  }
  if (s1.grid.J() >= 15) {
    const auto wc = weighted_class_report(s1);
    r.inform("weighted_sup_x2_D4u", wc.sup_x2_d4);
    r.inform("weighted_sup_x_D3u", wc.sup_x_d3);
  }
  if (study) *study = std::move(st);
  return r;
}

inline EstimateReport weighted_class_battery()
{
  EstimateReport r;
  std::vector<WeightedClassReport> adm, log;
  for (int J : {64, 128, 256}) {
    const StripGrid g(1.0, 8, 1.0, J, 2.0);
    FieldSeries s{g, {0.0}, {std::vector<double>(g.size(), 0.0)}}, sl = s, sq = s;
    for (int j = 1; j <= J; ++j)
      for (int i = 0; i < g.Mx(); ++i) {
        const double x = g.xn()[j];
        s.snapshots[0][g.index(i, j)] = std::pow(x, 2.5);
        sl.snapshots[0][g.index(i, j)] = x * std::log(x);
        sq.snapshots[0][g.index(i, j)] = x * x;
      }
    adm.push_back(weighted_class_report(s));
    log.push_back(weighted_class_report(sl));
    if (J == 64) r.check_le("quadratic_sup_x2_D4u", weighted_class_report(sq).sup_x2_d4, 1e-8);
  }
  r.check_true("admissible_x52_bounded_trend", weighted_class_trend(adm).bounded);
  r.check_true("x_ln_x_flagged_unbounded", !weighted_class_trend(log).bounded);
  return r;
}

inline ScenarioResult run_estimates(const RunConfig& cfg)
{
  ScenarioResult res;
  res.scenario = "estimates";
  res.config = cfg;
  auto& r = res.report;
  r.merge(hardy_battery(std::max(64, cfg.J), cfg.seed), "hardy.");
  r.merge(interpolation_battery(std::max(32, cfg.J), cfg.seed), "interpolation.");
  r.merge(cutoff_battery(), "cutoff.");
  r.merge(mollifier_battery(cfg.eps, cfg.growth_M, cfg.growth_C, cfg.seed), "mollifier.");
  r.merge(iteration_battery(), "iteration_lemma.");
  r.merge(weighted_class_battery(), "weighted_class.");
  r.merge(caccioppoli_battery(cfg), "caccioppoli.");
  return res;
}

// ---------------------------------------------------------------- dispatch and output

inline ScenarioResult run_scenario(const RunConfig& cfg)
{
  const auto start = std::chrono::steady_clock::now();
  ScenarioResult res;
  if (cfg.scenario == "remark11") res = run_remark11(cfg);
  else if (cfg.scenario == "manufactured") res = run_manufactured(cfg);
  else if (cfg.scenario == "liouville-t") res = run_liouville_t(cfg);
  else if (cfg.scenario == "uniqueness") res = run_uniqueness(cfg);
  else if (cfg.scenario == "estimates") res = run_estimates(cfg);
  else throw std::invalid_argument("unknown scenario '" + cfg.scenario + "'");
  res.duration_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.report.provenance["grid"] = {{"Lx", cfg.Lx}, {"Mx", cfg.Mx}, {"Xmax", cfg.Xmax}, {"J", cfg.J}, {"gamma", cfg.gamma}};
  res.report.provenance["scheme"] = {{"theta", cfg.theta}, {"dt", cfg.dt}, {"T", cfg.T}, {"save_every", cfg.save_every}};
  res.report.provenance["run_id"] = detail::run_id(cfg);
  return res;
}

inline nlohmann::ordered_json report_json(const ScenarioResult& res, const std::filesystem::path& dir)
{
  nlohmann::ordered_json j;
  j["scenario"] = res.scenario;
  j["status"] = res.pass() ? "pass" : "fail";
  j["config"] = config_json(res.config);
  j["metrics"] = metrics_json(res.report);
  j["provenance"] = res.report.provenance;
  nlohmann::ordered_json arts = nlohmann::ordered_json::array();
  for (const auto& a : res.artifacts) arts.push_back(std::filesystem::relative(a, dir).generic_string());
  j["artifacts"] = arts;
  for (const auto& [k, v] : res.extra.items()) j[k] = v;
  return j;
}

/// Writes report.json and one CSV per table into dir; returns the exit code
/// (0 iff every metric passed) and names failed metrics on err.
inline int emit_report(ScenarioResult& res, const std::filesystem::path& dir, std::ostream& err = std::cerr)
{
  std::filesystem::create_directories(dir);
  for (const auto& t : res.report.tables) res.artifacts.push_back(write_table_csv(t, dir));
  res.report_path = dir / "report.json";
  std::ofstream os(res.report_path);
  os << report_json(res, dir).dump(2) << '\n';
  os.close();
  if (!os) throw std::runtime_error("emit_report: cannot write " + res.report_path.string());
  const auto failed = res.report.failures();
  for (const auto& name : failed) err << "FAILED metric: " << name << '\n';
  return failed.empty() ? 0 : 1;
}

} // namespace degen

#endif // DEGEN_SCENARIOS_HPP
