// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "degen/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

using namespace degen;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;
  std::function<Outcome()> run;
};

std::string g17(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const Metric* metric(const EstimateReport& r, const std::string& name)
{
  for (const auto& m : r.metrics)
    if (m.name == name) return &m;
  return nullptr;
}

std::string failure_list(const EstimateReport& r)
{
  std::string s;
  for (const auto& f : r.failures()) s += (s.empty() ? "" : ",") + f;
  return s.empty() ? "none" : s;
}

TermSum x_pow(const Rational& a, unsigned logpow = 0)
{
  return TermSum::monomial(SurdValue(a), SurdValue(1), logpow);
}

std::vector<std::string> sorted_text(const std::vector<TermSum>& v)
{
  std::vector<std::string> s;
  for (const auto& t : v) s.push_back(t.str());
  std::sort(s.begin(), s.end());
  return s;
}

std::vector<std::string> sorted_text(const std::vector<SurdValue>& v)
{
  std::vector<std::string> s;
  for (const auto& t : v) s.push_back(t.str());
  std::sort(s.begin(), s.end());
  return s;
}

Outcome beta_zero_reproduction()
{
  const auto kernel = kernel_basis(Rational(0));
  const bool basis = sorted_text(kernel) ==
                     sorted_text(std::vector<TermSum>{TermSum::constant(SurdValue(1)), x_pow(1), x_pow(2), x_pow(1, 1)});
  int inadmissible = 0;
  bool xlnx_is_it = false;
  for (const auto& k : kernel)
    if (!admissible(k)) {
      ++inadmissible;
      xlnx_is_it = k == x_pow(1, 1);
    }
  bool residual_zero = true;
  for (const Rational& b : {Rational(1), Rational(-3, 2), Rational(7)})
    residual_zero = residual_zero &&
                    (apply_lbeta(Rational(0), particular_solution(Rational(0), b)) - TermSum::constant(SurdValue(b))).empty();
  const auto res = run_scenario(parse_config("scenario = remark11\nbeta = 0\nb = 1\n"));
  return {basis && inadmissible == 1 && xlnx_is_it && residual_zero && res.pass(),
          std::string("basis ") + (basis ? "match" : "MISMATCH") + ", inadmissible count " +
              std::to_string(inadmissible) + (xlnx_is_it ? " (x ln x)" : "") + ", particular residual " +
              (residual_zero ? "0" : "NONZERO")};
}

Outcome kernel_sweep()
{
  bool ok = true;
  std::string bad;
  const std::vector<Rational> betas{Rational(0), Rational(1, 4), Rational(3, 4), Rational(1), Rational(2), Rational(7, 2)};
  for (const auto& beta : betas) {
    for (const auto& k : kernel_basis(beta))
      if (!apply_lbeta(beta, k).empty()) {
        ok = false;
        bad += " kernel(" + beta.str() + ")";
      }
    const auto roots = indicial_roots(beta);
    const SurdValue s = SurdValue::sqrt_of(Rational(1, 4) + beta);
    const std::vector<SurdValue> expect{SurdValue(0), SurdValue(1), SurdValue(Rational(3, 2)) + s,
                                        SurdValue(Rational(3, 2)) - s};
    if (sorted_text(roots) != sorted_text(expect)) {
      ok = false;
      bad += " roots(" + beta.str() + ")";
    }
    for (const auto& r : roots)
      if (!indicial_residual(beta, r).is_zero()) {
        ok = false;
        bad += " residual(" + beta.str() + ")";
      }
  }
  return {ok, std::to_string(betas.size()) + " beta values, " + (ok ? "all residuals exactly 0" : "failures:" + bad)};
}

Outcome beta_two_audit()
{
  const auto rep = indicial_report(Rational(2));
  const TermSum expected = TermSum::monomial(SurdValue(-4), SurdValue(60));
  const bool a1 = rep.paper_a1 == SurdValue(-2);
  const bool residual = rep.paper_residual_a1 == expected;
  const bool roots = sorted_text(rep.derived_roots) ==
                     sorted_text(std::vector<SurdValue>{SurdValue(0), SurdValue(0), SurdValue(1), SurdValue(3)});
  const auto res = run_scenario(parse_config("scenario = remark11\nbeta = 2\nb = 1\n"));
  const Metric* m = metric(res.report, "reference_exponent_a1_residual_nonzero");
  const bool reported = m && m->informational && m->note.find(expected.str()) != std::string::npos;
  return {a1 && residual && roots && reported && res.pass(),
          "a1 = " + rep.paper_a1.str() + ", residual " + rep.paper_residual_a1.str() + ", roots " +
              (roots ? "{0,0,1,3}" : "MISMATCH") + ", run " + (res.pass() ? "pass" : "FAIL")};
}

Outcome hardy()
{
  const auto r = hardy_battery(64, 20240601u);
  return {r.all_pass(), "max random ratio " + g17(metric(r, "random_piecewise_cubic_max_ratio")->value) +
                            " (<= 4.04), analytic rel errors " +
                            g17(metric(r, "analytic_linear_rel_error")->value) + ", " +
                            g17(metric(r, "analytic_quadratic_rel_error")->value)};
}

Outcome discrete_structure()
{
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst_sbp = 0, worst_energy = 0;
  bool ok = true;
  for (const double gamma : {1.0, 2.0}) {
    const auto g = build_grid(1, 64, 1, 64, gamma);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> F(static_cast<std::size_t>(g.J()) * g.Mx());
      for (double& f : F) f = u(rng);
      FieldSnapshot v = FieldSnapshot::zeros(g);
      for (int j = 4; j <= g.J() - 4; ++j)
        for (int i = 0; i < g.Mx(); ++i) v.values[g.index(i, j)] = u(rng);
      const auto s = sbp_residual(g, F, v.values);
      const auto e = energy_identity_residual(OperatorParams{1.0, g, OuterBC::clamped_zero}, v);
      ok = ok && s.compact_support && e.compact_support && s.residual <= 1e-10 * s.scale &&
           e.residual <= 1e-10 * e.scale;
      worst_sbp = std::max(worst_sbp, s.residual / s.scale);
      worst_energy = std::max(worst_energy, e.residual / e.scale);
    }
  }
  return {ok, "max relative residual: sbp " + g17(worst_sbp) + ", energy " + g17(worst_energy) + " (<= 1e-10)"};
}

const char* manufactured_cfg = R"(scenario = manufactured
beta = 1
Lx = 1
Mx = 8
Xmax = 1
gamma = 2
theta = 1
dt = 1/256
T = 1/4
ms_time = 0, 1
ms_normal = 1*x^2
levels = 32, 64, 128
)";

const char* manufactured_cos_cfg = R"(scenario = manufactured
beta = 1
Lx = 1
Mx = 16
Xmax = 1
gamma = 2
dt = 1/64
T = 1/4
ms_time = 1, 1, 1
ms_tangential = cos
ms_k = 1
ms_normal = x^3
levels = 32, 64, 128
)";

Outcome manufactured()
{
  const auto a = run_scenario(parse_config(manufactured_cfg));
  const auto b = run_scenario(parse_config(manufactured_cos_cfg));
  const Metric* ea = metric(a.report, "finest_error");
  const Metric* oa = metric(a.report, "finest_pair_order");
  const Metric* ob = metric(b.report, "finest_pair_order");
  return {a.pass() && b.pass(), "t*x^2: finest error " + g17(ea->value) + ", order " + g17(oa->value) +
                                    " (" + oa->note + "); cos*x^3 supplementary order " + g17(ob->value)};
}

Outcome liouville()
{
  const auto res = run_scenario(parse_config(R"(scenario = liouville-t
beta = 1
Lx = 1
Mx = 16
Xmax = 1
J = 64
dt = 1e-3
T = 1
save_every = 50
c0 = 0
c1 = 1
)"));
  const double dev = metric(res.report, "max_deviation_over_1_plus_t")->value;
  const double degree = metric(res.report, "fitted_t_degree")->value;
  return {res.pass() && degree == 1.0, "max deviation/(1+t) " + g17(dev) + " (<= 1e-4), fitted degree " + g17(degree)};
}

Outcome uniqueness()
{
  int runs = 0, bad = 0;
  for (const char* beta : {"0", "1/4", "3/4", "1", "7/2"})
    for (const char* grid : {"Mx = 8\nJ = 16\ngamma = 1\n", "Mx = 16\nJ = 32\ngamma = 2\n", "Mx = 32\nJ = 64\ngamma = 1.5\n"})
      for (const char* theta : {"1/2", "1"}) {
        const auto res = run_scenario(parse_config(std::string("scenario = uniqueness\nbeta = ") + beta + "\n" + grid +
                                                   "theta = " + theta + "\ndt = 1e-3\nT = 0.02\n"));
        ++runs;
        if (!res.pass()) ++bad;
      }
  return {bad == 0, std::to_string(runs) + " runs (beta x grid x theta), " + std::to_string(bad) + " with nonzero snapshots"};
}

// Golden values from the first computation at the coarse level.
struct Golden {
  double R, rho1, rho2;
};
constexpr Golden caccioppoli_golden[] = {
    {0.25, 0.035244561635983614, 0.0005521828310875552},
    {0.5, 0.001904653273277485, 0.0004653787296575501},
};

Outcome caccioppoli()
{
  const auto cfg = parse_config(R"(scenario = estimates
beta = 1
Lx = 4
Mx = 32
Xmax = 4
J = 32
gamma = 1
theta = 1
dt = 1/256
T = 3
save_every = 4
initial = bump
x1c = 2
xnc = 0
tc = 2
radii = 0.25, 0.5
q = 2
)");
  const auto r = caccioppoli_battery(cfg);
  bool ok = r.all_pass();
  std::ostringstream os;
  for (const auto& gd : caccioppoli_golden) {
    const std::string p = "R=" + detail::fmt_tag(gd.R) + ".";
    for (const auto& [key, golden] : {std::pair{"rho1", gd.rho1}, std::pair{"rho2", gd.rho2}}) {
      const Metric* m = metric(r, p + key);
      const Metric* ch = metric(r, p + key + "_refinement_change");
      if (!m || !ch) {
        ok = false;
        os << p << key << " missing; ";
        continue;
      }
      const double drift = std::abs(m->value - golden) / golden;
      ok = ok && m->defined && std::isfinite(m->value) && drift <= 0.10 && ch->pass;
      os << p << key << "=" << g17(m->value) << " (golden drift " << g17(drift) << ", refinement "
         << g17(ch->value) << ") ";
    }
  }
  if (!r.all_pass()) os << "failures: " << failure_list(r);
  return {ok, os.str()};
}

Outcome mollifier()
{
  const auto r = mollifier_battery(0.2, 0.0, 1.0, 1234u);
  return {r.all_pass(), "constants " + g17(metric(r, "constant_preservation")->value) + ", degree fit " +
                            g17(metric(r, "degree_fit_relative_residual")->value) + ", scaling errors " +
                            g17(metric(r, "scaling_dx_rel_error")->value) + "/" +
                            g17(metric(r, "scaling_dt_rel_error")->value) + "/" +
                            g17(metric(r, "scaling_dxx_rel_error")->value) + " (<= 0.2)"};
}

Outcome iteration()
{
  const auto r = iteration_battery();
  return {r.all_pass(), "failures: " + failure_list(r)};
}

} // namespace

int main()
{
  const std::vector<Criterion> criteria{
      {1, "beta=0 kernel, admissibility and particular solution", 1, beta_zero_reproduction},
      {2, "kernel exactness sweep", 1, kernel_sweep},
      {3, "beta=2 exponent audit", 1, beta_two_audit},
      {4, "Hardy inequality", 10, hardy},
      {5, "summation by parts and energy identity", 10, discrete_structure},
      {6, "manufactured convergence", 300, manufactured},
      {7, "polynomial-in-t structure", 120, liouville},
      {8, "uniqueness from zero data", 30, uniqueness},
      {9, "Caccioppoli ratios", 600, caccioppoli},
      {10, "mollifier suite", 30, mollifier},
      {11, "iteration lemma checker", 1, iteration},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.time_limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s #%d %s: %s [%.2f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(), secs,
                in_time ? "" : ", over time limit");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
