#ifndef DEGEN_RUN_CONFIG_HPP
#define DEGEN_RUN_CONFIG_HPP

#include "degen/evolution.hpp"
#include "degen/surd.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace degen {

class ConfigError : public std::runtime_error {
public:
  ConfigError(int line, const std::string& msg)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line)
  {
  }
  int line() const { return line_; }

private:
  int line_;
};

/// Exact value of "p", "p/q" or a finite decimal such as "-0.125" or "1e-3".
inline Rational parse_exact_number(const std::string& text)
{
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s.push_back(c);
  if (s.find('/') != std::string::npos) return parse_rational(s);
  std::size_t epos = s.find_first_of("eE");
  std::string mant = s.substr(0, epos);
  long exp10 = 0;
  if (epos != std::string::npos) {
    const std::string e = s.substr(epos + 1);
    std::size_t used = 0;
    try {
      exp10 = std::stol(e, &used);
    } catch (...) {
      used = 0;
    }
    if (e.empty() || used != e.size()) throw std::invalid_argument("malformed number: '" + text + "'");
  }
  const auto dot = mant.find('.');
  if (dot != std::string::npos) {
    const std::string frac = mant.substr(dot + 1);
    mant = mant.substr(0, dot) + frac;
    exp10 -= static_cast<long>(frac.size());
    if (mant.empty() || mant == "-" || mant == "+") throw std::invalid_argument("malformed number: '" + text + "'");
  }
  Rational v;
  try {
    v = parse_rational(mant);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("malformed number: '" + text + "'");
  }
  const Rational ten(10);
  for (long k = 0; k < std::abs(exp10); ++k) {
    if (exp10 > 0) v *= ten;
    else v /= ten;
  }
  return v;
}

inline std::string format_number(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// One scenario run. Field values are typed; `entries` keeps the key/value
/// text exactly as read, in file order, for the report header.
struct RunConfig {
  std::string scenario;
  Rational beta{0};
  Rational b{0};

  // grid and scheme
  double Lx = 1.0, Xmax = 1.0, gamma = 2.0;
  int Mx = 16, J = 32;
  double theta = 1.0, dt = 1e-3, T = 1.0;
  int save_every = 1;

  // liouville-t forcing f = c0 + c1 t
  double c0 = 0.0, c1 = 0.0;
  double tolerance = 1e-4;

  // manufactured solution u = T(t) X(x1) V(xN)
  std::vector<Rational> ms_time{Rational(1)};
  std::string ms_tangential = "one";
  int ms_k = 0;
  std::string ms_normal = "1*x^2";
  std::vector<int> levels{32, 64, 128};
  double forcing_bias = 0.0;

  // uniqueness negative control
  double perturbation = 0.0;

  // estimates
  std::string initial = "bump";
  double x1c = 0.5, xnc = 0.0, tc = 1.0;
  std::vector<double> radii{0.25, 0.5};
  double q = 2.0;
  double eps = 0.2;
  double growth_M = 0.0, growth_C = 1.0;
  unsigned seed = 1;

  std::string out;
  std::vector<std::pair<std::string, std::string>> entries;

  bool operator==(const RunConfig& o) const
  {
    return scenario == o.scenario && beta == o.beta && b == o.b && Lx == o.Lx && Xmax == o.Xmax &&
           gamma == o.gamma && Mx == o.Mx && J == o.J && theta == o.theta && dt == o.dt && T == o.T &&
           save_every == o.save_every && c0 == o.c0 && c1 == o.c1 && tolerance == o.tolerance &&
           ms_time == o.ms_time && ms_tangential == o.ms_tangential && ms_k == o.ms_k && ms_normal == o.ms_normal &&
           levels == o.levels && forcing_bias == o.forcing_bias && perturbation == o.perturbation &&
           initial == o.initial && x1c == o.x1c && xnc == o.xnc && tc == o.tc && radii == o.radii && q == o.q &&
           eps == o.eps && growth_M == o.growth_M && growth_C == o.growth_C && seed == o.seed && out == o.out;
  }

  StripGrid grid() const { return build_grid(Lx, Mx, Xmax, J, gamma); }
  SchemeConfig scheme() const { return {theta, dt, T, save_every}; }
  std::vector<ParabolicCylinder> cylinders() const
  {
    std::vector<ParabolicCylinder> c;
    for (double R : radii) c.push_back({x1c, xnc, tc, R});
    return c;
  }
};

inline const std::vector<std::string>& known_scenarios()
{
  static const std::vector<std::string> s{"remark11", "manufactured", "liouville-t", "uniqueness", "estimates"};
  return s;
}

namespace detail {

inline std::string trim(const std::string& s)
{
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_list(const std::string& v)
{
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::invalid_argument("empty list element in '" + v + "'");
    out.push_back(item);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

inline double to_real(const std::string& v) { return to_double(parse_exact_number(v)); }

inline int to_int(const std::string& v)
{
  const Rational r = parse_exact_number(v);
  if (boost::multiprecision::denominator(r) != 1) throw std::invalid_argument("expected an integer, got '" + v + "'");
  return boost::multiprecision::numerator(r).convert_to<int>();
}

template <class T>
std::string join(const std::vector<T>& v, const std::function<std::string(const T&)>& f)
{
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + f(v[k]);
  return s;
}

struct KeySpec {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

inline const std::vector<std::pair<std::string, KeySpec>>& key_table()
{
  using C = RunConfig;
  auto real = [](double C::*m) {
    return KeySpec{[m](C& c, const std::string& v) { c.*m = to_real(v); },
                   [m](const C& c) { return format_number(c.*m); }};
  };
  auto integer = [](int C::*m) {
    return KeySpec{[m](C& c, const std::string& v) { c.*m = to_int(v); },
                   [m](const C& c) { return std::to_string(c.*m); }};
  };
  auto rational = [](Rational C::*m) {
    return KeySpec{[m](C& c, const std::string& v) { c.*m = parse_exact_number(v); },
                   [m](const C& c) { return (c.*m).str(); }};
  };
  auto text = [](std::string C::*m) {
    return KeySpec{[m](C& c, const std::string& v) { c.*m = v; }, [m](const C& c) { return c.*m; }};
  };
  static const std::vector<std::pair<std::string, KeySpec>> table{
      {"scenario", text(&C::scenario)},
      {"beta", rational(&C::beta)},
      {"b", rational(&C::b)},
      {"Lx", real(&C::Lx)},
      {"Mx", integer(&C::Mx)},
      {"Xmax", real(&C::Xmax)},
      {"J", integer(&C::J)},
      {"gamma", real(&C::gamma)},
      {"theta", real(&C::theta)},
      {"dt", real(&C::dt)},
      {"T", real(&C::T)},
      {"save_every", integer(&C::save_every)},
      {"c0", real(&C::c0)},
      {"c1", real(&C::c1)},
      {"tolerance", real(&C::tolerance)},
      {"ms_time",
       {[](C& c, const std::string& v) {
          c.ms_time.clear();
          for (const auto& s : split_list(v)) c.ms_time.push_back(parse_exact_number(s));
        },
        [](const C& c) { return join<Rational>(c.ms_time, [](const Rational& r) { return r.str(); }); }}},
      {"ms_tangential", text(&C::ms_tangential)},
      {"ms_k", integer(&C::ms_k)},
      {"ms_normal", text(&C::ms_normal)},
      {"levels",
       {[](C& c, const std::string& v) {
          c.levels.clear();
          for (const auto& s : split_list(v)) c.levels.push_back(to_int(s));
        },
        [](const C& c) { return join<int>(c.levels, [](const int& k) { return std::to_string(k); }); }}},
      {"forcing_bias", real(&C::forcing_bias)},
      {"perturbation", real(&C::perturbation)},
      {"initial", text(&C::initial)},
      {"x1c", real(&C::x1c)},
      {"xnc", real(&C::xnc)},
      {"tc", real(&C::tc)},
      {"radii",
       {[](C& c, const std::string& v) {
          c.radii.clear();
          for (const auto& s : split_list(v)) c.radii.push_back(to_real(s));
        },
        [](const C& c) { return join<double>(c.radii, [](const double& r) { return format_number(r); }); }}},
      {"q", real(&C::q)},
      {"eps", real(&C::eps)},
      {"growth_M", real(&C::growth_M)},
      {"growth_C", real(&C::growth_C)},
      {"seed",
       {[](C& c, const std::string& v) {
          const int s = to_int(v);
          if (s < 0) throw std::invalid_argument("seed must be >= 0");
          c.seed = static_cast<unsigned>(s);
        },
        [](const C& c) { return std::to_string(c.seed); }}},
      {"out", text(&C::out)},
  };
  return table;
}

} // namespace detail

/// Parses a normal-factor description "c*x^e*ln^k + ..." such as
/// "1*x^2", "-1/2*x^5/2" or "3*x^2*ln^1". Exponents are rational.
inline TermSum parse_normal_profile(const std::string& text)
{
  TermSum sum;
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty normal profile");
  // split on + and on - that start a new term
  std::vector<std::string> terms;
  std::string cur;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const char c = s[k];
    if ((c == '+' || c == '-') && k > 0 && s[k - 1] != '^' && s[k - 1] != '/' && s[k - 1] != '*') {
      terms.push_back(cur);
      cur = c == '-' ? "-" : "";
      continue;
    }
    cur.push_back(c);
  }
  terms.push_back(cur);
  for (const auto& t : terms) {
    Rational coeff(1), expo(0);
    unsigned logpow = 0;
    std::stringstream ss(t);
    std::string factor;
    bool first = true;
    while (std::getline(ss, factor, '*')) {
      if (factor.rfind("x^", 0) == 0 || factor.rfind("-x^", 0) == 0) {
        if (factor[0] == '-') coeff = -coeff;
        expo = parse_exact_number(factor.substr(factor.find('^') + 1));
      } else if (factor == "x") {
        expo = 1;
      } else if (factor.rfind("ln^", 0) == 0) {
        logpow = static_cast<unsigned>(detail::to_int(factor.substr(3)));
      } else if (factor == "ln") {
        logpow = 1;
      } else if (first) {
        coeff = parse_exact_number(factor);
      } else {
        throw std::invalid_argument("malformed normal profile term '" + t + "'");
      }
      first = false;
    }
    sum = sum + TermSum::monomial(SurdValue(expo), SurdValue(coeff), logpow);
  }
  return sum;
}

inline void validate_config(RunConfig& c, const std::map<std::string, int>& lines)
{
  auto line_of = [&](const std::string& k) {
    const auto it = lines.find(k);
    return it == lines.end() ? 0 : it->second;
  };
  auto fail = [&](const std::string& key, const std::string& msg) { throw ConfigError(line_of(key), msg); };
  if (!lines.count("scenario")) throw ConfigError(0, "missing mandatory key 'scenario'");
  if (std::find(known_scenarios().begin(), known_scenarios().end(), c.scenario) == known_scenarios().end())
    fail("scenario", "unknown scenario '" + c.scenario + "'");
  if (!lines.count("beta")) throw ConfigError(0, "missing mandatory key 'beta'");
  if (c.beta < 0) fail("beta", "beta must be ≥ 0");
  try {
    (void)c.grid();
  } catch (const std::invalid_argument& e) {
    fail(lines.count("J") ? "J" : "Mx", e.what());
  }
  try {
    c.scheme().validate();
  } catch (const std::invalid_argument& e) {
    fail(lines.count("dt") ? "dt" : "T", e.what());
  }
  if (c.ms_tangential != "one" && c.ms_tangential != "cos" && c.ms_tangential != "sin")
    fail("ms_tangential", "ms_tangential must be one, cos or sin");
  try {
    (void)parse_normal_profile(c.ms_normal);
  } catch (const std::invalid_argument& e) {
    fail("ms_normal", e.what());
  }
  if (c.levels.size() < 2) fail("levels", "need at least two refinement levels");
  for (int J : c.levels)
    if (J < 16) fail("levels", "refinement levels must be >= 16");
  if (c.initial != "bump" && c.initial != "zero") fail("initial", "initial must be bump or zero");
  if (c.scenario == "estimates") {
    if (!(c.q > 1 && c.q < 3)) fail("q", "q must lie in (1, 3)");
    if (!(c.eps > 0 && c.eps < 1)) fail("eps", "eps must lie in (0, 1)");
    const StripGrid g = c.grid();
    const std::vector<double> window{0.0, c.T};
    for (double R : c.radii) {
      if (!(R > 0)) fail("radii", "radii must be positive");
      const ParabolicCylinder cyl{c.x1c, c.xnc, c.tc, R};
      if (cylinder_mask(g, cyl.scaled(c.q), window).clipped)
        fail("radii", "cylinder Q_qR with R = " + format_number(R) + " is clipped by the grid or [0, T]");
    }
  }
}

/// Parses `key = value` lines; `#` starts a comment. Unknown or repeated keys
/// and malformed values are errors carrying the line number.
inline RunConfig parse_config(const std::string& text)
{
  RunConfig c;
  std::map<std::string, int> lines;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(lineno, "expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(lineno, "empty key");
    if (value.empty()) throw ConfigError(lineno, "empty value for '" + key + "'");
    const auto& table = detail::key_table();
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& p) { return p.first == key; });
    if (it == table.end()) throw ConfigError(lineno, "unknown key '" + key + "'");
    if (lines.count(key)) throw ConfigError(lineno, "repeated key '" + key + "'");
    try {
      it->second.set(c, value);
    } catch (const std::exception& e) {
      throw ConfigError(lineno, key + ": " + e.what());
    }
    lines[key] = lineno;
    c.entries.emplace_back(key, value);
  }
  validate_config(c, lines);
  return c;
}

inline RunConfig load_config(const std::string& path)
{
  std::ifstream is(path);
  if (!is) throw ConfigError(0, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

/// Every key with its current value, one per line, in a fixed order.
inline std::string serialize_config(const RunConfig& c)
{
  std::string s;
  for (const auto& [key, spec] : detail::key_table()) {
    const std::string v = spec.get(c);
    if (v.empty()) continue;
    s += key + " = " + v + "\n";
  }
  return s;
}

/// Key/value text as read.
inline nlohmann::ordered_json config_json(const RunConfig& c)
{
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : c.entries) j[k] = v;
  return j;
}

} // namespace degen

#endif // DEGEN_RUN_CONFIG_HPP
