#ifndef DEGEN_REMARK11_HPP
#define DEGEN_REMARK11_HPP

#include "degen/power_log.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace degen {

/// Audit of the 1-D kernel structure of l_beta: derived exponents versus the
/// reference closed-form exponents a1 = -(1/2 + sqrt(1/4+beta)),
/// a2 = -1/2 + sqrt(1/4+beta).
struct IndicialReport {
  Rational beta;
  std::vector<SurdValue> derived_roots;
  SurdValue paper_a1;
  SurdValue paper_a2;
  TermSum paper_residual_a1;
  TermSum paper_residual_a2;
};

inline IndicialReport indicial_report(const Rational& beta)
{
  IndicialReport rep;
  rep.beta = beta;
  rep.derived_roots = indicial_roots(beta);
  const SurdValue s = SurdValue::sqrt_of(Rational(1, 4) + beta);
  rep.paper_a1 = -(SurdValue(Rational(1, 2)) + s);
  rep.paper_a2 = SurdValue(Rational(-1, 2)) + s;
  rep.paper_residual_a1 = apply_lbeta(beta, TermSum::monomial(rep.paper_a1));
  rep.paper_residual_a2 = apply_lbeta(beta, TermSum::monomial(rep.paper_a2));
  return rep;
}

/// Full closed-form report for l_beta v = b restricted to the weighted class.
struct Remark11Report {
  IndicialReport indicial;
  Rational b;
  std::vector<TermSum> kernel;
  std::vector<bool> kernel_admissible;
  std::vector<TermSum> admissible_kernel;
  TermSum particular;
  bool particular_admissible = false;
  TermSum particular_residual;  // l_beta(particular) - b, exactly 0
  // Reference beta = 0 particular term -(b/2)(x^2 ln x - 3/2 x^2) and its image.
  TermSum reference_beta0_particular;
  TermSum reference_beta0_image;
  std::vector<std::string> notes;
};

inline Remark11Report remark11_report(const Rational& beta, const Rational& b)
{
  Remark11Report rep;
  rep.indicial = indicial_report(beta);
  rep.b = b;
  rep.kernel = kernel_basis(beta);
  for (const auto& k : rep.kernel) {
    const bool ok = admissible(k);
    rep.kernel_admissible.push_back(ok);
    if (ok) rep.admissible_kernel.push_back(k);
  }
  rep.particular = particular_solution(beta, b);
  rep.particular_admissible = admissible(rep.particular);
  rep.particular_residual = apply_lbeta(beta, rep.particular) - TermSum::constant(SurdValue(b));

  if (!rep.indicial.paper_residual_a1.empty() || !rep.indicial.paper_residual_a2.empty()) {
    rep.notes.push_back("reference exponents a1 = " + rep.indicial.paper_a1.str() + ", a2 = " +
                        rep.indicial.paper_a2.str() + " are not kernel exponents of l_beta: residuals " +
                        rep.indicial.paper_residual_a1.str() + " and " +
                        rep.indicial.paper_residual_a2.str());
  }
  if (beta == 0) {
    const SurdValue half_b(Rational(b / 2));
    rep.reference_beta0_particular =
        (TermSum::monomial(SurdValue(2), SurdValue(1), 1) - TermSum::monomial(SurdValue(2), SurdValue(Rational(3, 2))))
            .scaled(-half_b);
    rep.reference_beta0_image = apply_lbeta(beta, rep.reference_beta0_particular);
    if (b != 0 && rep.reference_beta0_image != TermSum::constant(SurdValue(b))) {
      rep.notes.push_back("reference beta = 0 particular term maps to " + rep.reference_beta0_image.str() +
                          ", not b = " + b.str() + "; stored particular solution is " + rep.particular.str());
    }
  }
  return rep;
}

inline nlohmann::json to_json(const SurdValue& s)
{
  return {{"p", s.p().str()}, {"q", s.q().str()}, {"r", s.r().str()}};
}

inline nlohmann::json to_json(const TermSum& v)
{
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : v.terms())
    arr.push_back({{"coeff", to_json(t.coeff)}, {"exponent", to_json(t.exponent)}, {"logpow", t.logpow}});
  return arr;
}

inline nlohmann::json to_json(const Remark11Report& rep)
{
  nlohmann::json j;
  j["beta"] = rep.indicial.beta.str();
  j["b"] = rep.b.str();
  j["derived_roots"] = nlohmann::json::array();
  for (const auto& r : rep.indicial.derived_roots) j["derived_roots"].push_back(to_json(r));
  j["kernel"] = nlohmann::json::array();
  for (const auto& k : rep.kernel) j["kernel"].push_back(to_json(k));
  j["kernel_text"] = nlohmann::json::array();
  for (const auto& k : rep.kernel) j["kernel_text"].push_back(k.str());
  j["admissible"] = rep.kernel_admissible;
  j["particular"] = to_json(rep.particular);
  j["particular_text"] = rep.particular.str();
  j["particular_admissible"] = rep.particular_admissible;
  j["paper_exponents"] = {to_json(rep.indicial.paper_a1), to_json(rep.indicial.paper_a2)};
  j["paper_residuals"] = {to_json(rep.indicial.paper_residual_a1), to_json(rep.indicial.paper_residual_a2)};
  j["paper_residuals_text"] = {rep.indicial.paper_residual_a1.str(), rep.indicial.paper_residual_a2.str()};
  if (rep.indicial.beta == 0) {
    j["reference_beta0_particular"] = rep.reference_beta0_particular.str();
    j["reference_beta0_image"] = rep.reference_beta0_image.str();
  }
  j["discrepancies"] = rep.notes;
  return j;
}

} // namespace degen

#endif // DEGEN_REMARK11_HPP
