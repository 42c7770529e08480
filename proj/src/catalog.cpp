#include <algorithm>
#include <cstdlib>
#include <string>

#include "symconj/coefficients.hpp"
#include "symconj/errors.hpp"

namespace symconj {

namespace {

// Printed decimal expansions; parsed to the nearest double at load.
struct DecimalStage {
  const char* re;
  const char* im;
};

struct Entry {
  const char* name;
  int composition_order;
  int projected_order;
  int pseudo_symmetry_order;
  const char* provenance;
  // First half of a symmetric-conjugate sequence (alpha_1 ... alpha_m) plus
  // the real middle stage when s is odd.
  std::vector<DecimalStage> half;
  const char* middle;
};

double parse_decimal(const char* text) { return std::strtod(text, nullptr); }

std::vector<Complex> expand(const Entry& e) {
  std::vector<Complex> out;
  for (const auto& st : e.half) out.emplace_back(parse_decimal(st.re), parse_decimal(st.im));
  const std::size_t m = out.size();
  if (e.middle != nullptr) out.emplace_back(parse_decimal(e.middle), 0.0);
  for (std::size_t j = m; j-- > 0;) out.push_back(std::conj(out[j]));
  return out;
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {"SC2", 3, 4, 7,
       "2-stage symmetric-conjugate, alpha = 1/2 + i sqrt(3)/6; order 3, order 4 after projection",
       // First applied stage is conj(alpha).
       {{"0.5", "-0.2886751345948128822545744"}}, nullptr},
      {"SC3", 4, 4, 11,
       "3-stage symmetric-conjugate, alpha1 = 1/4 + i sqrt(5/3)/4, alpha2 = 1/2",
       {{"0.25", "0.3227486121839514070982721"}}, "0.5"},
      {"SC5", 5, 6, 11,
       "5-stage symmetric-conjugate order-5 composition; order 6 after projection",
       {{"0.1752684090720741140583563", "0.05761474413053870201304364"},
        {"0.1848736801929841604288898", "-0.1941219227572495885067758"}},
       "0.2797158214698834510255077"},
      {"SC9", 5, 8, 11,
       "9-stage symmetric-conjugate order-5 composition with vanishing order-7 terms; order 8 after projection",
       {{"0.08848457824129988495666830", "-0.07427185309152124718276000"},
        {"0.15956870501880174198291033", "0.02322565281009720913454462"},
        {"0.09359461460849451904251162", "0.13796356924496549819619086"},
        {"0.15769224955121857774144315", "-0.07166960107892295549940996"}},
       "0.00131970516037055255293318"},
      {"SC11", 7, 8, 15,
       "11-stage symmetric-conjugate order-7 composition; order 8 after projection",
       {{"0.07683292597738736205503", "-0.05965805084613860757735"},
        {"0.12844482070368650612973", "0.02479812697572531668668"},
        {"0.06855723904168450389158", "0.11276129325339482617990"},
        {"0.11879414810128891257046", "-0.04055765731534572031090"},
        {"0.10279469076169306832515", "0.06735917341353737963638"}},
       "0.009152350828519294056116"},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {"SC2", "SC3", "SC5", "SC9", "SC11", "PR3", "PC3"};
  return names;
}

CoefficientSet catalog_lookup(std::string_view name) {
  for (const Entry& e : entries()) {
    if (name != e.name) continue;
    CoefficientSet set;
    set.name = e.name;
    set.composition_order = e.composition_order;
    set.projected_order = e.projected_order;
    set.pseudo_symmetry_order = e.pseudo_symmetry_order;
    set.symmetry = Symmetry::symmetric_conjugate;
    set.coeffs = expand(e);
    set.provenance = e.provenance;
    return set;
  }
  if (name == "PR3") return construct_triple_jump(0);
  if (name == "PC3") return construct_triple_jump(1);

  std::string known;
  for (const auto& n : catalog_names()) known += (known.empty() ? "" : ", ") + n;
  throw LookupError("unknown method '" + std::string(name) + "'; available: " + known);
}

std::vector<CoefficientSet> catalog() {
  std::vector<CoefficientSet> all;
  for (const auto& n : catalog_names()) all.push_back(catalog_lookup(n));
  return all;
}

}  // namespace symconj
