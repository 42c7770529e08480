#include "symconj/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "symconj/errors.hpp"

namespace symconj {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Repeated multiplication keeps conj(pow(z)) == pow(conj(z)) bit-exactly,
// which std::pow's exp/log route does not.
Complex ipow(Complex z, int n) {
  Complex r = 1.0;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

}  // namespace

std::string_view to_string(Symmetry s) {
  switch (s) {
    case Symmetry::none: return "none";
    case Symmetry::palindromic: return "palindromic";
    case Symmetry::symmetric_conjugate: return "symmetric-conjugate";
    case Symmetry::both: return "both";
  }
  return "none";
}

Symmetry parse_symmetry(std::string_view text) {
  if (text == "none") return Symmetry::none;
  if (text == "palindromic") return Symmetry::palindromic;
  if (text == "symmetric-conjugate" || text == "symmetric_conjugate") return Symmetry::symmetric_conjugate;
  if (text == "both") return Symmetry::both;
  throw DomainError("unknown symmetry tag '" + std::string(text) + "'");
}

bool symmetry_satisfies(Symmetry found, Symmetry declared) {
  if (declared == Symmetry::none) return true;
  if (found == Symmetry::both) return true;
  return found == declared;
}

OrderConditionResidues eval_order_conditions(std::span<const Complex> a) {
  if (a.empty()) throw DomainError("eval_order_conditions: empty coefficient sequence");
  for (const Complex& z : a) {
    if (!finite(z)) throw DomainError("eval_order_conditions: non-finite coefficient");
  }
  const std::size_t s = a.size();

  // before[j] = sum_{k<j} alpha_k, after[j] = sum_{k>j} alpha_k (empty sums are 0).
  std::vector<Complex> before(s, 0.0), after(s, 0.0), after3(s, 0.0);
  for (std::size_t j = 1; j < s; ++j) before[j] = before[j - 1] + a[j - 1];
  for (std::size_t j = s - 1; j-- > 0;) {
    after[j] = after[j + 1] + a[j + 1];
    after3[j] = after3[j + 1] + ipow(a[j + 1], 3);
  }

  OrderConditionResidues w{0.0, 0.0, 0.0, 0.0, 0.0};
  Complex w41 = 0.0, w52a = 0.0, w52b = 0.0;
  for (std::size_t j = 0; j < s; ++j) {
    const Complex a3 = ipow(a[j], 3);
    const Complex a4 = a3 * a[j];
    w.w1 += a[j];
    w.w31 += a3;
    w.w51 += a4 * a[j];
    if (j + 1 < s) w41 += a3 * after[j] - a[j] * after3[j];
    w52a += a3 * (before[j] * before[j] + after[j] * after[j] - 4.0 * before[j] * after[j]);
    w52b += a4 * (before[j] + after[j]);
  }
  w.w41 = 0.5 * w41;
  w.w52 = w52a / 12.0 - w52b / 12.0;
  return w;
}

double max_order_residual(std::span<const Complex> coeffs, int composition_order) {
  const auto w = eval_order_conditions(coeffs);
  double r = std::abs(w.w1 - 1.0);
  if (composition_order >= 3) r = std::max(r, std::abs(w.w31));
  if (composition_order >= 4) r = std::max(r, std::abs(w.w41));
  if (composition_order >= 5) r = std::max({r, std::abs(w.w51), std::abs(w.w52)});
  return r;
}

double max_order_residual(const CoefficientSet& set) {
  return max_order_residual(set.coeffs, set.composition_order);
}

double structural_tolerance(std::size_t stages) { return 1e-14 * static_cast<double>(stages); }

Symmetry classify_symmetry(std::span<const Complex> a, double tol) {
  const std::size_t s = a.size();
  bool pal = s > 0;
  bool conj = s > 0;
  for (std::size_t j = 0; j < s; ++j) {
    const Complex& x = a[j];
    const Complex& y = a[s - 1 - j];
    if (std::abs(x.real() - y.real()) > tol) {
      pal = conj = false;
      break;
    }
    if (std::abs(x.imag() - y.imag()) > tol) pal = false;
    if (std::abs(x.imag() + y.imag()) > tol) conj = false;
  }
  if (pal && conj) return Symmetry::both;
  if (pal) return Symmetry::palindromic;
  if (conj) return Symmetry::symmetric_conjugate;
  return Symmetry::none;
}

void validate(const CoefficientSet& set) {
  if (set.coeffs.empty()) throw ValidationError(set.name + ": no stages");
  Complex sum = 0.0;
  for (const Complex& z : set.coeffs) {
    if (!finite(z)) throw ValidationError(set.name + ": non-finite coefficient");
    sum += z;
  }
  if (std::abs(sum.real() - 1.0) > 1e-13 || std::abs(sum.imag()) > 1e-13) {
    throw ValidationError(set.name + ": coefficients do not sum to 1 (sum = " +
                          std::to_string(sum.real()) + " + " + std::to_string(sum.imag()) + "i)");
  }
  const Symmetry found = classify_symmetry(set.coeffs, structural_tolerance(set.stages()));
  if (!symmetry_satisfies(found, set.symmetry)) {
    throw ValidationError(set.name + ": declared symmetry " + std::string(to_string(set.symmetry)) +
                          " but coefficients are " + std::string(to_string(found)));
  }
}

CoefficientSet conjugate(const CoefficientSet& set) {
  CoefficientSet out = set;
  for (Complex& z : out.coeffs) z = std::conj(z);
  return out;
}

CoefficientSet construct_triple_jump(int k) {
  if (k < 0 || k > 2) throw DomainError("construct_triple_jump: k must be 0, 1 or 2");
  const double cbrt2 = std::cbrt(2.0);
  Complex a1;
  if (k == 0) {
    a1 = 1.0 / (2.0 - cbrt2);
  } else {
    const Complex root = std::polar(1.0, 2.0 * k * std::numbers::pi / 3.0);
    a1 = 1.0 / (2.0 - cbrt2 * root);
  }
  CoefficientSet set;
  set.name = k == 0 ? "PR3" : (k == 1 ? "PC3" : "PC3k2");
  set.composition_order = 4;
  set.projected_order = 4;
  if (k != 0) set.pseudo_symmetry_order = 9;
  set.symmetry = Symmetry::palindromic;
  set.coeffs = {a1, 1.0 - 2.0 * a1, a1};
  set.provenance = "triple jump, alpha1 = 1/(2 - 2^(1/3) exp(2 i k pi/3)), k = " + std::to_string(k);
  return set;
}

double scaled_error_coefficient(std::span<const Complex> coeffs, int j) {
  Complex sum = 0.0;
  for (const Complex& z : coeffs) sum += ipow(z, j);
  return std::pow(static_cast<double>(coeffs.size()), j - 1) * std::abs(sum);
}

ErrorModel effective_error_terms(const CoefficientSet& set) {
  const int r = set.projected_order;
  if (r < 4 || r % 2 != 0) {
    throw DomainError("effective_error_terms: projected order must be even and >= 4 (got " +
                      std::to_string(r) + ")");
  }
  ErrorModel m;
  m.projected_order = r;
  m.e_lo = scaled_error_coefficient(set.coeffs, r + 1);
  m.e_hi = scaled_error_coefficient(set.coeffs, r + 3);
  m.elbow = m.e_hi > 0.0 ? std::sqrt(m.e_lo / m.e_hi) : std::numeric_limits<double>::infinity();
  m.scaled = true;
  return m;
}

double effective_error_curve(const ErrorModel& model, double h) {
  const int r = model.projected_order;
  return std::pow(h, r) * model.e_lo + std::pow(h, r + 2) * model.e_hi;
}

int order_condition_counts(int order, ConditionFamily family) {
  static constexpr int general[] = {1, 0, 2, 3, 5, 7, 11, 16};
  static constexpr int palindromic[] = {1, 2, 4, 8};
  static constexpr int sym_conj[] = {1, 2, 5, 9};
  const auto out_of_table = [&] {
    return DomainError("order_condition_counts: no tabulated value for order " + std::to_string(order));
  };
  if (order < 1 || order > 8) throw out_of_table();
  switch (family) {
    case ConditionFamily::general:
      return general[order - 1];
    case ConditionFamily::palindromic:
      if (order % 2 != 0) throw out_of_table();
      return palindromic[order / 2 - 1];
    case ConditionFamily::symmetric_conjugate:
      if (order % 2 != 0) throw out_of_table();
      return sym_conj[order / 2 - 1];
  }
  throw out_of_table();
}

}  // namespace symconj
