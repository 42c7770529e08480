#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace symconj {

using Complex = std::complex<double>;

enum class Symmetry { none, palindromic, symmetric_conjugate, both };

// File spelling: "none", "palindromic", "symmetric-conjugate", "both".
std::string_view to_string(Symmetry s);
Symmetry parse_symmetry(std::string_view text);

// True when a sequence classified as `found` may carry the declared tag.
// `none` is a non-claim and always holds; `both` covers either pattern.
bool symmetry_satisfies(Symmetry found, Symmetry declared);

/// A composition method: the step fractions alpha_j of
///   psi_h = S_{alpha_s h} o ... o S_{alpha_1 h}
/// stored in application order (coeffs[0] is applied first).
struct CoefficientSet {
  std::string name;
  int composition_order = 2;
  int projected_order = 2;
  // Declared pseudo-symmetry order of the projected method; empty for
  // methods that are exactly time-symmetric.
  std::optional<int> pseudo_symmetry_order;
  Symmetry symmetry = Symmetry::none;
  std::vector<Complex> coeffs;
  std::string provenance;

  std::size_t stages() const noexcept { return coeffs.size(); }

  friend bool operator==(const CoefficientSet&, const CoefficientSet&) = default;
};

/// The leading order-condition polynomials of a composition of a
/// time-symmetric second-order scheme (coefficients of F, Y3, [F,Y3],
/// Y5 and [F,[F,Y3]] in the associated operator series).
struct OrderConditionResidues {
  Complex w1;
  Complex w31;
  Complex w41;
  Complex w51;
  Complex w52;
};

// Throws DomainError on an empty sequence or non-finite entries.
OrderConditionResidues eval_order_conditions(std::span<const Complex> coeffs);

// Max over the conditions a method of the given composition order must satisfy
// (|w1-1| always; w31 from order 3, w41 from 4, w51 and w52 from 5).
double max_order_residual(std::span<const Complex> coeffs, int composition_order);
double max_order_residual(const CoefficientSet& set);

Symmetry classify_symmetry(std::span<const Complex> coeffs, double tol);

// Structural tolerance used for classification: 1e-14 per stage.
double structural_tolerance(std::size_t stages);

// Checks consistency (sum of coefficients is 1) and the symmetry tag.
// Throws ValidationError.
void validate(const CoefficientSet& set);

// alpha_j -> conj(alpha_j) for every stage; the conjugate family member.
CoefficientSet conjugate(const CoefficientSet& set);

/// Fourth-order triple jump (a, 1 - 2a, a) with a = 1 / (2 - 2^{1/3} e^{2 i k pi / 3}).
/// k = 0 is the classical real method, k = 1, 2 the complex conjugate pair.
CoefficientSet construct_triple_jump(int k);

const std::vector<std::string>& catalog_names();
CoefficientSet catalog_lookup(std::string_view name);
std::vector<CoefficientSet> catalog();

// s^{j-1} |sum_k alpha_k^j|, the scaled coefficient of Y_j.
double scaled_error_coefficient(std::span<const Complex> coeffs, int j);

struct ErrorModel {
  int projected_order = 0;
  double e_lo = 0.0;  // e_{r+1}
  double e_hi = 0.0;  // e_{r+3}
  double elbow = 0.0;
  bool scaled = false;
};

ErrorModel effective_error_terms(const CoefficientSet& set);

// h^r e_lo + h^{r+2} e_hi.
double effective_error_curve(const ErrorModel& model, double h);

enum class ConditionFamily { general, palindromic, symmetric_conjugate };

// Number of order conditions for the projected method of the given order.
// For symmetric-conjugate order 8 this is the 9 conditions actually required
// (the nominal count N - c(8) is 11).
int order_condition_counts(int order, ConditionFamily family);

// Line-oriented text format:
//   name <id> / stages <s> / composition_order <r> / projected_order <r'> /
//   symmetry none|palindromic|symmetric-conjugate / s lines "stage <re> <im>".
// '#' starts a comment; blank lines are ignored.
CoefficientSet parse_coefficient_text(std::string_view text);
std::string format_coefficient_text(const CoefficientSet& set);

CoefficientSet read_coefficient_file(const std::filesystem::path& path);
void write_coefficient_file(const CoefficientSet& set, const std::filesystem::path& path);

}  // namespace symconj
