#pragma once

#include <cstdint>
#include <vector>

#include "symconj/coefficients.hpp"

namespace symconj {

/// Multistart search for symmetric-conjugate sequences of a given order.
/// Free parameters: Re/Im of each leading pair member alpha_1..alpha_{s/2}
/// plus the real middle stage when s is odd (s reals in total).
struct SearchProblem {
  int stages = 3;
  int target_order = 4;
  std::uint64_t seed = 1;
  double box = 1.0;
  int max_starts = 200;

  int free_parameters() const noexcept { return stages; }
};

struct RankedSolution {
  CoefficientSet set;
  double one_norm = 0.0;
  double leading_error = 0.0;
  double residual = 0.0;
};

// Parameter vector <-> coefficient sequence.
std::vector<Complex> coefficients_from_parameters(std::span<const double> params, int stages);
// Symmetrises first: alpha_j is replaced by (alpha_j + conj(alpha_{s+1-j})) / 2.
std::vector<double> parameters_from_coefficients(std::span<const Complex> coeffs);

// Real residuals that do not vanish by symmetry alone:
// [Re w1 - 1], then Re w31 (order >= 3), Im w41 (>= 4), Re w51, Re w52 (5).
std::vector<double> residual_vector(std::span<const double> params, int stages, int target_order);

// Ranked, deduplicated roots with positive real parts. Empty when no start converges.
std::vector<RankedSolution> multistart_search(const SearchProblem& problem);

// Newton refinement of a nearby root at the set's composition order
// (capped at 5); throws NonConvergenceError outside the basin.
CoefficientSet polish(const CoefficientSet& set);

}  // namespace symconj
