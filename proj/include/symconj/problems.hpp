#pragma once

#include <cstdint>
#include <memory>

#include <Eigen/Dense>

#include "symconj/engine.hpp"
#include "symconj/polynomial.hpp"

namespace symconj {

struct Problem {
  SplitSystem system;
  State initial;
};

// H = p^2/2 + q^2/2.
SplitSystem harmonic_oscillator();
State harmonic_oscillator_initial(double q0, double p0);
// Exact rotation flow.
State harmonic_oscillator_exact(const State& x0, double t);

// Planar Kepler problem, mu = 1, started at pericentre of an orbit with
// eccentricity e. The kick uses the principal branch of (q.q)^{-3/2}.
Problem kepler(double e);

// H = p^2/2 + 1 - cos q.
SplitSystem pendulum();
State pendulum_initial(double alpha);

/// x' = (A + B) x with seeded random A, B of unit spectral norm; drift and
/// kick are the exact flows exp(tau A), exp(tau B). The state lives in `q`
/// (p is empty). The energy slot reports |x|^2 / 2, which is not conserved.
struct LinearSplitOracle {
  SplitSystem system;
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;

  State initial(std::uint64_t seed) const;
  State exact(const State& x0, double t) const;
  Eigen::MatrixXcd exact_propagator(Complex t) const;
};

// `commuting` draws diagonal A and B.
LinearSplitOracle linear_split_oracle(std::uint64_t seed, std::size_t dim, bool commuting = false);

// M_T(a/2) M_V(a) M_T(a/2) with a = alpha h, as an exact cubic in h.
HPolynomialMatrix ho_stage_polynomial(Complex alpha, int degree);
// Product of the stage matrices in application order, truncated at `degree`.
HPolynomialMatrix ho_step_polynomial(const CoefficientSet& set, int degree);
HPolynomialMatrix ho_step_polynomial(const MethodSpec& spec, int degree);

/// Endpoint reference for problems without a closed-form flow: SC11 with
/// per-step projection at h / 50, checked against a run at half that step.
/// The reference step is not taken below kMinReferenceStep, where
/// accumulated roundoff exceeds the truncation error.
inline constexpr double kMinReferenceStep = 0.005;

struct Reference {
  State state;
  double h_ref = 0.0;
  // Max-norm change of the endpoint when h_ref is halved.
  double validation_change = 0.0;
};

Reference self_reference(const SplitSystem& sys, const State& x0, double h, double t_final);

// Numeric composition matrix M(h) for the oscillator.
Eigen::Matrix2cd ho_step_matrix(const CoefficientSet& set, Complex h);

}  // namespace symconj
