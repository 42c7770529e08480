#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "symconj/coefficients.hpp"

namespace symconj {

using ComplexVector = std::vector<Complex>;

/// Phase-space point (q, p). Complex because sub-steps with complex
/// fractions leave the real axis; after a projection both parts are real.
struct State {
  ComplexVector q;
  ComplexVector p;

  static State real(std::span<const double> q, std::span<const double> p);

  std::size_t size() const noexcept { return q.size() + p.size(); }
  // Discards imaginary parts in place.
  void project();
  bool is_real() const;
  // q followed by p, real parts.
  std::vector<double> real_parts() const;

  friend bool operator==(const State&, const State&) = default;
};

/// Thrown when a sub-flow is evaluated outside its analyticity domain.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, State state, std::optional<std::size_t> step = std::nullopt);

  const State& state() const noexcept { return state_; }
  std::optional<std::size_t> step() const noexcept { return step_; }
  IntegrationError at_step(std::size_t step) const;

 private:
  State state_;
  std::optional<std::size_t> step_;
};

/// Separable system H = T(p) + V(q) given through the exact flows of its
/// two parts, continued to complex times. `drift` advances q under T and
/// `kick` advances p under V; both act in place and must not touch the
/// other half of the state. `valid` returns false where the complex
/// continuation of the kick is undefined (branch cuts).
struct SplitSystem {
  std::string name;
  std::size_t dim = 0;
  std::function<void(State&, Complex)> drift;
  std::function<void(State&, Complex)> kick;
  std::function<double(std::span<const double> q, std::span<const double> p)> energy;
  std::function<bool(const State&)> valid;

  double energy_of(const State& x) const;
};

enum class BaseKind { leapfrog_dkd };

enum class Projection { per_step, final_only, none };

std::string_view to_string(Projection p);
Projection parse_projection(std::string_view text);

struct MethodSpec {
  CoefficientSet set;
  BaseKind base = BaseKind::leapfrog_dkd;
  Projection projection = Projection::per_step;
};

// drift(tau/2) kick(tau) drift(tau/2), in place.
void base_step(const SplitSystem& sys, State& x, Complex tau);
State base_step(const SplitSystem& sys, const State& x, Complex tau);

// Applies base_step with tau = alpha_j h for j = 1..s; projects when the
// method uses per-step projection.
void composition_step(const SplitSystem& sys, const MethodSpec& spec, double h, State& x);
State composition_step(const SplitSystem& sys, const MethodSpec& spec, double h, const State& x);

// Number of steps n with n h = t_final; throws ParameterError otherwise.
std::size_t step_count(double h, double t_final);

struct TrajectoryRecord {
  std::size_t step = 0;
  double t = 0.0;
  std::vector<double> q;
  std::vector<double> p;
  double rel_energy_error = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  State final_state;
  // Set when the run stopped at a domain violation.
  std::optional<std::string> error;
  std::optional<std::size_t> error_step;
};

using RecordObserver = std::function<void(const TrajectoryRecord&)>;

/// Streams a record at step 0, at every multiple of `sample_every` and at
/// the final step. Under final_only/none the propagated state stays complex
/// and records hold its real part. Domain violations propagate as
/// IntegrationError carrying the step index. Returns the final state
/// (projected for final_only).
State integrate_observed(const SplitSystem& sys, const MethodSpec& spec, double h, double t_final,
                         const State& x0, std::size_t sample_every, const RecordObserver& observe);

// Collecting variant: on a domain violation the partial trajectory is
// returned with `error` set instead of throwing.
Trajectory integrate(const SplitSystem& sys, const MethodSpec& spec, double h, double t_final,
                     const State& x0, std::size_t sample_every = 1);

// CSV: t,q1..qd,p1..pd,rel_energy_error with 17 significant digits.
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRecord>& records);

}  // namespace symconj
