#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symconj/engine.hpp"
#include "symconj/problems.hpp"

namespace symconj {

/// Result of a degree probe (grid = degrees) or a slope probe (grid = h).
struct ProbeReport {
  std::string probe;
  std::string method;
  // Extra key=value pairs for the CSV header line.
  std::vector<std::pair<std::string, std::string>> parameters;

  std::vector<double> grid;
  std::vector<double> defects;
  // Degree probes: summand scale per degree. Slope probes: unused.
  std::vector<double> scales;
  std::vector<bool> used;

  // Degree probes.
  int max_degree = 0;
  std::optional<int> first_degree;
  double trigger_magnitude = 0.0;

  // Slope probes.
  std::optional<double> slope;
  double fit_residual = 0.0;
  std::size_t discarded = 0;

  bool insufficient_signal() const noexcept { return !first_degree && !slope; }
};

// Relative size above which a polynomial coefficient counts as nonzero.
inline constexpr double kSignificance = 1e-9;

/// First degree at which the projected oscillator map fails to be its own
/// adjoint: P(-h) P(h) - I with P = Re M(h) (per_step), Re(M(-h) M(h)) - I
/// (final_only) or M(-h) M(h) - I (none).
ProbeReport pseudo_symmetry_degree(const MethodSpec& spec, int degree);
// Same for det P(h) - 1.
ProbeReport pseudo_symplecticity_degree(const MethodSpec& spec, int degree);

// The polynomial defect matrix used by pseudo_symmetry_degree.
HPolynomialMatrix symmetry_defect_polynomial(const MethodSpec& spec, int degree);

/// Slope of log |psi_{-h}(psi_h(x0)) - x0| against log h.
ProbeReport nonlinear_symmetry_probe(const SplitSystem& sys, const MethodSpec& spec,
                                     const std::vector<double>& h_grid, const State& x0);

struct StabilityReport {
  std::string method;
  std::size_t stages = 0;
  std::optional<double> h_t;
  double h_t_per_stage = 0.0;
  double scan_step = 1e-3;
  double bisection_tol = 1e-8;
  double scan_limit = 0.0;

  bool unbounded_scan() const noexcept { return !h_t; }
};

/// Growth factor per step of the oscillator map at step h: the modulus of
/// the dominant root of z^2 - 2tz + 1 with t = Re tr M(h) / 2.
double amplification_radius(const CoefficientSet& set, double h);
// Spectral radius of Re M(h).
double projected_spectral_radius(const CoefficientSet& set, double h);

StabilityReport stability_limit(const MethodSpec& spec);

// Least-squares slope of log defect vs log h after the noise filter.
ProbeReport fit_slope(std::string probe, std::string method, const std::vector<double>& h_grid,
                      const std::vector<double>& defects, double state_norm);

// Global endpoint error at t_final against a fixed reference endpoint.
ProbeReport convergence_order(const SplitSystem& sys, const MethodSpec& spec, const std::vector<double>& h_grid,
                              double t_final, const State& x0, const State& reference);

// Slope of the one-step error against the exact exponential of the oracle.
ProbeReport one_step_order(const LinearSplitOracle& oracle, const MethodSpec& spec, const std::vector<double>& h_grid,
                           const State& x0);

// Number of envelope windows; runs with fewer steps are too short to drift.
inline constexpr std::size_t kDriftWindows = 20;

struct DriftStatistics {
  double first_decile_max = 0.0;
  double last_decile_max = 0.0;
  // Least-squares slope of the windowed error maxima against t / t_final,
  // and the scatter of the maxima about that line.
  double trend = 0.0;
  double envelope_noise = 0.0;
  std::size_t steps = 0;
  bool short_run = false;
  std::optional<std::string> error;

  bool bounded(double factor = 2.0) const noexcept {
    return !error && (short_run || last_decile_max <= factor * first_decile_max);
  }
};

DriftStatistics energy_drift(const SplitSystem& sys, const MethodSpec& spec, double h, double t_final,
                             const State& x0, std::size_t sample_every = 1);

enum class Metric { max_rel_energy, avg_rel_energy, avg_state_error };

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view text);

struct WorkPrecisionRow {
  std::string method;
  double h = 0.0;
  std::size_t steps = 0;
  std::size_t cost = 0;
  double value = 0.0;
  std::string status = "ok";
};

/// One row per (method, h) cell. max_rel_energy runs over every step;
/// the averages run over the samples at multiples of `sample_every` after
/// t = 0. avg_state_error is the two-norm error in (q, p) against a
/// self-reference trajectory. Cells run concurrently; rows come back in input order.
std::vector<WorkPrecisionRow> work_precision(const SplitSystem& sys, const std::vector<MethodSpec>& specs,
                                             const std::vector<double>& h_grid, double t_final, const State& x0,
                                             Metric metric, double sample_interval = 0.0);

// CSV serialisation; the first line is "# probe=... method=... ...".
void write_probe_csv(std::ostream& out, const ProbeReport& report);
void write_stability_csv(std::ostream& out, const StabilityReport& report);
void write_drift_csv(std::ostream& out, const std::string& method, const DriftStatistics& stats);
void write_work_precision_csv(std::ostream& out, const std::string& problem, Metric metric,
                              const std::vector<WorkPrecisionRow>& rows);
void write_elbow_csv(std::ostream& out, const CoefficientSet& set, const std::vector<double>& h_grid);

}  // namespace symconj
