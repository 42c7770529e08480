#include "symconj/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <ostream>
#include <thread>

#include "symconj/csv.hpp"
#include "symconj/errors.hpp"

namespace symconj {

namespace {

constexpr double kNoiseFloor = 1e-12;
constexpr double kStabilityTol = 1e-9;

template <class Fn>
void parallel_for(std::size_t n, Fn fn) {
  const std::size_t workers = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w)
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    }));
  for (auto& j : jobs) j.get();
}

double state_distance(const State& a, const State& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.q.size(); ++i) s += std::norm(a.q[i] - b.q[i]);
  for (std::size_t i = 0; i < a.p.size(); ++i) s += std::norm(a.p[i] - b.p[i]);
  return std::sqrt(s);
}

double state_norm(const State& a) {
  double s = 0.0;
  for (const auto& z : a.q) s += std::norm(z);
  for (const auto& z : a.p) s += std::norm(z);
  return std::sqrt(s);
}

void fill_degree_report(ProbeReport& r, const std::vector<double>& norms, const std::vector<double>& scales) {
  r.max_degree = static_cast<int>(norms.size()) - 1;
  for (std::size_t k = 0; k < norms.size(); ++k) {
    r.grid.push_back(static_cast<double>(k));
    r.defects.push_back(norms[k]);
    r.scales.push_back(scales[k]);
    const bool significant = scales[k] > 0.0 && norms[k] > kSignificance * scales[k];
    r.used.push_back(significant);
    if (significant && !r.first_degree) {
      r.first_degree = static_cast<int>(k);
      r.trigger_magnitude = norms[k];
    }
  }
}

std::vector<double> poly_norms(const TruncatedPolynomial& p) {
  std::vector<double> r;
  for (const auto& z : p.coefficients()) r.push_back(std::abs(z));
  return r;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y, double& rms) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (my + slope * (x[i] - mx));
    ss += e * e;
  }
  rms = std::sqrt(ss / n);
  return slope;
}

std::string header_value(double v) { return format_number(v); }

}  // namespace

HPolynomialMatrix symmetry_defect_polynomial(const MethodSpec& spec, int degree) {
  const HPolynomialMatrix m = ho_step_polynomial(spec, degree);
  const HPolynomialMatrix id = HPolynomialMatrix::identity(degree);
  switch (spec.projection) {
    case Projection::per_step: {
      const HPolynomialMatrix p = m.real_part();
      return p.reflected() * p - id;
    }
    case Projection::final_only:
      return (m.reflected() * m).real_part() - id;
    case Projection::none:
      break;
  }
  return m.reflected() * m - id;
}

ProbeReport pseudo_symmetry_degree(const MethodSpec& spec, int degree) {
  ProbeReport r;
  r.probe = "symmetry";
  r.method = spec.set.name;
  r.parameters = {{"projection", std::string(to_string(spec.projection))}, {"D", std::to_string(degree)}};
  const HPolynomialMatrix m = ho_step_polynomial(spec, degree);
  const HPolynomialMatrix a = spec.projection == Projection::per_step ? m.real_part() : m;
  fill_degree_report(r, coefficient_norms(symmetry_defect_polynomial(spec, degree)), product_magnitude(a.reflected(), a));
  return r;
}

ProbeReport pseudo_symplecticity_degree(const MethodSpec& spec, int degree) {
  ProbeReport r;
  r.probe = "symplecticity";
  r.method = spec.set.name;
  r.parameters = {{"projection", std::string(to_string(spec.projection))}, {"D", std::to_string(degree)}};
  const HPolynomialMatrix m = ho_step_polynomial(spec, degree);
  const HPolynomialMatrix a = spec.projection == Projection::none ? m : m.real_part();
  TruncatedPolynomial det = a.determinant();
  det[0] -= 1.0;
  fill_degree_report(r, poly_norms(det), determinant_magnitude(a));
  return r;
}

ProbeReport fit_slope(std::string probe, std::string method, const std::vector<double>& h_grid,
                      const std::vector<double>& defects, double norm) {
  ProbeReport r;
  r.probe = std::move(probe);
  r.method = std::move(method);
  r.grid = h_grid;
  r.defects = defects;
  const double floor = std::max(kNoiseFloor, 100.0 * std::numeric_limits<double>::epsilon() * norm);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < defects.size(); ++i) {
    const bool ok = std::isfinite(defects[i]) && defects[i] >= floor && h_grid[i] > 0.0;
    r.used.push_back(ok);
    if (!ok) {
      ++r.discarded;
      continue;
    }
    lx.push_back(std::log(h_grid[i]));
    ly.push_back(std::log(defects[i]));
  }
  if (lx.size() >= 3) r.slope = least_squares_slope(lx, ly, r.fit_residual);
  return r;
}

ProbeReport nonlinear_symmetry_probe(const SplitSystem& sys, const MethodSpec& spec,
                                     const std::vector<double>& h_grid, const State& x0) {
  if (!x0.is_real()) throw DomainError("nonlinear_symmetry_probe: initial state must be real");
  std::vector<double> defects(h_grid.size());
  parallel_for(h_grid.size(), [&](std::size_t i) {
    State x = composition_step(sys, spec, h_grid[i], x0);
    composition_step(sys, spec, -h_grid[i], x);
    if (spec.projection == Projection::final_only) x.project();
    defects[i] = state_distance(x, x0);
  });
  auto r = fit_slope("nonlinear_symmetry", spec.set.name, h_grid, defects, state_norm(x0));
  r.parameters = {{"system", sys.name}, {"projection", std::string(to_string(spec.projection))}};
  return r;
}

ProbeReport convergence_order(const SplitSystem& sys, const MethodSpec& spec, const std::vector<double>& h_grid,
                              double t_final, const State& x0, const State& reference) {
  std::vector<double> errors(h_grid.size());
  for (double h : h_grid) step_count(h, t_final);
  parallel_for(h_grid.size(), [&](std::size_t i) {
    State x = x0;
    const std::size_t n = step_count(h_grid[i], t_final);
    for (std::size_t k = 0; k < n; ++k) composition_step(sys, spec, h_grid[i], x);
    if (spec.projection == Projection::final_only) x.project();
    errors[i] = state_distance(x, reference);
  });
  auto r = fit_slope("order", spec.set.name, h_grid, errors, state_norm(reference));
  r.parameters = {{"system", sys.name},
                  {"projection", std::string(to_string(spec.projection))},
                  {"t_final", format_number(t_final)}};
  return r;
}

ProbeReport one_step_order(const LinearSplitOracle& oracle, const MethodSpec& spec, const std::vector<double>& h_grid,
                           const State& x0) {
  std::vector<double> errors(h_grid.size());
  parallel_for(h_grid.size(), [&](std::size_t i) {
    State x = composition_step(oracle.system, spec, h_grid[i], x0);
    if (spec.projection == Projection::final_only) x.project();
    errors[i] = state_distance(x, oracle.exact(x0, h_grid[i]));
  });
  auto r = fit_slope("one_step_order", spec.set.name, h_grid, errors, state_norm(x0));
  r.parameters = {{"system", oracle.system.name}, {"projection", std::string(to_string(spec.projection))}};
  return r;
}

double amplification_radius(const CoefficientSet& set, double h) {
  const Eigen::Matrix2cd m = ho_step_matrix(set, h);
  const double t = std::abs(0.5 * (m(0, 0) + m(1, 1)).real());
  return t <= 1.0 ? 1.0 : t + std::sqrt(t * t - 1.0);
}

double projected_spectral_radius(const CoefficientSet& set, double h) {
  const Eigen::Matrix2d p = ho_step_matrix(set, h).real();
  return p.eigenvalues().cwiseAbs().maxCoeff();
}

StabilityReport stability_limit(const MethodSpec& spec) {
  StabilityReport r;
  r.method = spec.set.name;
  r.stages = spec.set.stages();
  r.scan_limit = 10.0 * static_cast<double>(r.stages);
  const auto unstable = [&](double h) { return amplification_radius(spec.set, h) > 1.0 + kStabilityTol; };
  const auto steps = static_cast<long>(std::llround(r.scan_limit / r.scan_step));
  for (long k = 1; k <= steps; ++k) {
    const double hi_scan = static_cast<double>(k) * r.scan_step;
    if (!unstable(hi_scan)) continue;
    double lo = static_cast<double>(k - 1) * r.scan_step, hi = hi_scan;
    while (hi - lo > r.bisection_tol) {
      const double mid = 0.5 * (lo + hi);
      (unstable(mid) ? hi : lo) = mid;
    }
    r.h_t = 0.5 * (lo + hi);
    r.h_t_per_stage = *r.h_t / static_cast<double>(r.stages);
    break;
  }
  return r;
}

DriftStatistics energy_drift(const SplitSystem& sys, const MethodSpec& spec, double h, double t_final,
                             const State& x0, std::size_t sample_every) {
  constexpr std::size_t kWindows = kDriftWindows;
  DriftStatistics d;
  d.steps = step_count(h, t_final);
  d.short_run = d.steps < kWindows;
  std::vector<double> window_max(kWindows, 0.0);
  const auto observe = [&](const TrajectoryRecord& rec) {
    if (rec.step == 0) return;
    const double frac = t_final > 0.0 ? rec.t / t_final : 1.0;
    if (frac <= 0.1) d.first_decile_max = std::max(d.first_decile_max, rec.rel_energy_error);
    if (frac >= 0.9) d.last_decile_max = std::max(d.last_decile_max, rec.rel_energy_error);
    const auto w = std::min(kWindows - 1, static_cast<std::size_t>(frac * static_cast<double>(kWindows)));
    window_max[w] = std::max(window_max[w], rec.rel_energy_error);
  };
  try {
    integrate_observed(sys, spec, h, t_final, x0, sample_every, observe);
  } catch (const IntegrationError& e) {
    d.error = e.what();
    return d;
  }
  if (d.short_run) return d;
  std::vector<double> x(kWindows);
  for (std::size_t w = 0; w < kWindows; ++w) x[w] = (static_cast<double>(w) + 0.5) / static_cast<double>(kWindows);
  d.trend = least_squares_slope(x, window_max, d.envelope_noise);
  return d;
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::max_rel_energy: return "max_rel_energy";
    case Metric::avg_rel_energy: return "avg_rel_energy";
    case Metric::avg_state_error: return "avg_state_error";
  }
  return "max_rel_energy";
}

Metric parse_metric(std::string_view text) {
  for (Metric m : {Metric::max_rel_energy, Metric::avg_rel_energy, Metric::avg_state_error})
    if (text == to_string(m)) return m;
  throw ParameterError("unknown metric '" + std::string(text) + "'");
}

std::vector<WorkPrecisionRow> work_precision(const SplitSystem& sys, const std::vector<MethodSpec>& specs,
                                             const std::vector<double>& h_grid, double t_final, const State& x0,
                                             Metric metric, double sample_interval) {
  std::vector<WorkPrecisionRow> rows;
  for (const auto& spec : specs)
    for (double h : h_grid) {
      WorkPrecisionRow row;
      row.method = spec.set.name;
      row.h = h;
      row.steps = step_count(h, t_final);
      row.cost = spec.set.stages() * row.steps;
      rows.push_back(std::move(row));
    }
  const MethodSpec reference{catalog_lookup("SC11"), BaseKind::leapfrog_dkd, Projection::per_step};

  parallel_for(rows.size(), [&](std::size_t i) {
    WorkPrecisionRow& row = rows[i];
    const MethodSpec& spec = specs[i / h_grid.size()];
    const std::size_t every =
        metric == Metric::max_rel_energy || sample_interval <= 0.0 ? 1 : step_count(row.h, sample_interval);
    double acc = 0.0;
    std::size_t count = 0;
    std::vector<std::vector<double>> states;
    try {
      integrate_observed(sys, spec, row.h, t_final, x0, every, [&](const TrajectoryRecord& rec) {
        if (metric == Metric::max_rel_energy) {
          acc = std::max(acc, rec.rel_energy_error);
          return;
        }
        if (rec.step == 0 || rec.step % every != 0) return;
        if (metric == Metric::avg_rel_energy) {
          acc += rec.rel_energy_error;
          ++count;
        } else {
          auto v = rec.q;
          v.insert(v.end(), rec.p.begin(), rec.p.end());
          states.push_back(std::move(v));
        }
      });
      if (metric == Metric::avg_state_error) {
        std::size_t k = 0;
        const double h_ref = row.h / 50.0;
        integrate_observed(sys, reference, h_ref, t_final, x0, every * 50, [&](const TrajectoryRecord& rec) {
          if (rec.step == 0 || rec.step % (every * 50) != 0 || k >= states.size()) return;
          double s = 0.0;
          for (std::size_t j = 0; j < rec.q.size(); ++j) s += (rec.q[j] - states[k][j]) * (rec.q[j] - states[k][j]);
          const std::size_t d = rec.q.size();
          for (std::size_t j = 0; j < rec.p.size(); ++j)
            s += (rec.p[j] - states[k][d + j]) * (rec.p[j] - states[k][d + j]);
          acc += std::sqrt(s);
          ++k;
          ++count;
        });
      }
      row.value = metric == Metric::max_rel_energy ? acc : (count ? acc / static_cast<double>(count) : 0.0);
    } catch (const IntegrationError& e) {
      row.value = std::numeric_limits<double>::quiet_NaN();
      row.status = "domain_error";
    }
  });
  return rows;
}

void write_probe_csv(std::ostream& out, const ProbeReport& r) {
  out << "# probe=" << r.probe << " method=" << r.method;
  for (const auto& [k, v] : r.parameters) out << ' ' << k << '=' << v;
  const bool degree_probe = !r.scales.empty();
  if (degree_probe) {
    if (r.first_degree)
      out << " first_degree=" << *r.first_degree << " trigger=" << header_value(r.trigger_magnitude);
    else
      out << " first_degree=>=" << r.max_degree;
  } else if (r.slope) {
    out << " slope=" << header_value(*r.slope) << " fit_residual=" << header_value(r.fit_residual)
        << " discarded=" << r.discarded;
  } else {
    out << " slope=insufficient_signal discarded=" << r.discarded;
  }
  out << '\n';
  if (degree_probe) {
    write_csv_row(out, {"degree", "defect", "scale", "significant"});
    for (std::size_t i = 0; i < r.grid.size(); ++i)
      write_csv_row(out, {std::to_string(static_cast<int>(r.grid[i])), format_number(r.defects[i]),
                          format_number(r.scales[i]), r.used[i] ? "1" : "0"});
  } else {
    write_csv_row(out, {"h", "defect", "used"});
    for (std::size_t i = 0; i < r.grid.size(); ++i)
      write_csv_row(out, {format_number(r.grid[i]), format_number(r.defects[i]), r.used[i] ? "1" : "0"});
  }
}

void write_stability_csv(std::ostream& out, const StabilityReport& r) {
  out << "# probe=stability method=" << r.method << " scan_step=" << header_value(r.scan_step)
      << " bisection_tol=" << header_value(r.bisection_tol) << '\n';
  write_csv_row(out, {"method", "stages", "h_t", "h_t_per_stage"});
  if (r.h_t)
    write_csv_row(out, {r.method, std::to_string(r.stages), format_number(*r.h_t), format_number(r.h_t_per_stage)});
  else
    write_csv_row(out, {r.method, std::to_string(r.stages), "unbounded_scan>" + format_number(r.scan_limit), ""});
}

void write_drift_csv(std::ostream& out, const std::string& method, const DriftStatistics& d) {
  out << "# probe=drift method=" << method << '\n';
  write_csv_row(out, {"steps", "first_decile_max", "last_decile_max", "trend", "envelope_noise", "status"});
  write_csv_row(out, {std::to_string(d.steps), format_number(d.first_decile_max), format_number(d.last_decile_max),
                      format_number(d.trend), format_number(d.envelope_noise),
                      d.error ? "domain_error" : (d.short_run ? "short_run" : "ok")});
}

void write_work_precision_csv(std::ostream& out, const std::string& problem, Metric metric,
                              const std::vector<WorkPrecisionRow>& rows) {
  out << "# probe=work_precision problem=" << problem << " metric=" << to_string(metric) << '\n';
  write_csv_row(out, {"method", "h", "steps", "cost", "value", "status"});
  for (const auto& r : rows)
    write_csv_row(out, {r.method, format_number(r.h), std::to_string(r.steps), std::to_string(r.cost),
                        format_number(r.value), r.status});
}

void write_elbow_csv(std::ostream& out, const CoefficientSet& set, const std::vector<double>& h_grid) {
  const ErrorModel m = effective_error_terms(set);
  out << "# probe=elbow method=" << set.name << " r=" << m.projected_order << " e_lo=" << header_value(m.e_lo)
      << " e_hi=" << header_value(m.e_hi) << " h_star=" << header_value(m.elbow) << '\n';
  write_csv_row(out, {"inv_h", "h", "effective_error"});
  for (double h : h_grid)
    write_csv_row(out, {format_number(1.0 / h), format_number(h), format_number(effective_error_curve(m, h))});
}

}  // namespace symconj
