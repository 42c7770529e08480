#include "symconj/engine.hpp"

#include <cmath>
#include <ostream>

#include "symconj/csv.hpp"
#include "symconj/errors.hpp"

namespace symconj {

State State::real(std::span<const double> q, std::span<const double> p) {
  State x;
  x.q.assign(q.begin(), q.end());
  x.p.assign(p.begin(), p.end());
  return x;
}

void State::project() {
  for (Complex& z : q) z = z.real();
  for (Complex& z : p) z = z.real();
}

bool State::is_real() const {
  for (const Complex& z : q)
    if (z.imag() != 0.0) return false;
  for (const Complex& z : p)
    if (z.imag() != 0.0) return false;
  return true;
}

std::vector<double> State::real_parts() const {
  std::vector<double> out;
  out.reserve(size());
  for (const Complex& z : q) out.push_back(z.real());
  for (const Complex& z : p) out.push_back(z.real());
  return out;
}

IntegrationError::IntegrationError(const std::string& what, State state, std::optional<std::size_t> step)
    : std::runtime_error(step ? what + " at step " + std::to_string(*step) : what),
      state_(std::move(state)),
      step_(step) {}

IntegrationError IntegrationError::at_step(std::size_t step) const {
  std::string base = what();
  if (step_) base = base.substr(0, base.rfind(" at step "));
  return IntegrationError(base, state_, step);
}

double SplitSystem::energy_of(const State& x) const {
  std::vector<double> q(x.q.size()), p(x.p.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = x.q[i].real();
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = x.p[i].real();
  return energy(q, p);
}

std::string_view to_string(Projection p) {
  switch (p) {
    case Projection::per_step: return "per_step";
    case Projection::final_only: return "final_only";
    case Projection::none: return "none";
  }
  return "per_step";
}

Projection parse_projection(std::string_view text) {
  if (text == "per_step") return Projection::per_step;
  if (text == "final_only") return Projection::final_only;
  if (text == "none") return Projection::none;
  throw ParameterError("unknown projection '" + std::string(text) + "'");
}

void base_step(const SplitSystem& sys, State& x, Complex tau) {
  const Complex half = 0.5 * tau;
  sys.drift(x, half);
  if (sys.valid && !sys.valid(x)) {
    throw IntegrationError(sys.name + ": kick evaluated outside the analyticity domain", x);
  }
  sys.kick(x, tau);
  sys.drift(x, half);
}

State base_step(const SplitSystem& sys, const State& x, Complex tau) {
  State y = x;
  base_step(sys, y, tau);
  return y;
}

void composition_step(const SplitSystem& sys, const MethodSpec& spec, double h, State& x) {
  if (h == 0.0) return;
  for (const Complex& a : spec.set.coeffs) base_step(sys, x, a * h);
  if (spec.projection == Projection::per_step) x.project();
}

State composition_step(const SplitSystem& sys, const MethodSpec& spec, double h, const State& x) {
  State y = x;
  composition_step(sys, spec, h, y);
  return y;
}

std::size_t step_count(double h, double t_final) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("step size must be positive and finite");
  if (t_final < 0.0 || !std::isfinite(t_final)) throw ParameterError("final time must be non-negative");
  const double ratio = t_final / h;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio)) {
    throw ParameterError("final time " + format_number(t_final) + " is not a whole number of steps of " +
                         format_number(h));
  }
  return static_cast<std::size_t>(n);
}

State integrate_observed(const SplitSystem& sys, const MethodSpec& spec, double h, double t_final,
                         const State& x0, std::size_t sample_every, const RecordObserver& observe) {
  if (!x0.is_real()) throw ParameterError("initial state must be real");
  if (sample_every == 0) throw ParameterError("sample_every must be positive");
  const std::size_t n = step_count(h, t_final);

  const double h0 = sys.energy_of(x0);
  const double scale = h0 != 0.0 ? std::abs(h0) : 1.0;

  TrajectoryRecord rec;
  rec.q.resize(x0.q.size());
  rec.p.resize(x0.p.size());
  const auto emit = [&](std::size_t step, double t, const State& x) {
    rec.step = step;
    rec.t = t;
    for (std::size_t i = 0; i < rec.q.size(); ++i) rec.q[i] = x.q[i].real();
    for (std::size_t i = 0; i < rec.p.size(); ++i) rec.p[i] = x.p[i].real();
    rec.rel_energy_error = std::abs(sys.energy(rec.q, rec.p) - h0) / scale;
    observe(rec);
  };

  State x = x0;
  emit(0, 0.0, x);
  // Kahan-compensated time.
  double t = 0.0, carry = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    try {
      composition_step(sys, spec, h, x);
    } catch (const IntegrationError& e) {
      throw e.at_step(k);
    }
    const double y = h - carry;
    const double next = t + y;
    carry = (next - t) - y;
    t = next;
    if (k % sample_every == 0 || k == n) emit(k, t, x);
  }
  if (spec.projection == Projection::final_only) x.project();
  return x;
}

Trajectory integrate(const SplitSystem& sys, const MethodSpec& spec, double h, double t_final,
                     const State& x0, std::size_t sample_every) {
  Trajectory out;
  try {
    out.final_state = integrate_observed(sys, spec, h, t_final, x0, sample_every,
                                         [&](const TrajectoryRecord& r) { out.records.push_back(r); });
  } catch (const IntegrationError& e) {
    out.error = e.what();
    out.error_step = e.step();
    out.final_state = e.state();
  }
  return out;
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRecord>& records) {
  const std::size_t dq = records.empty() ? 0 : records.front().q.size();
  const std::size_t dp = records.empty() ? 0 : records.front().p.size();
  std::vector<std::string> cells{"t"};
  for (std::size_t i = 1; i <= dq; ++i) cells.push_back("q" + std::to_string(i));
  for (std::size_t i = 1; i <= dp; ++i) cells.push_back("p" + std::to_string(i));
  cells.push_back("rel_energy_error");
  write_csv_row(out, cells);
  for (const auto& r : records) {
    cells.clear();
    cells.push_back(format_number(r.t));
    for (double v : r.q) cells.push_back(format_number(v));
    for (double v : r.p) cells.push_back(format_number(v));
    cells.push_back(format_number(r.rel_energy_error));
    write_csv_row(out, cells);
  }
}

}  // namespace symconj
