#include "symconj/solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <random>
#include <string>
#include <thread>

#include <Eigen/Dense>

#include "symconj/errors.hpp"

namespace symconj {

namespace {

constexpr double kJacobianStep = 1e-7;
constexpr double kResidualTol = 1e-14;
constexpr double kStepTol = 1e-15;
constexpr double kAcceptTol = 1e-13;
constexpr double kDedupTol = 1e-8;

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max({d, std::abs(a[i].real() - b[i].real()), std::abs(a[i].imag() - b[i].imag())});
  return d;
}

std::vector<Complex> conj_all(std::vector<Complex> c) {
  for (auto& z : c) z = {z.real(), z.imag() == 0.0 ? 0.0 : -z.imag()};
  return c;
}

struct NewtonResult {
  std::vector<double> params;
  double residual = 0.0;
};

NewtonResult newton(std::vector<double> x, int stages, int order, int max_iter) {
  const auto n = static_cast<Eigen::Index>(x.size());
  std::vector<double> f = residual_vector(x, stages, order);
  double fn = inf_norm(f);
  for (int it = 0; it < max_iter && fn >= kResidualTol; ++it) {
    const auto m = static_cast<Eigen::Index>(f.size());
    Eigen::MatrixXd jac(m, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      auto xp = x, xm = x;
      xp[static_cast<std::size_t>(k)] += kJacobianStep;
      xm[static_cast<std::size_t>(k)] -= kJacobianStep;
      const auto fp = residual_vector(xp, stages, order);
      const auto fm = residual_vector(xm, stages, order);
      for (Eigen::Index i = 0; i < m; ++i)
        jac(i, k) = (fp[static_cast<std::size_t>(i)] - fm[static_cast<std::size_t>(i)]) / (2.0 * kJacobianStep);
    }
    const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(f.data(), m);
    const Eigen::VectorXd dx = jac.colPivHouseholderQr().solve(-rhs);
    if (!dx.allFinite()) break;

    double lambda = 1.0;
    std::vector<double> trial(x.size());
    std::vector<double> ft;
    double ftn = 0.0;
    for (int k = 0; k < 30; ++k) {
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + lambda * dx(static_cast<Eigen::Index>(i));
      ft = residual_vector(trial, stages, order);
      ftn = inf_norm(ft);
      if (ftn < fn) break;
      lambda *= 0.5;
    }
    if (!(ftn < fn)) break;
    const double step = lambda * dx.lpNorm<Eigen::Infinity>();
    x = trial;
    f = std::move(ft);
    fn = ftn;
    if (step < kStepTol) break;
  }
  return {std::move(x), fn};
}

int projected_from_composition(int r) { return r % 2 == 0 ? r : r + 1; }

// Conjugate orientation: match a bundled set when one coincides up to
// conjugation, else make the first non-real stage have positive imaginary part.
std::vector<Complex> canonical(std::vector<Complex> c) {
  for (const auto& ref : catalog()) {
    if (ref.stages() != c.size()) continue;
    if (distance(conj_all(c), ref.coeffs) < 1e-6) return conj_all(std::move(c));
    if (distance(c, ref.coeffs) < 1e-6) return c;
  }
  for (const auto& z : c) {
    if (z.imag() == 0.0) continue;
    if (z.imag() < 0.0) return conj_all(std::move(c));
    break;
  }
  return c;
}

}  // namespace

std::vector<Complex> coefficients_from_parameters(std::span<const double> params, int stages) {
  if (stages < 1) throw DomainError("stages must be positive");
  if (params.size() != static_cast<std::size_t>(stages)) throw DomainError("parameter count must equal stages");
  const auto s = static_cast<std::size_t>(stages);
  const std::size_t pairs = s / 2;
  std::vector<Complex> c(s);
  for (std::size_t j = 0; j < pairs; ++j) {
    c[j] = {params[2 * j], params[2 * j + 1]};
    c[s - 1 - j] = std::conj(c[j]);
  }
  if (s % 2 == 1) c[pairs] = params[2 * pairs];
  return c;
}

std::vector<double> parameters_from_coefficients(std::span<const Complex> coeffs) {
  const std::size_t s = coeffs.size();
  if (s == 0) throw DomainError("empty coefficient sequence");
  std::vector<double> p(s);
  for (std::size_t j = 0; j < s / 2; ++j) {
    const Complex a = 0.5 * (coeffs[j] + std::conj(coeffs[s - 1 - j]));
    p[2 * j] = a.real();
    p[2 * j + 1] = a.imag();
  }
  if (s % 2 == 1) p[s - 1] = coeffs[s / 2].real();
  return p;
}

std::vector<double> residual_vector(std::span<const double> params, int stages, int target_order) {
  if (target_order > 5) throw UnsupportedError("order conditions are available up to order 5");
  if (target_order < 1) throw DomainError("target order must be positive");
  const auto c = coefficients_from_parameters(params, stages);
  const auto w = eval_order_conditions(c);
  std::vector<double> r{w.w1.real() - 1.0};
  if (target_order >= 3) r.push_back(w.w31.real());
  if (target_order >= 4) r.push_back(w.w41.imag());
  if (target_order >= 5) {
    r.push_back(w.w51.real());
    r.push_back(w.w52.real());
  }
  return r;
}

std::vector<RankedSolution> multistart_search(const SearchProblem& problem) {
  if (problem.stages < 1) throw DomainError("stages must be positive");
  if (problem.target_order > 5) throw UnsupportedError("order conditions are available up to order 5");
  if (problem.target_order < 1) throw DomainError("target order must be positive");
  if (!(problem.box > 0.0) || problem.max_starts < 1) throw DomainError("box and max_starts must be positive");

  const auto s = static_cast<std::size_t>(problem.stages);
  std::mt19937_64 rng(problem.seed);
  std::uniform_real_distribution<double> sym(-problem.box, problem.box);
  std::uniform_real_distribution<double> pos(0.0, problem.box);
  std::vector<std::vector<double>> starts(static_cast<std::size_t>(problem.max_starts));
  for (auto& x : starts) {
    x.resize(s);
    for (auto& v : x) v = sym(rng);
    if (s % 2 == 1) x[s - 1] = pos(rng);
  }

  std::vector<std::optional<NewtonResult>> results(starts.size());
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < starts.size(); i += workers) {
        auto r = newton(starts[i], problem.stages, problem.target_order, 100);
        if (r.residual <= kAcceptTol) results[i] = std::move(r);
      }
    }));
  }
  for (auto& j : jobs) j.get();

  const int comp = std::max(problem.target_order, 2);
  std::vector<RankedSolution> out;
  std::vector<std::vector<Complex>> seen;
  for (const auto& r : results) {
    if (!r) continue;
    auto c = canonical(coefficients_from_parameters(r->params, problem.stages));
    if (std::any_of(c.begin(), c.end(), [](const Complex& z) { return !(z.real() > 0.0); })) continue;
    if (std::any_of(seen.begin(), seen.end(), [&](const auto& o) { return distance(o, c) < kDedupTol; })) continue;
    seen.push_back(c);

    RankedSolution sol;
    sol.set.composition_order = comp;
    sol.set.projected_order = projected_from_composition(comp);
    sol.set.symmetry = Symmetry::symmetric_conjugate;
    sol.set.coeffs = c;
    sol.set.provenance = "multistart search, seed " + std::to_string(problem.seed);
    for (const auto& z : c) sol.one_norm += std::abs(z);
    sol.leading_error = scaled_error_coefficient(c, sol.set.projected_order + 1);
    sol.residual = r->residual;
    out.push_back(std::move(sol));
  }
  std::stable_sort(out.begin(), out.end(), [](const RankedSolution& a, const RankedSolution& b) {
    if (a.one_norm != b.one_norm) return a.one_norm < b.one_norm;
    return a.leading_error < b.leading_error;
  });
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i].set.name = "S" + std::to_string(problem.stages) + "o" + std::to_string(problem.target_order) + "n" +
                      std::to_string(i + 1);
  return out;
}

CoefficientSet polish(const CoefficientSet& set) {
  const int order = std::min(set.composition_order, 5);
  const int stages = static_cast<int>(set.stages());
  const auto x0 = parameters_from_coefficients(set.coeffs);
  if (!(inf_norm(residual_vector(x0, stages, order)) < 1e-3))
    throw NonConvergenceError("polish: starting point is outside the Newton basin");
  const auto r = newton(x0, stages, order, 50);
  if (!(r.residual <= kAcceptTol)) throw NonConvergenceError("polish: no convergence after 50 iterations");
  CoefficientSet out = set;
  out.coeffs = coefficients_from_parameters(r.params, stages);
  return out;
}

}  // namespace symconj
