#include "symconj/problems.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "symconj/errors.hpp"

namespace symconj {

namespace {

void drift_identity_mass(State& x, Complex tau) {
  for (std::size_t i = 0; i < x.q.size(); ++i) x.q[i] += tau * x.p[i];
}

double kinetic(std::span<const double> p) {
  double t = 0.0;
  for (double v : p) t += v * v;
  return 0.5 * t;
}

Complex dot(const ComplexVector& a) {
  Complex s = 0.0;
  for (const Complex& z : a) s += z * z;
  return s;
}

}  // namespace

SplitSystem harmonic_oscillator() {
  SplitSystem sys;
  sys.name = "harmonic_oscillator";
  sys.dim = 1;
  sys.drift = drift_identity_mass;
  sys.kick = [](State& x, Complex tau) { x.p[0] -= tau * x.q[0]; };
  sys.energy = [](std::span<const double> q, std::span<const double> p) { return 0.5 * (p[0] * p[0] + q[0] * q[0]); };
  return sys;
}

State harmonic_oscillator_initial(double q0, double p0) {
  const double q[] = {q0};
  const double p[] = {p0};
  return State::real(q, p);
}

State harmonic_oscillator_exact(const State& x0, double t) {
  const double c = std::cos(t), s = std::sin(t);
  State x = x0;
  x.q[0] = c * x0.q[0] + s * x0.p[0];
  x.p[0] = -s * x0.q[0] + c * x0.p[0];
  return x;
}

Problem kepler(double e) {
  if (!(e >= 0.0 && e < 1.0)) throw DomainError("kepler: eccentricity must lie in [0, 1)");
  SplitSystem sys;
  sys.name = "kepler";
  sys.dim = 2;
  sys.drift = drift_identity_mass;
  sys.kick = [](State& x, Complex tau) {
    const Complex r2 = dot(x.q);
    Complex w;
    if (r2.imag() == 0.0 && r2.real() > 0.0) {
      w = std::pow(r2.real(), -1.5);
    } else {
      w = std::exp(-1.5 * std::log(r2));
    }
    const Complex f = tau * w;
    for (std::size_t i = 0; i < x.q.size(); ++i) x.p[i] -= f * x.q[i];
  };
  sys.valid = [](const State& x) {
    const Complex r2 = dot(x.q);
    return !(r2.real() <= 0.0 && std::abs(r2.imag()) < 1e-12);
  };
  sys.energy = [](std::span<const double> q, std::span<const double> p) {
    return kinetic(p) - 1.0 / std::sqrt(q[0] * q[0] + q[1] * q[1]);
  };

  const double q[] = {1.0 - e, 0.0};
  const double p[] = {0.0, std::sqrt((1.0 + e) / (1.0 - e))};
  return {std::move(sys), State::real(q, p)};
}

SplitSystem pendulum() {
  SplitSystem sys;
  sys.name = "pendulum";
  sys.dim = 1;
  sys.drift = drift_identity_mass;
  sys.kick = [](State& x, Complex tau) { x.p[0] -= tau * std::sin(x.q[0]); };
  sys.energy = [](std::span<const double> q, std::span<const double> p) {
    return 0.5 * p[0] * p[0] + (1.0 - std::cos(q[0]));
  };
  return sys;
}

State pendulum_initial(double alpha) { return harmonic_oscillator_initial(0.0, alpha); }

State LinearSplitOracle::initial(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  State x;
  x.q.resize(static_cast<std::size_t>(a.rows()));
  double n2 = 0.0;
  for (auto& z : x.q) {
    z = normal(rng);
    n2 += z.real() * z.real();
  }
  for (auto& z : x.q) z /= std::sqrt(n2);
  return x;
}

Eigen::MatrixXcd LinearSplitOracle::exact_propagator(Complex t) const {
  const Eigen::MatrixXcd g = t * (a + b).cast<Complex>();
  return g.exp();
}

State LinearSplitOracle::exact(const State& x0, double t) const {
  const Eigen::Map<const Eigen::VectorXcd> v(x0.q.data(), static_cast<Eigen::Index>(x0.q.size()));
  const Eigen::VectorXcd y = exact_propagator(t) * v;
  State x;
  x.q.assign(y.data(), y.data() + y.size());
  return x;
}

LinearSplitOracle linear_split_oracle(std::uint64_t seed, std::size_t dim, bool commuting) {
  if (dim < 2 || dim > 6) throw DomainError("linear_split_oracle: dim must be in 2..6");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(dim);
  const auto draw = [&] {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (!commuting || i == j) m(i, j) = normal(rng);
    const double norm = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
    return Eigen::MatrixXd(m / norm);
  };

  LinearSplitOracle o;
  o.a = draw();
  o.b = draw();

  const auto flow = [](const Eigen::MatrixXd& m) {
    const auto mc = std::make_shared<const Eigen::MatrixXcd>(m.cast<Complex>());
    return [mc](State& x, Complex tau) {
      const Eigen::MatrixXcd e = (tau * *mc).exp();
      Eigen::Map<Eigen::VectorXcd> v(x.q.data(), static_cast<Eigen::Index>(x.q.size()));
      const Eigen::VectorXcd y = e * v;
      v = y;
    };
  };
  o.system.name = "linear_split_oracle";
  o.system.dim = dim;
  o.system.drift = flow(o.a);
  o.system.kick = flow(o.b);
  o.system.energy = [](std::span<const double> q, std::span<const double>) {
    double s = 0.0;
    for (double v : q) s += v * v;
    return 0.5 * s;
  };
  return o;
}

HPolynomialMatrix ho_stage_polynomial(Complex alpha, int degree) {
  HPolynomialMatrix m(degree);
  const Complex a2 = alpha * alpha;
  const auto put = [&](int i, int j, int k, Complex v) {
    if (k <= degree) m(i, j)[k] = v;
  };
  put(0, 0, 0, 1.0);
  put(0, 0, 2, -0.5 * a2);
  put(0, 1, 1, alpha);
  put(0, 1, 3, -0.25 * a2 * alpha);
  put(1, 0, 1, -alpha);
  put(1, 1, 0, 1.0);
  put(1, 1, 2, -0.5 * a2);
  return m;
}

HPolynomialMatrix ho_step_polynomial(const CoefficientSet& set, int degree) {
  if (degree < 0 || degree > 40) throw DomainError("ho_step_polynomial: degree must be in 0..40");
  HPolynomialMatrix m = HPolynomialMatrix::identity(degree);
  for (const Complex& a : set.coeffs) m = ho_stage_polynomial(a, degree) * m;
  return m;
}

HPolynomialMatrix ho_step_polynomial(const MethodSpec& spec, int degree) {
  return ho_step_polynomial(spec.set, degree);
}

Reference self_reference(const SplitSystem& sys, const State& x0, double h, double t_final) {
  MethodSpec spec{catalog_lookup("SC11"), BaseKind::leapfrog_dkd, Projection::per_step};
  const auto run = [&](double href) {
    State x = x0;
    const std::size_t n = t_final > 0.0 ? step_count(href, t_final) : 0;
    for (std::size_t k = 0; k < n; ++k) composition_step(sys, spec, href, x);
    return x;
  };
  Reference ref;
  ref.h_ref = t_final / std::ceil(t_final / std::max(h / 50.0, kMinReferenceStep));
  ref.state = run(ref.h_ref);
  const State fine = run(ref.h_ref / 2.0);
  const auto a = ref.state.real_parts();
  const auto b = fine.real_parts();
  for (std::size_t i = 0; i < a.size(); ++i) ref.validation_change = std::max(ref.validation_change, std::abs(a[i] - b[i]));
  return ref;
}

Eigen::Matrix2cd ho_step_matrix(const CoefficientSet& set, Complex h) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
  for (const Complex& alpha : set.coeffs) {
    const Complex a = alpha * h;
    Eigen::Matrix2cd s;
    s << 1.0 - 0.5 * a * a, a - 0.25 * a * a * a, -a, 1.0 - 0.5 * a * a;
    m = s * m;
  }
  return m;
}

}  // namespace symconj
