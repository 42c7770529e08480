#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "symconj/errors.hpp"
#include "symconj/solver.hpp"

using namespace symconj;

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
  return d;
}

}  // namespace

TEST_CASE("residual vector") {
  const std::vector<double> one{1.0};
  const auto r = residual_vector(one, 1, 1);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == 0.0);

  const auto sc3 = parameters_from_coefficients(catalog_lookup("SC3").coeffs);
  CHECK(sc3.size() == 3);
  CHECK(max_abs(residual_vector(sc3, 3, 4)) <= 1e-14);

  const auto sc5 = parameters_from_coefficients(catalog_lookup("SC5").coeffs);
  const auto r5 = residual_vector(sc5, 5, 5);
  CHECK(r5.size() == 5);
  CHECK(max_abs(r5) <= 5e-13);

  CHECK_THROWS_AS(residual_vector(sc5, 5, 6), UnsupportedError);
}

TEST_CASE("parameter mapping round trip") {
  for (const auto& name : {"SC2", "SC3", "SC5", "SC9", "SC11"}) {
    const auto set = catalog_lookup(name);
    const auto p = parameters_from_coefficients(set.coeffs);
    CHECK(p.size() == set.stages());
    const auto c = coefficients_from_parameters(p, static_cast<int>(set.stages()));
    CHECK(distance(c, set.coeffs) < 1e-16);
  }
}

TEST_CASE("search recovers the three-stage method") {
  SearchProblem problem;
  problem.stages = 3;
  problem.target_order = 4;
  problem.seed = 1;
  problem.max_starts = 200;
  const auto found = multistart_search(problem);
  REQUIRE(!found.empty());
  const std::vector<Complex> expected{{0.25, 0.25 * std::sqrt(5.0 / 3.0)}, 0.5, {0.25, -0.25 * std::sqrt(5.0 / 3.0)}};
  bool hit = false;
  for (const auto& sol : found) {
    CHECK(sol.residual <= 1e-13);
    CHECK(classify_symmetry(sol.set.coeffs, 1e-14) != Symmetry::none);
    hit = hit || distance(sol.set.coeffs, expected) < 1e-12;
  }
  CHECK(hit);
}

TEST_CASE("search is deterministic") {
  SearchProblem problem;
  problem.stages = 5;
  problem.target_order = 5;
  problem.max_starts = 150;
  const auto a = multistart_search(problem);
  const auto b = multistart_search(problem);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].set == b[i].set);
}

TEST_CASE("single stage search") {
  SearchProblem problem;
  problem.stages = 1;
  problem.target_order = 1;
  const auto found = multistart_search(problem);
  REQUIRE(found.size() == 1);
  CHECK(found[0].set.coeffs == std::vector<Complex>{1.0});
}

TEST_CASE("ranking keys are sorted") {
  SearchProblem problem;
  problem.stages = 5;
  problem.target_order = 5;
  problem.max_starts = 300;
  const auto found = multistart_search(problem);
  for (std::size_t i = 1; i < found.size(); ++i) CHECK(found[i - 1].one_norm <= found[i].one_norm);
  for (const auto& sol : found) {
    double norm = 0.0;
    for (const auto& z : sol.set.coeffs) {
      norm += std::abs(z);
      CHECK(z.real() > 0.0);
    }
    CHECK(sol.one_norm == doctest::Approx(norm).epsilon(1e-14));
  }
}

TEST_CASE("polish") {
  const auto sc5 = catalog_lookup("SC5");
  auto perturbed = sc5;
  const std::size_t s = perturbed.stages();
  for (std::size_t j = 0; j < s; ++j) perturbed.coeffs[j] += Complex(1e-5, -1e-5) * static_cast<double>(j + 1);
  const auto fixed = polish(perturbed);
  CHECK(distance(fixed.coeffs, sc5.coeffs) < 1e-12);
  CHECK(classify_symmetry(fixed.coeffs, 1e-14) == Symmetry::symmetric_conjugate);

  const auto sc3 = catalog_lookup("SC3");
  CHECK(distance(polish(sc3).coeffs, sc3.coeffs) < 1e-15);

  auto junk = sc3;
  junk.coeffs = {{0.9, 0.7}, -0.8, {0.9, -0.7}};
  CHECK_THROWS_AS(polish(junk), NonConvergenceError);
}
