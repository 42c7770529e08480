#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "symconj/coefficients.hpp"

namespace symconj {

/// Polynomial in h with complex coefficients, truncated at a fixed degree:
/// products keep every coefficient up to the degree exactly and drop the rest.
class TruncatedPolynomial {
 public:
  explicit TruncatedPolynomial(int degree = 0);
  TruncatedPolynomial(std::vector<Complex> coeffs, int degree);

  static TruncatedPolynomial constant(Complex c, int degree);

  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Complex>& coefficients() const noexcept { return c_; }
  Complex operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  Complex& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }

  Complex evaluate(Complex h) const;
  // p(-h)
  TruncatedPolynomial reflected() const;
  TruncatedPolynomial real_part() const;

  TruncatedPolynomial& operator+=(const TruncatedPolynomial& o);
  TruncatedPolynomial& operator-=(const TruncatedPolynomial& o);
  friend TruncatedPolynomial operator+(TruncatedPolynomial a, const TruncatedPolynomial& b) { return a += b; }
  friend TruncatedPolynomial operator-(TruncatedPolynomial a, const TruncatedPolynomial& b) { return a -= b; }
  friend TruncatedPolynomial operator*(const TruncatedPolynomial& a, const TruncatedPolynomial& b);

 private:
  std::vector<Complex> c_;
};

// (|a| * |b|)_k = sum_j |a_j| |b_{k-j}|: the size of the terms that are summed
// to form coefficient k of a*b, i.e. the scale rounding errors are relative to.
std::vector<double> product_magnitude(const TruncatedPolynomial& a, const TruncatedPolynomial& b);

/// 2x2 matrix of truncated polynomials in h.
class HPolynomialMatrix {
 public:
  explicit HPolynomialMatrix(int degree = 0);

  static HPolynomialMatrix identity(int degree);

  int degree() const noexcept { return e_[0].degree(); }
  const TruncatedPolynomial& operator()(int i, int j) const { return e_[static_cast<std::size_t>(2 * i + j)]; }
  TruncatedPolynomial& operator()(int i, int j) { return e_[static_cast<std::size_t>(2 * i + j)]; }

  Eigen::Matrix2cd evaluate(Complex h) const;
  HPolynomialMatrix reflected() const;
  HPolynomialMatrix real_part() const;
  TruncatedPolynomial determinant() const;

  friend HPolynomialMatrix operator*(const HPolynomialMatrix& a, const HPolynomialMatrix& b);
  friend HPolynomialMatrix operator-(const HPolynomialMatrix& a, const HPolynomialMatrix& b);

 private:
  std::array<TruncatedPolynomial, 4> e_;
};

// Per degree, the largest entry of the summand scale of a*b.
std::vector<double> product_magnitude(const HPolynomialMatrix& a, const HPolynomialMatrix& b);
// Summand scale of det(a) = a00 a11 - a01 a10.
std::vector<double> determinant_magnitude(const HPolynomialMatrix& a);
// Per degree, the largest coefficient modulus over the four entries.
std::vector<double> coefficient_norms(const HPolynomialMatrix& a);

}  // namespace symconj
