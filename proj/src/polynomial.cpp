#include "symconj/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "symconj/errors.hpp"

namespace symconj {

TruncatedPolynomial::TruncatedPolynomial(int degree) {
  if (degree < 0) throw DomainError("TruncatedPolynomial: negative degree");
  c_.assign(static_cast<std::size_t>(degree) + 1, Complex{0.0, 0.0});
}

TruncatedPolynomial::TruncatedPolynomial(std::vector<Complex> coeffs, int degree) : TruncatedPolynomial(degree) {
  const std::size_t n = std::min(coeffs.size(), c_.size());
  std::copy_n(coeffs.begin(), n, c_.begin());
}

TruncatedPolynomial TruncatedPolynomial::constant(Complex c, int degree) {
  TruncatedPolynomial p(degree);
  p.c_[0] = c;
  return p;
}

Complex TruncatedPolynomial::evaluate(Complex h) const {
  Complex acc = 0.0;
  for (std::size_t k = c_.size(); k-- > 0;) acc = acc * h + c_[k];
  return acc;
}

TruncatedPolynomial TruncatedPolynomial::reflected() const {
  TruncatedPolynomial p = *this;
  for (std::size_t k = 1; k < p.c_.size(); k += 2) p.c_[k] = -p.c_[k];
  return p;
}

TruncatedPolynomial TruncatedPolynomial::real_part() const {
  TruncatedPolynomial p = *this;
  for (Complex& z : p.c_) z = z.real();
  return p;
}

TruncatedPolynomial& TruncatedPolynomial::operator+=(const TruncatedPolynomial& o) {
  if (o.degree() != degree()) throw DomainError("TruncatedPolynomial: degree mismatch");
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

TruncatedPolynomial& TruncatedPolynomial::operator-=(const TruncatedPolynomial& o) {
  if (o.degree() != degree()) throw DomainError("TruncatedPolynomial: degree mismatch");
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

TruncatedPolynomial operator*(const TruncatedPolynomial& a, const TruncatedPolynomial& b) {
  if (a.degree() != b.degree()) throw DomainError("TruncatedPolynomial: degree mismatch");
  const std::size_t n = a.c_.size();
  TruncatedPolynomial r(a.degree());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.c_[i] == Complex{}) continue;
    for (std::size_t j = 0; i + j < n; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
  }
  return r;
}

std::vector<double> product_magnitude(const TruncatedPolynomial& a, const TruncatedPolynomial& b) {
  const std::size_t n = static_cast<std::size_t>(a.degree()) + 1;
  std::vector<double> r(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; i + j < n; ++j) r[i + j] += std::abs(a[static_cast<int>(i)]) * std::abs(b[static_cast<int>(j)]);
  return r;
}

HPolynomialMatrix::HPolynomialMatrix(int degree)
    : e_{TruncatedPolynomial(degree), TruncatedPolynomial(degree), TruncatedPolynomial(degree),
         TruncatedPolynomial(degree)} {}

HPolynomialMatrix HPolynomialMatrix::identity(int degree) {
  HPolynomialMatrix m(degree);
  m(0, 0)[0] = 1.0;
  m(1, 1)[0] = 1.0;
  return m;
}

Eigen::Matrix2cd HPolynomialMatrix::evaluate(Complex h) const {
  Eigen::Matrix2cd m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = (*this)(i, j).evaluate(h);
  return m;
}

HPolynomialMatrix HPolynomialMatrix::reflected() const {
  HPolynomialMatrix m = *this;
  for (auto& p : m.e_) p = p.reflected();
  return m;
}

HPolynomialMatrix HPolynomialMatrix::real_part() const {
  HPolynomialMatrix m = *this;
  for (auto& p : m.e_) p = p.real_part();
  return m;
}

TruncatedPolynomial HPolynomialMatrix::determinant() const {
  return (*this)(0, 0) * (*this)(1, 1) - (*this)(0, 1) * (*this)(1, 0);
}

HPolynomialMatrix operator*(const HPolynomialMatrix& a, const HPolynomialMatrix& b) {
  HPolynomialMatrix r(a.degree());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
  return r;
}

HPolynomialMatrix operator-(const HPolynomialMatrix& a, const HPolynomialMatrix& b) {
  HPolynomialMatrix r = a;
  for (std::size_t k = 0; k < 4; ++k) r.e_[k] -= b.e_[k];
  return r;
}

std::vector<double> product_magnitude(const HPolynomialMatrix& a, const HPolynomialMatrix& b) {
  std::vector<double> r(static_cast<std::size_t>(a.degree()) + 1, 0.0);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const auto s0 = product_magnitude(a(i, 0), b(0, j));
      const auto s1 = product_magnitude(a(i, 1), b(1, j));
      for (std::size_t k = 0; k < r.size(); ++k) r[k] = std::max(r[k], s0[k] + s1[k]);
    }
  }
  return r;
}

std::vector<double> determinant_magnitude(const HPolynomialMatrix& a) {
  auto r = product_magnitude(a(0, 0), a(1, 1));
  const auto s = product_magnitude(a(0, 1), a(1, 0));
  for (std::size_t k = 0; k < r.size(); ++k) r[k] += s[k];
  return r;
}

std::vector<double> coefficient_norms(const HPolynomialMatrix& a) {
  std::vector<double> r(static_cast<std::size_t>(a.degree()) + 1, 0.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < r.size(); ++k) r[k] = std::max(r[k], std::abs(a(i, j)[static_cast<int>(k)]));
  return r;
}

}  // namespace symconj
