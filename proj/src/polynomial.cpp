#include "dalat/polynomial.hpp"

#include "dalat/calculus.hpp"
#include "dalat/error.hpp"

namespace dalat {

DAPolynomial::DAPolynomial(std::vector<CMatrix> coefficients) : coefficients_(std::move(coefficients)) {
  if (coefficients_.empty()) fail(ErrorCode::ShapeError, "polynomial needs at least one coefficient");
  shape_ = shape_of(coefficients_.front());
  for (const auto& c : coefficients_) {
    if (shape_of(c) != shape_) fail(ErrorCode::ShapeError, "coefficient shapes differ");
  }
  while (coefficients_.size() > 1 && coefficients_.back().isZero(0.0)) coefficients_.pop_back();
}

DAPolynomial DAPolynomial::scalar(const std::vector<Complex>& coefficients) {
  std::vector<CMatrix> c;
  for (auto x : coefficients) c.push_back(scalar_matrix(x));
  return DAPolynomial(std::move(c));
}

DAPolynomial DAPolynomial::monomial(int degree) {
  std::vector<Complex> c(static_cast<std::size_t>(degree) + 1, 0.0);
  c.back() = 1.0;
  return scalar(c);
}

DAPolynomial DAPolynomial::trimmed(double tol) const {
  auto c = coefficients_;
  while (c.size() > 1 && max_abs(c.back()) <= tol) c.pop_back();
  if (c.size() == 1 && max_abs(c.back()) <= tol) c.back().setZero();
  return DAPolynomial(std::move(c));
}

DAPolynomial DAPolynomial::times_identity(Index k) const {
  if (shape_ != Shape{1, 1}) fail(ErrorCode::ShapeError, "times_identity needs a scalar polynomial");
  std::vector<CMatrix> c;
  for (const auto& a : coefficients_) c.push_back(CMatrix::Identity(k, k) * a(0, 0));
  return DAPolynomial(std::move(c));
}

DAPolynomial convolve_poly(const DAPolynomial& p, const DAPolynomial& q) {
  if (p.shape().cols != q.shape().rows) fail(ErrorCode::ShapeError, "inner dimensions differ");
  const auto np = p.coefficients().size(), nq = q.coefficients().size();
  std::vector<CMatrix> c(np + nq - 1, CMatrix::Zero(p.shape().rows, q.shape().cols));
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < nq; ++j) c[i + j] += p.coefficients()[i] * q.coefficients()[j];
  }
  return DAPolynomial(std::move(c));
}

DAFunction apply_poly(const DAPolynomial& p, const DAFunction& f, const Tolerance& tol, Exec exec) {
  if (p.shape().cols != f.shape().rows) fail(ErrorCode::ShapeError, "polynomial and function shapes differ");
  if (!is_analytic(f, tol)) fail(ErrorCode::NotAnalytic, "convolution needs a DA function");
  auto power = f;
  auto acc = f.left_multiply(p.coefficient(0));
  for (int n = 1; n <= p.degree(); ++n) {
    power = detail::forward_shift_unchecked(power, exec);
    acc = acc + power.left_multiply(p.coefficient(n));
  }
  return acc;
}

DAFunction apply_poly_right(const DAFunction& g, const DAPolynomial& p, const Tolerance& tol, Exec exec) {
  if (g.shape().cols != p.shape().rows) fail(ErrorCode::ShapeError, "polynomial and function shapes differ");
  if (!is_analytic(g, tol)) fail(ErrorCode::NotAnalytic, "convolution needs a DA function");
  auto power = g;
  auto acc = g.right_multiply(p.coefficient(0));
  for (int n = 1; n <= p.degree(); ++n) {
    power = detail::forward_shift_unchecked(power, exec);
    acc = acc + power.right_multiply(p.coefficient(n));
  }
  return acc;
}

DAFunction to_function(const DAPolynomial& p, const LatticePtr& lattice, Exec exec) {
  const auto basis = monomial_basis(lattice, p.degree(), exec);
  std::vector<CMatrix> values(lattice->vertex_count(), CMatrix::Zero(p.shape().rows, p.shape().cols));
  for (std::size_t v = 0; v < values.size(); ++v) {
    for (int n = 0; n <= p.degree(); ++n) values[v] += p.coefficient(n) * basis[n].scalar_at(v);
  }
  return DAFunction(lattice, p.shape(), std::move(values));
}

}  // namespace dalat
