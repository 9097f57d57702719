#pragma once

#include <vector>

#include "dalat/da_function.hpp"

namespace dalat {

/// sum_n A_n z^(n) with matrix coefficients of a common shape.
class DAPolynomial {
 public:
  explicit DAPolynomial(std::vector<CMatrix> coefficients);
  static DAPolynomial scalar(const std::vector<Complex>& coefficients);
  /// z^(n) with a 1x1 unit coefficient.
  static DAPolynomial monomial(int degree);

  Shape shape() const { return shape_; }
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  const std::vector<CMatrix>& coefficients() const { return coefficients_; }
  const CMatrix& coefficient(int n) const { return coefficients_[static_cast<std::size_t>(n)]; }

  /// Drops leading coefficients whose entries are all below tol.
  DAPolynomial trimmed(double tol) const;

  /// c * I_k polynomial from a scalar polynomial.
  DAPolynomial times_identity(Index k) const;

 private:
  Shape shape_;
  std::vector<CMatrix> coefficients_;
};

/// Coefficient convolution, z^(m) . z^(n) = z^(m+n). Throws ShapeError.
DAPolynomial convolve_poly(const DAPolynomial& p, const DAPolynomial& q);

/// (p . f)(z) = sum_n A_n (Z+^n f)(z). Throws NotAnalytic, ShapeError.
DAFunction apply_poly(const DAPolynomial& p, const DAFunction& f, const Tolerance& tol = {},
                      Exec exec = Exec::parallel);

/// (g . p)(z) = sum_n (Z+^n g)(z) A_n.
DAFunction apply_poly_right(const DAFunction& g, const DAPolynomial& p, const Tolerance& tol = {},
                            Exec exec = Exec::parallel);

/// Pointwise values sum_n A_n z^(n)(z).
DAFunction to_function(const DAPolynomial& p, const LatticePtr& lattice, Exec exec = Exec::parallel);

}  // namespace dalat
