#pragma once

#include <vector>

#include "dalat/da_function.hpp"
#include "dalat/polynomial.hpp"
#include "dalat/realization.hpp"

namespace dalat {

/// An admissible realization together with its values on a patch.
struct RationalDA {
  Realization realization;
  DAFunction values;

  /// Evaluates r on the lattice. Throws ForbiddenSpectrum.
  static RationalDA from(Realization r, const LatticePtr& lattice, Exec exec = Exec::parallel);
  const Lattice& lattice() const { return values.lattice(); }
};

/// Degree-1 scalar factor of the kernel for one path step d:
/// (2 + (t/M)(1 + conj d)) / (2 + (t/M)(1 - conj d)).
RationalScalarFunction kernel_factor(Complex step, double M);

/// K_w(z) = sum_n z^(n) conj(w^(n)) / M^n, realized as the product of the
/// kernel factors along find_path(0, w). Throws InvalidParameter for M <= 1.
RationalDA kernel(const LatticePtr& lattice, std::size_t w, double M, Exec exec = Exec::parallel);

struct QuotientCertificate {
  DAPolynomial p;  // scalar, tau-image det(I - tA)
  DAPolynomial q;  // tau-image det(I - tA) * tau f
  double residual = 0.0;  // max over the patch of |(pI . f) - q|
  bool pole_free = false;  // tau p has no root on the pole set
};

QuotientCertificate quotient_certificate(const RationalDA& f, Exec exec = Exec::parallel);

/// Numerical rank of f, Z- f, ..., Z-^K f sampled on their common domain.
/// Rows are normalised before a column-pivoted QR with relative threshold
/// rank_tol. Throws NotAnalytic, and InvalidParameter when the chain has no
/// common vertex left.
int shift_rank(const DAFunction& f, int K, const Tolerance& tol = {}, double rank_tol = 1e-8);

/// G_ij = K_{w_j}(w_i).
CMatrix gram_matrix(const LatticePtr& lattice, const std::vector<std::size_t>& vertices, double M,
                    Exec exec = Exec::parallel);

struct GramSpectrum {
  double hermitian_defect = 0.0;  // max |G - G^*|
  double norm = 0.0;              // spectral norm
  double min_eigenvalue = 0.0;    // of the Hermitian part
};

GramSpectrum gram_spectrum(const CMatrix& G);

}  // namespace dalat
