#pragma once

#include <vector>

#include "dalat/da_function.hpp"
#include "dalat/lattice.hpp"

namespace dalat {

/// f(z) = D + C (I - zA)^{-.} . (zB); state dimension l = A.rows().
struct Realization {
  CMatrix A;  // l x l
  CMatrix B;  // l x n
  CMatrix C;  // m x l
  CMatrix D;  // m x n

  /// Checks block dimensions; throws ShapeError.
  Realization(CMatrix A, CMatrix B, CMatrix C, CMatrix D);

  /// l = 0 realization of a constant.
  static Realization constant(const CMatrix& D);
  static Realization scalar(Complex a, Complex b, Complex c, Complex d);

  Index state_dim() const { return A.rows(); }
  Shape shape() const { return {D.rows(), D.cols()}; }
};

/// Rational scalar function num(t)/den(t), coefficients in ascending powers.
struct RationalScalarFunction {
  std::vector<Complex> num;
  std::vector<Complex> den;

  Complex operator()(Complex t) const;
  /// Divides through by den(0) and drops exactly-zero leading coefficients.
  /// Throws NotRealizable when den(0) == 0.
  RationalScalarFunction normalized() const;
};

Complex evaluate_polynomial(const std::vector<Complex>& coefficients, Complex t);

/// True iff det(2I + (1+d)A) is nonsingular for every edge direction d, i.e.
/// the spectrum of A avoids the forbidden set. "Singular" means
/// |det| <= tol * prod_i (2 + |1+d| * |A e_i|).
bool check_spectrum(const CMatrix& A, const DirectionData& directions, double tol = kNearPoleTol);

/// Product over a path of (2I + (1+d)A)(2I + (1-d)A)^{-1}.
CMatrix resolvent_along(const CMatrix& A, const Lattice& lattice, const Path& path);
CMatrix resolvent_at(const CMatrix& A, const Lattice& lattice, std::size_t vertex);
/// (I - zA)^{-.} on every vertex. Throws ForbiddenSpectrum.
DAFunction resolvent(const CMatrix& A, const LatticePtr& lattice, Exec exec = Exec::parallel);

/// D + Z+(C R B), R the resolvent of A. Throws ForbiddenSpectrum.
DAFunction evaluate(const Realization& r, const LatticePtr& lattice, Exec exec = Exec::parallel);

/// Values of r at the given vertices only: the row C R(z) is carried along
/// the origin tree through their ancestors. Throws ForbiddenSpectrum.
std::vector<CMatrix> evaluate_at(const Realization& r, const Lattice& lattice, const std::vector<std::size_t>& vertices);

Realization sum(const Realization& r1, const Realization& r2);
/// Realization of f1 . f2 (block lower-triangular state matrix).
Realization product(const Realization& r1, const Realization& r2);
/// Realization of the convolution inverse with A^x = A - B D^{-1} C.
/// Throws ShapeError, SingularD, ForbiddenSpectrum.
Realization inverse(const Realization& r, const DirectionData& directions);

/// D + tC(I - tA)^{-1}B. Throws PoleError.
CMatrix tau_eval(const Realization& r, Complex t);

/// [D, CB, CAB, ..., CA^{K-1}B] (K + 1 entries).
std::vector<CMatrix> tau_markov(const Realization& r, int K);

/// Controllable companion realization of num/den. Throws NotRealizable when
/// den(0) = 0 or den vanishes (within kNearPoleTol) on the pole set.
Realization tau_inverse(const RationalScalarFunction& f, const DirectionData& directions);

/// Ho-Kalman from [D, h_1, h_2, ...] via a column-pivoted QR of the block
/// Hankel matrix. Throws RankError when the result does not reproduce the data.
Realization minimal_realization(const std::vector<CMatrix>& markov, double tol = 1e-9);

/// det(I - tA) = sum_j p_j t^j and adj(I - tA) = sum_j M_j t^j from the
/// Faddeev-LeVerrier recursion.
struct CharacteristicData {
  std::vector<Complex> det;  // p_0 .. p_l, p_0 = 1
  std::vector<CMatrix> adj;  // M_0 .. M_{l-1}
};
CharacteristicData leverrier(const CMatrix& A);

/// Spectral radius estimate by power iteration on A^k normalised.
double spectral_radius_estimate(const CMatrix& A, int iterations = 200);

}  // namespace dalat
