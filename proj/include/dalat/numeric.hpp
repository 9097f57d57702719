#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace dalat {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// Absolute tolerance for coordinate equality (vertex positions, directions).
inline constexpr double kCoordTol = 1e-9;

/// Parameters closer than this to a forbidden or pole set are rejected.
inline constexpr double kNearPoleTol = 1e-9;

struct Shape {
  Index rows = 1;
  Index cols = 1;

  friend bool operator==(const Shape&, const Shape&) = default;
};

inline Shape shape_of(const CMatrix& m) { return {m.rows(), m.cols()}; }

/// Relative tolerance with an absolute floor: |x| <= max(rel * scale, abs).
struct Tolerance {
  double rel = 1e-9;
  double abs = 1e-12;

  double bound(double scale) const { return std::max(rel * scale, abs); }
};

inline bool near(Complex a, Complex b, double tol = kCoordTol) { return std::abs(a - b) <= tol; }

/// Largest entry magnitude; 0 for empty matrices.
inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline CMatrix scalar_matrix(Complex c) {
  CMatrix m(1, 1);
  m(0, 0) = c;
  return m;
}

enum class Exec { serial, parallel };

}  // namespace dalat
