#include "dalat/realization.hpp"

#include <cmath>
#include <sstream>

#include "dalat/calculus.hpp"
#include "dalat/error.hpp"
#include "dalat/kernels.hpp"

namespace dalat {

namespace {

// |det M| against prod_i (base + weight * |A e_i|), both through one LU.
bool nearly_singular(const CMatrix& M, const CMatrix& A, double base, double weight, double tol) {
  if (M.rows() == 0) return false;
  // det(M) is the product of the LU pivots; a vanishing pivot relative to the
  // entry scale flags singularity without the product under- or overflowing.
  const Eigen::PartialPivLU<CMatrix> lu(M);
  double col = 0.0;
  for (Index i = 0; i < A.cols(); ++i) col = std::max(col, A.col(i).norm());
  const double pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  return !(pivot > tol * (base + weight * col));
}

std::vector<CMatrix> resolvent_factor_table(const CMatrix& A, const DirectionData& dirs) {
  const auto l = A.rows();
  const CMatrix I = CMatrix::Identity(l, l);
  std::vector<CMatrix> table;
  table.reserve(dirs.directions.size());
  for (const auto& d : dirs.directions) {
    const CMatrix num = 2.0 * I + (1.0 + d) * A;
    const CMatrix den = 2.0 * I + (1.0 - d) * A;
    table.push_back(den.partialPivLu().solve(num));
  }
  return table;
}

void require_spectrum(const CMatrix& A, const DirectionData& dirs, const char* what) {
  if (!check_spectrum(A, dirs)) {
    fail(ErrorCode::ForbiddenSpectrum, std::string(what) + ": spectrum meets the forbidden set");
  }
}

}  // namespace

Realization::Realization(CMatrix a, CMatrix b, CMatrix c, CMatrix d)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)) {
  const auto l = A.rows();
  if (A.cols() != l || B.rows() != l || C.cols() != l || C.rows() != D.rows() || B.cols() != D.cols()) {
    std::ostringstream msg;
    msg << "incompatible blocks A " << A.rows() << "x" << A.cols() << ", B " << B.rows() << "x" << B.cols()
        << ", C " << C.rows() << "x" << C.cols() << ", D " << D.rows() << "x" << D.cols();
    fail(ErrorCode::ShapeError, msg.str());
  }
}

Realization Realization::constant(const CMatrix& D) {
  return Realization(CMatrix(0, 0), CMatrix(0, D.cols()), CMatrix(D.rows(), 0), D);
}

Realization Realization::scalar(Complex a, Complex b, Complex c, Complex d) {
  return Realization(scalar_matrix(a), scalar_matrix(b), scalar_matrix(c), scalar_matrix(d));
}

Complex evaluate_polynomial(const std::vector<Complex>& coefficients, Complex t) {
  Complex acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Complex RationalScalarFunction::operator()(Complex t) const {
  return evaluate_polynomial(num, t) / evaluate_polynomial(den, t);
}

RationalScalarFunction RationalScalarFunction::normalized() const {
  if (den.empty() || den.front() == 0.0) fail(ErrorCode::NotRealizable, "denominator vanishes at 0");
  RationalScalarFunction out{num, den};
  if (out.num.empty()) out.num.push_back(0.0);
  const Complex c = den.front();
  for (auto& x : out.num) x /= c;
  for (auto& x : out.den) x /= c;
  while (out.num.size() > 1 && out.num.back() == 0.0) out.num.pop_back();
  while (out.den.size() > 1 && out.den.back() == 0.0) out.den.pop_back();
  return out;
}

bool check_spectrum(const CMatrix& A, const DirectionData& dirs, double tol) {
  if (A.rows() != A.cols()) fail(ErrorCode::ShapeError, "state matrix must be square");
  const auto l = A.rows();
  const CMatrix I = CMatrix::Identity(l, l);
  for (const auto& d : dirs.directions) {
    if (nearly_singular(2.0 * I + (1.0 + d) * A, A, 2.0, std::abs(1.0 + d), tol)) return false;
  }
  return true;
}

CMatrix resolvent_along(const CMatrix& A, const Lattice& lattice, const Path& path) {
  require_spectrum(A, lattice.directions(), "resolvent");
  const auto table = resolvent_factor_table(A, lattice.directions());
  CMatrix value = CMatrix::Identity(A.rows(), A.rows());
  for (auto d : detail::path_directions(lattice, path)) value = value * table[d];
  return value;
}

CMatrix resolvent_at(const CMatrix& A, const Lattice& lattice, std::size_t vertex) {
  return resolvent_along(A, lattice, lattice.tree().path_to(vertex));
}

DAFunction resolvent(const CMatrix& A, const LatticePtr& lattice, Exec exec) {
  const auto& lat = *lattice;
  require_spectrum(A, lat.directions(), "resolvent");
  const auto table = resolvent_factor_table(A, lat.directions());
  const auto& tree = lat.tree();
  std::vector<CMatrix> values(lat.vertex_count(), CMatrix::Identity(A.rows(), A.rows()));
  kernels::tree_walk(exec, tree, [&](std::size_t p, std::size_t v) {
    values[v] = values[p] * table[tree.direction[v]];
  });
  return DAFunction(lattice, {A.rows(), A.rows()}, std::move(values));
}

DAFunction evaluate(const Realization& r, const LatticePtr& lattice, Exec exec) {
  const auto res = resolvent(r.A, lattice, exec);
  std::vector<CMatrix> inner(lattice->vertex_count());
  kernels::for_each_index(exec, inner.size(), [&](std::size_t v) { inner[v] = r.C * res.at(v) * r.B; });
  const auto shifted =
      detail::forward_shift_unchecked(DAFunction(lattice, r.shape(), std::move(inner)), exec);
  return DAFunction::constant(lattice, r.D) + shifted;
}

std::vector<CMatrix> evaluate_at(const Realization& r, const Lattice& lattice, const std::vector<std::size_t>& vertices) {
  require_spectrum(r.A, lattice.directions(), "evaluate");
  const auto& tree = lattice.tree();
  const auto n = lattice.vertex_count();
  std::vector<char> needed(n, 0);
  for (auto v : vertices) {
    if (v >= n || !tree.reachable(v)) fail(ErrorCode::InvalidParameter, "vertex outside the origin tree");
    for (auto u = v; u != npos && !needed[u]; u = tree.parent[u]) needed[u] = 1;
  }
  const auto table = resolvent_factor_table(r.A, lattice.directions());
  // row = C R(z), g = row B, F = integral of g; the value is D + (g(0) - g)/2 + F.
  std::vector<CMatrix> row(n), g(n), F(n);
  const auto root = lattice.origin();
  row[root] = r.C;
  g[root] = r.C * r.B;
  F[root] = CMatrix::Zero(g[root].rows(), g[root].cols());
  for (std::size_t k = 1; k < tree.order.size(); ++k) {
    const auto v = tree.order[k];
    if (!needed[v]) continue;
    const auto p = tree.parent[v];
    row[v] = row[p] * table[tree.direction[v]];
    g[v] = row[v] * r.B;
    F[v] = F[p] + (g[p] + g[v]) * (0.5 * (lattice.coord(v) - lattice.coord(p)));
  }
  std::vector<CMatrix> out;
  out.reserve(vertices.size());
  for (auto v : vertices) out.push_back(r.D + (g[root] - g[v]) * 0.5 + F[v]);
  return out;
}

Realization sum(const Realization& r1, const Realization& r2) {
  if (r1.shape() != r2.shape()) fail(ErrorCode::ShapeError, "sum needs equal shapes");
  const auto l1 = r1.state_dim(), l2 = r2.state_dim();
  CMatrix A = CMatrix::Zero(l1 + l2, l1 + l2);
  A.topLeftCorner(l1, l1) = r1.A;
  A.bottomRightCorner(l2, l2) = r2.A;
  CMatrix B(l1 + l2, r1.B.cols());
  B << r1.B, r2.B;
  CMatrix C(r1.C.rows(), l1 + l2);
  C << r1.C, r2.C;
  return Realization(std::move(A), std::move(B), std::move(C), r1.D + r2.D);
}

Realization product(const Realization& r1, const Realization& r2) {
  if (r1.shape().cols != r2.shape().rows) fail(ErrorCode::ShapeError, "product needs composable shapes");
  const auto l1 = r1.state_dim(), l2 = r2.state_dim();
  CMatrix A = CMatrix::Zero(l1 + l2, l1 + l2);
  A.topLeftCorner(l2, l2) = r2.A;
  A.bottomLeftCorner(l1, l2) = r1.B * r2.C;
  A.bottomRightCorner(l1, l1) = r1.A;
  CMatrix B(l1 + l2, r2.B.cols());
  B << r2.B, r1.B * r2.D;
  CMatrix C(r1.C.rows(), l1 + l2);
  C << r1.D * r2.C, r1.C;
  return Realization(std::move(A), std::move(B), std::move(C), r1.D * r2.D);
}

Realization inverse(const Realization& r, const DirectionData& dirs) {
  if (r.D.rows() != r.D.cols()) fail(ErrorCode::ShapeError, "inverse needs a square function");
  Eigen::FullPivLU<CMatrix> lu(r.D);
  lu.setThreshold(kNearPoleTol);
  if (!lu.isInvertible()) fail(ErrorCode::SingularD, "feedthrough D is singular");
  const CMatrix Dinv = lu.inverse();
  CMatrix Ax = r.A - r.B * Dinv * r.C;
  require_spectrum(Ax, dirs, "inverse");
  return Realization(std::move(Ax), r.B * Dinv, -Dinv * r.C, Dinv);
}

CMatrix tau_eval(const Realization& r, Complex t) {
  const auto l = r.state_dim();
  if (l == 0) return r.D;
  const CMatrix M = CMatrix::Identity(l, l) - t * r.A;
  if (nearly_singular(M, r.A, 1.0, std::abs(t), kNearPoleTol)) {
    std::ostringstream msg;
    msg << "t = " << t << " is a pole";
    fail(ErrorCode::PoleError, msg.str());
  }
  return r.D + t * r.C * M.partialPivLu().solve(r.B);
}

std::vector<CMatrix> tau_markov(const Realization& r, int K) {
  if (K < 0) fail(ErrorCode::InvalidParameter, "K must be nonnegative");
  std::vector<CMatrix> out{r.D};
  CMatrix X = r.B;
  for (int k = 1; k <= K; ++k) {
    out.push_back(r.C * X);
    X = r.A * X;
  }
  return out;
}

Realization tau_inverse(const RationalScalarFunction& f, const DirectionData& dirs) {
  const auto g = f.normalized();
  for (const auto& p : dirs.poles) {
    if (p == 0.0) continue;
    double scale = 0.0;
    for (std::size_t k = 0; k < g.den.size(); ++k) scale += std::abs(g.den[k]) * std::pow(std::abs(p), double(k));
    if (std::abs(evaluate_polynomial(g.den, p)) <= kNearPoleTol * scale) {
      std::ostringstream msg;
      msg << "denominator vanishes at the pole-set point " << p;
      fail(ErrorCode::NotRealizable, msg.str());
    }
  }
  const auto n = static_cast<Index>(std::max(g.num.size(), g.den.size()) - 1);
  auto den_at = [&](Index k) { return k < Index(g.den.size()) ? g.den[k] : Complex(0.0); };
  auto num_at = [&](Index k) { return k < Index(g.num.size()) ? g.num[k] : Complex(0.0); };
  const Complex d0 = num_at(0);
  if (n == 0) return Realization::constant(scalar_matrix(d0));

  CMatrix A = CMatrix::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) A(i, i + 1) = 1.0;
  for (Index j = 0; j < n; ++j) A(n - 1, j) = -den_at(n - j);
  CMatrix B = CMatrix::Zero(n, 1);
  B(n - 1, 0) = 1.0;
  CMatrix C(1, n);
  for (Index j = 0; j < n; ++j) C(0, j) = num_at(n - j) - d0 * den_at(n - j);
  if (!check_spectrum(A, dirs)) fail(ErrorCode::NotRealizable, "companion matrix meets the forbidden set");
  return Realization(std::move(A), std::move(B), std::move(C), scalar_matrix(d0));
}

Realization minimal_realization(const std::vector<CMatrix>& markov, double tol) {
  if (markov.empty()) fail(ErrorCode::RankError, "no Markov parameters");
  const CMatrix& D = markov.front();
  const auto m = D.rows(), n = D.cols();
  for (const auto& h : markov) {
    if (h.rows() != m || h.cols() != n) fail(ErrorCode::ShapeError, "Markov parameter shapes differ");
  }
  const auto L = static_cast<Index>(markov.size()) - 1;
  double scale = 0.0;
  for (Index k = 1; k <= L; ++k) scale = std::max(scale, max_abs(markov[k]));
  if (scale == 0.0) return Realization::constant(D);

  const Index blocks = L / 2;
  if (blocks == 0) fail(ErrorCode::RankError, "need at least two Markov parameters beyond D");
  CMatrix H(blocks * m, blocks * n), Hs(blocks * m, blocks * n);
  for (Index i = 0; i < blocks; ++i) {
    for (Index j = 0; j < blocks; ++j) {
      H.block(i * m, j * n, m, n) = markov[i + j + 1];
      Hs.block(i * m, j * n, m, n) = markov[i + j + 2];
    }
  }
  Eigen::ColPivHouseholderQR<CMatrix> qr(H);
  qr.setThreshold(tol);
  const auto r = qr.rank();
  if (r == 0) fail(ErrorCode::RankError, "numerically zero Hankel matrix with nonzero data");

  const CMatrix Q = qr.householderQ() * CMatrix::Identity(H.rows(), r);
  const CMatrix R = qr.matrixR().topRows(r).template triangularView<Eigen::Upper>();
  const CMatrix ctrl = R * qr.colsPermutation().transpose();  // r x (blocks*n)
  const CMatrix ctrl_pinv = ctrl.adjoint() * (ctrl * ctrl.adjoint()).partialPivLu().inverse();

  CMatrix A = Q.adjoint() * Hs * ctrl_pinv;
  CMatrix B = ctrl.leftCols(n);
  CMatrix C = Q.topRows(m);
  Realization out(std::move(A), std::move(B), std::move(C), D);

  const auto check = tau_markov(out, static_cast<int>(L));
  for (Index k = 1; k <= L; ++k) {
    if (max_abs(check[k] - markov[k]) > std::max(tol * scale, 1e-12)) {
      std::ostringstream msg;
      msg << "rank-" << r << " realization misses Markov parameter " << k << " by "
          << max_abs(check[k] - markov[k]);
      fail(ErrorCode::RankError, msg.str());
    }
  }
  return out;
}

CharacteristicData leverrier(const CMatrix& A) {
  if (A.rows() != A.cols()) fail(ErrorCode::ShapeError, "leverrier needs a square matrix");
  const auto l = A.rows();
  CharacteristicData out;
  out.det.push_back(1.0);
  CMatrix M = CMatrix::Zero(l, l);
  const CMatrix I = CMatrix::Identity(l, l);
  for (Index k = 1; k <= l; ++k) {
    M = A * M + out.det.back() * I;
    out.adj.push_back(M);
    out.det.push_back(-(A * M).trace() / double(k));
  }
  return out;
}

double spectral_radius_estimate(const CMatrix& A, int iterations) {
  if (A.rows() == 0) return 0.0;
  CMatrix X = CMatrix::Identity(A.rows(), A.cols());
  double log_norm = 0.0;
  for (int k = 1; k <= iterations; ++k) {
    X = A * X;
    const double s = X.norm();
    if (s == 0.0) return 0.0;
    X /= s;
    log_norm += std::log(s);
  }
  return std::exp(log_norm / iterations);
}

}  // namespace dalat
