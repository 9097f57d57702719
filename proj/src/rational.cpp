#include "dalat/rational.hpp"

#include <sstream>

#include "dalat/calculus.hpp"
#include "dalat/error.hpp"
#include "dalat/kernels.hpp"

namespace dalat {

RationalDA RationalDA::from(Realization r, const LatticePtr& lattice, Exec exec) {
  auto values = evaluate(r, lattice, exec);
  return RationalDA{std::move(r), std::move(values)};
}

RationalScalarFunction kernel_factor(Complex step, double M) {
  const Complex d = std::conj(step);
  return {{1.0, (1.0 + d) / (2.0 * M)}, {1.0, (1.0 - d) / (2.0 * M)}};
}

namespace {

Realization kernel_realization(const Lattice& lat, const Path& path, double M) {
  if (!(M > 1.0)) fail(ErrorCode::InvalidParameter, "kernel needs M > 1");
  auto r = Realization::constant(scalar_matrix(1.0));
  for (std::size_t k = 1; k < path.size(); ++k) {
    const auto factor = tau_inverse(kernel_factor(lat.coord(path[k]) - lat.coord(path[k - 1]), M),
                                    lat.directions());
    r = product(r, factor);
  }
  return r;
}

}  // namespace

RationalDA kernel(const LatticePtr& lattice, std::size_t w, double M, Exec exec) {
  const auto& lat = *lattice;
  return RationalDA::from(kernel_realization(lat, find_path(lat, lat.origin(), w), M), lattice, exec);
}

QuotientCertificate quotient_certificate(const RationalDA& f, Exec exec) {
  const auto& r = f.realization;
  const auto l = r.state_dim();
  const auto ch = leverrier(r.A);

  std::vector<CMatrix> q;
  for (Index j = 0; j <= l; ++j) {
    CMatrix c = r.D * ch.det[j];
    if (j > 0) c += r.C * ch.adj[j - 1] * r.B;
    q.push_back(std::move(c));
  }
  QuotientCertificate out{DAPolynomial::scalar(ch.det), DAPolynomial(std::move(q))};

  const auto lhs = apply_poly(out.p.times_identity(r.shape().rows), f.values, Tolerance{}, exec);
  const auto rhs = to_function(out.q, f.values.lattice_ptr(), exec);
  out.residual = max_difference(lhs, rhs);

  out.pole_free = true;
  for (const auto& pole : f.lattice().directions().poles) {
    double scale = 0.0, power = 1.0;
    for (const auto& c : ch.det) {
      scale += std::abs(c) * power;
      power *= std::abs(pole);
    }
    if (std::abs(evaluate_polynomial(ch.det, pole)) <= kNearPoleTol * scale) out.pole_free = false;
  }
  return out;
}

int shift_rank(const DAFunction& f, int K, const Tolerance& tol, double rank_tol) {
  if (K < 0) fail(ErrorCode::InvalidParameter, "K must be nonnegative");
  std::vector<DAFunction> chain{f};
  for (int k = 1; k <= K; ++k) chain.push_back(backward_shift(chain.back(), tol));

  std::vector<std::size_t> domain;
  for (std::size_t v = 0; v < f.lattice().vertex_count(); ++v) {
    bool all = true;
    for (const auto& g : chain) all = all && g.defined(v);
    if (all) domain.push_back(v);
  }
  if (domain.empty()) {
    std::ostringstream msg;
    msg << "Z-^" << K << " leaves no vertex of the patch defined";
    fail(ErrorCode::InvalidParameter, msg.str());
  }

  const auto entries = f.shape().rows * f.shape().cols;
  const auto cols = static_cast<Index>(domain.size()) * entries;
  const double floor = tol.bound(max_magnitude(f));
  CMatrix M = CMatrix::Zero(cols, static_cast<Index>(chain.size()));
  for (std::size_t k = 0; k < chain.size(); ++k) {
    for (std::size_t i = 0; i < domain.size(); ++i) {
      const auto& value = chain[k].at(domain[i]);
      for (Index e = 0; e < entries; ++e) M(Index(i) * entries + e, Index(k)) = value(e % value.rows(), e / value.rows());
    }
    const double n = M.col(Index(k)).cwiseAbs().maxCoeff();
    if (n <= floor) {
      M.col(Index(k)).setZero();
    } else {
      M.col(Index(k)) /= n;
    }
  }
  Eigen::ColPivHouseholderQR<CMatrix> qr(M);
  qr.setThreshold(rank_tol);
  return static_cast<int>(qr.rank());
}

CMatrix gram_matrix(const LatticePtr& lattice, const std::vector<std::size_t>& vertices, double M, Exec exec) {
  const auto k = static_cast<Index>(vertices.size());
  CMatrix G(k, k);
  kernels::for_each_index(exec, vertices.size(), [&](std::size_t j) {
    const auto path = find_path(*lattice, lattice->origin(), vertices[j]);
    const auto values = evaluate_at(kernel_realization(*lattice, path, M), *lattice, vertices);
    for (Index i = 0; i < k; ++i) G(i, Index(j)) = values[std::size_t(i)](0, 0);
  });
  return G;
}

GramSpectrum gram_spectrum(const CMatrix& G) {
  GramSpectrum out;
  if (G.size() == 0) return out;
  out.hermitian_defect = max_abs(G - G.adjoint());
  const CMatrix H = (G + G.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(H, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = eig.eigenvalues().minCoeff();
  out.norm = eig.eigenvalues().cwiseAbs().maxCoeff();
  return out;
}

}  // namespace dalat
