#include <catch_amalgamated.hpp>

#include <random>

#include "dalat/calculus.hpp"
#include "dalat/error.hpp"
#include "dalat/oracles.hpp"
#include "dalat/rational.hpp"
#include "test_support.hpp"

using namespace dalat;
using dalat::testing::at;

namespace {

const Complex I(0.0, 1.0);

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::IoError;
}

std::vector<Complex> scalars(const DAPolynomial& p) {
  std::vector<Complex> out;
  for (const auto& c : p.coefficients()) out.push_back(c(0, 0));
  return out;
}

}  // namespace

TEST_CASE("kernel factor", "[rational]") {
  const auto f = kernel_factor(1.0, 2.0);
  REQUIRE(f.num.size() == 2);
  CHECK(std::abs(f.num[1] - 0.5) < 1e-15);
  CHECK(std::abs(f.den[1]) < 1e-15);
  const auto g = kernel_factor(I, 4.0);
  CHECK(std::abs(g.num[1] - (1.0 - I) / 8.0) < 1e-15);
  CHECK(std::abs(g.den[1] - (1.0 + I) / 8.0) < 1e-15);
}

TEST_CASE("kernel examples", "[rational]") {
  const auto lat = make_lattice(LatticeKind::square, 3);
  const auto k0 = kernel(lat, lat->origin(), 2.0);
  CHECK(max_difference(k0.values, DAFunction::constant(lat, scalar_matrix(1.0))) < 1e-15);
  CHECK(k0.realization.state_dim() == 0);

  for (std::size_t w = 0; w < lat->vertex_count(); ++w) {
    const auto k = kernel(lat, w, 3.0);
    CHECK(std::abs(k.values.scalar_at(lat->origin()) - 1.0) < 1e-14);
    CHECK(k.realization.state_dim() == Index(find_path(*lat, lat->origin(), w).size() - 1));
  }

  const auto one = at(*lat, 1.0);
  CHECK(std::abs(kernel(lat, one, 2.0).values.scalar_at(one) - 1.5) < 1e-14);

  CHECK(code_of([&] { kernel(lat, one, 1.0); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([&] { kernel(lat, one, 0.5); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("kernel matches the truncated reproducing series", "[rational][oracle]") {
  for (auto kind : {LatticeKind::square, LatticeKind::rhombic}) {
    const auto lat = make_lattice(kind, 3);
    const auto basis = monomial_basis(lat, 200);
    for (double M : {2.0, 4.0}) {
      for (std::size_t w = 0; w < lat->vertex_count(); w += 5) {
        const auto k = kernel(lat, w, M);
        CHECK(max_difference(k.values, oracles::kernel_series(basis, w, M)) < 1e-9);
      }
    }
  }
}

TEST_CASE("kernel is DA and Hermitian symmetric", "[rational][property]") {
  const auto lat = make_lattice(LatticeKind::rhombic, 3);
  for (std::size_t w = 0; w < lat->vertex_count(); w += 3) {
    const auto k = kernel(lat, w, 3.0);
    CHECK(cr_residual(k.values) < 1e-12);
    for (std::size_t v = 0; v < lat->vertex_count(); v += 4) {
      const auto kv = kernel(lat, v, 3.0);
      CHECK(std::abs(k.values.scalar_at(v) - std::conj(kv.values.scalar_at(w))) < 1e-12);
    }
  }
}

TEST_CASE("quotient certificate examples", "[rational]") {
  const auto lat = make_lattice(LatticeKind::square, 3);

  const auto geo = quotient_certificate(RationalDA::from(Realization::scalar(0.3, 1.0, 0.3, 1.0), lat));
  REQUIRE(geo.p.degree() == 1);
  CHECK(std::abs(scalars(geo.p)[1] + 0.3) < 1e-15);
  CHECK(geo.q.degree() == 0);
  CHECK(std::abs(scalars(geo.q)[0] - 1.0) < 1e-15);
  CHECK(geo.residual < 1e-12);
  CHECK(geo.pole_free);

  CMatrix D(2, 1);
  D << 1.0, Complex(2.0, -1.0);
  const auto constant = quotient_certificate(RationalDA::from(Realization::constant(D), lat));
  CHECK(constant.p.degree() == 0);
  CHECK(max_abs(constant.q.coefficient(0) - D) == 0.0);
  CHECK(constant.residual == 0.0);

  CMatrix A(2, 2), B(2, 1), C(1, 2);
  A << 0, 1, 0, 0;
  B << 0, 1;
  C << 3, 2;
  const auto poly = quotient_certificate(RationalDA::from(Realization(A, B, C, scalar_matrix(1.0)), lat));
  CHECK(poly.p.degree() == 0);
  const auto q = scalars(poly.q);
  REQUIRE(q.size() == 3);
  CHECK(std::abs(q[0] - 1.0) < 1e-15);
  CHECK(std::abs(q[1] - 2.0) < 1e-15);
  CHECK(std::abs(q[2] - 3.0) < 1e-15);
  CHECK(poly.residual < 1e-12);

  const auto k1 = quotient_certificate(kernel(lat, at(*lat, 1.0), 2.0));
  CHECK(k1.p.degree() == 0);
  const auto q1 = scalars(k1.q);
  REQUIRE(q1.size() == 2);
  CHECK(std::abs(q1[1] - 0.5) < 1e-15);

  const auto ki = quotient_certificate(kernel(lat, at(*lat, I), 2.0));
  CHECK(ki.p.degree() == 1);
  CHECK(std::abs(scalars(ki.p)[1] - (1.0 + I) / 4.0) < 1e-15);
  CHECK(ki.residual < 1e-12);
  CHECK(ki.pole_free);
}

TEST_CASE("quotient certificate residual stays small on random systems", "[rational][property]") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto kind : {LatticeKind::square, LatticeKind::rhombic}) {
    const auto lat = make_lattice(kind, 3);
    for (int trial = 0; trial < 8; ++trial) {
      const Index l = 1 + trial % 4, m = 1 + trial % 2;
      auto rnd = [&](Index r, Index c) {
        CMatrix x(r, c);
        for (Index j = 0; j < c; ++j)
          for (Index i = 0; i < r; ++i) x(i, j) = Complex(u(rng), u(rng));
        return x;
      };
      CMatrix A = rnd(l, l);
      A *= 0.7 / A.norm();
      const auto f = RationalDA::from(Realization(A, rnd(l, 1), rnd(m, l), rnd(m, 1)), lat);
      const auto cert = quotient_certificate(f);
      CHECK(cert.p.degree() <= int(l));
      CHECK(cert.q.degree() <= int(l));
      CHECK(cert.residual <= 1e-9 * std::max(1.0, max_magnitude(f.values)));
      CHECK(cert.pole_free);
    }
  }
}

TEST_CASE("shift rank", "[rational]") {
  const auto lat = make_lattice(LatticeKind::square, 4);
  CHECK(shift_rank(exp_basis(lat, 0.3), 5) == 1);
  CHECK(shift_rank(DAFunction::constant(lat, scalar_matrix(2.0)), 3) == 1);
  const auto basis = monomial_basis(lat, 3);
  CHECK(shift_rank(basis[2], 3) == 3);
  CHECK(shift_rank(basis[3], 3) == 4);
  CHECK(shift_rank(exp_basis(lat, 0.3) + exp_basis(lat, -0.4), 3) == 2);
  const auto zero = DAFunction::constant(lat, scalar_matrix(0.0));
  CHECK(shift_rank(zero, 2) == 0);

  const auto conj = DAFunction::scalar(lat, [](Complex z) { return std::conj(z); });
  CHECK(code_of([&] { shift_rank(conj, 2); }) == ErrorCode::NotAnalytic);
  CHECK(code_of([&] { shift_rank(exp_basis(lat, 0.3), 20); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("shift rank of a realization is bounded by its state dimension", "[rational][property]") {
  const auto lat = make_lattice(LatticeKind::rhombic, 4);
  std::mt19937_64 rng(73);
  for (int l = 1; l <= 3; ++l) {
    CMatrix A = CMatrix::Zero(l, l);
    for (int i = 0; i < l; ++i) A(i, i) = 0.2 + 0.15 * i;
    const auto f = evaluate(Realization(A, CMatrix::Ones(l, 1), CMatrix::Ones(1, l), scalar_matrix(0.5)), lat);
    CHECK(shift_rank(f, 4) <= l + 1);
    CHECK(shift_rank(f, 4) >= l);
  }
}

TEST_CASE("gram matrix", "[rational]") {
  const auto lat = make_lattice(LatticeKind::rhombic, 3);
  std::vector<std::size_t> w;
  for (std::size_t v = 0; v < lat->vertex_count(); v += 2) w.push_back(v);
  const auto G = gram_matrix(lat, w, 4.0);
  REQUIRE(G.rows() == Index(w.size()));
  const auto s = gram_spectrum(G);
  CHECK(s.hermitian_defect < 1e-12);
  CHECK(s.min_eigenvalue >= -1e-9 * s.norm);
  for (Index i = 0; i < G.rows(); ++i) CHECK(G(i, i).real() >= 1.0 - 1e-12);
  for (Index i = 0; i < G.rows(); ++i) {
    const auto k = kernel(lat, w[std::size_t(i)], 4.0);
    for (Index j = 0; j < G.rows(); ++j) CHECK(std::abs(G(j, i) - k.values.scalar_at(w[std::size_t(j)])) < 1e-12);
  }

  CMatrix bad(2, 2);
  bad << 1.0, 0.0, 1.0, -1.0;
  const auto b = gram_spectrum(bad);
  CHECK(b.hermitian_defect == 1.0);
  CHECK(b.min_eigenvalue < -0.5);
}
