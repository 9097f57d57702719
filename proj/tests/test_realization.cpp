#include <catch_amalgamated.hpp>

#include <random>

#include "dalat/calculus.hpp"
#include "dalat/error.hpp"
#include "dalat/oracles.hpp"
#include "dalat/polynomial.hpp"
#include "dalat/realization.hpp"
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

CMatrix random_matrix(std::mt19937_64& rng, Index r, Index c, double norm = 0.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CMatrix m(r, c);
  for (Index j = 0; j < c; ++j) {
    for (Index i = 0; i < r; ++i) m(i, j) = Complex(u(rng), u(rng));
  }
  if (norm > 0.0) m *= norm / m.norm();
  return m;
}

Realization random_realization(std::mt19937_64& rng, Index l, Index m, Index n) {
  return Realization(random_matrix(rng, l, l, 0.7), random_matrix(rng, l, n), random_matrix(rng, m, l),
                     random_matrix(rng, m, n));
}

}  // namespace

TEST_CASE("Realization checks block dimensions", "[realization]") {
  CHECK_NOTHROW(Realization(CMatrix::Zero(2, 2), CMatrix::Zero(2, 3), CMatrix::Zero(1, 2), CMatrix::Zero(1, 3)));
  CHECK(code_of([] { Realization(CMatrix::Zero(2, 2), CMatrix::Zero(1, 3), CMatrix::Zero(1, 2), CMatrix::Zero(1, 3)); }) ==
        ErrorCode::ShapeError);
  const auto c = Realization::constant(CMatrix::Ones(2, 3));
  CHECK(c.state_dim() == 0);
  CHECK(c.shape() == Shape{2, 3});
}

TEST_CASE("check_spectrum examples", "[realization]") {
  const auto lat = generate(LatticeKind::square, 2);
  const auto& d = lat.directions();
  CHECK(check_spectrum(scalar_matrix(0.3), d));
  CHECK_FALSE(check_spectrum(scalar_matrix(-1.0), d));
  CHECK_FALSE(check_spectrum(scalar_matrix(Complex(-1.0, 1.0)), d));
  for (int l = 0; l <= 4; ++l) CHECK(check_spectrum(CMatrix::Zero(l, l), d));
  CMatrix A(2, 2);
  A << 0.1, 1.0, 0.0, Complex(-1.0, -1.0);
  CHECK_FALSE(check_spectrum(A, d));
}

TEST_CASE("resolvent examples", "[realization]") {
  const auto lat = make_lattice(LatticeKind::square, 3);
  const auto R0 = resolvent(CMatrix::Zero(2, 2), lat);
  CHECK(max_difference(R0, DAFunction::constant(lat, CMatrix::Identity(2, 2))) == 0.0);

  const auto R = resolvent(scalar_matrix(0.3), lat);
  CHECK(max_difference(R, exp_basis(lat, 0.3)) < 1e-15);

  std::mt19937_64 rng(5);
  const CMatrix A = random_matrix(rng, 3, 3, 0.8);
  const auto target = at(*lat, 1.0 + I);
  const auto paths = oracles::distinct_paths(*lat, lat->origin(), target, 4);
  REQUIRE(paths.size() >= 3);
  for (const auto& p : paths) CHECK(max_abs(resolvent_along(A, *lat, p) - resolvent_at(A, *lat, target)) < 1e-13);

  CHECK(code_of([&] { resolvent(scalar_matrix(-1.0), lat); }) == ErrorCode::ForbiddenSpectrum);
}

TEST_CASE("resolvent is the convolution inverse of I - zA", "[realization][property]") {
  std::mt19937_64 rng(9);
  for (auto kind : {LatticeKind::square, LatticeKind::rhombic}) {
    const auto lat = make_lattice(kind, 3);
    for (int l = 1; l <= 4; ++l) {
      const CMatrix A = random_matrix(rng, l, l, 0.9);
      const auto R = resolvent(A, lat);
      const auto lhs = R - forward_shift(R).right_multiply(A);
      const auto rhs = R - forward_shift(R).left_multiply(A);
      const auto id = DAFunction::constant(lat, CMatrix::Identity(l, l));
      CHECK(max_difference(lhs, id) < 1e-12);
      CHECK(max_difference(rhs, id) < 1e-12);
      CHECK(cr_residual(R) < 1e-12);
    }
    for (int k = 0; k < 10; ++k) {
      const Complex a = testing::random_in_disk(rng, 0.9);
      CHECK(max_difference(resolvent(scalar_matrix(a), lat), exp_basis(lat, a)) < 1e-13);
    }
  }
}

TEST_CASE("resolvent equals the power series when the spectral radius is small", "[realization][oracle]") {
  const auto lat = make_lattice(LatticeKind::square, 4);
  const auto basis = monomial_basis(lat, 200);
  std::mt19937_64 rng(13);
  for (int k = 0; k < 3; ++k) {
    const CMatrix A = random_matrix(rng, 3, 3, 0.5);
    REQUIRE(spectral_radius_estimate(A) <= 0.5);
    const auto R = resolvent(A, lat);
    for (std::size_t v = 0; v < lat->vertex_count(); ++v) {
      CHECK(max_abs(oracles::resolvent_series(basis, A, v) - R.at(v)) < 1e-8);
    }
  }
}

TEST_CASE("evaluate examples", "[realization]") {
  const auto lat = make_lattice(LatticeKind::square, 3);
  std::mt19937_64 rng(17);
  const Realization nil(CMatrix::Zero(2, 2), random_matrix(rng, 2, 1), random_matrix(rng, 1, 2), random_matrix(rng, 1, 1));
  const auto f = evaluate(nil, lat);
  for (std::size_t v = 0; v < lat->vertex_count(); ++v) {
    CHECK(max_abs(f.at(v) - (nil.D + lat->coord(v) * nil.C * nil.B)) < 1e-14);
  }

  const auto g = evaluate(Realization::scalar(0.3, 1.0, 1.0, 0.0), lat);
  CHECK(std::abs(g.scalar_at(at(*lat, 1.0)) - 1.0) < 1e-15);
  CHECK(g.scalar_at(lat->origin()) == 0.0);
  const auto basis = monomial_basis(lat, 60);
  for (std::size_t v = 0; v < lat->vertex_count(); ++v) {
    Complex acc = 0.0;
    for (int k = 1; k <= 60; ++k) acc += basis[std::size_t(k)].scalar_at(v) * std::pow(0.3, k - 1);
    CHECK(std::abs(acc - g.scalar_at(v)) < 1e-9);
  }

  for (int k = 0; k < 5; ++k) {
    const auto r = random_realization(rng, 1 + k % 3, 2, 1 + k % 2);
    const auto h = evaluate(r, lat);
    CHECK(cr_residual(h) <= 1e-9 * std::max(1.0, max_magnitude(h)));
    CHECK(max_abs(h.at(lat->origin()) - r.D) < 1e-15);
  }
  CHECK(code_of([&] { evaluate(Realization::scalar(-1.0, 1.0, 1.0, 0.0), lat); }) == ErrorCode::ForbiddenSpectrum);
}

TEST_CASE("sum and product", "[realization]") {
  const auto lat = make_lattice(LatticeKind::rhombic, 3);
  const auto a = Realization::scalar(0.2, 1.0, 1.0, 0.0);
  const auto b = Realization::scalar(0.4, 1.0, 1.0, 0.0);
  const auto zero = Realization::constant(CMatrix::Zero(1, 1));

  CHECK(max_difference(evaluate(sum(a, zero), lat), evaluate(a, lat)) == 0.0);
  CHECK(max_difference(evaluate(sum(a, b), lat), evaluate(a, lat) + evaluate(b, lat)) < 1e-14);
  CHECK(sum(a, b).state_dim() == 2);
  CHECK(std::abs(tau_eval(sum(a, b), 0.1)(0, 0) - (tau_eval(a, 0.1) + tau_eval(b, 0.1))(0, 0)) < 1e-15);
  CHECK(code_of([&] { sum(a, Realization::constant(CMatrix::Zero(2, 1))); }) == ErrorCode::ShapeError);

  const auto ra = Realization::scalar(0.2, 1.0, 1.0, 1.0), rb = Realization::scalar(0.4, 1.0, 1.0, 1.0);
  const auto one = Realization::constant(CMatrix::Identity(1, 1));
  for (Complex t : {Complex(0.1), Complex(0.3, 0.2), Complex(-0.4, 0.1)}) {
    CHECK(std::abs(tau_eval(product(ra, one), t)(0, 0) - tau_eval(ra, t)(0, 0)) < 1e-15);
    // 1/(1-0.2t) * 1/(1-0.4t) from the two resolvent realizations.
    const auto p = product(Realization::scalar(0.2, 1.0, 0.2, 1.0), Realization::scalar(0.4, 1.0, 0.4, 1.0));
    CHECK(std::abs(tau_eval(p, t)(0, 0) - 1.0 / ((1.0 - 0.2 * t) * (1.0 - 0.4 * t))) < 1e-14);
  }
  CHECK(code_of([&] { product(Realization::constant(CMatrix::Zero(2, 2)), Realization::constant(CMatrix::Zero(3, 1))); }) ==
        ErrorCode::ShapeError);
}

TEST_CASE("product with a polynomial factor matches apply_poly", "[realization]") {
  const auto lat = make_lattice(LatticeKind::square, 3);
  // 1 + 2z + 3z^(2) via a nilpotent state matrix.
  CMatrix A(2, 2), B(2, 1), C(1, 2);
  A << 0, 1, 0, 0;
  B << 0, 1;
  C << 3, 2;
  const Realization poly(A, B, C, scalar_matrix(1.0));
  const auto r = Realization::scalar(Complex(0.3, 0.1), 1.0, 0.5, 2.0);
  const auto lhs = evaluate(product(poly, r), lat);
  const auto rhs = apply_poly(DAPolynomial::scalar({1.0, 2.0, 3.0}), evaluate(r, lat));
  CHECK(max_difference(lhs, rhs) < 1e-12);
}

TEST_CASE("tau is a homomorphism for sum and product", "[realization][property]") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto r1 = random_realization(rng, 1 + trial % 3, 2, 2);
    const auto r2 = random_realization(rng, 1 + (trial + 1) % 3, 2, 2);
    for (int k = 0; k < 20; ++k) {
      const Complex t = testing::random_in_disk(rng, 0.5);
      CHECK(max_abs(tau_eval(product(r1, r2), t) - tau_eval(r1, t) * tau_eval(r2, t)) < 1e-10);
      CHECK(max_abs(tau_eval(sum(r1, r2), t) - tau_eval(r1, t) - tau_eval(r2, t)) < 1e-10);
    }
  }
}

TEST_CASE("inverse", "[realization]") {
  const auto lat = make_lattice(LatticeKind::square, 3);
  const auto& d = lat->directions();
  const auto f = Realization::scalar(0.0, 0.5, 1.0, 1.0);
  const auto fi = inverse(f, d);
  CHECK(std::abs(fi.A(0, 0) + 0.5) < 1e-15);
  CHECK(max_difference(evaluate(fi, lat), exp_basis(lat, -0.5)) < 1e-14);
  CHECK(max_difference(evaluate(product(f, fi), lat), DAFunction::constant(lat, scalar_matrix(1.0))) < 1e-14);

  CHECK(code_of([&] { inverse(Realization::scalar(0.0, 1.0, 1.0, 1.0), d); }) == ErrorCode::ForbiddenSpectrum);
  CHECK(code_of([&] { inverse(Realization::scalar(0.1, 1.0, 1.0, 0.0), d); }) == ErrorCode::SingularD);
  CHECK(code_of([&] { inverse(Realization::constant(CMatrix::Ones(1, 2)), d); }) == ErrorCode::ShapeError);

  std::mt19937_64 rng(23);
  const Realization triv(random_matrix(rng, 2, 2, 0.5), random_matrix(rng, 2, 2), CMatrix::Zero(2, 2), CMatrix::Identity(2, 2));
  const auto ti = inverse(triv, d);
  CHECK(max_abs(ti.A - triv.A) == 0.0);
  CHECK(max_difference(evaluate(ti, lat), DAFunction::constant(lat, CMatrix::Identity(2, 2))) < 1e-14);
}

TEST_CASE("f times its inverse is the identity", "[realization][property]") {
  std::mt19937_64 rng(29);
  for (auto kind : {LatticeKind::square, LatticeKind::rhombic}) {
    const auto lat = make_lattice(kind, 3);
    for (int trial = 0; trial < 6; ++trial) {
      const Index m = 1 + trial % 2;
      const Realization r(random_matrix(rng, 2, 2, 0.6), random_matrix(rng, 2, m, 0.3), random_matrix(rng, m, 2, 0.3),
                          CMatrix::Identity(m, m) + random_matrix(rng, m, m, 0.2));
      const auto ri = inverse(r, lat->directions());
      const auto id = DAFunction::constant(lat, CMatrix::Identity(m, m));
      CHECK(max_difference(evaluate(product(r, ri), lat), id) < 1e-8);
      CHECK(max_difference(evaluate(product(ri, r), lat), id) < 1e-8);
    }
  }
}

TEST_CASE("tau_eval examples", "[realization]") {
  std::mt19937_64 rng(31);
  const auto r = random_realization(rng, 2, 2, 2);
  CHECK(max_abs(tau_eval(r, 0.0) - r.D) == 0.0);
  CHECK(std::abs(tau_eval(Realization::scalar(0.3, 1.0, 0.3, 1.0), 0.5)(0, 0) - 1.176470588235294) < 1e-12);
  const auto z = Realization::scalar(0.0, 1.0, 1.0, 0.0);
  for (Complex t : {Complex(0.2), Complex(-0.3, 0.4)}) CHECK(std::abs(tau_eval(z, t)(0, 0) - t) < 1e-15);
  CHECK(code_of([&] { tau_eval(Realization::scalar(0.5, 1.0, 1.0, 0.0), 2.0); }) == ErrorCode::PoleError);
}

TEST_CASE("tau_markov", "[realization]") {
  std::mt19937_64 rng(37);
  const Realization nil(CMatrix::Zero(2, 2), random_matrix(rng, 2, 1), random_matrix(rng, 1, 2), random_matrix(rng, 1, 1));
  const auto m = tau_markov(nil, 4);
  REQUIRE(m.size() == 5);
  CHECK(max_abs(m[1] - nil.C * nil.B) < 1e-15);
  CHECK(max_abs(m[2]) == 0.0);

  const auto g = tau_markov(Realization::scalar(0.3, 1.0, 1.0, 0.0), 4);
  const std::vector<double> want{0.0, 1.0, 0.3, 0.09, 0.027};
  for (std::size_t k = 0; k < want.size(); ++k) CHECK(std::abs(g[k](0, 0) - want[k]) < 1e-15);
  CHECK(code_of([] { tau_markov(Realization::scalar(0.3, 1.0, 1.0, 0.0), -1); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("tau_markov matches the backward shift chain at the origin", "[realization][oracle]") {
  std::mt19937_64 rng(41);
  const auto lat = make_lattice(LatticeKind::rhombic, 4);
  for (int trial = 0; trial < 5; ++trial) {
    const auto r = random_realization(rng, 1 + trial % 3, 1 + trial % 2, 1);
    const auto markov = tau_markov(r, 4);
    auto f = evaluate(r, lat);
    for (int k = 1; k <= 4; ++k) {
      f = backward_shift(f);
      REQUIRE(f.defined(lat->origin()));
      CHECK(max_abs(f.at(lat->origin()) - markov[std::size_t(k)]) < 1e-9);
    }
  }
}

TEST_CASE("tau_inverse", "[realization]") {
  const auto lat = make_lattice(LatticeKind::square, 3);
  const auto& d = lat->directions();
  const auto geo = tau_inverse({{1.0}, {1.0, -0.3}}, d);
  CHECK(max_difference(evaluate(geo, lat), exp_basis(lat, 0.3)) < 1e-14);
  const auto t = tau_inverse({{0.0, 1.0}, {1.0}}, d);
  CHECK(max_difference(evaluate(t, lat), DAFunction::scalar(lat, [](Complex z) { return z; })) < 1e-14);

  CHECK(code_of([&] { tau_inverse({{1.0}, {1.0, 1.0}}, d); }) == ErrorCode::NotRealizable);
  CHECK(code_of([&] { tau_inverse({{1.0}, {0.0, 1.0}}, d); }) == ErrorCode::NotRealizable);
  CHECK(code_of([&] { tau_inverse({{1.0}, {1.0, Complex(1.0, 1.0)}}, d); }) == ErrorCode::NotRealizable);

  const RationalScalarFunction f{{1.0, Complex(0.5, -0.2), 0.3}, {2.0, -0.4, Complex(0.1, 0.1)}};
  const auto r = tau_inverse(f, d);
  std::mt19937_64 rng(43);
  for (int k = 0; k < 20; ++k) {
    const Complex s = testing::random_in_disk(rng, 0.9);
    CHECK(std::abs(tau_eval(r, s)(0, 0) - f(s)) < 1e-12);
  }
}

TEST_CASE("tau_markov inverts tau_inverse on Taylor data", "[realization][oracle]") {
  const auto d = generate(LatticeKind::rhombic, 2).directions();
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    oracles::Series den{1.0};
    for (int j = 0; j < 1 + trial % 4; ++j) den = oracles::series_mul(den, {1.0, -testing::random_in_disk(rng, 0.8)}, int(den.size()));
    oracles::Series num;
    for (int j = 0; j <= trial % 5; ++j) num.push_back(Complex(u(rng), u(rng)));
    const auto markov = tau_markov(tau_inverse({num, den}, d), 20);
    const auto taylor = oracles::rational_taylor(num, den, 20);
    for (int n = 0; n <= 20; ++n) CHECK(std::abs(markov[std::size_t(n)](0, 0) - taylor[std::size_t(n)]) < 1e-9);
  }
}

TEST_CASE("minimal_realization", "[realization]") {
  const auto zero = minimal_realization({scalar_matrix(2.0), scalar_matrix(0.0), scalar_matrix(0.0)});
  CHECK(zero.state_dim() == 0);
  CHECK(zero.D(0, 0) == 2.0);

  std::vector<CMatrix> geo{scalar_matrix(0.0)};
  for (int k = 0; k < 8; ++k) geo.push_back(scalar_matrix(std::pow(0.3, k)));
  const auto g = minimal_realization(geo);
  CHECK(g.state_dim() == 1);
  const auto back = tau_markov(g, 8);
  for (std::size_t k = 0; k < geo.size(); ++k) CHECK(std::abs(back[k](0, 0) - geo[k](0, 0)) < 1e-12);

  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 5; ++trial) {
    const Index io = 1 + trial % 2;
    const auto r = random_realization(rng, 2, io, io);
    const auto markov = tau_markov(r, 12);
    const auto h = minimal_realization(markov);
    CHECK(h.state_dim() <= 2);
    const auto again = tau_markov(h, 12);
    for (std::size_t k = 0; k < markov.size(); ++k) CHECK(max_abs(again[k] - markov[k]) < 1e-8);
  }

  CHECK(code_of([] { minimal_realization({scalar_matrix(0.0), scalar_matrix(1.0)}); }) == ErrorCode::RankError);
  CHECK(code_of([] {
          minimal_realization({scalar_matrix(0.0), scalar_matrix(1.0), scalar_matrix(5.0), scalar_matrix(-3.0),
                               scalar_matrix(2.0), scalar_matrix(7.0)});
        }) == ErrorCode::RankError);
}

TEST_CASE("Leverrier recursion gives det and adjugate of I - tA", "[realization]") {
  std::mt19937_64 rng(59);
  for (int l = 1; l <= 5; ++l) {
    const CMatrix A = random_matrix(rng, l, l);
    const auto ch = leverrier(A);
    REQUIRE(ch.det.size() == std::size_t(l) + 1);
    REQUIRE(ch.adj.size() == std::size_t(l));
    for (int k = 0; k < 4; ++k) {
      const Complex t = testing::random_in_disk(rng, 1.0);
      const CMatrix M = CMatrix::Identity(l, l) - t * A;
      const Complex det = evaluate_polynomial(ch.det, t);
      CMatrix adj = CMatrix::Zero(l, l);
      Complex p = 1.0;
      for (const auto& c : ch.adj) {
        adj += p * c;
        p *= t;
      }
      CHECK(std::abs(det - M.determinant()) < 1e-10);
      CHECK(max_abs(adj * M - det * CMatrix::Identity(l, l)) < 1e-10);
    }
  }
}

TEST_CASE("spectral radius estimate", "[realization]") {
  CMatrix A(2, 2);
  A << 0.5, 10.0, 0.0, 0.2;
  CHECK(std::abs(spectral_radius_estimate(A, 2000) - 0.5) < 1e-2);
  CHECK(spectral_radius_estimate(CMatrix::Zero(3, 3)) == 0.0);
}

TEST_CASE("evaluate_at matches evaluate", "[realization]") {
  std::mt19937_64 rng(61);
  for (auto kind : {LatticeKind::square, LatticeKind::rhombic}) {
    const auto lat = make_lattice(kind, 4);
    const auto r = random_realization(rng, 3, 2, 1);
    const auto full = evaluate(r, lat);
    std::vector<std::size_t> vs{lat->origin(), 0, lat->vertex_count() - 1, lat->vertex_count() / 3};
    const auto part = evaluate_at(r, *lat, vs);
    for (std::size_t k = 0; k < vs.size(); ++k) CHECK(max_abs(part[k] - full.at(vs[k])) < 1e-13);
  }
  const auto lat = make_lattice(LatticeKind::square, 2);
  CHECK(code_of([&] { evaluate_at(Realization::scalar(-1.0, 1.0, 1.0, 0.0), *lat, {0}); }) == ErrorCode::ForbiddenSpectrum);
  CHECK(code_of([&] { evaluate_at(Realization::scalar(0.1, 1.0, 1.0, 0.0), *lat, {999}); }) == ErrorCode::InvalidParameter);
}
