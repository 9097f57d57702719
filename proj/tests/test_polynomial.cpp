#include <catch_amalgamated.hpp>

#include "dalat/calculus.hpp"
#include "dalat/error.hpp"
#include "dalat/polynomial.hpp"

using namespace dalat;

namespace {

std::vector<Complex> scalars(const DAPolynomial& p) {
  std::vector<Complex> out;
  for (const auto& c : p.coefficients()) out.push_back(c(0, 0));
  return out;
}

}  // namespace

TEST_CASE("convolve_poly examples", "[polynomial]") {
  const auto z1 = DAPolynomial::monomial(1), z2 = DAPolynomial::monomial(2);
  CHECK(scalars(convolve_poly(z1, z2)) == std::vector<Complex>{0.0, 0.0, 0.0, 1.0});
  CHECK(scalars(convolve_poly(DAPolynomial::scalar({1.0, 1.0}), DAPolynomial::scalar({1.0, -1.0}))) ==
        std::vector<Complex>{1.0, 0.0, -1.0});
  const auto p = DAPolynomial::scalar({2.0, Complex(0.0, 1.0), -3.0});
  CHECK(scalars(convolve_poly(p, DAPolynomial::scalar({1.0}))) == scalars(p));

  const DAPolynomial wide({CMatrix::Ones(2, 3)});
  const DAPolynomial tall({CMatrix::Ones(2, 1)});
  CHECK_THROWS_AS(convolve_poly(wide, tall), Error);
  CHECK(convolve_poly(wide, DAPolynomial({CMatrix::Ones(3, 1)})).shape() == Shape{2, 1});
}

TEST_CASE("leading zero coefficients are dropped", "[polynomial]") {
  const auto p = DAPolynomial::scalar({1.0, 2.0, 0.0, 0.0});
  CHECK(p.degree() == 1);
  CHECK(DAPolynomial::scalar({0.0}).degree() == 0);
  CHECK(DAPolynomial::scalar({1.0, 1e-14}).trimmed(1e-12).degree() == 0);
}

TEST_CASE("apply_poly examples", "[polynomial]") {
  const auto lat = make_lattice(LatticeKind::square, 3);
  const auto ones = DAFunction::constant(lat, scalar_matrix(1.0));
  const auto z = DAFunction::scalar(lat, [](Complex w) { return w; });
  const auto e = exp_basis(lat, 0.3);

  CHECK(max_difference(apply_poly(DAPolynomial::scalar({1.0}), e), e) == 0.0);
  CHECK(max_difference(apply_poly(DAPolynomial::monomial(1), ones), z) < 1e-15);
  CHECK(max_difference(apply_poly(DAPolynomial::scalar({1.0, -0.3}), e), ones) < 1e-13);
  CHECK(max_difference(apply_poly(DAPolynomial::monomial(1), e), forward_shift(e)) == 0.0);

  const auto conj = DAFunction::scalar(lat, [](Complex w) { return std::conj(w); });
  CHECK_THROWS_AS(apply_poly(DAPolynomial::monomial(1), conj), Error);
  CHECK_THROWS_AS(apply_poly(DAPolynomial({CMatrix::Ones(2, 2)}), e), Error);
}

TEST_CASE("ring structure of the monomials", "[polynomial][property]") {
  for (auto kind : {LatticeKind::square, LatticeKind::rhombic}) {
    const auto lat = make_lattice(kind, 3);
    const auto basis = monomial_basis(lat, 10);
    for (int m = 0; m <= 10; ++m) {
      for (int n = 0; m + n <= 10; ++n) {
        const auto lhs = apply_poly(DAPolynomial::monomial(m), basis[std::size_t(n)]);
        CHECK(max_difference(lhs, basis[std::size_t(m + n)]) <= 1e-9 * std::max(1.0, max_magnitude(lhs)));
        const auto rhs = apply_poly_right(basis[std::size_t(n)], DAPolynomial::monomial(m));
        CHECK(max_difference(lhs, rhs) == 0.0);
      }
    }
  }
}

TEST_CASE("to_function evaluates sum A_n z^(n)", "[polynomial]") {
  const auto lat = make_lattice(LatticeKind::rhombic, 2);
  const auto basis = monomial_basis(lat, 3);
  CMatrix a0 = CMatrix::Random(2, 2), a3 = CMatrix::Random(2, 2);
  const DAPolynomial p({a0, CMatrix::Zero(2, 2), CMatrix::Zero(2, 2), a3});
  const auto f = to_function(p, lat);
  for (std::size_t v = 0; v < lat->vertex_count(); ++v) {
    CHECK(max_abs(f.at(v) - (a0 * basis[0].scalar_at(v) + a3 * basis[3].scalar_at(v))) < 1e-14);
  }
  CHECK(cr_residual(f) < 1e-12);
}
