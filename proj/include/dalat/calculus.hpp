#pragma once

#include <vector>

#include "dalat/da_function.hpp"
#include "dalat/lattice.hpp"

namespace dalat {

/// Sum over path steps of (f(z_{n-1}) + f(z_n))/2 * (z_n - z_{n-1}).
/// Zero matrix for a single-vertex path. Throws InvalidPath.
CMatrix discrete_integral(const DAFunction& f, const Path& path);

/// Max over faces abcd (all four vertices in the domain) of the entrywise
/// |(f(a)-f(c))/(a-c) - (f(b)-f(d))/(b-d)|.
double cr_residual(const DAFunction& f);

/// Every face residual is within tol.bound(max entry magnitude on the face).
bool is_analytic(const DAFunction& f, const Tolerance& tol = {});

/// F(z) = integral of f from 0 to z along the origin tree.
DAFunction primitive(const DAFunction& f, Exec exec = Exec::parallel);

/// (Z+ f)(z) = (f(0) - f(z))/2 + integral_0^z f. Throws NotAnalytic.
DAFunction forward_shift(const DAFunction& f, const Tolerance& tol = {}, Exec exec = Exec::parallel);

/// h = Z- f, the DA function with Z+ h = f - f(0). Seeded by
/// h(u) = g(u+1) - g(u) on vertices with a right neighbor (g = f - f(0)),
/// then propagated across edges whose step is not +-1. Vertices whose leash
/// leaves the patch stay undefined. Throws NotAnalytic, ConsistencyError.
DAFunction backward_shift(const DAFunction& f, const Tolerance& tol = {});

/// Edge factor (2 + t(1+d)) / (2 + t(1-d)).
Complex exp_factor(Complex t, Complex step);

/// Product of edge factors along an arbitrary path (starting anywhere).
Complex exp_along(const Lattice& lattice, Complex t, const Path& path);

/// Eigenfunction e_t of Z- with e_t(0) = 1. Throws ForbiddenParameter when t
/// is within kNearPoleTol of the forbidden set.
DAFunction exp_basis(const LatticePtr& lattice, Complex t, Exec exec = Exec::parallel);

/// z^(0) .. z^(N) with z^(0) = 1 and z^(n) = Z+ z^(n-1).
std::vector<DAFunction> monomial_basis(const LatticePtr& lattice, int max_degree,
                                       Exec exec = Exec::parallel);

/// rho_0 = 1, rho_n = n * integral_0^z rho_{n-1}.
std::vector<DAFunction> duffin_basis(const LatticePtr& lattice, int max_degree,
                                     Exec exec = Exec::parallel);

namespace detail {
DAFunction forward_shift_unchecked(const DAFunction& f, Exec exec);
/// Steps of a path mapped to direction indices. Throws InvalidPath.
std::vector<std::size_t> path_directions(const Lattice& lattice, const Path& path);
}  // namespace detail

}  // namespace dalat
