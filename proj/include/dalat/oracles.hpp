#pragma once

// Reference computations that avoid the production code paths. They are slow
// or truncated by design and exist to cross-check the library.

#include <optional>
#include <vector>

#include "dalat/da_function.hpp"
#include "dalat/lattice.hpp"

namespace dalat::oracles {

/// Coefficients c_0 .. c_N of a power series in t.
using Series = std::vector<Complex>;

Series series_mul(const Series& a, const Series& b, int N);
/// a / b truncated at degree N; needs b[0] != 0.
Series series_div(const Series& a, const Series& b, int N);

/// Taylor coefficients in t of the product of (2 + t(1+d)) / (2 + t(1-d))
/// over the steps of a path, i.e. z^(0..N) at the path's end when it starts
/// at the origin.
Series exp_taylor_along(const Lattice& lattice, const Path& path, int N);

/// Taylor coefficients of num/den up to degree N.
Series rational_taylor(const std::vector<Complex>& num, const std::vector<Complex>& den, int N);

/// Shortest leash by exhaustive depth-first search over all paths of length
/// up to max_length, neighbors tried in index order.
std::optional<Path> brute_force_leash(const Lattice& lattice, std::size_t z, std::size_t max_length);

/// Up to count distinct simple paths a -> b of length <= dist(a, b) + slack.
std::vector<Path> distinct_paths(const Lattice& lattice, std::size_t a, std::size_t b, std::size_t count,
                                 std::size_t slack = 4);

/// sum_{n <= N} z^(n)(v) A^n from a precomputed monomial basis.
CMatrix resolvent_series(const std::vector<DAFunction>& basis, const CMatrix& A, std::size_t v);

/// sum_{n <= N} z^(n) conj(w^(n)) / M^n from a precomputed monomial basis.
DAFunction kernel_series(const std::vector<DAFunction>& basis, std::size_t w, double M);

}  // namespace dalat::oracles
