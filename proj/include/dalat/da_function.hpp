#pragma once

#include <functional>
#include <vector>

#include "dalat/lattice.hpp"
#include "dalat/numeric.hpp"

namespace dalat {

/// Matrix-valued function on the vertices of a lattice patch.
///
/// The domain is normally the whole patch. Backward shifts are only determined
/// on vertices that have a leash inside the patch, so their results may leave
/// other vertices undefined; arithmetic intersects domains.
class DAFunction {
 public:
  DAFunction(LatticePtr lattice, Shape shape, std::vector<CMatrix> values,
             std::vector<char> defined = {});

  static DAFunction constant(LatticePtr lattice, const CMatrix& value);
  static DAFunction scalar(LatticePtr lattice, const std::function<Complex(Complex)>& fn);

  const Lattice& lattice() const { return *lattice_; }
  const LatticePtr& lattice_ptr() const { return lattice_; }
  Shape shape() const { return shape_; }

  bool defined(std::size_t v) const { return defined_.empty() || defined_[v] != 0; }
  bool total() const { return defined_.empty(); }
  std::size_t domain_size() const;
  /// Empty vector when total.
  const std::vector<char>& domain_mask() const { return defined_; }

  /// Value at vertex index v; undefined vertices hold NaN matrices.
  const CMatrix& at(std::size_t v) const { return values_[v]; }
  const CMatrix& at_id(VertexId id) const { return values_[lattice_->index(id)]; }
  Complex scalar_at(std::size_t v) const { return values_[v](0, 0); }
  const std::vector<CMatrix>& values() const { return values_; }

  /// Restricts the domain to vertices where mask is nonzero.
  DAFunction restricted(const std::vector<char>& mask) const;

  DAFunction operator+(const DAFunction& other) const;
  DAFunction operator-(const DAFunction& other) const;
  DAFunction operator*(Complex c) const;
  /// Pointwise M * f(z) and f(z) * M.
  DAFunction left_multiply(const CMatrix& m) const;
  DAFunction right_multiply(const CMatrix& m) const;
  DAFunction entry(Index row, Index col) const;

 private:
  template <class Op>
  DAFunction combine(const DAFunction& other, Op op) const;

  LatticePtr lattice_;
  Shape shape_;
  std::vector<CMatrix> values_;
  std::vector<char> defined_;
};

/// Largest entrywise difference over the common domain (0 if it is empty).
double max_difference(const DAFunction& a, const DAFunction& b);
/// Largest entry magnitude over the domain.
double max_magnitude(const DAFunction& f);

/// Mask that is nonzero where both functions are defined.
std::vector<char> common_domain(const DAFunction& a, const DAFunction& b);

}  // namespace dalat
