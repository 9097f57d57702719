#include "dalat/da_function.hpp"

#include <algorithm>
#include <limits>

#include "dalat/error.hpp"

namespace dalat {

namespace {

CMatrix nan_matrix(Shape s) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return CMatrix::Constant(s.rows, s.cols, Complex(nan, nan));
}

}  // namespace

DAFunction::DAFunction(LatticePtr lattice, Shape shape, std::vector<CMatrix> values,
                       std::vector<char> defined)
    : lattice_(std::move(lattice)), shape_(shape), values_(std::move(values)), defined_(std::move(defined)) {
  if (!lattice_) fail(ErrorCode::InvalidParameter, "function needs a lattice");
  if (values_.size() != lattice_->vertex_count()) {
    fail(ErrorCode::ShapeError, "one value per vertex required");
  }
  if (!defined_.empty()) {
    if (defined_.size() != values_.size()) fail(ErrorCode::ShapeError, "domain mask size mismatch");
    if (std::all_of(defined_.begin(), defined_.end(), [](char c) { return c != 0; })) defined_.clear();
  }
  for (std::size_t v = 0; v < values_.size(); ++v) {
    if (!this->defined(v)) {
      values_[v] = nan_matrix(shape_);
    } else if (values_[v].rows() != shape_.rows || values_[v].cols() != shape_.cols) {
      fail(ErrorCode::ShapeError, "value shape differs from function shape");
    }
  }
}

DAFunction DAFunction::constant(LatticePtr lattice, const CMatrix& value) {
  const auto n = lattice->vertex_count();
  return DAFunction(std::move(lattice), shape_of(value), std::vector<CMatrix>(n, value));
}

DAFunction DAFunction::scalar(LatticePtr lattice, const std::function<Complex(Complex)>& fn) {
  std::vector<CMatrix> values;
  values.reserve(lattice->vertex_count());
  for (std::size_t v = 0; v < lattice->vertex_count(); ++v) {
    values.push_back(scalar_matrix(fn(lattice->coord(v))));
  }
  return DAFunction(std::move(lattice), Shape{1, 1}, std::move(values));
}

std::size_t DAFunction::domain_size() const {
  if (defined_.empty()) return values_.size();
  return static_cast<std::size_t>(
      std::count_if(defined_.begin(), defined_.end(), [](char c) { return c != 0; }));
}

DAFunction DAFunction::restricted(const std::vector<char>& mask) const {
  std::vector<char> dom(values_.size());
  for (std::size_t v = 0; v < dom.size(); ++v) dom[v] = defined(v) && mask[v];
  return DAFunction(lattice_, shape_, values_, std::move(dom));
}

template <class Op>
DAFunction DAFunction::combine(const DAFunction& other, Op op) const {
  if (lattice_ != other.lattice_ && lattice_->vertex_count() != other.lattice_->vertex_count()) {
    fail(ErrorCode::ShapeError, "functions live on different lattices");
  }
  if (shape_ != other.shape_) fail(ErrorCode::ShapeError, "function shapes differ");
  std::vector<CMatrix> values(values_.size());
  for (std::size_t v = 0; v < values.size(); ++v) values[v] = op(values_[v], other.values_[v]);
  return DAFunction(lattice_, shape_, std::move(values), common_domain(*this, other));
}

DAFunction DAFunction::operator+(const DAFunction& other) const {
  return combine(other, [](const CMatrix& a, const CMatrix& b) -> CMatrix { return a + b; });
}

DAFunction DAFunction::operator-(const DAFunction& other) const {
  return combine(other, [](const CMatrix& a, const CMatrix& b) -> CMatrix { return a - b; });
}

DAFunction DAFunction::operator*(Complex c) const {
  std::vector<CMatrix> values(values_.size());
  for (std::size_t v = 0; v < values.size(); ++v) values[v] = values_[v] * c;
  return DAFunction(lattice_, shape_, std::move(values), defined_);
}

DAFunction DAFunction::left_multiply(const CMatrix& m) const {
  if (m.cols() != shape_.rows) fail(ErrorCode::ShapeError, "left factor has wrong column count");
  std::vector<CMatrix> values(values_.size());
  for (std::size_t v = 0; v < values.size(); ++v) values[v] = m * values_[v];
  return DAFunction(lattice_, {m.rows(), shape_.cols}, std::move(values), defined_);
}

DAFunction DAFunction::right_multiply(const CMatrix& m) const {
  if (m.rows() != shape_.cols) fail(ErrorCode::ShapeError, "right factor has wrong row count");
  std::vector<CMatrix> values(values_.size());
  for (std::size_t v = 0; v < values.size(); ++v) values[v] = values_[v] * m;
  return DAFunction(lattice_, {shape_.rows, m.cols()}, std::move(values), defined_);
}

DAFunction DAFunction::entry(Index row, Index col) const {
  std::vector<CMatrix> values(values_.size());
  for (std::size_t v = 0; v < values.size(); ++v) values[v] = scalar_matrix(values_[v](row, col));
  return DAFunction(lattice_, {1, 1}, std::move(values), defined_);
}

std::vector<char> common_domain(const DAFunction& a, const DAFunction& b) {
  if (a.total() && b.total()) return {};
  std::vector<char> dom(a.values().size());
  for (std::size_t v = 0; v < dom.size(); ++v) dom[v] = a.defined(v) && b.defined(v);
  return dom;
}

double max_difference(const DAFunction& a, const DAFunction& b) {
  if (a.shape() != b.shape()) fail(ErrorCode::ShapeError, "function shapes differ");
  double worst = 0.0;
  for (std::size_t v = 0; v < a.values().size(); ++v) {
    if (a.defined(v) && b.defined(v)) worst = std::max(worst, max_abs(a.at(v) - b.at(v)));
  }
  return worst;
}

double max_magnitude(const DAFunction& f) {
  double worst = 0.0;
  for (std::size_t v = 0; v < f.values().size(); ++v) {
    if (f.defined(v)) worst = std::max(worst, max_abs(f.at(v)));
  }
  return worst;
}

}  // namespace dalat
