#include "dalat/calculus.hpp"

#include <deque>
#include <sstream>

#include "dalat/error.hpp"
#include "dalat/kernels.hpp"

namespace dalat {

namespace {

CMatrix zero_like(Shape s) { return CMatrix::Zero(s.rows, s.cols); }

void require_analytic(const DAFunction& f, const Tolerance& tol, const char* op) {
  if (!is_analytic(f, tol)) {
    std::ostringstream msg;
    msg << op << " needs a DA function (CR residual " << cr_residual(f) << ")";
    fail(ErrorCode::NotAnalytic, msg.str());
  }
}

// Entrywise CR defect on one face, and the face's value scale.
std::pair<double, double> face_defect(const DAFunction& f, const std::vector<std::size_t>& face) {
  const auto& lat = f.lattice();
  const auto a = face[0], b = face[1], c = face[2], d = face[3];
  const CMatrix lhs = (f.at(a) - f.at(c)) / (lat.coord(a) - lat.coord(c));
  const CMatrix rhs = (f.at(b) - f.at(d)) / (lat.coord(b) - lat.coord(d));
  double scale = 0.0;
  for (auto v : face) scale = std::max(scale, max_abs(f.at(v)));
  return {max_abs(lhs - rhs), scale};
}

bool face_in_domain(const DAFunction& f, const std::vector<std::size_t>& face) {
  if (face.size() != 4) return false;
  for (auto v : face) {
    if (!f.defined(v)) return false;
  }
  return true;
}

}  // namespace

CMatrix discrete_integral(const DAFunction& f, const Path& path) {
  const auto& lat = f.lattice();
  if (path.empty() || !is_path(lat, path)) fail(ErrorCode::InvalidPath, "not a lattice path");
  CMatrix acc = zero_like(f.shape());
  for (std::size_t k = 1; k < path.size(); ++k) {
    const auto u = path[k - 1], v = path[k];
    acc += (f.at(u) + f.at(v)) * (0.5 * (lat.coord(v) - lat.coord(u)));
  }
  return acc;
}

double cr_residual(const DAFunction& f) {
  double worst = 0.0;
  for (const auto& face : f.lattice().faces()) {
    if (face_in_domain(f, face)) worst = std::max(worst, face_defect(f, face).first);
  }
  return worst;
}

bool is_analytic(const DAFunction& f, const Tolerance& tol) {
  for (const auto& face : f.lattice().faces()) {
    if (!face_in_domain(f, face)) continue;
    const auto [defect, scale] = face_defect(f, face);
    if (!(defect <= tol.bound(scale))) return false;
  }
  return true;
}

DAFunction primitive(const DAFunction& f, Exec exec) {
  const auto& lat = f.lattice();
  const auto& tree = lat.tree();
  const auto n = lat.vertex_count();
  std::vector<CMatrix> values(n, zero_like(f.shape()));
  std::vector<char> dom(n, 0);
  const auto root = lat.origin();
  dom[root] = f.defined(root);
  kernels::tree_walk(exec, tree, [&](std::size_t p, std::size_t v) {
    if (!dom[p] || !f.defined(v)) return;
    values[v] = values[p] + (f.at(p) + f.at(v)) * (0.5 * (lat.coord(v) - lat.coord(p)));
    dom[v] = 1;
  });
  return DAFunction(f.lattice_ptr(), f.shape(), std::move(values), std::move(dom));
}

namespace detail {

DAFunction forward_shift_unchecked(const DAFunction& f, Exec exec) {
  const auto& lat = f.lattice();
  const auto root = lat.origin();
  if (!f.defined(root)) {
    return DAFunction(f.lattice_ptr(), f.shape(), std::vector<CMatrix>(lat.vertex_count()),
                      std::vector<char>(lat.vertex_count(), 0));
  }
  const CMatrix f0 = f.at(root);
  const auto integral = primitive(f, exec);
  std::vector<CMatrix> values(lat.vertex_count());
  std::vector<char> dom(lat.vertex_count(), 0);
  for (std::size_t v = 0; v < values.size(); ++v) {
    if (!integral.defined(v)) continue;
    values[v] = (f0 - f.at(v)) * 0.5 + integral.at(v);
    dom[v] = 1;
  }
  return DAFunction(f.lattice_ptr(), f.shape(), std::move(values), std::move(dom));
}

std::vector<std::size_t> path_directions(const Lattice& lat, const Path& path) {
  if (path.empty() || !is_path(lat, path)) fail(ErrorCode::InvalidPath, "not a lattice path");
  std::vector<std::size_t> dirs;
  dirs.reserve(path.size());
  for (std::size_t k = 1; k < path.size(); ++k) {
    auto d = lat.directions().find_direction(lat.coord(path[k]) - lat.coord(path[k - 1]));
    if (!d) fail(ErrorCode::InvalidPath, "path step is not an edge direction");
    dirs.push_back(*d);
  }
  return dirs;
}

}  // namespace detail

DAFunction forward_shift(const DAFunction& f, const Tolerance& tol, Exec exec) {
  require_analytic(f, tol, "forward shift");
  return detail::forward_shift_unchecked(f, exec);
}

DAFunction backward_shift(const DAFunction& f, const Tolerance& tol) {
  require_analytic(f, tol, "backward shift");
  const auto& lat = f.lattice();
  const auto n = lat.vertex_count();
  std::vector<CMatrix> h(n, zero_like(f.shape()));
  std::vector<char> dom(n, 0);
  // Only differences of g = f - f(0) enter, so f itself is used and the
  // origin need not be in the domain.
  auto g = [&](std::size_t v) -> const CMatrix& { return f.at(v); };
  auto z = [&](std::size_t v) { return lat.coord(v); };

  std::deque<std::size_t> queue;
  for (std::size_t u = 0; u < n; ++u) {
    if (!f.defined(u)) continue;
    if (auto right = lat.neighbor_at(u, 1.0); right && f.defined(*right)) {
      h[u] = g(*right) - g(u);
      dom[u] = 1;
      queue.push_back(u);
    }
  }
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (const auto& nb : lat.neighbors(u)) {
      const auto v = nb.vertex;
      if (dom[v] || !f.defined(v)) continue;
      const Complex step = z(v) - z(u);
      if (near(step, 1.0) || near(step, -1.0)) continue;
      h[v] = (2.0 * (g(u) - g(v)) + h[u] * (1.0 + step)) / (1.0 - step);
      dom[v] = 1;
      queue.push_back(v);
    }
  }

  // Every edge inside the domain must satisfy
  // h(v)(1+u-v) - h(u)(1+v-u) = 2(g(u) - g(v)).
  for (const auto& [u, v] : lat.edges()) {
    if (!dom[u] || !dom[v]) continue;
    const Complex step = z(v) - z(u);
    const CMatrix defect = h[v] * (1.0 - step) - h[u] * (1.0 + step) - 2.0 * (g(u) - g(v));
    const double scale = std::max({max_abs(h[u]), max_abs(h[v]), max_abs(g(u)), max_abs(g(v))});
    if (!(max_abs(defect) <= tol.bound(scale))) {
      std::ostringstream msg;
      msg << "edge relation violated by " << max_abs(defect) << " between vertex ids " << lat.id(u)
          << " and " << lat.id(v);
      fail(ErrorCode::ConsistencyError, msg.str());
    }
  }
  return DAFunction(f.lattice_ptr(), f.shape(), std::move(h), std::move(dom));
}

Complex exp_factor(Complex t, Complex step) { return (2.0 + t * (1.0 + step)) / (2.0 + t * (1.0 - step)); }

namespace {

void require_allowed(const Lattice& lat, Complex t) {
  if (lat.directions().distance_to_forbidden(t) <= kNearPoleTol) {
    std::ostringstream msg;
    msg << "parameter " << t << " lies in the forbidden set";
    fail(ErrorCode::ForbiddenParameter, msg.str());
  }
}

std::vector<Complex> exp_factor_table(const Lattice& lat, Complex t) {
  std::vector<Complex> table;
  for (const auto& d : lat.directions().directions) table.push_back(exp_factor(t, d));
  return table;
}

}  // namespace

Complex exp_along(const Lattice& lat, Complex t, const Path& path) {
  require_allowed(lat, t);
  const auto table = exp_factor_table(lat, t);
  Complex value = 1.0;
  for (auto d : detail::path_directions(lat, path)) value *= table[d];
  return value;
}

DAFunction exp_basis(const LatticePtr& lattice, Complex t, Exec exec) {
  const auto& lat = *lattice;
  require_allowed(lat, t);
  const auto table = exp_factor_table(lat, t);
  const auto& tree = lat.tree();
  std::vector<Complex> values(lat.vertex_count(), 1.0);
  kernels::tree_walk(exec, tree,
                     [&](std::size_t p, std::size_t v) { values[v] = values[p] * table[tree.direction[v]]; });
  std::vector<CMatrix> out;
  out.reserve(values.size());
  for (auto x : values) out.push_back(scalar_matrix(x));
  return DAFunction(lattice, {1, 1}, std::move(out));
}

std::vector<DAFunction> monomial_basis(const LatticePtr& lattice, int max_degree, Exec exec) {
  if (max_degree < 0) fail(ErrorCode::InvalidParameter, "degree must be nonnegative");
  std::vector<DAFunction> basis{DAFunction::constant(lattice, scalar_matrix(1.0))};
  for (int k = 1; k <= max_degree; ++k) basis.push_back(detail::forward_shift_unchecked(basis.back(), exec));
  return basis;
}

std::vector<DAFunction> duffin_basis(const LatticePtr& lattice, int max_degree, Exec exec) {
  if (max_degree < 0) fail(ErrorCode::InvalidParameter, "degree must be nonnegative");
  std::vector<DAFunction> basis{DAFunction::constant(lattice, scalar_matrix(1.0))};
  for (int k = 1; k <= max_degree; ++k) basis.push_back(primitive(basis.back(), exec) * double(k));
  return basis;
}

}  // namespace dalat
