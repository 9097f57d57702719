#include "dalat/oracles.hpp"

#include <algorithm>
#include <functional>

#include "dalat/error.hpp"

namespace dalat::oracles {

Series series_mul(const Series& a, const Series& b, int N) {
  Series c(static_cast<std::size_t>(N) + 1, 0.0);
  for (std::size_t i = 0; i < a.size() && i < c.size(); ++i) {
    for (std::size_t j = 0; j < b.size() && i + j < c.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

Series series_div(const Series& a, const Series& b, int N) {
  if (b.empty() || b[0] == 0.0) fail(ErrorCode::InvalidParameter, "series division by a series vanishing at 0");
  Series q(static_cast<std::size_t>(N) + 1, 0.0);
  for (std::size_t n = 0; n < q.size(); ++n) {
    Complex acc = n < a.size() ? a[n] : 0.0;
    for (std::size_t k = 1; k <= n && k < b.size(); ++k) acc -= b[k] * q[n - k];
    q[n] = acc / b[0];
  }
  return q;
}

Series exp_taylor_along(const Lattice& lat, const Path& path, int N) {
  Series acc{1.0};
  acc.resize(static_cast<std::size_t>(N) + 1, 0.0);
  for (std::size_t k = 1; k < path.size(); ++k) {
    const Complex d = lat.coord(path[k]) - lat.coord(path[k - 1]);
    acc = series_mul(acc, series_div({2.0, 1.0 + d}, {2.0, 1.0 - d}, N), N);
  }
  return acc;
}

Series rational_taylor(const std::vector<Complex>& num, const std::vector<Complex>& den, int N) {
  return series_div(num, den, N);
}

std::optional<Path> brute_force_leash(const Lattice& lat, std::size_t z, std::size_t max_length) {
  Path path{z};
  std::function<bool(std::size_t)> search = [&](std::size_t remaining) -> bool {
    const auto u = path.back();
    std::vector<std::size_t> next;
    for (const auto& nb : lat.neighbors(u)) next.push_back(nb.vertex);
    std::sort(next.begin(), next.end());
    for (auto v : next) {
      const Complex step = lat.coord(v) - lat.coord(u);
      if (remaining == 1) {
        if (std::abs(step - 1.0) < kCoordTol) {
          path.push_back(v);
          return true;
        }
        continue;
      }
      if (std::abs(step - 1.0) < kCoordTol || std::abs(step + 1.0) < kCoordTol) continue;
      path.push_back(v);
      if (search(remaining - 1)) return true;
      path.pop_back();
    }
    return false;
  };
  for (std::size_t length = 1; length <= max_length; ++length) {
    path.assign(1, z);
    if (search(length)) return path;
  }
  return std::nullopt;
}

std::vector<Path> distinct_paths(const Lattice& lat, std::size_t a, std::size_t b, std::size_t count,
                                 std::size_t slack) {
  const auto limit = find_path(lat, a, b).size() - 1 + slack;
  std::vector<Path> out;
  std::vector<char> visited(lat.vertex_count(), 0);
  Path path{a};
  visited[a] = 1;
  std::function<void()> search = [&] {
    if (out.size() >= count) return;
    const auto u = path.back();
    if (u == b) {
      out.push_back(path);
      return;
    }
    if (path.size() - 1 >= limit) return;
    for (const auto& nb : lat.neighbors(u)) {
      if (visited[nb.vertex]) continue;
      visited[nb.vertex] = 1;
      path.push_back(nb.vertex);
      search();
      path.pop_back();
      visited[nb.vertex] = 0;
    }
  };
  search();
  return out;
}

CMatrix resolvent_series(const std::vector<DAFunction>& basis, const CMatrix& A, std::size_t v) {
  CMatrix acc = CMatrix::Zero(A.rows(), A.cols());
  CMatrix power = CMatrix::Identity(A.rows(), A.cols());
  for (const auto& zn : basis) {
    acc += zn.scalar_at(v) * power;
    power = power * A;
  }
  return acc;
}

DAFunction kernel_series(const std::vector<DAFunction>& basis, std::size_t w, double M) {
  const auto& lattice = basis.front().lattice_ptr();
  std::vector<CMatrix> values(lattice->vertex_count(), CMatrix::Zero(1, 1));
  double weight = 1.0;
  for (const auto& zn : basis) {
    const Complex c = std::conj(zn.scalar_at(w)) * weight;
    for (std::size_t v = 0; v < values.size(); ++v) values[v](0, 0) += zn.scalar_at(v) * c;
    weight /= M;
  }
  return DAFunction(lattice, {1, 1}, std::move(values));
}

}  // namespace dalat::oracles
