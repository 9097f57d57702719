#include "dalat/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>

#include "dalat/error.hpp"

namespace dalat {

namespace {

bool is_unit_step(Complex step) { return near(step, 1.0) || near(step, -1.0); }

template <class Pred>
std::vector<std::size_t> multi_source_bfs(const Lattice& lat, const std::vector<std::size_t>& sources,
                                          Pred&& allowed) {
  std::vector<std::size_t> dist(lat.vertex_count(), npos);
  std::deque<std::size_t> queue;
  for (auto s : sources) {
    if (dist[s] == npos) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (const auto& nb : lat.neighbors(u)) {
      if (dist[nb.vertex] == npos && allowed(u, nb.vertex)) {
        dist[nb.vertex] = dist[u] + 1;
        queue.push_back(nb.vertex);
      }
    }
  }
  return dist;
}

// Vertices whose leash interior may pass through: steps other than +-1.
auto interior_step_allowed(const Lattice& lat) {
  return [&lat](std::size_t u, std::size_t v) { return !is_unit_step(lat.coord(v) - lat.coord(u)); };
}

std::vector<std::size_t> leash_targets(const Lattice& lat) {
  std::vector<std::size_t> targets;
  for (std::size_t v = 0; v < lat.vertex_count(); ++v) {
    if (lat.neighbor_at(v, 1.0)) targets.push_back(v);
  }
  return targets;
}

void push_unique(std::vector<Complex>& set, Complex value) {
  for (const auto& s : set) {
    if (near(s, value)) return;
  }
  set.push_back(value);
}

}  // namespace

std::optional<std::size_t> DirectionData::find_direction(Complex step, double tol) const {
  for (std::size_t k = 0; k < directions.size(); ++k) {
    if (near(directions[k], step, tol)) return k;
  }
  return std::nullopt;
}

double DirectionData::distance_to_forbidden(Complex t) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : forbidden) best = std::min(best, std::abs(t - s));
  return best;
}

double DirectionData::distance_to_poles(Complex t) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : poles) best = std::min(best, std::abs(t - p));
  return best;
}

Path OriginTree::path_to(std::size_t v) const {
  if (!reachable(v)) fail(ErrorCode::Disconnected, "vertex not reachable from the origin");
  Path path;
  for (auto u = v; u != npos; u = parent[u]) path.push_back(u);
  std::reverse(path.begin(), path.end());
  return path;
}

Lattice::Lattice(std::vector<Vertex> vertices, const std::vector<std::array<VertexId, 2>>& edges,
                 const std::vector<std::vector<VertexId>>& faces, VertexId origin_id)
    : vertices_(std::move(vertices)), origin_id_(origin_id) {
  std::stable_sort(vertices_.begin(), vertices_.end(),
                   [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
  for (std::size_t v = 1; v < vertices_.size(); ++v) {
    if (vertices_[v].id == vertices_[v - 1].id) {
      fail(ErrorCode::ParseError, "duplicate vertex id " + std::to_string(vertices_[v].id));
    }
  }
  auto resolve = [this](VertexId id) {
    auto idx = index_of(id);
    if (!idx) fail(ErrorCode::ParseError, "unknown vertex id " + std::to_string(id));
    return *idx;
  };

  adjacency_.resize(vertices_.size());
  edges_.reserve(edges.size());
  for (const auto& [ida, idb] : edges) {
    const auto a = resolve(ida);
    const auto b = resolve(idb);
    if (a == b) fail(ErrorCode::ParseError, "self-loop at vertex id " + std::to_string(ida));
    if (edge_between(a, b)) {
      fail(ErrorCode::ParseError,
           "duplicate edge " + std::to_string(ida) + "-" + std::to_string(idb));
    }
    const auto e = edges_.size();
    edges_.push_back({std::min(a, b), std::max(a, b)});
    adjacency_[a].push_back({b, e});
    adjacency_[b].push_back({a, e});
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end(),
              [](const Neighbor& x, const Neighbor& y) { return x.vertex < y.vertex; });
  }

  edge_faces_.resize(edges_.size());
  faces_.reserve(faces.size());
  for (const auto& face : faces) {
    std::vector<std::size_t> idx;
    idx.reserve(face.size());
    for (auto id : face) idx.push_back(resolve(id));
    const auto f = faces_.size();
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (auto e = edge_between(idx[k], idx[(k + 1) % idx.size()])) edge_faces_[*e].push_back(f);
    }
    faces_.push_back(std::move(idx));
  }

  origin_ = index_of(origin_id);
  build_directions();
  build_tree();
}

std::optional<std::size_t> Lattice::index_of(VertexId id) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), id,
                             [](const Vertex& v, VertexId x) { return v.id < x; });
  if (it == vertices_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - vertices_.begin());
}

std::size_t Lattice::index(VertexId id) const {
  auto idx = index_of(id);
  if (!idx) fail(ErrorCode::InvalidParameter, "unknown vertex id " + std::to_string(id));
  return *idx;
}

std::size_t Lattice::origin() const {
  if (!origin_) fail(ErrorCode::ValidationError, "lattice has no origin vertex");
  return *origin_;
}

std::optional<std::size_t> Lattice::edge_between(std::size_t a, std::size_t b) const {
  for (const auto& nb : adjacency_[a]) {
    if (nb.vertex == b) return nb.edge;
  }
  return std::nullopt;
}

std::optional<std::size_t> Lattice::neighbor_at(std::size_t v, Complex offset) const {
  const Complex target = vertices_[v].z + offset;
  for (const auto& nb : adjacency_[v]) {
    if (near(vertices_[nb.vertex].z, target)) return nb.vertex;
  }
  return std::nullopt;
}

bool Lattice::is_boundary_vertex(std::size_t v) const {
  return std::any_of(adjacency_[v].begin(), adjacency_[v].end(),
                     [this](const Neighbor& nb) { return edge_faces_[nb.edge].size() < 2; });
}

void Lattice::build_directions() {
  for (const auto& [a, b] : edges_) {
    const Complex d = vertices_[b].z - vertices_[a].z;
    push_unique(directions_.directions, d);
    push_unique(directions_.directions, -d);
  }
  std::sort(directions_.directions.begin(), directions_.directions.end(),
            [](Complex x, Complex y) { return std::arg(x) < std::arg(y); });
  for (const auto& d : directions_.directions) {
    if (near(d, -1.0)) continue;
    push_unique(directions_.forbidden, -2.0 / (1.0 + d));
  }
  directions_.poles.push_back(0.0);
  for (const auto& t : directions_.forbidden) push_unique(directions_.poles, 1.0 / t);
}

void Lattice::build_tree() {
  const auto n = vertices_.size();
  tree_.parent.assign(n, npos);
  tree_.depth.assign(n, npos);
  tree_.direction.assign(n, npos);
  if (!origin_) return;

  std::vector<std::size_t> rank(n, npos);
  std::vector<std::size_t> layer{*origin_};
  tree_.depth[*origin_] = 0;
  tree_.layer_offsets.push_back(0);
  while (!layer.empty()) {
    for (auto v : layer) {
      rank[v] = tree_.order.size();
      tree_.order.push_back(v);
    }
    tree_.layer_offsets.push_back(tree_.order.size());

    // Scanning the current layer in rank order makes the first discoverer of
    // each vertex its lexicographically smallest parent.
    std::vector<std::size_t> next;
    for (auto u : layer) {
      for (const auto& nb : adjacency_[u]) {
        if (tree_.depth[nb.vertex] != npos) continue;
        tree_.depth[nb.vertex] = tree_.depth[u] + 1;
        tree_.parent[nb.vertex] = u;
        next.push_back(nb.vertex);
      }
    }
    std::sort(next.begin(), next.end(), [&](std::size_t x, std::size_t y) {
      const auto rx = rank[tree_.parent[x]];
      const auto ry = rank[tree_.parent[y]];
      return rx != ry ? rx < ry : x < y;
    });
    layer = std::move(next);
  }
  for (auto v : tree_.order) {
    if (tree_.parent[v] == npos) continue;
    if (auto k = directions_.find_direction(vertices_[v].z - vertices_[tree_.parent[v]].z)) {
      tree_.direction[v] = *k;
    }
  }
}

Lattice generate(LatticeKind kind, int radius, double alpha) {
  if (radius < 1) fail(ErrorCode::InvalidParameter, "radius must be >= 1");
  Complex w{0.0, 1.0};
  if (kind == LatticeKind::rhombic) {
    if (!(alpha > 0.0 && alpha < std::numbers::pi) || std::abs(std::sin(alpha)) < kCoordTol) {
      fail(ErrorCode::InvalidParameter, "rhombic lattice needs alpha in (0, pi)");
    }
    w = std::polar(1.0, alpha);
  }
  const VertexId side = 2 * radius + 1;
  auto id_of = [&](int m, int n) { return VertexId(n + radius) * side + VertexId(m + radius); };

  std::vector<Vertex> vertices;
  std::vector<std::array<VertexId, 2>> edges;
  std::vector<std::vector<VertexId>> faces;
  for (int n = -radius; n <= radius; ++n) {
    for (int m = -radius; m <= radius; ++m) {
      vertices.push_back({id_of(m, n), Complex(m) + double(n) * w});
      if (m < radius) edges.push_back({id_of(m, n), id_of(m + 1, n)});
      if (n < radius) edges.push_back({id_of(m, n), id_of(m, n + 1)});
      if (m < radius && n < radius) {
        faces.push_back({id_of(m, n), id_of(m + 1, n), id_of(m + 1, n + 1), id_of(m, n + 1)});
      }
    }
  }
  return Lattice(std::move(vertices), edges, faces, id_of(0, 0));
}

LatticePtr make_lattice(LatticeKind kind, int radius, double alpha) {
  return std::make_shared<const Lattice>(generate(kind, radius, alpha));
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<std::string> ValidationReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c.name);
  }
  return out;
}

ValidationReport validate(const Lattice& lat) {
  ValidationReport report;
  auto add = [&](std::string name, bool passed, std::string detail) {
    report.checks.push_back({std::move(name), passed, std::move(detail)});
  };
  const auto nv = lat.vertex_count();

  {
    std::size_t bad = 0;
    for (const auto& [a, b] : lat.edges()) {
      if (std::abs(std::abs(lat.coord(b) - lat.coord(a)) - 1.0) > kCoordTol) ++bad;
    }
    add("unit edges", bad == 0, std::to_string(bad) + " non-unit edges");
  }
  {
    std::vector<std::size_t> byx(nv);
    for (std::size_t v = 0; v < nv; ++v) byx[v] = v;
    std::sort(byx.begin(), byx.end(),
              [&](auto x, auto y) { return lat.coord(x).real() < lat.coord(y).real(); });
    std::size_t dups = 0;
    for (std::size_t i = 0; i < nv; ++i) {
      for (std::size_t j = i + 1;
           j < nv && lat.coord(byx[j]).real() - lat.coord(byx[i]).real() <= kCoordTol; ++j) {
        if (near(lat.coord(byx[i]), lat.coord(byx[j]))) ++dups;
      }
    }
    add("distinct coordinates", dups == 0, std::to_string(dups) + " coincident vertex pairs");
  }
  {
    std::size_t bad = 0;
    std::size_t clockwise = 0;
    for (const auto& face : lat.faces()) {
      bool good = face.size() == 4;
      if (good) {
        const Complex a = lat.coord(face[0]), b = lat.coord(face[1]);
        const Complex c = lat.coord(face[2]), d = lat.coord(face[3]);
        for (std::size_t k = 0; k < 4 && good; ++k) {
          const auto u = face[k], v = face[(k + 1) % 4];
          good = lat.edge_between(u, v).has_value() &&
                 std::abs(std::abs(lat.coord(v) - lat.coord(u)) - 1.0) <= kCoordTol;
        }
        good = good && std::abs(a - b + c - d) <= kCoordTol && !near(a, c) && !near(b, d);
        // Shoelace area of the quadrilateral.
        const double area = 0.5 * ((std::conj(c - a) * (d - b)).imag());
        if (!(area > kCoordTol)) ++clockwise;
      } else {
        ++clockwise;
      }
      if (!good) ++bad;
    }
    add("unit-rhombus faces", bad == 0, std::to_string(bad) + " faces are not unit rhombi");
    add("counterclockwise faces", clockwise == 0,
        std::to_string(clockwise) + " faces not traversed counterclockwise");
  }
  {
    const bool ok = lat.has_origin() && near(lat.coord(lat.origin()), 0.0);
    add("origin", ok, ok ? "origin vertex at 0" : "origin_id missing or not at coordinate 0");
  }
  {
    std::size_t reached = 0;
    if (nv > 0) {
      auto dist = multi_source_bfs(lat, {0}, [](auto, auto) { return true; });
      reached = static_cast<std::size_t>(std::count_if(dist.begin(), dist.end(),
                                                       [](auto d) { return d != npos; }));
    }
    add("connected", nv > 0 && reached == nv,
        std::to_string(reached) + " of " + std::to_string(nv) + " vertices reachable");
  }
  {
    const auto euler = static_cast<long long>(nv) - static_cast<long long>(lat.edge_count()) +
                       static_cast<long long>(lat.face_count());
    std::size_t overfull = 0;
    for (std::size_t e = 0; e < lat.edge_count(); ++e) {
      if (lat.edge_faces(e).size() > 2) ++overfull;
    }
    add("simply connected", euler == 1 && overfull == 0,
        "V - E + F = " + std::to_string(euler) + ", " + std::to_string(overfull) +
            " edges in more than two faces");
  }
  {
    const auto mask = leash_mask(lat);
    std::size_t leashed = 0;
    std::size_t interior_missing = 0;
    for (std::size_t v = 0; v < nv; ++v) {
      if (mask[v]) {
        ++leashed;
      } else if (!lat.is_boundary_vertex(v)) {
        ++interior_missing;
      }
    }
    add("leash", interior_missing == 0,
        std::to_string(leashed) + " of " + std::to_string(nv) + " vertices have a leash in the patch; " +
            std::to_string(interior_missing) + " interior vertices without one");
  }
  return report;
}

DirectionData direction_data(const Lattice& lattice) { return lattice.directions(); }

bool is_path(const Lattice& lat, const Path& path) {
  if (path.empty()) return false;
  for (auto v : path) {
    if (v >= lat.vertex_count()) return false;
  }
  for (std::size_t k = 1; k < path.size(); ++k) {
    if (!lat.edge_between(path[k - 1], path[k])) return false;
  }
  return true;
}

Path find_path(const Lattice& lat, std::size_t a, std::size_t b) {
  auto dist = multi_source_bfs(lat, {b}, [](auto, auto) { return true; });
  if (dist[a] == npos) fail(ErrorCode::Disconnected, "no path between the vertices");
  Path path{a};
  for (auto cur = a; cur != b;) {
    for (const auto& nb : lat.neighbors(cur)) {
      if (dist[nb.vertex] + 1 == dist[cur]) {
        cur = nb.vertex;
        break;
      }
    }
    path.push_back(cur);
  }
  return path;
}

bool is_leash(const Lattice& lat, const Path& path) {
  if (path.size() < 2 || !is_path(lat, path)) return false;
  const auto n = path.size() - 1;
  for (std::size_t k = 1; k < n; ++k) {
    if (is_unit_step(lat.coord(path[k]) - lat.coord(path[k - 1]))) return false;
  }
  return near(lat.coord(path[n]) - lat.coord(path[n - 1]), 1.0);
}

std::vector<char> leash_mask(const Lattice& lat) {
  auto dist = multi_source_bfs(lat, leash_targets(lat), interior_step_allowed(lat));
  std::vector<char> mask(lat.vertex_count());
  for (std::size_t v = 0; v < mask.size(); ++v) mask[v] = dist[v] != npos;
  return mask;
}

Path find_leash(const Lattice& lat, std::size_t z) {
  const auto allowed = interior_step_allowed(lat);
  auto dist = multi_source_bfs(lat, leash_targets(lat), allowed);
  if (dist[z] == npos) fail(ErrorCode::NoLeash, "no leash inside the patch");
  Path path{z};
  auto cur = z;
  while (dist[cur] > 0) {
    for (const auto& nb : lat.neighbors(cur)) {
      if (allowed(cur, nb.vertex) && dist[nb.vertex] + 1 == dist[cur]) {
        cur = nb.vertex;
        break;
      }
    }
    path.push_back(cur);
  }
  path.push_back(*lat.neighbor_at(cur, 1.0));
  return path;
}

std::vector<Track> tracks(const Lattice& lat) {
  const auto& faces = lat.faces();
  // sides[f][c] holds the two edges of side class c of face f.
  std::vector<std::array<std::array<std::size_t, 2>, 2>> sides(faces.size());
  for (std::size_t f = 0; f < faces.size(); ++f) {
    if (faces[f].size() != 4) fail(ErrorCode::ValidationError, "tracks need quadrilateral faces");
    std::array<std::size_t, 4> e{};
    for (std::size_t k = 0; k < 4; ++k) {
      auto edge = lat.edge_between(faces[f][k], faces[f][(k + 1) % 4]);
      if (!edge) fail(ErrorCode::ValidationError, "face side is not an edge");
      e[k] = *edge;
    }
    sides[f] = {{{e[0], e[2]}, {e[1], e[3]}}};
  }
  auto class_of = [&](std::size_t f, std::size_t edge) -> std::size_t {
    for (std::size_t c = 0; c < 2; ++c) {
      if (sides[f][c][0] == edge || sides[f][c][1] == edge) return c;
    }
    return npos;
  };
  auto other_face = [&](std::size_t f, std::size_t edge) -> std::size_t {
    for (auto g : lat.edge_faces(edge)) {
      if (g != f) return g;
    }
    return npos;
  };

  std::vector<std::array<bool, 2>> visited(faces.size(), {false, false});
  std::vector<Track> out;
  for (std::size_t f0 = 0; f0 < faces.size(); ++f0) {
    for (std::size_t c0 = 0; c0 < 2; ++c0) {
      if (visited[f0][c0]) continue;
      // Walk out of f0 through each of its two tie sides.
      std::array<std::vector<std::pair<std::size_t, std::size_t>>, 2> arms;
      for (std::size_t side = 0; side < 2; ++side) {
        auto f = f0;
        auto exit = sides[f0][c0][side];
        while (true) {
          const auto g = other_face(f, exit);
          if (g == npos || g == f0) break;
          const auto c = class_of(g, exit);
          arms[side].push_back({g, c});
          exit = sides[g][c][0] == exit ? sides[g][c][1] : sides[g][c][0];
          f = g;
        }
      }
      std::vector<std::pair<std::size_t, std::size_t>> seq(arms[0].rbegin(), arms[0].rend());
      seq.push_back({f0, c0});
      seq.insert(seq.end(), arms[1].begin(), arms[1].end());
      if (seq.front().first > seq.back().first) std::reverse(seq.begin(), seq.end());

      Track track;
      auto add_unique = [](std::vector<std::size_t>& v, std::size_t e) {
        if (std::find(v.begin(), v.end(), e) == v.end()) v.push_back(e);
      };
      for (const auto& [f, c] : seq) {
        visited[f][c] = true;
        track.faces.push_back(f);
        for (auto e : sides[f][c]) add_unique(track.ties, e);
        for (auto e : sides[f][1 - c]) add_unique(track.rails, e);
      }
      out.push_back(std::move(track));
    }
  }
  return out;
}

}  // namespace dalat
