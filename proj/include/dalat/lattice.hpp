#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dalat/numeric.hpp"

namespace dalat {

using VertexId = std::int64_t;

/// Vertex indices (not ids). Index order equals ascending id order.
using Path = std::vector<std::size_t>;

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

struct Vertex {
  VertexId id = 0;
  Complex z;
};

struct Neighbor {
  std::size_t vertex;
  std::size_t edge;
};

/// Edge directions, the forbidden parameter set and the pole set of a lattice.
struct DirectionData {
  std::vector<Complex> directions;  // both orientations of every edge
  std::vector<Complex> forbidden;   // { -2/(1+d) : d != -1 }
  std::vector<Complex> poles;       // {0} U { 1/t : t forbidden }

  std::optional<std::size_t> find_direction(Complex step, double tol = kCoordTol) const;
  double distance_to_forbidden(Complex t) const;
  double distance_to_poles(Complex t) const;
};

/// Shortest paths from the origin, lexicographically smallest by vertex id.
/// The set of such paths is prefix-closed, so it forms a tree; vertices are
/// stored layer by layer (breadth-first), and every vertex of a layer depends
/// only on the previous one.
struct OriginTree {
  std::vector<std::size_t> order;
  std::vector<std::size_t> layer_offsets;  // layer k is order[offsets[k], offsets[k+1])
  std::vector<std::size_t> parent;         // npos for the origin and unreachable vertices
  std::vector<std::size_t> depth;          // npos when unreachable
  std::vector<std::size_t> direction;      // index of (v - parent) in DirectionData::directions

  std::size_t layer_count() const { return layer_offsets.empty() ? 0 : layer_offsets.size() - 1; }
  bool reachable(std::size_t v) const { return depth[v] != npos; }
  Path path_to(std::size_t v) const;
};

struct Track {
  std::vector<std::size_t> faces;  // consecutive faces are adjacent
  std::vector<std::size_t> ties;   // edges of the crossed side class (all parallel)
  std::vector<std::size_t> rails;  // the remaining sides of the faces
};

class Lattice {
 public:
  /// Builds the incidence structure without checking geometric invariants;
  /// see validate(). Throws ParseError on dangling or duplicate ids.
  Lattice(std::vector<Vertex> vertices, const std::vector<std::array<VertexId, 2>>& edges,
          const std::vector<std::vector<VertexId>>& faces, VertexId origin_id);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t face_count() const { return faces_.size(); }

  VertexId id(std::size_t v) const { return vertices_[v].id; }
  Complex coord(std::size_t v) const { return vertices_[v].z; }
  const std::vector<Vertex>& vertices() const { return vertices_; }

  std::optional<std::size_t> index_of(VertexId id) const;
  /// Throws InvalidParameter for unknown ids.
  std::size_t index(VertexId id) const;

  VertexId origin_id() const { return origin_id_; }
  bool has_origin() const { return origin_.has_value(); }
  std::size_t origin() const;

  std::span<const Neighbor> neighbors(std::size_t v) const { return adjacency_[v]; }
  const std::array<std::size_t, 2>& edge(std::size_t e) const { return edges_[e]; }
  const std::vector<std::array<std::size_t, 2>>& edges() const { return edges_; }
  std::optional<std::size_t> edge_between(std::size_t a, std::size_t b) const;
  /// The neighbor at coord(v) + offset, if any.
  std::optional<std::size_t> neighbor_at(std::size_t v, Complex offset) const;

  const std::vector<std::vector<std::size_t>>& faces() const { return faces_; }
  std::span<const std::size_t> edge_faces(std::size_t e) const { return edge_faces_[e]; }
  bool is_boundary_vertex(std::size_t v) const;

  const DirectionData& directions() const { return directions_; }
  /// Empty when the origin is missing.
  const OriginTree& tree() const { return tree_; }

 private:
  void build_directions();
  void build_tree();

  std::vector<Vertex> vertices_;
  std::vector<std::array<std::size_t, 2>> edges_;
  std::vector<std::vector<std::size_t>> faces_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<std::vector<std::size_t>> edge_faces_;
  VertexId origin_id_;
  std::optional<std::size_t> origin_;
  DirectionData directions_;
  OriginTree tree_;
};

using LatticePtr = std::shared_ptr<const Lattice>;

enum class LatticeKind { square, rhombic };

/// Vertices { m + n*w : |m|,|n| <= radius } with w = i (square) or e^{i alpha}.
/// Vertex id (n + R)(2R + 1) + (m + R); faces (z, z+1, z+1+w, z+w).
Lattice generate(LatticeKind kind, int radius, double alpha = 1.0471975511965976);
LatticePtr make_lattice(LatticeKind kind, int radius, double alpha = 1.0471975511965976);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool ok() const;
  const ValidationCheck* find(std::string_view name) const;
  std::vector<std::string> failures() const;
};

/// Checks: "unit edges", "distinct coordinates", "unit-rhombus faces",
/// "counterclockwise faces", "origin", "connected", "simply connected",
/// "leash".
ValidationReport validate(const Lattice& lattice);

DirectionData direction_data(const Lattice& lattice);

/// Shortest path a -> b; among shortest paths the lexicographically smallest
/// vertex sequence. Throws Disconnected.
Path find_path(const Lattice& lattice, std::size_t a, std::size_t b);

/// True iff the path starts at z, has unit-free interior steps (not +-1) and a
/// final step of +1.
bool is_leash(const Lattice& lattice, const Path& path);

/// Shortest leash of z inside the patch, lexicographic tie-break. Throws NoLeash.
Path find_leash(const Lattice& lattice, std::size_t z);

/// mask[v] != 0 iff v has a leash inside the patch.
std::vector<char> leash_mask(const Lattice& lattice);

/// Maximal track segments: each face appears once per side class.
std::vector<Track> tracks(const Lattice& lattice);

bool is_path(const Lattice& lattice, const Path& path);

}  // namespace dalat
