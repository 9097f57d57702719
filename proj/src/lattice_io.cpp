#include "dalat/lattice_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dalat/error.hpp"

namespace dalat {

using nlohmann::json;
using nlohmann::ordered_json;

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorCode::IoError, "write failed for " + path.string());
}

ordered_json lattice_to_json(const Lattice& lat) {
  ordered_json doc;
  auto vertices = ordered_json::array();
  for (const auto& v : lat.vertices()) {
    vertices.push_back(ordered_json{{"id", v.id}, {"re", v.z.real()}, {"im", v.z.imag()}});
  }
  auto edges = ordered_json::array();
  for (const auto& [a, b] : lat.edges()) edges.push_back({lat.id(a), lat.id(b)});
  auto faces = ordered_json::array();
  for (const auto& face : lat.faces()) {
    auto ids = ordered_json::array();
    for (auto v : face) ids.push_back(lat.id(v));
    faces.push_back(std::move(ids));
  }
  doc["vertices"] = std::move(vertices);
  doc["edges"] = std::move(edges);
  doc["faces"] = std::move(faces);
  doc["origin_id"] = lat.origin_id();
  return doc;
}

Lattice lattice_from_json(const json& doc) {
  try {
    if (!doc.is_object()) fail(ErrorCode::ParseError, "lattice document must be an object");
    std::vector<Vertex> vertices;
    for (const auto& v : doc.at("vertices")) {
      vertices.push_back({v.at("id").get<VertexId>(),
                          Complex(v.at("re").get<double>(), v.at("im").get<double>())});
    }
    std::vector<std::array<VertexId, 2>> edges;
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 2) fail(ErrorCode::ParseError, "edge must be an id pair");
      edges.push_back({e[0].get<VertexId>(), e[1].get<VertexId>()});
    }
    std::vector<std::vector<VertexId>> faces;
    for (const auto& f : doc.at("faces")) {
      if (!f.is_array()) fail(ErrorCode::ParseError, "face must be an id list");
      faces.push_back(f.get<std::vector<VertexId>>());
    }
    return Lattice(std::move(vertices), edges, faces, doc.at("origin_id").get<VertexId>());
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("lattice schema: ") + e.what());
  }
}

Lattice read_lattice(const std::filesystem::path& path) {
  return lattice_from_json(read_json_file(path));
}

Lattice load_lattice(const std::filesystem::path& path) {
  auto lat = read_lattice(path);
  const auto report = validate(lat);
  if (!report.ok()) {
    std::string names;
    for (const auto& name : report.failures()) names += (names.empty() ? "" : ", ") + name;
    fail(ErrorCode::ValidationError, path.string() + " violates: " + names);
  }
  return lat;
}

void save_lattice(const Lattice& lattice, const std::filesystem::path& path) {
  write_text_file(path, lattice_to_json(lattice).dump() + "\n");
}

std::string lattice_hash(const Lattice& lattice) {
  const auto text = lattice_to_json(lattice).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool same_lattice(const Lattice& a, const Lattice& b) {
  if (a.vertex_count() != b.vertex_count() || a.edges() != b.edges() || a.faces() != b.faces() ||
      a.origin_id() != b.origin_id()) {
    return false;
  }
  for (std::size_t v = 0; v < a.vertex_count(); ++v) {
    if (a.id(v) != b.id(v) || a.coord(v) != b.coord(v)) return false;
  }
  return true;
}

}  // namespace dalat
