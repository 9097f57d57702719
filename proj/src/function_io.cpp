#include "dalat/function_io.hpp"

#include <cstdio>

#include "dalat/error.hpp"
#include "dalat/lattice_io.hpp"

namespace dalat {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json matrix_to_json(const CMatrix& m) {
  auto rows = ordered_json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    auto row = ordered_json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& doc, Index rows, Index cols, const char* what) {
  if (!doc.is_array() || Index(doc.size()) != rows) {
    fail(ErrorCode::ParseError, std::string(what) + ": expected " + std::to_string(rows) + " rows");
  }
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = doc[std::size_t(i)];
    if (!row.is_array() || Index(row.size()) != cols) {
      fail(ErrorCode::ParseError, std::string(what) + ": expected " + std::to_string(cols) + " columns");
    }
    for (Index j = 0; j < cols; ++j) {
      const auto& c = row[std::size_t(j)];
      if (!c.is_array() || c.size() != 2) fail(ErrorCode::ParseError, std::string(what) + ": entry must be [re, im]");
      m(i, j) = Complex(c[0].get<double>(), c[1].get<double>());
    }
  }
  return m;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

ordered_json function_to_json(const DAFunction& f) {
  ordered_json doc;
  doc["lattice_hash"] = lattice_hash(f.lattice());
  doc["shape"] = {f.shape().rows, f.shape().cols};
  ordered_json values = ordered_json::object();
  for (std::size_t v = 0; v < f.lattice().vertex_count(); ++v) {
    if (f.defined(v)) values[std::to_string(f.lattice().id(v))] = matrix_to_json(f.at(v));
  }
  doc["values"] = std::move(values);
  return doc;
}

DAFunction function_from_json(const json& doc, const LatticePtr& lattice) {
  try {
    const auto hash = doc.at("lattice_hash").get<std::string>();
    if (hash != lattice_hash(*lattice)) {
      fail(ErrorCode::ParseError, "function belongs to lattice " + hash + ", not " + lattice_hash(*lattice));
    }
    const auto& shape = doc.at("shape");
    if (!shape.is_array() || shape.size() != 2) fail(ErrorCode::ParseError, "shape must be [m, n]");
    const Shape s{shape[0].get<Index>(), shape[1].get<Index>()};
    if (s.rows < 1 || s.cols < 1) fail(ErrorCode::ParseError, "shape entries must be positive");
    const auto n = lattice->vertex_count();
    std::vector<CMatrix> values(n, CMatrix::Zero(s.rows, s.cols));
    std::vector<char> dom(n, 0);
    for (const auto& [key, value] : doc.at("values").items()) {
      VertexId id = 0;
      try {
        std::size_t used = 0;
        id = std::stoll(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        fail(ErrorCode::ParseError, "bad vertex id " + key);
      }
      const auto v = lattice->index_of(id);
      if (!v) fail(ErrorCode::ParseError, "unknown vertex id " + key);
      values[*v] = matrix_from_json(value, s.rows, s.cols, "value");
      dom[*v] = 1;
    }
    return DAFunction(lattice, s, std::move(values), std::move(dom));
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("function schema: ") + e.what());
  }
}

void save_function(const DAFunction& f, const std::filesystem::path& path) {
  write_text_file(path, function_to_json(f).dump() + "\n");
}

DAFunction load_function(const std::filesystem::path& path, const LatticePtr& lattice) {
  return function_from_json(read_json_file(path), lattice);
}

ordered_json realization_to_json(const Realization& r) {
  ordered_json doc;
  doc["shape"] = {r.shape().rows, r.shape().cols};
  doc["state_dim"] = r.state_dim();
  doc["A"] = matrix_to_json(r.A);
  doc["B"] = matrix_to_json(r.B);
  doc["C"] = matrix_to_json(r.C);
  doc["D"] = matrix_to_json(r.D);
  return doc;
}

Realization realization_from_json(const json& doc) {
  try {
    const auto& shape = doc.at("shape");
    if (!shape.is_array() || shape.size() != 2) fail(ErrorCode::ParseError, "shape must be [m, n]");
    const auto m = shape[0].get<Index>(), n = shape[1].get<Index>();
    const auto l = doc.at("state_dim").get<Index>();
    if (m < 1 || n < 1 || l < 0) fail(ErrorCode::ParseError, "bad realization dimensions");
    // Zero-size blocks may be written as [] or as rows of empty lists.
    auto block = [&](const char* key, Index rows, Index cols) {
      const auto& b = doc.at(key);
      if (rows == 0 || cols == 0) {
        if (!b.is_array()) fail(ErrorCode::ParseError, std::string(key) + " must be an array");
        return CMatrix(rows, cols);
      }
      return matrix_from_json(b, rows, cols, key);
    };
    return Realization(block("A", l, l), block("B", l, n), block("C", m, l), block("D", m, n));
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("realization schema: ") + e.what());
  }
}

void save_realization(const Realization& r, const std::filesystem::path& path) {
  write_text_file(path, realization_to_json(r).dump() + "\n");
}

Realization load_realization(const std::filesystem::path& path) {
  return realization_from_json(read_json_file(path));
}

std::string functions_to_csv(const std::vector<NamedFunction>& functions) {
  if (functions.empty()) fail(ErrorCode::InvalidParameter, "nothing to export");
  const auto& lat = functions.front().second.lattice();
  std::string out = "id,re_z,im_z";
  for (const auto& [name, f] : functions) {
    if (f.lattice().vertex_count() != lat.vertex_count()) fail(ErrorCode::ShapeError, "functions on different lattices");
    const auto s = f.shape();
    for (Index i = 0; i < s.rows; ++i) {
      for (Index j = 0; j < s.cols; ++j) {
        const auto suffix = (s.rows == 1 && s.cols == 1) ? name : name + "_" + std::to_string(i) + "_" + std::to_string(j);
        out += ",re_" + suffix + ",im_" + suffix;
      }
    }
  }
  out += "\n";
  for (std::size_t v = 0; v < lat.vertex_count(); ++v) {
    out += std::to_string(lat.id(v)) + "," + format_double(lat.coord(v).real()) + "," +
           format_double(lat.coord(v).imag());
    for (const auto& nf : functions) {
      const auto& value = nf.second.at(v);
      for (Index i = 0; i < value.rows(); ++i) {
        for (Index j = 0; j < value.cols(); ++j) {
          out += "," + format_double(value(i, j).real()) + "," + format_double(value(i, j).imag());
        }
      }
    }
    out += "\n";
  }
  return out;
}

void export_values(const DAFunction& f, const std::string& format, const std::filesystem::path& path,
                   const std::string& name) {
  if (format == "csv") {
    write_text_file(path, functions_to_csv({{name, f}}));
  } else if (format == "json") {
    save_function(f, path);
  } else {
    fail(ErrorCode::InvalidParameter, "unknown export format " + format);
  }
}

}  // namespace dalat
