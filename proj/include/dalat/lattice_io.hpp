#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "dalat/lattice.hpp"

namespace dalat {

nlohmann::ordered_json lattice_to_json(const Lattice& lattice);

/// Parses the schema only; geometric invariants are left to validate().
Lattice lattice_from_json(const nlohmann::json& doc);

/// Reads, parses and validates. ParseError on schema problems, ValidationError
/// naming every failing invariant otherwise.
Lattice load_lattice(const std::filesystem::path& path);

/// Reads and parses without validating (for reporting).
Lattice read_lattice(const std::filesystem::path& path);

void save_lattice(const Lattice& lattice, const std::filesystem::path& path);

/// FNV-1a of the canonical JSON serialization, 16 hex digits.
std::string lattice_hash(const Lattice& lattice);

bool same_lattice(const Lattice& a, const Lattice& b);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace dalat
