#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dalat/da_function.hpp"
#include "dalat/realization.hpp"

namespace dalat {

/// Undefined vertices are omitted from "values".
nlohmann::ordered_json function_to_json(const DAFunction& f);
/// Throws ParseError on schema problems or a lattice hash mismatch.
DAFunction function_from_json(const nlohmann::json& doc, const LatticePtr& lattice);
void save_function(const DAFunction& f, const std::filesystem::path& path);
DAFunction load_function(const std::filesystem::path& path, const LatticePtr& lattice);

nlohmann::ordered_json realization_to_json(const Realization& r);
Realization realization_from_json(const nlohmann::json& doc);
void save_realization(const Realization& r, const std::filesystem::path& path);
Realization load_realization(const std::filesystem::path& path);

using NamedFunction = std::pair<std::string, DAFunction>;

/// Header id,re_z,im_z then re_<name>,im_<name> per function (matrix entries
/// get a _<row>_<col> suffix). One row per vertex in ascending id order;
/// undefined values are written as nan.
std::string functions_to_csv(const std::vector<NamedFunction>& functions);

/// format is "csv" or "json"; anything else throws InvalidParameter.
void export_values(const DAFunction& f, const std::string& format, const std::filesystem::path& path,
                   const std::string& name = "f");

}  // namespace dalat
