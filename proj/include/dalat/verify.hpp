#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "dalat/lattice.hpp"
#include "dalat/numeric.hpp"

namespace dalat {

struct VerifyConfig {
  std::filesystem::path lattice_file;
  Tolerance tol;
  int N = 8;       // basis depth for random DA functions
  int N_tr = 200;  // series truncation
  std::uint64_t seed = 1;
  std::vector<std::string> groups;  // empty: all of kVerifyGroups
};

inline const std::vector<std::string> kVerifyGroups{"lattice", "calculus", "realization", "rational"};

struct PropertyResult {
  std::string group;
  std::string name;
  double residual = 0.0;  // NaN when the check threw
  double threshold = 0.0;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  VerifyConfig config;
  std::string lattice_hash;
  std::vector<PropertyResult> results;

  bool all_passed() const;
  nlohmann::ordered_json to_json() const;
  /// One line per property plus a totals line.
  std::string summary() const;
};

/// Throws InvalidParameter for bad settings or unknown groups.
void check_config(const VerifyConfig& config);

/// Loads and validates config.lattice_file, then runs the enabled groups.
VerifyReport run_verify(const VerifyConfig& config, Exec exec = Exec::parallel);
VerifyReport run_verify(const LatticePtr& lattice, const VerifyConfig& config, Exec exec = Exec::parallel);

}  // namespace dalat
