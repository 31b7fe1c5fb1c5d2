#pragma once

// The three command-line campaigns as library calls returning JSON reports.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "compfkg/io.hpp"

namespace compfkg {

struct RunConfig {
  std::string command;
  int n = 0;
  int r = 0;
  /// verify-fkg: exhaustive, random or homogeneous
  std::string mode = "exhaustive";
  std::vector<Rational> d;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  std::size_t filter_cap = kDefaultFilterCap;
  long precision_start = kDefaultStartPrecision;

  // enumerate
  std::string dot_path, quotient_dot_path, json_path;

  // verify-geometry
  std::string check;
  std::string bodies_path, newton_path, table_path, c_path;
  /// Built-in C: max-part, multinomial or constant.
  std::string weight = "max-part";
  /// volume or covolume, for abstract tables.
  std::string kind = "covolume";
  std::optional<std::array<long, 3>> exponent;
  /// Inner r for the corollaries; 0 means all bodies.
  int inner_r = 0;
  /// Ambient dimension of random instances.
  int dim = 3;
  bool allow_rescale = false;

  /// Not part of the report: output never depends on it.
  unsigned threads = 0;
};

struct CommandResult {
  Json report;
  /// 0 pass, 2 violation witness
  int exit_code = 0;
  /// Short human summary for the terminal.
  std::string summary;
};

/// The config block recorded in every report.
Json config_json(const RunConfig& cfg);

CommandResult run_enumerate(const RunConfig& cfg);
CommandResult run_verify_fkg(const RunConfig& cfg);
CommandResult run_verify_geometry(const RunConfig& cfg);

}  // namespace compfkg
