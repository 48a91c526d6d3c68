#pragma once

// Built-in verification suites run by `projhardy selftest`.

#include <string>
#include <vector>

#include "json.hpp"

namespace projhardy::cli {

struct SuiteOptions {
  unsigned seed = 20240601;
  /// Mutation check: negates every corner-kernel value the suites consume.
  bool flip_corner_sign = false;
};

struct SuiteResult {
  std::string name;
  int cases = 0;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

const std::vector<std::string>& suite_names();

/// Runs one suite by name ("all" runs every suite). Throws InputError for an
/// unknown or empty name.
std::vector<SuiteResult> run_suites(const std::string& name, const SuiteOptions& opt);

nlohmann::json to_json(const SuiteResult& r);

}  // namespace projhardy::cli
