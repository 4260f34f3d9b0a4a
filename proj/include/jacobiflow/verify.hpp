#pragma once

/// @file verify.hpp
/// @brief Named, seeded invariant checks grouped into suites.
///
/// Each check draws its probes from a SplitMix64 stream forked from the run
/// seed by the check's position in the registry, so a report depends only on
/// (suite, seed, tolerance overrides) and not on scheduling.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "jacobiflow/random.hpp"

namespace jacobiflow {

enum class Bound { at_most, at_least };

struct Measurement {
  double observed = 0.0;
  std::string detail; // inputs of the worst probe
};

struct Check {
  std::string suite;
  std::string name; // unique, e.g. "curvature_two_routes[sphere]"
  double tolerance = 0.0;
  Bound bound = Bound::at_most;
  std::function<Measurement(SplitMix64 &)> run;

  std::string id() const { return suite + "." + name; }
};

struct CheckResult {
  std::string suite;
  std::string name;
  double observed = 0.0;
  double tolerance = 0.0;
  Bound bound = Bound::at_most;
  bool passed = false;
  std::string detail;
  std::string error; // set when the check threw

  std::string id() const { return suite + "." + name; }
};

struct VerifyOptions {
  std::uint64_t seed = 42;
  /// Keyed by check name, full id ("suite.name") or the name without its
  /// "[model]" suffix, which applies to every model.
  std::map<std::string, double> tolerance_overrides;
  int parallel = 1;
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<CheckResult> results;

  bool passed() const;
  std::size_t failures() const;
  std::string text() const;
  nlohmann::json to_json() const;
};

/// "tangent_numbers", "double_tangent", "connection", "spray_flow", "model_zoo".
const std::vector<std::string> &suite_names();

/// All registered checks in a fixed order.
const std::vector<Check> &check_registry();

const Check &find_check(const std::string &id);

/// Runs every check of `suite` ("all" for every suite).
VerifyReport run_verify(const std::string &suite, const VerifyOptions &options);

/// Runs an explicit list of check ids.
VerifyReport run_checks(const std::vector<std::string> &ids, const VerifyOptions &options);

} // namespace jacobiflow
