#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "complab/modelfn.hpp"
#include "complab/realfn.hpp"
#include "complab/report.hpp"

namespace complab {

/// LO:HI:N, N >= 2 evenly spaced points.
struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 2;

  static GridSpec parse(const std::string& text);
  std::vector<double> points() const;
  std::string to_string() const;
};

/// Parameters of one verification run. Unset fields take suite defaults.
struct SuiteConfig {
  std::string suite;
  std::optional<double> k;
  std::optional<double> kbar;
  std::optional<int> n;
  std::optional<int> m;
  std::optional<double> r;
  std::optional<GridSpec> r_grid;
  std::optional<std::string> model;
  std::optional<std::string> profile;
  std::optional<std::string> function;
  /// JSON hinge file for the hinge suites.
  std::optional<std::string> hinge;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;

  /// Fields set in `over` replace those of *this.
  SuiteConfig overridden_by(const SuiteConfig& over) const;
  /// Effective tolerance: tol if set, else COMPLAB_TOL, else the default.
  Tolerance tolerance() const;
  std::uint64_t effective_seed() const { return seed.value_or(1); }
  nlohmann::json echo() const;

  /// Reads a JSON object; unknown keys and mistyped values raise
  /// ConfigError naming the field.
  static SuiteConfig from_json(const nlohmann::json& j);
  /// Parses a JSON config file; syntax errors report the line.
  static SuiteConfig from_file(const std::string& path);
};

/// Names accepted by run_suite.
const std::vector<std::string>& suite_names();

/// Builds the function named by --f: "sn:<kbar>", "psi-counterexample",
/// "sinh-counterexample", "family" (random admissible draw) or
/// "csv:<path>". k bounds the domain for positive curvature.
FunctionSpec function_from_name(const std::string& name, Curvature k, std::uint64_t seed);

/// Runs one suite (or "all") and returns its report. ConfigError for
/// unknown suites or invalid parameters, FileError for unreadable inputs.
VerificationReport run_suite(const SuiteConfig& config);

}  // namespace complab
