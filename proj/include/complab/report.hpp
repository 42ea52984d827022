#pragma once

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace complab {

/// Inequality tolerance: abs + rel * max(|lhs|, |rhs|).
struct Tolerance {
  double abs = 1e-8;
  double rel = 1e-8;

  double allowance(double lhs, double rhs) const;
  /// Same tolerance scaled by a factor (e.g. 10x for derived cross-checks).
  Tolerance scaled(double factor) const { return {abs * factor, rel * factor}; }
  /// Default tolerance, overridden by the COMPLAB_TOL environment variable.
  static Tolerance from_environment();
};

enum class Status { pass, fail, skipped, expected_possible_fail };

std::string to_string(Status s);
Status status_from_string(const std::string& s);

/// Location and size of the worst violation of an inequality lhs <= rhs.
struct ViolationWitness {
  double location = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // lhs - rhs

  bool operator==(const ViolationWitness&) const = default;
};

struct DetailRow {
  double location = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;

  bool operator==(const DetailRow&) const = default;
};

struct Check {
  std::string name;
  std::string anchor;  // stable tag of the inequality or identity being checked
  Status status = Status::skipped;
  double max_violation = 0.0;  // max(lhs - rhs) over checked points
  std::optional<ViolationWitness> witness;
  double tolerance = 0.0;
  double resolution = 0.0;  // grid spacing / smallest step used
  std::string note;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<DetailRow> details;

  bool passed() const { return status == Status::pass; }
  /// Named metric lookup; throws std::out_of_range when absent.
  double metric(const std::string& key) const;
  bool operator==(const Check&) const = default;
};

struct VerificationReport {
  std::string suite;
  nlohmann::json config_echo = nlohmann::json::object();
  std::vector<Check> checks;

  /// True when no check has status fail.
  bool passed() const;
  /// True when every check has status pass.
  bool all_pass() const;
  const Check& check(const std::string& name) const;
  void append(const VerificationReport& other, const std::string& prefix = {});
  bool operator==(const VerificationReport&) const = default;
};

/// Accumulates pointwise evidence for lhs <= rhs (+ allowance) and turns it
/// into a Check.
class InequalityCheck {
 public:
  InequalityCheck(std::string name, std::string anchor, Tolerance tol);

  /// `extra` widens the allowance at this point (numerical resolution of
  /// the quantities compared). Returns true when the point satisfies it.
  bool add(double location, double lhs, double rhs, double extra = 0.0);
  void set_resolution(double r) { resolution_ = r; }
  void set_note(std::string note) { note_ = std::move(note); }
  void add_metric(std::string key, double value);
  void keep_details(bool keep) { keep_details_ = keep; }
  /// Failures are downgraded to expected_possible_fail when the theorem's
  /// hypotheses are known not to hold.
  void set_applicable(bool applicable) { applicable_ = applicable; }

  std::size_t count() const { return count_; }
  bool ok() const { return !worst_.has_value() || worst_excess_ <= 0.0; }
  Check finish() const;

 private:
  std::string name_;
  std::string anchor_;
  Tolerance tol_;
  double resolution_ = 0.0;
  std::string note_;
  bool keep_details_ = true;
  bool applicable_ = true;
  std::size_t count_ = 0;
  double max_violation_ = -std::numeric_limits<double>::infinity();
  double worst_excess_ = -std::numeric_limits<double>::infinity();
  std::optional<ViolationWitness> worst_;
  std::vector<std::pair<std::string, double>> metrics_;
  std::vector<DetailRow> details_;
};

VerificationReport make_report(std::string suite, std::vector<Check> checks);

// Serialization. Numbers are written with 17 significant digits, non-finite
// values as the strings "inf", "-inf", "nan".
nlohmann::json to_json(const VerificationReport& report);
VerificationReport report_from_json(const nlohmann::json& j);
std::string to_csv(const VerificationReport& report);

enum class ReportFormat { csv, json };
ReportFormat parse_format(const std::string& s);
std::string render(const VerificationReport& report, ReportFormat format);
/// Writes the rendered report; an empty path means stdout.
void emit_report(const VerificationReport& report, ReportFormat format,
                 const std::filesystem::path& path);

/// Shortest round-trip decimal form of a double (non-finite as text).
std::string format_number(double v);

}  // namespace complab
