#include "complab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "complab/errors.hpp"

namespace complab {

double Tolerance::allowance(double lhs, double rhs) const {
  const double mag = std::max(std::abs(lhs), std::abs(rhs));
  return abs + rel * (std::isfinite(mag) ? mag : 0.0);
}

Tolerance Tolerance::from_environment() {
  Tolerance tol;
  if (const char* env = std::getenv("COMPLAB_TOL"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("COMPLAB_TOL: expected a positive number, got '") + env + "'");
    }
    tol.abs = v;
    tol.rel = v;
  }
  return tol;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skipped: return "skipped";
    case Status::expected_possible_fail: return "expected-possible-fail";
  }
  return "fail";
}

Status status_from_string(const std::string& s) {
  if (s == "pass") return Status::pass;
  if (s == "fail") return Status::fail;
  if (s == "skipped") return Status::skipped;
  if (s == "expected-possible-fail") return Status::expected_possible_fail;
  throw ConfigError("unknown check status '" + s + "'");
}

double Check::metric(const std::string& key) const {
  for (const auto& [k, v] : metrics) {
    if (k == key) return v;
  }
  throw std::out_of_range("check '" + name + "' has no metric '" + key + "'");
}

bool VerificationReport::passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const Check& c) { return c.status == Status::fail; });
}

bool VerificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.status == Status::pass; });
}

const Check& VerificationReport::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("report '" + suite + "' has no check '" + name + "'");
}

void VerificationReport::append(const VerificationReport& other, const std::string& prefix) {
  for (auto c : other.checks) {
    if (!prefix.empty()) c.name = prefix + "/" + c.name;
    checks.push_back(std::move(c));
  }
}

InequalityCheck::InequalityCheck(std::string name, std::string anchor, Tolerance tol)
    : name_(std::move(name)), anchor_(std::move(anchor)), tol_(tol) {}

bool InequalityCheck::add(double location, double lhs, double rhs, double extra) {
  ++count_;
  const double margin = lhs - rhs;
  const double allowed = tol_.allowance(lhs, rhs) + extra;
  // NaN compares false everywhere; treat it as an infinite violation.
  const double excess = std::isnan(margin) ? std::numeric_limits<double>::infinity()
                                           : margin - allowed;
  if (std::isnan(margin) || margin > max_violation_) max_violation_ = margin;
  if (!worst_ || excess > worst_excess_) {
    worst_excess_ = excess;
    worst_ = ViolationWitness{location, lhs, rhs, margin};
  }
  if (keep_details_) details_.push_back({location, lhs, rhs});
  return excess <= 0.0;
}

void InequalityCheck::add_metric(std::string key, double value) {
  metrics_.emplace_back(std::move(key), value);
}

Check InequalityCheck::finish() const {
  Check c;
  c.name = name_;
  c.anchor = anchor_;
  c.tolerance = tol_.abs;
  c.resolution = resolution_;
  c.note = note_;
  c.metrics = metrics_;
  c.details = details_;
  if (count_ == 0) {
    c.status = Status::skipped;
    c.max_violation = 0.0;
    return c;
  }
  c.max_violation = max_violation_;
  if (worst_excess_ <= 0.0) {
    c.status = Status::pass;
  } else {
    c.status = applicable_ ? Status::fail : Status::expected_possible_fail;
    c.witness = worst_;
  }
  return c;
}

VerificationReport make_report(std::string suite, std::vector<Check> checks) {
  VerificationReport r;
  r.suite = std::move(suite);
  r.checks = std::move(checks);
  return r;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

namespace {

nlohmann::json num(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

double num_from(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  throw ConfigError("expected a number, got '" + s + "'");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

nlohmann::json to_json(const VerificationReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    nlohmann::json jc;
    jc["name"] = c.name;
    jc["anchor"] = c.anchor;
    jc["status"] = to_string(c.status);
    jc["max_violation"] = num(c.max_violation);
    if (c.witness) {
      jc["witness"] = {{"location", num(c.witness->location)},
                       {"lhs", num(c.witness->lhs)},
                       {"rhs", num(c.witness->rhs)},
                       {"margin", num(c.witness->margin)}};
    } else {
      jc["witness"] = nullptr;
    }
    jc["tolerance"] = num(c.tolerance);
    jc["resolution"] = num(c.resolution);
    jc["note"] = c.note;
    nlohmann::json metrics = nlohmann::json::array();
    for (const auto& [k, v] : c.metrics) metrics.push_back({{"key", k}, {"value", num(v)}});
    jc["metrics"] = std::move(metrics);
    nlohmann::json details = nlohmann::json::array();
    for (const auto& d : c.details) {
      details.push_back({num(d.location), num(d.lhs), num(d.rhs)});
    }
    jc["details"] = std::move(details);
    checks.push_back(std::move(jc));
  }
  return {{"suite", report.suite}, {"config_echo", report.config_echo}, {"checks", checks}};
}

VerificationReport report_from_json(const nlohmann::json& j) {
  VerificationReport r;
  r.suite = j.at("suite").get<std::string>();
  r.config_echo = j.at("config_echo");
  for (const auto& jc : j.at("checks")) {
    Check c;
    c.name = jc.at("name").get<std::string>();
    c.anchor = jc.at("anchor").get<std::string>();
    c.status = status_from_string(jc.at("status").get<std::string>());
    c.max_violation = num_from(jc.at("max_violation"));
    if (!jc.at("witness").is_null()) {
      const auto& w = jc.at("witness");
      c.witness = ViolationWitness{num_from(w.at("location")), num_from(w.at("lhs")),
                                   num_from(w.at("rhs")), num_from(w.at("margin"))};
    }
    c.tolerance = num_from(jc.at("tolerance"));
    c.resolution = num_from(jc.at("resolution"));
    c.note = jc.at("note").get<std::string>();
    for (const auto& m : jc.at("metrics")) {
      c.metrics.emplace_back(m.at("key").get<std::string>(), num_from(m.at("value")));
    }
    for (const auto& d : jc.at("details")) {
      c.details.push_back({num_from(d.at(0)), num_from(d.at(1)), num_from(d.at(2))});
    }
    r.checks.push_back(std::move(c));
  }
  return r;
}

std::string to_csv(const VerificationReport& report) {
  std::ostringstream out;
  out << "row,suite,check,anchor,status,max_violation,location,lhs,rhs,margin,tolerance,"
         "resolution,note\n";
  for (const auto& c : report.checks) {
    out << "check," << csv_field(report.suite) << ',' << csv_field(c.name) << ','
        << csv_field(c.anchor) << ',' << to_string(c.status) << ','
        << format_number(c.max_violation) << ',';
    if (c.witness) {
      out << format_number(c.witness->location) << ',' << format_number(c.witness->lhs) << ','
          << format_number(c.witness->rhs) << ',' << format_number(c.witness->margin) << ',';
    } else {
      out << ",,,,";
    }
    out << format_number(c.tolerance) << ',' << format_number(c.resolution) << ','
        << csv_field(c.note) << '\n';
    for (const auto& d : c.details) {
      out << "detail," << csv_field(report.suite) << ',' << csv_field(c.name) << ','
          << csv_field(c.anchor) << ",,," << format_number(d.location) << ','
          << format_number(d.lhs) << ',' << format_number(d.rhs) << ','
          << format_number(d.lhs - d.rhs) << ",,,\n";
    }
  }
  return out.str();
}

ReportFormat parse_format(const std::string& s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  throw ConfigError("format: expected csv or json, got '" + s + "'");
}

std::string render(const VerificationReport& report, ReportFormat format) {
  if (format == ReportFormat::csv) return to_csv(report);
  return to_json(report).dump(2) + "\n";
}

void emit_report(const VerificationReport& report, ReportFormat format,
                 const std::filesystem::path& path) {
  const std::string text = render(report, format);
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw FileError("write failed for '" + path.string() + "'");
}

}  // namespace complab
