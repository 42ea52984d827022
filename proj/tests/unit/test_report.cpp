#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "complab/errors.hpp"
#include "complab/report.hpp"
#include "doctest.h"

using namespace complab;

namespace {

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (const char c : s) n += c == '\n';
  return n;
}

VerificationReport sample_report() {
  InequalityCheck a("a-le-b", "anchor-one", Tolerance{1e-8, 0.0});
  a.add(0.5, 1.0, 2.0);
  a.add(1.0, 2.0, 2.5);
  a.set_resolution(0.5);
  a.add_metric("value", 3.25);
  InequalityCheck b("never-checked", "anchor-two", Tolerance{});
  InequalityCheck c("broken", "anchor-three", Tolerance{0.0, 0.0});
  c.add(2.0, 1.0, 0.0);
  c.add_metric("big", std::numeric_limits<double>::infinity());
  c.set_note("note, with comma and \"quotes\"");
  auto r = make_report("demo", {a.finish(), b.finish(), c.finish()});
  r.config_echo = {{"k", 1.0}, {"seed", 7}};
  return r;
}

}  // namespace

TEST_CASE("tolerance allowance is absolute plus relative") {
  const Tolerance t{1e-3, 1e-2};
  CHECK(t.allowance(10.0, -20.0) == doctest::Approx(1e-3 + 0.2));
  CHECK(t.allowance(std::numeric_limits<double>::infinity(), 0.0) == doctest::Approx(1e-3));
  CHECK(t.scaled(10.0).abs == doctest::Approx(1e-2));
}

TEST_CASE("inequality checks classify points") {
  InequalityCheck pass("p", "x", Tolerance{1e-8, 0.0});
  CHECK(pass.add(0.0, 1.0, 1.0 - 1e-9));
  CHECK(pass.finish().status == Status::pass);

  InequalityCheck fail("f", "x", Tolerance{1e-8, 0.0});
  CHECK_FALSE(fail.add(0.3, 1.0, 0.5));
  const Check c = fail.finish();
  CHECK(c.status == Status::fail);
  CHECK(c.max_violation == doctest::Approx(0.5));
  REQUIRE(c.witness.has_value());
  CHECK(c.witness->location == 0.3);

  InequalityCheck downgraded("d", "x", Tolerance{});
  downgraded.add(0.0, 1.0, 0.0);
  downgraded.set_applicable(false);
  CHECK(downgraded.finish().status == Status::expected_possible_fail);

  InequalityCheck nan_check("n", "x", Tolerance{});
  nan_check.add(0.0, std::nan(""), 0.0);
  CHECK(nan_check.finish().status == Status::fail);

  CHECK(InequalityCheck("s", "x", Tolerance{}).finish().status == Status::skipped);

  InequalityCheck extra("e", "x", Tolerance{0.0, 0.0});
  CHECK(extra.add(0.0, 1.0, 0.9, 0.2));
}

TEST_CASE("report status queries") {
  const auto r = sample_report();
  CHECK_FALSE(r.passed());
  CHECK_FALSE(r.all_pass());
  CHECK(r.check("a-le-b").metric("value") == 3.25);
  CHECK_THROWS_AS(r.check("missing"), std::out_of_range);
  CHECK_THROWS_AS(r.check("a-le-b").metric("missing"), std::out_of_range);
  VerificationReport outer;
  outer.append(r, "inner");
  CHECK(outer.checks.front().name == "inner/a-le-b");
  CHECK(make_report("x", {}).passed());
}

TEST_CASE("status names round-trip") {
  for (const Status s : {Status::pass, Status::fail, Status::skipped, Status::expected_possible_fail}) {
    CHECK(status_from_string(to_string(s)) == s);
  }
  CHECK(to_string(Status::expected_possible_fail) == "expected-possible-fail");
  CHECK_THROWS_AS(status_from_string("maybe"), ConfigError);
}

TEST_CASE("empty report renders a header-only CSV") {
  const std::string csv = to_csv(make_report("empty", {}));
  CHECK(count_lines(csv) == 1);
  CHECK(csv.rfind("row,suite,check,anchor,status", 0) == 0);
}

TEST_CASE("CSV has one row per check plus detail rows") {
  const auto r = sample_report();
  const std::string csv = to_csv(r);
  std::size_t details = 0;
  for (const auto& c : r.checks) details += c.details.size();
  CHECK(count_lines(csv) == 1 + r.checks.size() + details);
  CHECK(csv.find("\"note, with comma and \"\"quotes\"\"\"") != std::string::npos);
}

TEST_CASE("JSON round-trip reproduces the report") {
  const auto r = sample_report();
  const auto j = to_json(r);
  CHECK(report_from_json(j) == r);
  CHECK(report_from_json(nlohmann::json::parse(j.dump())) == r);
  CHECK(j.at("checks").at(2).at("status") == "fail");
  CHECK(j.at("suite") == "demo");
}

TEST_CASE("rendering is deterministic") {
  const auto r = sample_report();
  CHECK(render(r, ReportFormat::json) == render(sample_report(), ReportFormat::json));
  CHECK(render(r, ReportFormat::csv) == render(sample_report(), ReportFormat::csv));
  CHECK(parse_format("json") == ReportFormat::json);
  CHECK_THROWS_AS(parse_format("xml"), ConfigError);
}

TEST_CASE("numbers are written in shortest round-trip form") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e-300) == "1e-300");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
  const double x = 0.1 + 0.2;
  CHECK(std::strtod(format_number(x).c_str(), nullptr) == x);
}

TEST_CASE("emit_report surfaces the path on IO errors") {
  try {
    emit_report(sample_report(), ReportFormat::csv, "/nonexistent-dir/report.csv");
    FAIL("expected FileError");
  } catch (const FileError& e) {
    CHECK(std::string(e.what()).find("/nonexistent-dir/report.csv") != std::string::npos);
  }
}

TEST_CASE("COMPLAB_TOL sets the default tolerance") {
  ::setenv("COMPLAB_TOL", "1e-6", 1);
  CHECK(Tolerance::from_environment().abs == 1e-6);
  ::setenv("COMPLAB_TOL", "abc", 1);
  CHECK_THROWS_AS(Tolerance::from_environment(), ConfigError);
  ::unsetenv("COMPLAB_TOL");
  CHECK(Tolerance::from_environment().abs == 1e-8);
}
