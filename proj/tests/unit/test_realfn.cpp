#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "complab/errors.hpp"
#include "complab/numerics.hpp"
#include "complab/realfn.hpp"
#include "doctest.h"
#include "generators.hpp"

using namespace complab;
using std::numbers::pi;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("complab_realfn_" + name);
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

FunctionSpec cosine(double l) {
  return FunctionSpec::closed_form(
      "cos", l, [](double t) { return std::cos(t); }, [](double t) { return -std::sin(t); });
}

}  // namespace

TEST_CASE("closed-form functions evaluate, clamp and reject") {
  const auto f = cosine(pi);
  CHECK(f(0.0) == 1.0);
  CHECK(f.l() == pi);
  CHECK(f(pi * (1.0 + 1e-13)) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(f(pi + 0.1), DomainError);
  CHECK(f.derivative(pi / 2.0) == doctest::Approx(-1.0));
  CHECK(f.restricted(1.0).l() == 1.0);
  CHECK_THROWS_AS(f.restricted(4.0), DomainError);
  CHECK_FALSE(f.sn_curvature().has_value());
  CHECK(sn_function(Curvature(2.0), 1.0).sn_curvature() == 2.0);
  CHECK_THROWS_AS(sn_function(Curvature(1.0), 4.0), DomainError);
}

TEST_CASE("sampled functions interpolate linearly") {
  const auto f = FunctionSpec::sampled("s", {0.0, 1.0, 3.0}, {0.0, 2.0, 0.0});
  CHECK(f(0.5) == doctest::Approx(1.0));
  CHECK(f(2.0) == doctest::Approx(1.0));
  CHECK(f.l() == 3.0);
  CHECK(f.kind() == FunctionSpec::Kind::sampled);
  const auto g = f.restricted(2.0);
  CHECK(g(2.0) == doctest::Approx(1.0));
  CHECK(g.sample_t().back() == 2.0);
  CHECK_THROWS_AS(FunctionSpec::sampled("bad", {0.0, 1.0, 1.0}, {0.0, 1.0, 2.0}), ConfigError);
  CHECK_THROWS_AS(FunctionSpec::sampled("bad", {0.5, 1.0}, {0.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(FunctionSpec::sampled("bad", {0.0, 1.0}, {0.0}), ConfigError);
}

TEST_CASE("CSV functions: header, BOM and diagnostics") {
  const auto ok = write_temp("ok.csv", "\xEF\xBB\xBFt,f\n0,0\n0.5,0.25\n1,1\n");
  const auto f = FunctionSpec::from_csv(ok);
  CHECK(f.l() == 1.0);
  CHECK(f(0.75) == doctest::Approx(0.625));

  const auto bad = write_temp("bad.csv", "0,0\n1,1\n0.5,2\n");
  try {
    FunctionSpec::from_csv(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("row") != std::string::npos);
  }
  const auto junk = write_temp("junk.csv", "0,0\n1,abc\n");
  try {
    FunctionSpec::from_csv(junk);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
  CHECK_THROWS_AS(FunctionSpec::from_csv("/nonexistent/f.csv"), FileError);
}

TEST_CASE("Dini derivatives of a kink") {
  const auto f = FunctionSpec::closed_form("abs", 2.0, [](double t) { return std::abs(t - 1.0); });
  CHECK(dini(f, 1.0, DiniSide::upper_right).value == doctest::Approx(1.0));
  CHECK(dini(f, 1.0, DiniSide::upper_left).value == doctest::Approx(-1.0));
  CHECK(dini(f, 0.5, DiniSide::lower_right).value == doctest::Approx(-1.0));
  CHECK(dini(f, 1.0, DiniSide::upper_right).uncertainty() < 1e-7);
  CHECK_THROWS_AS(dini(f, 2.0, DiniSide::upper_right), DomainError);
}

TEST_CASE("Dini derivatives: oscillation and blow-up") {
  // t sin(1/t) has D+ = 1 and D_+ = -1 at 0; the schedule sees a spread.
  const auto osc = FunctionSpec::closed_form(
      "osc", 1.0, [](double t) { return t == 0.0 ? 0.0 : t * std::sin(1.0 / t); });
  const auto up = dini(osc, 0.0, DiniSide::upper_right);
  const auto down = dini(osc, 0.0, DiniSide::lower_right);
  CHECK(up.value >= down.value);
  CHECK(up.spread > 0.1);
  const auto root = FunctionSpec::closed_form("sqrt", 1.0, [](double t) { return std::sqrt(t); });
  CHECK(dini(root, 0.0, DiniSide::upper_right).value > 100.0);
}

TEST_CASE("step schedules fit into the available room") {
  const auto s = HSchedule::dini_default(1.0).fitted(1e-4, 1.0);
  REQUIRE(s.has_value());
  CHECK(s->h0 <= 1e-4);
  CHECK_FALSE(HSchedule::dini_default(1.0).fitted(0.0, 1.0).has_value());
  CHECK_THROWS_AS((HSchedule{1.0, 1.5, 4, 2}.validate(1.0)), DomainError);
}

TEST_CASE("decreasing test through Dini derivatives") {
  const auto grid = numerics::linspace(0.0, pi, 41);
  CHECK(is_decreasing_dini(cosine(pi), grid).all_pass());
  const auto sine = FunctionSpec::closed_form("sin", pi, [](double t) { return std::sin(t); });
  const auto r = is_decreasing_dini(sine, grid);
  CHECK(r.checks.front().status == Status::fail);
  // A decreasing step function: jumps give D+ = -inf, never a violation.
  const auto step = FunctionSpec::closed_form("step", 2.0, [](double t) { return t < 1.0 ? 1.0 : 0.0; });
  CHECK(is_decreasing_dini(step, numerics::linspace(0.0, 2.0, 21)).all_pass());
}

TEST_CASE("support-sense Jacobi inequality") {
  const auto grid = numerics::linspace(0.0, pi, 61);
  const auto s1 = sn_function(Curvature(1.0), pi);
  const auto r = support_sense_jacobi(s1, Curvature(1.0), grid);
  CHECK(r.all_pass());
  CHECK(r.checks.front().metric("equality_everywhere") == 1.0);

  const auto flat = sn_function(Curvature(0.0), 3.0);
  CHECK(support_sense_jacobi(flat, Curvature(1.0), numerics::linspace(0.0, 3.0, 31))
            .checks.front()
            .status == Status::fail);
  CHECK(support_sense_jacobi(flat, Curvature(0.0), numerics::linspace(0.0, 3.0, 31))
            .all_pass());

  // A concave kink satisfies f'' <= 0 in the support sense.
  const auto tent = FunctionSpec::closed_form("tent", 2.0, [](double t) { return 1.0 - std::abs(t - 1.0); });
  const auto tr = support_sense_jacobi(tent, Curvature(0.0), numerics::linspace(0.0, 2.0, 21));
  CHECK(tr.all_pass());
  CHECK(tr.checks.front().metric("equality_everywhere") == 0.0);
  // A convex kink does not.
  const auto vee = FunctionSpec::closed_form("vee", 2.0, [](double t) { return std::abs(t - 1.0); });
  CHECK_FALSE(support_sense_jacobi(vee, Curvature(0.0), numerics::linspace(0.0, 2.0, 21)).all_pass());
}

TEST_CASE("quotient by sn is nonincreasing for larger curvature") {
  const double l = pi / std::sqrt(2.0);
  const auto f = sn_function(Curvature(2.0), l);
  const auto grid = numerics::linspace(1e-3, l, 101);
  const auto r = quotient_monotone(f, Curvature(1.0), grid);
  CHECK(r.all_pass());
  CHECK(r.checks.front().metric("limit_at_zero") == doctest::Approx(1.0).epsilon(1e-5));
  const auto g = sn_function(Curvature(0.5), 3.0);
  CHECK_FALSE(quotient_monotone(g, Curvature(1.0), numerics::linspace(1e-3, 3.0, 101)).all_pass());
}

TEST_CASE("right derivatives") {
  const auto s2 = sn_function(Curvature(2.0), 2.0);
  CHECK(right_derivative_at_zero(s2) == doctest::Approx(1.0).epsilon(1e-6));
  const auto grid = numerics::linspace(0.0, 1.5, 16);
  const auto prof = right_derivative_profile(s2, grid);
  for (const double t : grid) {
    CHECK(prof(t) == doctest::Approx(csn(Curvature(2.0), t)).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("sn deficit: bound and monotonicity") {
  const auto f = sn_function(Curvature(2.0), pi / std::sqrt(2.0));
  const auto grid = numerics::linspace(0.0, pi / std::sqrt(2.0), 101);
  const auto r = check_sn_deficit_decreasing(f, Curvature(1.0), grid);
  CHECK(r.all_pass());
  CHECK(r.check("bounded-by-sn-multiple").metric("right_derivative_at_zero") ==
        doctest::Approx(1.0).epsilon(1e-6));

  // Past the quarter period the deficit of the counterexample rises.
  const auto psi = counterexample_psi();
  const auto pr = check_sn_deficit_decreasing(psi, Curvature(1.0), numerics::linspace(0.0, pi, 201));
  CHECK(pr.passed());
  CHECK(pr.check("deficit-decreasing").status == Status::expected_possible_fail);
  CHECK(pr.check("bounded-by-sn-multiple").status == Status::pass);
}

TEST_CASE("counterexample psi: values and deficit rise") {
  const auto psi = counterexample_psi();
  CHECK(psi.l() == doctest::Approx(pi));
  CHECK(psi(pi / 4.0) == doctest::Approx(0.5));
  CHECK(psi(pi / 2.0) == doctest::Approx(0.0).epsilon(1e-15).scale(1.0));
  CHECK(psi(pi) == doctest::Approx(-1.0));
  // deficit(t) = psi(t) - sin t, using psi'(0) = 1.
  const double rise = (psi(pi) - std::sin(pi)) - (psi(0.75 * pi) - std::sin(0.75 * pi));
  CHECK(rise == doctest::Approx(std::sqrt(2.0) - 1.0));
  CHECK(support_sense_jacobi(psi, Curvature(1.0), numerics::linspace(0.0, pi, 101)).all_pass());
}

TEST_CASE("Jacobi consequences") {
  const auto s1 = sn_function(Curvature(1.0), pi);
  const auto grid_r = check_jacobi_consequence(s1, Curvature(1.0), JacobiConsequence::nonnegative_before_zero);
  CHECK(grid_r.all_pass());
  CHECK(check_jacobi_consequence(s1, Curvature(1.0), JacobiConsequence::rigid_on_touch).passed());
  CHECK(check_jacobi_consequence(s1, Curvature(1.0), JacobiConsequence::peak_before_quarter).all_pass());
  const auto s4 = sn_function(Curvature(4.0), pi / 2.0);
  const auto early = check_jacobi_consequence(s4, Curvature(1.0), JacobiConsequence::peak_before_quarter);
  CHECK(early.check("peak-before-quarter").status == Status::pass);
  CHECK(early.check("peak-rigidity").status == Status::skipped);

  const auto down = FunctionSpec::closed_form(
      "down", pi / 2.0, [](double t) { return std::cos(t) - 1.5 * std::sin(t); });
  CHECK(check_jacobi_consequence(down, Curvature(1.0), JacobiConsequence::strictly_decreasing).all_pass());

  CHECK_THROWS_AS(check_jacobi_consequence(s1, Curvature(0.0), JacobiConsequence::peak_before_quarter),
                  HypothesisError);
  CHECK_THROWS_AS(check_jacobi_consequence(s1, Curvature(1.0), JacobiConsequence::strictly_decreasing),
                  HypothesisError);
  const auto positive = sn_function(Curvature(1.0), 2.0);
  CHECK_THROWS_AS(
      check_jacobi_consequence(positive, Curvature(1.0), JacobiConsequence::nonnegative_before_zero),
      HypothesisError);
}

TEST_CASE("property: sn_kbar satisfies the Jacobi inequality for every k <= kbar") {
  gen::for_all(25, 21, [](gen::Source& s) {
    const double kbar = s.uniform(-1.5, 2.0);
    const double k = s.uniform(-2.0, kbar);
    const double l = kbar > 0 ? 0.98 * pi / std::sqrt(kbar) : 2.5;
    const auto f = sn_function(Curvature(kbar), l);
    const auto grid = numerics::linspace(0.0, l, 41);
    CHECK(support_sense_jacobi(f, Curvature(k), grid).all_pass());
    if (k < kbar - 0.05) {
      CHECK(support_sense_jacobi(f, Curvature(kbar + 0.5), grid).checks.front().status ==
            Status::fail);
    }
  });
}

TEST_CASE("property: Dini derivatives of smooth functions match the derivative") {
  gen::for_all(50, 22, [](gen::Source& s) {
    const double k = s.curvature();
    const double l = k > 0 ? 0.95 * pi / std::sqrt(k) : 2.0;
    const auto f = sn_function(Curvature(k), l);
    const double t = s.uniform(0.05 * l, 0.95 * l);
    for (const DiniSide side : {DiniSide::upper_right, DiniSide::lower_right, DiniSide::upper_left,
                                DiniSide::lower_left}) {
      const auto e = dini(f, t, side);
      CHECK(std::abs(e.value - csn(Curvature(k), t)) <= 1e-6 * std::max(1.0, std::abs(e.value)));
    }
  });
}
