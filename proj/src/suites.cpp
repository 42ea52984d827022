#include "complab/suites.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "complab/errors.hpp"
#include "complab/geomlab.hpp"
#include "complab/hinge.hpp"
#include "complab/matching.hpp"
#include "complab/numerics.hpp"

namespace complab {

namespace {

using std::numbers::pi;
using Json = nlohmann::json;

double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ConfigError(what + ": expected a number, got '" + text + "'");
  }
  return v;
}

int severity(Status s) {
  switch (s) {
    case Status::skipped: return 0;
    case Status::pass: return 1;
    case Status::expected_possible_fail: return 2;
    case Status::fail: return 3;
  }
  return 3;
}

// Folds the same check from several runs into one row: worst status,
// largest violation and its witness. Detail rows are dropped.
Check merge_checks(const std::string& name, const std::vector<const Check*>& parts) {
  Check out;
  out.name = name;
  if (parts.empty()) return out;
  out.anchor = parts.front()->anchor;
  std::size_t non_pass = 0;
  bool have_violation = false;
  for (const Check* p : parts) {
    if (severity(p->status) > severity(out.status)) {
      out.status = p->status;
      out.note = p->note;
    }
    if (p->status != Status::pass && p->status != Status::skipped) ++non_pass;
    if (p->status != Status::skipped &&
        (!have_violation || p->max_violation > out.max_violation || std::isnan(p->max_violation))) {
      out.max_violation = p->max_violation;
      out.witness = p->witness;
      have_violation = true;
    }
    out.tolerance = std::max(out.tolerance, p->tolerance);
    out.resolution = std::max(out.resolution, p->resolution);
  }
  out.metrics.emplace_back("cases", static_cast<double>(parts.size()));
  out.metrics.emplace_back("cases_not_passing", static_cast<double>(non_pass));
  return out;
}

// Merges reports with identical check lists into one check per name.
std::vector<Check> merge_reports(const std::vector<VerificationReport>& reports,
                                 const std::string& prefix = {}) {
  std::vector<Check> out;
  if (reports.empty()) return out;
  for (std::size_t i = 0; i < reports.front().checks.size(); ++i) {
    std::vector<const Check*> parts;
    for (const auto& r : reports) {
      if (i < r.checks.size()) parts.push_back(&r.checks[i]);
    }
    const std::string& base = reports.front().checks[i].name;
    out.push_back(merge_checks(prefix.empty() ? base : prefix + "/" + base, parts));
  }
  return out;
}

void add_checks(VerificationReport& report, std::vector<Check> checks) {
  for (auto& c : checks) report.checks.push_back(std::move(c));
}

std::string curvature_label(double kbar, double k) {
  return "kbar=" + format_number(kbar) + ",k=" + format_number(k);
}

std::optional<ModelManifold> configured_model(const SuiteConfig& c) {
  if (c.model && c.profile) throw ConfigError("--model and --profile are mutually exclusive");
  if (c.profile) return ModelManifold{load_curvature_profile(*c.profile)};
  if (c.model) return named_model(*c.model, c.n.value_or(2));
  return std::nullopt;
}

std::vector<double> radii(const SuiteConfig& c, const std::vector<double>& fallback) {
  if (c.r && c.r_grid) throw ConfigError("--r and --r-grid are mutually exclusive");
  if (c.r_grid) return c.r_grid->points();
  if (c.r) return {*c.r};
  return fallback;
}

int config_m(const SuiteConfig& c) {
  const int m = c.m.value_or(1);
  if (m < 1) throw ConfigError("m: expected an integer >= 1, got " + std::to_string(m));
  return m;
}

std::string default_function_name(const SuiteConfig& c, double k) {
  return "sn:" + format_number(c.kbar.value_or(k + 1.0));
}

// ---------------------------------------------------------------- suites

VerificationReport suite_modelfn(const SuiteConfig& c) {
  const Tolerance tol = c.tolerance();
  std::vector<double> ks = {-2.0, -1.0, 0.0, 1.0, 2.0};
  if (c.k) ks = {*c.k};
  VerificationReport report;
  for (const double kv : ks) {
    const Curvature k(kv);
    const std::string label = "[k=" + format_number(kv) + "]";
    const double end = kv != 0.0 ? pi / std::sqrt(std::abs(kv)) : pi;
    const auto grid = numerics::linspace(0.0, end, 1000);

    InequalityCheck pyth("pythagorean-identity" + label, "model-function-identity", tol);
    pyth.keep_details(false);
    double worst = 0.0;
    for (const double t : grid) {
      const double s = sn(k, t);
      const double cs = csn(k, t);
      const double err = std::abs(cs * cs + kv * s * s - 1.0);
      worst = std::max(worst, err);
      pyth.add(t, err, 0.0);
    }
    pyth.add_metric("max_abs_error", worst);
    pyth.set_resolution(grid[1] - grid[0]);
    report.checks.push_back(pyth.finish());

    // phi'' + k phi = 1 by a Richardson-extrapolated central second
    // difference; phi is even, so the stencil may cross 0.
    InequalityCheck ode("phi-jacobi-identity" + label, "model-function-identity", tol.scaled(100.0));
    ode.keep_details(false);
    const double h = 2e-3;
    const auto second = [&](double t, double step) {
      const auto p = [&](double x) { return phi(k, std::abs(x)); };
      return (p(t + step) - 2.0 * p(t) + p(t - step)) / (step * step);
    };
    worst = 0.0;
    for (const double t : grid) {
      const double d2 = (4.0 * second(t, h / 2.0) - second(t, h)) / 3.0;
      const double err = std::abs(d2 + kv * phi(k, t) - 1.0);
      worst = std::max(worst, err);
      ode.add(t, err, 0.0);
    }
    ode.add_metric("max_abs_error", worst);
    ode.set_resolution(h / 2.0);
    report.checks.push_back(ode.finish());

    InequalityCheck area("sphere-area-derivative" + label, "model-function-identity",
                         tol.scaled(100.0));
    area.keep_details(false);
    const Dimension n3(3);
    worst = 0.0;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      const double t = grid[i];
      const double step = std::min(1e-3, 0.5 * std::min(t, end - t));
      const auto central = [&](double d) {
        return (sphere_area(k, n3, t + d) - sphere_area(k, n3, t - d)) / (2.0 * d);
      };
      const double fd = (4.0 * central(step / 2.0) - central(step)) / 3.0;
      const double err = std::abs(fd - sphere_area_derivative(k, n3, t));
      worst = std::max(worst, err);
      area.add(t, err, 0.0);
    }
    area.add_metric("max_abs_error", worst);
    report.checks.push_back(area.finish());
  }

  const Curvature one(1.0);
  InequalityCheck sphere3("ball-volume-oracle[n=3,k=1]", "model-volume-oracle", tol);
  const double v3 = ball_volume(one, Dimension(3), pi);
  sphere3.add(pi, std::abs(v3 - 2.0 * pi * pi), 0.0);
  sphere3.add_metric("volume", v3);
  report.checks.push_back(sphere3.finish());

  InequalityCheck cap("ball-volume-oracle[n=2,k=1]", "model-volume-oracle", tol);
  cap.keep_details(false);
  double worst = 0.0;
  for (const double r : numerics::linspace(0.0, pi, 100)) {
    const double err = std::abs(ball_volume(one, Dimension(2), r) - 2.0 * pi * (1.0 - std::cos(r)));
    worst = std::max(worst, err);
    cap.add(r, err, 0.0);
  }
  cap.add_metric("max_abs_error", worst);
  report.checks.push_back(cap.finish());
  return report;
}

VerificationReport suite_lemma21(const SuiteConfig& c) {
  const Tolerance tol = c.tolerance();
  const Curvature k(c.k.value_or(1.0));
  const int m = config_m(c);
  const auto f = function_from_name(c.function.value_or(default_function_name(c, k.value)), k,
                                    c.effective_seed());
  const MatchingProblem problem(f, m, k, std::nullopt, tol);
  const auto grid = radii(c, problem.default_r_grid());
  return verify_matching_conclusions(problem, grid, tol);
}

VerificationReport suite_corollary27(const SuiteConfig& c) {
  const Tolerance tol = c.tolerance();
  const Curvature k(c.k.value_or(0.0));
  const int m = config_m(c);
  const auto f = function_from_name(c.function.value_or(default_function_name(c, k.value)), k,
                                    c.effective_seed());
  const MatchingProblem problem(f, m, k, std::nullopt, tol);
  const auto grid = radii(c, problem.default_r_grid());
  return check_matching_ratios(problem, grid, tol);
}

VerificationReport suite_counterexamples(const SuiteConfig& c) {
  const Tolerance tol = c.tolerance();
  VerificationReport report;

  // psi: valid Jacobi input whose sn-deficit rises after the quarter period.
  {
    const auto psi = counterexample_psi();
    const Curvature k(1.0);
    const auto grid = numerics::linspace(0.0, pi, 201);
    VerificationReport part = support_sense_jacobi(psi, k, grid, std::nullopt, tol);
    part.append(check_sn_deficit_decreasing(psi, k, grid, tol));
    const double slope = right_derivative_at_zero(psi);
    const auto deficit = [&](double t) { return psi(t) - slope * sn(k, t); };
    const double rise = deficit(pi) - deficit(0.75 * pi);
    InequalityCheck rises("deficit-rises", "counterexample-psi", Tolerance{0.0, 0.0});
    rises.add(pi, tol.allowance(rise, 0.0), rise);
    rises.add_metric("rise", rise);
    rises.add_metric("right_derivative_at_zero", slope);
    rises.set_note("deficit(pi) - deficit(3pi/4)");
    part.checks.push_back(rises.finish());
    report.append(part, "psi");
  }

  // sinh: admissible and satisfies the matching conclusions, while r/x
  // increases on some cell near the end of the domain.
  {
    const Curvature k(-1.0);
    const auto f = counterexample_sinh();
    const MatchingProblem problem(f, 1, k, std::nullopt, tol);
    VerificationReport part = problem.admissibility();
    part.append(verify_matching_conclusions(problem, problem.default_r_grid(), tol));

    const double big_r = problem.feasible_radius();
    std::vector<double> grid;
    for (const double r : problem.default_r_grid()) {
      if (r < 4.0) grid.push_back(r);
    }
    for (const double r : numerics::linspace(4.0, big_r * (1.0 - 1e-9), 2001)) grid.push_back(r);
    const VerificationReport ratios = check_matching_ratios(problem, grid, tol);
    part.append(ratios);

    const double increase = ratios.check("r-over-x-nonincreasing").metric("max_cell_increase");
    InequalityCheck rises("r-over-x-rises", "counterexample-sinh", Tolerance{0.0, 0.0});
    rises.add(big_r, tol.allowance(1.0, 1.0), increase);
    rises.add_metric("max_cell_increase", increase);
    rises.set_resolution(grid.back() - grid[grid.size() - 2]);
    part.checks.push_back(rises.finish());

    InequalityCheck conv("closed-form-matches-convolution", "counterexample-sinh", tol);
    conv.keep_details(false);
    for (const double t : numerics::linspace(0.0, f.l(), 51)) {
      conv.add(t, std::abs(f(t) - sinh_convolution(t)), 0.0);
    }
    part.checks.push_back(conv.finish());
    report.append(part, "sinh");
  }

  // sn_kbar with kbar in (-1, 0) against k = -1: the power bound that keeps
  // the ratio claim alive for model functions.
  report.append(check_sinh_power_bound(-0.5, 1, numerics::linspace(0.1, 5.0, 50)), "sn-power");
  return report;
}

VerificationReport suite_theorem_a(const SuiteConfig& c) {
  const Tolerance tol = c.tolerance();
  const ModelManifold model = configured_model(c).value_or(named_model("sphere:1", c.n.value_or(2)));
  const Curvature k(c.k.value_or(0.0));
  double top = equal_volume_feasible_radius(model, k);
  top = std::min({top, k.r_max(), 5.0});
  const auto grid = radii(c, numerics::logspace(1e-3 * top, 0.999 * top, 64));
  const auto results = compare_equal_volume_balls(model, k, grid, tol);

  VerificationReport report;
  if (results.size() == 1) {
    report = results.front().report;
    for (auto& check : report.checks) {
      if (check.name != "rbar-ge-r") continue;
      const auto& res = results.front();
      check.metrics.emplace_back("r", res.r);
      check.metrics.emplace_back("rbar", res.rbar);
      check.metrics.emplace_back("residual", res.residual);
      check.metrics.emplace_back("area_m", res.area_m);
      check.metrics.emplace_back("area_model", res.area_model);
      check.metrics.emplace_back("rbar_prime", res.rbar_prime);
    }
    return report;
  }
  std::vector<VerificationReport> parts;
  parts.reserve(results.size());
  for (const auto& res : results) parts.push_back(res.report);
  add_checks(report, merge_reports(parts));
  return report;
}

VerificationReport suite_theorem_c(const SuiteConfig& c) {
  const Tolerance tol = c.tolerance();
  const Curvature k(c.k.value_or(0.0));
  std::vector<std::pair<std::string, ModelManifold>> cases;
  if (auto m = configured_model(c)) {
    cases.emplace_back("", *m);
  } else {
    cases.emplace_back("space-form", named_model("sphere:1", c.n.value_or(3)));
    cases.emplace_back("surface", named_model("bump"));
  }
  VerificationReport report;
  for (const auto& [label, model] : cases) {
    double top = equal_volume_feasible_radius(model, k);
    top = std::min({top, k.r_max(), 5.0});
    const auto grid = radii(c, numerics::logspace(1e-3 * top, 0.999 * top, 64));
    report.append(check_equal_volume_ratios_monotone(model, k, grid, tol), label);
  }
  return report;
}

VerificationReport suite_corollary_b(const SuiteConfig& c) {
  const Tolerance tol = c.tolerance();
  const ModelManifold model = configured_model(c).value_or(named_model("sphere:1", c.n.value_or(2)));
  const Curvature k(c.k.value_or(0.0));
  const auto grid = radii(c, numerics::linspace(0.1, 0.9, 9));
  std::vector<VerificationReport> parts;
  for (const double r : grid) parts.push_back(compare_equal_area_spheres(model, k, r, tol));
  VerificationReport report;
  if (parts.size() == 1) return parts.front();
  add_checks(report, merge_reports(parts));
  return report;
}

VerificationReport suite_bishop_gromov(const SuiteConfig& c) {
  const Tolerance tol = c.tolerance();
  const Curvature k(c.k.value_or(0.0));
  std::vector<ModelManifold> models;
  if (auto m = configured_model(c)) {
    models.push_back(*m);
  } else {
    models.push_back(named_model("sphere:1", c.n.value_or(2)));
    models.push_back(named_model("rp2"));
  }
  VerificationReport report;
  for (const auto& model : models) {
    const double top = std::min({model_extent(model), k.r_max(), 5.0});
    const auto grid = radii(c, numerics::logspace(1e-3 * top, 0.999 * top, 64));
    VerificationReport part = bishop_gromov_ratio(model, k, grid, tol);
    part.append(area_ratio_monotonicity(model, k, grid, tol));

    const double cut = model_cut(model);
    std::vector<double> inside;
    for (const double r : grid) {
      if (r < cut) inside.push_back(r);
    }
    part.append(check_root_warp_concavity(model, k, inside, tol));

    if (const auto* surface = std::get_if<RotSurface>(&model);
        surface != nullptr && cut < surface->rho_max()) {
      InequalityCheck at_cut("boundary-area-zero-at-cut", "cut-truncated-area", tol);
      at_cut.add(cut, std::abs(boundary_area(model, cut)), 0.0);
      part.checks.push_back(at_cut.finish());
      InequalityCheck left("boundary-area-left-limit-at-cut", "cut-truncated-area", tol);
      const double before = boundary_area(model, cut * (1.0 - 1e-12));
      const double expected = 2.0 * pi * surface->warp(cut);
      left.add(cut, std::abs(before - expected), 0.0);
      left.add_metric("left_limit", before);
      part.checks.push_back(left.finish());
    }
    report.append(part, model_name(model));
  }
  return report;
}

Hinge random_hinge(numerics::SplitMix64& rng, double kbar, double k) {
  Hinge h;
  h.k = Curvature(k);
  h.kbar = Curvature(kbar);
  double lim = std::min(h.k.r_max(), h.kbar.r_max());
  if (!std::isfinite(lim)) lim = 4.0;
  h.a = rng.uniform(0.05, 0.95) * lim;
  h.l = rng.uniform(0.05, 0.95) * lim;
  h.theta = rng.uniform(0.0, pi);
  return h;
}

std::optional<Hinge> configured_hinge(const SuiteConfig& c) {
  if (!c.hinge) return std::nullopt;
  std::ifstream in(*c.hinge);
  if (!in) throw FileError("cannot open hinge file '" + *c.hinge + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw ConfigError(*c.hinge + ": " + e.what());
  }
  return hinge_from_json(j);
}

std::vector<std::pair<double, double>> curvature_pairs(const SuiteConfig& c, bool ordered_only) {
  if (c.k || c.kbar) {
    const double k = c.k.value_or(0.0);
    return {{c.kbar.value_or(k), k}};
  }
  std::vector<std::pair<double, double>> pairs;
  for (const double kbar : {-1.0, 0.0, 1.0}) {
    for (const double k : {-1.0, 0.0, 1.0}) {
      if (!ordered_only || kbar >= k) pairs.emplace_back(kbar, k);
    }
  }
  return pairs;
}

constexpr int kHingesPerPair = 20;

VerificationReport suite_toponogov(const SuiteConfig& c) {
  const Tolerance tol = c.tolerance();
  VerificationReport report;
  if (auto h = configured_hinge(c)) {
    return toponogov_check(*h, default_hinge_grid(h->l), tol);
  }
  numerics::SplitMix64 rng(c.effective_seed());
  for (const auto& [kbar, k] : curvature_pairs(c, false)) {
    std::vector<VerificationReport> parts;
    for (int i = 0; i < kHingesPerPair; ++i) {
      const Hinge h = random_hinge(rng, kbar, k);
      parts.push_back(toponogov_check(h, default_hinge_grid(h.l), tol));
    }
    add_checks(report, merge_reports(parts, curvature_label(kbar, k)));
  }

  InequalityCheck right("law-of-cosines-right-triangle", "law-of-cosines", tol);
  right.add(0.0, std::abs(law_of_cosines(Curvature(0.0), 3.0, 4.0, pi / 2.0) - 5.0), 0.0);
  report.checks.push_back(right.finish());

  std::vector<VerificationReport> draws;
  for (int i = 0; i < 100; ++i) {
    const double kv = rng.uniform(-2.0, 2.0);
    const double lim = kv > 0.0 ? 0.95 * pi / std::sqrt(kv) : 3.0;
    const double a = rng.uniform(0.01, 1.0) * lim;
    const double t1 = rng.uniform(0.0, pi);
    const double t2 = rng.uniform(0.0, pi);
    draws.push_back(cosine_identity_check(Curvature(kv), a, t1, t2,
                                          numerics::linspace(1e-3 * lim, lim, 100), tol));
  }
  auto merged = merge_reports(draws);
  double worst = 0.0;
  for (const auto& d : draws) worst = std::max(worst, d.checks.front().metric("max_abs_error"));
  merged.front().metrics.emplace_back("max_abs_error", worst);
  add_checks(report, std::move(merged));
  return report;
}

VerificationReport suite_relative_toponogov(const SuiteConfig& c) {
  const Tolerance tol = c.tolerance();
  if (auto h = configured_hinge(c)) {
    if (!h->theta_bar) throw ConfigError(*c.hinge + ": relative comparison needs theta_bar");
    return relative_toponogov(*h, default_hinge_grid(h->l), tol);
  }
  numerics::SplitMix64 rng(c.effective_seed() ^ 0x9e3779b97f4a7c15ULL);
  VerificationReport report;
  for (const auto& [kbar, k] : curvature_pairs(c, true)) {
    std::vector<VerificationReport> parts;
    for (int i = 0; i < kHingesPerPair; ++i) {
      Hinge h = random_hinge(rng, kbar, k);
      h.theta_bar = rng.uniform(0.0, pi);
      parts.push_back(relative_toponogov(h, default_hinge_grid(h.l), tol));
    }
    add_checks(report, merge_reports(parts, curvature_label(kbar, k)));
  }
  return report;
}

using SuiteFn = VerificationReport (*)(const SuiteConfig&);

const std::vector<std::pair<std::string, SuiteFn>>& suite_table() {
  static const std::vector<std::pair<std::string, SuiteFn>> table = {
      {"modelfn-identities", suite_modelfn},
      {"lemma21", suite_lemma21},
      {"corollary27", suite_corollary27},
      {"counterexamples", suite_counterexamples},
      {"theorem-a", suite_theorem_a},
      {"theorem-c", suite_theorem_c},
      {"corollary-b", suite_corollary_b},
      {"bishop-gromov", suite_bishop_gromov},
      {"toponogov", suite_toponogov},
      {"relative-toponogov", suite_relative_toponogov},
  };
  return table;
}

// --------------------------------------------------------- config parsing

template <class T>
T field(const Json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const Json::exception&) {
    throw ConfigError("config field '" + key + "': unexpected value " + j.dump());
  }
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

}  // namespace

GridSpec GridSpec::parse(const std::string& text) {
  const auto first = text.find(':');
  const auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
  if (second == std::string::npos || text.find(':', second + 1) != std::string::npos) {
    throw ConfigError("r-grid: expected LO:HI:N, got '" + text + "'");
  }
  GridSpec g;
  g.lo = parse_double(text.substr(0, first), "r-grid LO");
  g.hi = parse_double(text.substr(first + 1, second - first - 1), "r-grid HI");
  const std::string count = text.substr(second + 1);
  std::size_t n = 0;
  const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), n);
  if (ec != std::errc() || ptr != count.data() + count.size()) {
    throw ConfigError("r-grid N: expected a positive integer, got '" + count + "'");
  }
  g.n = n;
  if (g.n < 1 || g.lo < 0.0 || g.hi < g.lo || (g.n > 1 && !(g.hi > g.lo))) {
    throw ConfigError("r-grid: need 0 <= LO < HI and N >= 1, got '" + text + "'");
  }
  return g;
}

std::vector<double> GridSpec::points() const {
  if (n == 1) return {lo};
  return numerics::linspace(lo, hi, n);
}

std::string GridSpec::to_string() const {
  return format_number(lo) + ":" + format_number(hi) + ":" + std::to_string(n);
}

SuiteConfig SuiteConfig::overridden_by(const SuiteConfig& over) const {
  SuiteConfig out = *this;
  if (!over.suite.empty()) out.suite = over.suite;
  const auto take = [](auto& dst, const auto& src) {
    if (src) dst = src;
  };
  take(out.k, over.k);
  take(out.kbar, over.kbar);
  take(out.n, over.n);
  take(out.m, over.m);
  take(out.r, over.r);
  take(out.r_grid, over.r_grid);
  take(out.model, over.model);
  take(out.profile, over.profile);
  take(out.function, over.function);
  take(out.hinge, over.hinge);
  take(out.tol, over.tol);
  take(out.seed, over.seed);
  take(out.out, over.out);
  take(out.format, over.format);
  return out;
}

Tolerance SuiteConfig::tolerance() const {
  if (tol) {
    if (!(*tol > 0.0) || !std::isfinite(*tol)) {
      throw ConfigError("tol: expected a positive number, got " + format_number(*tol));
    }
    return Tolerance{*tol, *tol};
  }
  return Tolerance::from_environment();
}

Json SuiteConfig::echo() const {
  Json j = Json::object();
  j["suite"] = suite;
  const auto put = [&](const char* key, const auto& v) {
    if (v) j[key] = *v;
  };
  put("k", k);
  put("kbar", kbar);
  put("n", n);
  put("m", m);
  put("r", r);
  if (r_grid) j["r_grid"] = r_grid->to_string();
  put("model", model);
  put("profile", profile);
  put("f", function);
  put("hinge", hinge);
  const Tolerance t = tolerance();
  j["tol"] = t.abs;
  j["seed"] = effective_seed();
  return j;
}

SuiteConfig SuiteConfig::from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  SuiteConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "suite") {
      c.suite = field<std::string>(value, key);
    } else if (key == "k") {
      c.k = field<double>(value, key);
    } else if (key == "kbar") {
      c.kbar = field<double>(value, key);
    } else if (key == "n") {
      c.n = field<int>(value, key);
    } else if (key == "m") {
      c.m = field<int>(value, key);
    } else if (key == "r") {
      c.r = field<double>(value, key);
    } else if (key == "r_grid") {
      c.r_grid = GridSpec::parse(field<std::string>(value, key));
    } else if (key == "model") {
      c.model = field<std::string>(value, key);
    } else if (key == "profile") {
      c.profile = field<std::string>(value, key);
    } else if (key == "f") {
      c.function = field<std::string>(value, key);
    } else if (key == "hinge") {
      c.hinge = field<std::string>(value, key);
    } else if (key == "tol") {
      c.tol = field<double>(value, key);
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) {
        throw ConfigError("config field 'seed': expected a non-negative integer, got " +
                          value.dump());
      }
      c.seed = value.get<std::uint64_t>();
    } else if (key == "out") {
      c.out = field<std::string>(value, key);
    } else if (key == "format") {
      c.format = field<std::string>(value, key);
    } else {
      throw ConfigError("config: unknown field '" + key + "'");
    }
  }
  return c;
}

SuiteConfig SuiteConfig::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ":" + std::to_string(line_of(text, e.byte > 0 ? e.byte - 1 : 0)) +
                      ": invalid JSON (" + e.what() + ")");
  }
  try {
    return from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : suite_table()) v.push_back(name);
    v.push_back("all");
    return v;
  }();
  return names;
}

FunctionSpec function_from_name(const std::string& name, Curvature k, std::uint64_t seed) {
  // Largest domain compatible with the matching preconditions.
  const double cap = k.positive() ? 0.999 * k.r_max() : std::numeric_limits<double>::infinity();
  if (name.rfind("sn:", 0) == 0) {
    const double kbar = parse_double(name.substr(3), "f sn:<kbar>");
    double l = kbar > 0.0 ? pi / std::sqrt(kbar) : 3.0;
    l = std::min(l, cap);
    if (!std::isfinite(l)) l = 3.0;
    return sn_function(Curvature(kbar), l);
  }
  if (name == "psi-counterexample") return counterexample_psi();
  if (name == "sinh-counterexample") return counterexample_sinh();
  if (name == "family") {
    numerics::SplitMix64 rng(seed);
    return random_admissible(rng, k, std::min(3.0, cap));
  }
  if (name.rfind("csv:", 0) == 0) return FunctionSpec::from_csv(name.substr(4));
  throw ConfigError("f: unknown function '" + name +
                    "' (expected sn:<kbar>, psi-counterexample, sinh-counterexample, family or "
                    "csv:<path>)");
}

VerificationReport run_suite(const SuiteConfig& config) {
  VerificationReport report;
  if (config.suite == "all") {
    SuiteConfig common;
    common.tol = config.tol;
    common.seed = config.seed;
    for (const auto& [name, fn] : suite_table()) {
      common.suite = name;
      report.append(fn(common), name);
    }
  } else {
    const auto& table = suite_table();
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const auto& e) { return e.first == config.suite; });
    if (it == table.end()) {
      std::string known;
      for (const auto& n : suite_names()) known += (known.empty() ? "" : ", ") + n;
      throw ConfigError("unknown suite '" + config.suite + "' (known: " + known + ")");
    }
    report = it->second(config);
  }
  report.suite = config.suite;
  report.config_echo = config.echo();
  return report;
}

}  // namespace complab
