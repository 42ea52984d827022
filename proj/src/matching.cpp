#include "complab/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "complab/errors.hpp"

namespace complab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kCells = 1024;
constexpr std::size_t kAdmissibilityPoints = 257;

const numerics::QuadratureOptions kQuad{1e-10, 1e-13, 40};

double ipow(double v, int m) {
  double out = 1.0;
  for (int i = 0; i < m; ++i) out *= v;
  return out;
}

VerificationReport admissibility_report(const FunctionSpec& f, Curvature k, Tolerance tol) {
  const double l = f.l();
  const auto grid = numerics::linspace(0.0, l, kAdmissibilityPoints);

  InequalityCheck nonneg("admissible-nonnegative", "matching-hypotheses", tol);
  nonneg.keep_details(false);
  for (double t : grid) nonneg.add(t, -f(t), 0.0);
  nonneg.set_resolution(grid[1] - grid[0]);

  InequalityCheck origin("admissible-vanishes-at-zero", "matching-hypotheses", tol);
  origin.add(0.0, std::abs(f(0.0)), 0.0);

  InequalityCheck slope("admissible-unit-slope-at-zero", "matching-hypotheses", tol);
  const auto d = dini(f, 0.0, DiniSide::upper_right);
  slope.add(0.0, std::abs(d.value - 1.0), 0.0, d.uncertainty());
  slope.add_metric("right_derivative_at_zero", d.value);

  std::vector<double> inner(grid.begin() + 1, grid.end());
  auto quotient = quotient_monotone(f, k, inner, tol).checks.front();
  quotient.name = "admissible-sn-quotient-decreasing";
  quotient.anchor = "matching-hypotheses";
  quotient.details.clear();

  return make_report("matching-admissibility",
                     {nonneg.finish(), origin.finish(), slope.finish(), quotient});
}

}  // namespace

double power_integral(const FunctionSpec& f, int m, double x) {
  if (!(x >= 0.0 && x <= f.l() * (1.0 + 1e-12))) {
    throw DomainError("power_integral: x outside [0, l]");
  }
  return numerics::integrate([&](double t) { return ipow(f(t), m); }, 0.0, std::min(x, f.l()),
                             kQuad);
}

double sn_power_integral(Curvature k, int m, double r) {
  const ModelDomain dom(k);
  r = dom.guard(r);
  return numerics::integrate([&](double t) { return ipow(sn(k, t), m); }, 0.0, r, kQuad);
}

MatchingProblem::MatchingProblem(FunctionSpec f, int m, Curvature k, std::optional<double> t0,
                                 Tolerance tol)
    : f_(std::move(f)), m_(m), k_(k), t0_(0.0) {
  if (m_ < 1) throw DomainError("matching: m must be a positive integer");
  const double l = f_.l();
  if (k_.positive() && !(l < k_.r_max())) {
    throw DomainError("matching: l must be below pi/sqrt(k) for k > 0");
  }
  if (t0) {
    if (!(*t0 > 0.0 && *t0 <= l) || !(f_(*t0) > 0.0)) {
      throw DomainError("matching: t0 must lie in (0, l] with f(t0) > 0");
    }
    t0_ = *t0;
  } else if (f_(l) > 0.0) {
    t0_ = l;
  } else {
    const auto grid = numerics::linspace(0.0, l, 4097);
    for (double t : grid) {
      if (t > 0.0 && f_(t) > 0.0) t0_ = t;
    }
    if (t0_ == 0.0) throw DomainError("matching: f has no positive value on (0, l]");
  }
  admissibility_ = admissibility_report(f_, k_, tol);

  cell_ = l / static_cast<double>(kCells);
  cumulative_.assign(kCells + 1, 0.0);
  for (std::size_t i = 0; i < kCells; ++i) {
    const double a = cell_ * static_cast<double>(i);
    const double b = i + 1 == kCells ? l : a + cell_;
    cumulative_[i + 1] =
        cumulative_[i] + numerics::integrate([&](double t) { return ipow(f_(t), m_); }, a, b,
                                             kQuad);
  }
  attainable_ = power_integral(t0_);

  // Feasible radius: int_0^R sn_k^m = attainable.
  double hi = t0_;
  if (k_.positive()) hi = std::min(hi, k_.r_max());
  for (int i = 0; i < 60 && model_integral(hi) < attainable_; ++i) {
    if (k_.positive()) {
      hi = k_.r_max();
      break;
    }
    hi *= 2.0;
  }
  const auto g = [this](double r) { return model_integral(r) - attainable_; };
  numerics::RootOptions opts;
  opts.residual_tol = 1e-14 * attainable_;
  opts.width_tol = 1e-14 * hi;
  feasible_radius_ = numerics::find_root_increasing(g, 0.0, hi, opts).x;
}

double MatchingProblem::power_integral(double x) const {
  const double l = f_.l();
  if (!(x >= 0.0 && x <= l * (1.0 + 1e-12))) {
    throw DomainError("power_integral: x outside [0, l]");
  }
  x = std::min(x, l);
  const auto i = std::min(static_cast<std::size_t>(x / cell_), kCells - 1);
  const double a = cell_ * static_cast<double>(i);
  return cumulative_[i] +
         numerics::integrate([&](double t) { return ipow(f_(t), m_); }, a, x, kQuad);
}

double MatchingProblem::model_integral(double r) const { return sn_power_integral(k_, m_, r); }

std::vector<double> MatchingProblem::default_r_grid(std::size_t n) const {
  return numerics::logspace(1e-3 * feasible_radius_, 0.999 * feasible_radius_, n);
}

MatchingPoint solve_x(const MatchingProblem& p, double r) {
  const Curvature k = p.k();
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("solve_x: r must be >= 0");
  if (k.positive() && !(r < k.r_max())) throw DomainError("solve_x: r must be below pi/sqrt(k)");
  const double target = p.model_integral(r);
  if (target > p.attainable() * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "solve_x: r = " << r << " exceeds the feasible radius " << p.feasible_radius();
    throw InfeasibleRadius(msg.str());
  }
  const FunctionSpec& f = p.f();
  MatchingPoint pt;
  pt.r = r;
  if (target > 0.0) {
    const double t0 = p.t0();
    double lo = std::min(r, t0);
    if (p.power_integral(lo) > target) lo = 0.0;
    numerics::RootOptions opts;
    opts.residual_tol = 1e-14 * target;
    opts.width_tol = 1e-14 * t0;
    const auto root = numerics::find_root_increasing(
        [&](double x) { return p.power_integral(x) - target; }, lo, t0, opts);
    pt.x = root.x;
    pt.residual = std::abs(root.residual);
  }
  pt.fx = f(pt.x);
  pt.x_prime = pt.fx > 0.0 ? ipow(sn(k, r) / pt.fx, p.m()) : kInf;

  pt.dini_fx_right = kNaN;
  pt.dini_fx_left = kNaN;
  const auto base = HSchedule::dini_default(f.l());
  if (auto s = base.fitted(f.l() - pt.x, f.l())) {
    const auto d = dini(f, pt.x, DiniSide::upper_right, *s);
    pt.dini_fx_right = d.value;
    pt.dini_uncertainty = std::max(pt.dini_uncertainty, d.uncertainty());
  }
  if (auto s = base.fitted(pt.x, f.l())) {
    const auto d = dini(f, pt.x, DiniSide::upper_left, *s);
    pt.dini_fx_left = d.value;
    pt.dini_uncertainty = std::max(pt.dini_uncertainty, d.uncertainty());
  }
  return pt;
}

MatchingCurve matching_curve(const MatchingProblem& p, std::span<const double> r_grid) {
  MatchingCurve c;
  c.points.reserve(r_grid.size());
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (i > 0 && !(r_grid[i] > r_grid[i - 1])) {
      throw ConfigError("matching: r-grid must be strictly increasing");
    }
    c.points.push_back(solve_x(p, r_grid[i]));
  }
  return c;
}

std::string to_csv(const MatchingCurve& curve) {
  std::string out = "r,x,x_prime,fx,residual\n";
  for (const auto& pt : curve.points) {
    out += format_number(pt.r) + "," + format_number(pt.x) + "," + format_number(pt.x_prime) +
           "," + format_number(pt.fx) + "," + format_number(pt.residual) + "\n";
  }
  return out;
}

namespace {

// Slope of x(r) by a central difference with one Richardson step; the
// returned error is the gap between the two step sizes.
std::pair<double, double> x_slope(const MatchingProblem& p, double r) {
  const double R = p.feasible_radius();
  const auto x_at = [&](double s) { return solve_x(p, s).x; };
  const auto diff = [&](double d) {
    if (r + d <= R && r - d >= 0.0) return (x_at(r + d) - x_at(r - d)) / (2.0 * d);
    return (3.0 * x_at(r) - 4.0 * x_at(r - d) + x_at(r - 2.0 * d)) / (2.0 * d);
  };
  const double delta = 1e-4 * r;
  const double coarse = diff(delta);
  const double fine = diff(0.5 * delta);
  return {(4.0 * fine - coarse) / 3.0, std::abs(fine - coarse)};
}

}  // namespace

VerificationReport verify_matching_conclusions(const MatchingProblem& p,
                                               std::span<const double> r_grid, Tolerance tol) {
  const Curvature k = p.k();
  const bool applicable = p.admissible();
  InequalityCheck x_ge_r("x-ge-r", "matching-x-ge-r", tol);
  InequalityCheck fx_le("fx-le-snr", "matching-fx-le-snr", tol);
  InequalityCheck dini_le("dini-fx-le-csnr", "matching-dini-fx-le-csnr", tol);
  InequalityCheck xprime("xprime-ge-1", "matching-xprime-ge-1", tol);
  for (auto* c : {&x_ge_r, &fx_le, &dini_le, &xprime}) c->set_applicable(applicable);

  const auto curve = matching_curve(p, r_grid);
  double chain_mismatch = 0.0;
  double spacing = 0.0;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto& pt = curve.points[i];
    if (i > 0) spacing = std::max(spacing, pt.r - curve.points[i - 1].r);
    x_ge_r.add(pt.r, pt.r, pt.x);
    fx_le.add(pt.r, pt.fx, sn(k, pt.r));
    const double c = csn(k, pt.r);
    if (!std::isnan(pt.dini_fx_right)) dini_le.add(pt.r, pt.dini_fx_right, c, pt.dini_uncertainty);
    if (!std::isnan(pt.dini_fx_left)) dini_le.add(pt.r, pt.dini_fx_left, c, pt.dini_uncertainty);
    if (std::isinf(pt.x_prime)) continue;  // f(x) = 0: excluded
    xprime.add(pt.r, 1.0, pt.x_prime);
    if (pt.r > 0.0) {
      const auto [slope, err] = x_slope(p, pt.r);
      const double gap = std::abs(slope - pt.x_prime);
      chain_mismatch = std::max(chain_mismatch, gap);
      // Recorded as the mismatch beyond its resolution, so that the
      // check's violation stays on the scale of x' >= 1.
      xprime.add(pt.r, gap - 9.0 * tol.allowance(slope, pt.x_prime) - err, 0.0);
    }
  }
  for (auto* c : {&x_ge_r, &fx_le, &dini_le, &xprime}) c->set_resolution(spacing);
  xprime.add_metric("max_chain_mismatch", chain_mismatch);
  if (!applicable) {
    for (auto* c : {&x_ge_r, &fx_le, &dini_le, &xprime}) {
      c->set_note("matching hypotheses not met by f");
    }
  }
  return make_report("lemma21",
                     {x_ge_r.finish(), fx_le.finish(), dini_le.finish(), xprime.finish()});
}

VerificationReport check_matching_ratios(const MatchingProblem& p,
                                         std::span<const double> r_grid, Tolerance tol) {
  const Curvature k = p.k();
  const auto kbar = p.f().sn_curvature();
  const bool applicable = k.value >= 0.0 || (kbar && *kbar > k.value);
  InequalityCheck fx_ratio("fx-over-snr-nonincreasing", "matching-ratio-fx-over-snr", tol);
  InequalityCheck r_ratio("r-over-x-nonincreasing", "matching-ratio-r-over-x", tol);
  fx_ratio.set_applicable(applicable);
  r_ratio.set_applicable(applicable);

  const auto curve = matching_curve(p, r_grid);
  double prev_a = kNaN, prev_b = kNaN;
  double rise_a = -kInf, rise_b = -kInf;
  double spacing = 0.0;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto& pt = curve.points[i];
    const double a = pt.fx / sn(k, pt.r);
    const double b = pt.r / pt.x;
    fx_ratio.add(pt.r, a, 1.0);
    r_ratio.add(pt.r, b, 1.0);
    if (i > 0) {
      spacing = std::max(spacing, pt.r - curve.points[i - 1].r);
      fx_ratio.add(pt.r, a, prev_a);
      r_ratio.add(pt.r, b, prev_b);
      rise_a = std::max(rise_a, a - prev_a);
      rise_b = std::max(rise_b, b - prev_b);
    }
    prev_a = a;
    prev_b = b;
  }
  fx_ratio.set_resolution(spacing);
  r_ratio.set_resolution(spacing);
  fx_ratio.add_metric("max_cell_increase", rise_a);
  r_ratio.add_metric("max_cell_increase", rise_b);
  for (auto* c : {&fx_ratio, &r_ratio}) {
    c->add_metric("applicable", applicable ? 1.0 : 0.0);
    if (!applicable) c->set_note("outside k >= 0 and f = sn_kbar with kbar > k");
  }
  return make_report("corollary27", {fx_ratio.finish(), r_ratio.finish()});
}

VerificationReport check_sinh_power_bound(double kbar, int m,
                                          std::span<const std::pair<double, double>> pairs) {
  if (!(kbar > -1.0 && kbar < 0.0)) throw DomainError("sinh power bound: kbar must be in (-1, 0)");
  const Curvature kb(kbar);
  const double s = std::sqrt(-kbar);
  // Zero tolerance and rhs moved one ulp down: passing means lhs < rhs.
  InequalityCheck power("sinh-power-bound", "matching-sinh-power-bound", Tolerance{0.0, 0.0});
  InequalityCheck scaled("scaled-x-below-r", "matching-scaled-x-below-r", Tolerance{0.0, 0.0});
  double min_margin = kInf, min_rel = kInf;
  for (const auto& [x, r] : pairs) {
    const double lhs = s * ipow(std::sinh(r), m);
    const double rhs = ipow(sn(kb, x), m);
    power.add(r, lhs, std::nextafter(rhs, -kInf));
    scaled.add(r, s * x, std::nextafter(r, -kInf));
    min_margin = std::min(min_margin, rhs - lhs);
    min_rel = std::min(min_rel, (rhs - lhs) / rhs);
  }
  power.add_metric("min_margin", min_margin);
  power.add_metric("min_relative_margin", min_rel);
  return make_report("sinh-power-bound", {power.finish(), scaled.finish()});
}

VerificationReport check_sinh_power_bound(double kbar, int m, std::span<const double> r_grid) {
  if (!(kbar > -1.0 && kbar < 0.0)) throw DomainError("sinh power bound: kbar must be in (-1, 0)");
  if (r_grid.empty()) return check_sinh_power_bound(kbar, m, std::span<const std::pair<double, double>>{});
  const double r_top = *std::max_element(r_grid.begin(), r_grid.end());
  const double l = 1.1 * r_top / std::sqrt(-kbar) + 0.1;
  const MatchingProblem p(sn_function(Curvature(kbar), l), m, Curvature(-1.0));
  std::vector<std::pair<double, double>> pairs;
  for (double r : r_grid) pairs.emplace_back(solve_x(p, r).x, r);
  return check_sinh_power_bound(kbar, m, pairs);
}

FunctionSpec counterexample_sinh() {
  return FunctionSpec::closed_form(
      "sinh-counterexample", 5.0,
      [](double t) { return std::sinh(t) - 0.5 * std::cosh(t) - 0.5 * std::cos(t) + 1.0; },
      [](double t) { return std::cosh(t) - 0.5 * std::sinh(t) + 0.5 * std::sin(t); });
}

double sinh_convolution(double t) {
  const double conv = numerics::integrate(
      [t](double s) { return (std::cos(s) - 1.0) * std::sinh(t - s); }, 0.0, t, {1e-13, 0.0, 40});
  return std::sinh(t) + conv;
}

FunctionSpec random_admissible(numerics::SplitMix64& rng, Curvature k, double l) {
  if (k.positive() && !(l < k.r_max())) {
    throw DomainError("random_admissible: l must be below pi/sqrt(k)");
  }
  double kbar_hi = k.value + 1.0;
  // Keep sn_kbar positive on [0, l].
  const double cap = 0.95 * (std::numbers::pi / l) * (std::numbers::pi / l);
  if (kbar_hi > cap) kbar_hi = std::max(k.value, cap);
  for (int attempt = 0; attempt < 100; ++attempt) {
    const double kbar = rng.uniform(k.value, kbar_hi);
    const double eps = rng.uniform(0.0, 0.5);
    const int power = rng.uniform_int(2, 3);
    const Curvature kb(kbar);
    std::ostringstream name;
    name << "family:" << kbar << ":" << eps << ":" << power;
    auto f = FunctionSpec::closed_form(name.str(), l, [kb, eps, power, l](double t) {
      return sn(kb, t) * (1.0 - eps * std::pow(t / l, power));
    });
    try {
      if (MatchingProblem(f, 1, k).admissible()) return f;
    } catch (const DomainError&) {
    }
  }
  throw ConfigError("random_admissible: no admissible draw in 100 attempts");
}

}  // namespace complab
