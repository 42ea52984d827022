#include "complab/realfn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "complab/errors.hpp"
#include "complab/numerics.hpp"

namespace complab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_strictly_increasing(const std::vector<double>& t, const std::string& what) {
  if (t.size() < 2) throw ConfigError(what + ": need at least two samples");
  if (t.front() != 0.0) throw ConfigError(what + ": first abscissa must be 0");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) {
      throw ConfigError(what + ": abscissae must be strictly increasing (row " +
                        std::to_string(i + 1) + ")");
    }
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size() && std::isfinite(out);
}

FunctionSpec::Eval piecewise_linear(std::vector<double> t, std::vector<double> v) {
  auto data = std::make_shared<const std::pair<std::vector<double>, std::vector<double>>>(
      std::move(t), std::move(v));
  return [data](double x) {
    const auto& [ts, vs] = *data;
    auto it = std::upper_bound(ts.begin(), ts.end(), x);
    if (it == ts.end()) return vs.back();
    if (it == ts.begin()) return vs.front();
    const auto i = static_cast<std::size_t>(it - ts.begin()) - 1;
    if (x == ts[i]) return vs[i];
    const double w = (x - ts[i]) / (ts[i + 1] - ts[i]);
    return vs[i] + w * (vs[i + 1] - vs[i]);
  };
}

}  // namespace

FunctionSpec FunctionSpec::closed_form(std::string name, double l, Eval eval, Eval derivative) {
  if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("function domain endpoint must be > 0");
  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  impl->l = l;
  impl->kind = Kind::closed_form;
  impl->eval = std::move(eval);
  impl->derivative = std::move(derivative);
  return FunctionSpec(std::move(impl));
}

FunctionSpec FunctionSpec::sampled(std::string name, std::vector<double> t, std::vector<double> v) {
  if (t.size() != v.size()) throw ConfigError(name + ": abscissa/value count mismatch");
  require_strictly_increasing(t, name);
  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  impl->l = t.back();
  impl->kind = Kind::sampled;
  impl->t = std::move(t);
  impl->v = std::move(v);
  impl->eval = piecewise_linear(impl->t, impl->v);
  return FunctionSpec(std::move(impl));
}

FunctionSpec FunctionSpec::sampled_with(std::string name, std::vector<double> t,
                                        std::vector<double> v, Eval interpolant,
                                        Eval derivative) {
  if (t.size() != v.size()) throw ConfigError(name + ": abscissa/value count mismatch");
  require_strictly_increasing(t, name);
  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  impl->l = t.back();
  impl->kind = Kind::sampled;
  impl->t = std::move(t);
  impl->v = std::move(v);
  impl->eval = std::move(interpolant);
  impl->derivative = std::move(derivative);
  return FunctionSpec(std::move(impl));
}

FunctionSpec FunctionSpec::from_csv(const std::filesystem::path& path, std::string name) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open '" + path.string() + "'");
  std::vector<double> t, v;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    double a = 0, b = 0;
    const bool ok = comma != std::string::npos && parse_double(line.substr(0, comma), a) &&
                    parse_double(line.substr(comma + 1), b);
    if (!ok) {
      if (t.empty() && lineno == 1) continue;  // header
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": expected two numeric columns 't,value'");
    }
    t.push_back(a);
    v.push_back(b);
  }
  if (name.empty()) name = path.stem().string();
  return sampled(std::move(name), std::move(t), std::move(v));
}

double FunctionSpec::operator()(double t) const {
  const double l = impl_->l;
  if (!(t >= 0.0 && t <= l)) {
    const double slack = 1e-12 * l;
    if (t < 0.0 && t >= -slack) {
      t = 0.0;
    } else if (t > l && t <= l + slack) {
      t = l;
    } else {
      throw DomainError(impl_->name + ": argument " + std::to_string(t) + " outside [0, " +
                        std::to_string(l) + "]");
    }
  }
  return impl_->eval(t);
}

double FunctionSpec::derivative(double t) const {
  if (!impl_->derivative) throw DomainError(impl_->name + ": no closed-form derivative");
  return impl_->derivative(std::clamp(t, 0.0, impl_->l));
}

FunctionSpec FunctionSpec::with_sn_curvature(double kbar) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->sn_curvature = kbar;
  return FunctionSpec(std::move(impl));
}

double FunctionSpec::scale(double t) const {
  const double v = std::abs((*this)(t));
  return impl_->scale ? std::max(v, std::abs(impl_->scale(t))) : v;
}

FunctionSpec FunctionSpec::with_scale(Eval magnitude) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->scale = std::move(magnitude);
  return FunctionSpec(std::move(impl));
}

FunctionSpec FunctionSpec::restricted(double l_new) const {
  if (!(l_new > 0.0) || l_new > impl_->l * (1.0 + 1e-12)) {
    throw DomainError(impl_->name + ": restriction endpoint outside (0, l]");
  }
  auto impl = std::make_shared<Impl>(*impl_);
  impl->l = std::min(l_new, impl_->l);
  if (impl->kind == Kind::sampled) {
    // Keep the original interpolant; trim samples to the new domain.
    FunctionSpec base = *this;
    std::vector<double> t, v;
    for (std::size_t i = 0; i < impl->t.size() && impl->t[i] < impl->l; ++i) {
      t.push_back(impl->t[i]);
      v.push_back(impl->v[i]);
    }
    t.push_back(impl->l);
    v.push_back(base(impl->l));
    impl->t = std::move(t);
    impl->v = std::move(v);
    impl->eval = [base](double x) { return base(x); };
  }
  return FunctionSpec(std::move(impl));
}

FunctionSpec sn_function(Curvature kbar, double l) {
  if (kbar.positive() && l > kbar.r_max() * (1.0 + 1e-12)) {
    throw DomainError("sn_function: l exceeds pi/sqrt(k)");
  }
  std::ostringstream name;
  name << "sn:" << kbar.value;
  return FunctionSpec::closed_form(
             name.str(), l, [kbar](double t) { return sn(kbar, t); },
             [kbar](double t) { return csn(kbar, t); })
      .with_sn_curvature(kbar.value);
}

// ---------------------------------------------------------------------------
// Step schedules

double HSchedule::step(int j) const { return h0 * std::pow(ratio, j); }

HSchedule HSchedule::dini_default(double l) { return {l / 100.0, 0.5, 20, 5}; }

HSchedule HSchedule::second_difference_default(double l) { return {l / 50.0, 0.5, 6, 3}; }

void HSchedule::validate(double l) const {
  if (!(h0 > 0.0) || !(ratio > 0.0 && ratio < 1.0) || count < 1 || tail < 1 ||
      tail > count + 1) {
    throw DomainError("invalid step schedule");
  }
  if (!(smallest() > kEps * l * 1e3)) {
    throw DomainError("step schedule underflows the representable scale of the domain");
  }
}

std::optional<HSchedule> HSchedule::fitted(double room, double l) const {
  if (!(room > 0.0)) return std::nullopt;
  HSchedule s = *this;
  s.h0 = std::min(h0, room);
  while (s.count > 0 && !(s.smallest() > kEps * l * 1e3)) --s.count;
  if (s.count + 1 < s.tail || s.count < 1) return std::nullopt;
  return s;
}

std::string to_string(DiniSide side) {
  switch (side) {
    case DiniSide::upper_right: return "upper-right";
    case DiniSide::lower_right: return "lower-right";
    case DiniSide::upper_left: return "upper-left";
    case DiniSide::lower_left: return "lower-left";
  }
  return "?";
}

DiniEstimate dini(const FunctionSpec& f, double t, DiniSide side, const HSchedule& schedule) {
  const double l = f.l();
  schedule.validate(l);
  const bool right = side == DiniSide::upper_right || side == DiniSide::lower_right;
  const bool upper = side == DiniSide::upper_right || side == DiniSide::upper_left;
  const double dir = right ? 1.0 : -1.0;
  const double slack = 1e-12 * l;
  if (right ? (t + schedule.h0 > l + slack) : (t - schedule.h0 < -slack)) {
    throw DomainError("dini: " + to_string(side) + " steps leave [0, l] at t = " +
                      std::to_string(t));
  }

  DiniEstimate est;
  est.side = side;
  const double ft = f(t);
  const double st = f.scale(t);
  double hi = -kInf, lo = kInf, noise = 0.0;
  const int first_tail = schedule.count + 1 - schedule.tail;
  for (int j = 0; j <= schedule.count; ++j) {
    const double h = schedule.step(j);
    const double fh = f(t + dir * h);
    const double q = (fh - ft) / (dir * h);
    est.quotients.emplace_back(h, q);
    if (j >= first_tail) {
      hi = std::max(hi, q);
      lo = std::min(lo, q);
      noise = std::max(noise, 4.0 * kEps * (f.scale(t + dir * h) + st) / h);
    }
  }
  const double value = upper ? hi : lo;
  const double blowup = 1.0 / (kEps * l);
  if (value > blowup) {
    est.value = kInf;
  } else if (value < -blowup) {
    est.value = -kInf;
  } else {
    est.value = value;
    est.spread = hi - lo;
  }
  est.noise = noise;
  return est;
}

DiniEstimate dini(const FunctionSpec& f, double t, DiniSide side) {
  const bool right = side == DiniSide::upper_right || side == DiniSide::lower_right;
  const double room = right ? f.l() - t : t;
  auto sched = HSchedule::dini_default(f.l()).fitted(room, f.l());
  if (!sched) {
    throw DomainError("dini: no room for " + to_string(side) + " steps at t = " +
                      std::to_string(t));
  }
  return dini(f, t, side, *sched);
}

// ---------------------------------------------------------------------------
// Checks

VerificationReport is_decreasing_dini(const FunctionSpec& f, std::span<const double> grid,
                                      Tolerance tol) {
  InequalityCheck chk("dini-decreasing", "dini-monotonicity-criterion", tol);
  chk.keep_details(false);
  const double l = f.l();
  const auto base = HSchedule::dini_default(l);
  double resolution = 0.0;
  std::size_t skipped = 0;
  for (double t : grid) {
    for (DiniSide side : {DiniSide::upper_right, DiniSide::upper_left}) {
      const bool right = side == DiniSide::upper_right;
      if (right ? t >= l : t <= 0.0) continue;
      auto sched = base.fitted(right ? l - t : t, l);
      if (!sched) {
        ++skipped;
        continue;
      }
      const auto est = dini(f, t, side, *sched);
      resolution = std::max(resolution, sched->smallest());
      chk.add(t, est.value, 0.0, est.value == kInf ? 0.0 : est.uncertainty());
    }
  }
  chk.set_resolution(resolution);
  chk.add_metric("grid_points", static_cast<double>(grid.size()));
  chk.add_metric("skipped_sides", static_cast<double>(skipped));
  return make_report("realfn", {chk.finish()});
}

VerificationReport support_sense_jacobi(const FunctionSpec& f, Curvature k,
                                        std::span<const double> grid,
                                        std::optional<HSchedule> schedule, Tolerance tol) {
  const double l = f.l();
  const HSchedule base = schedule.value_or(HSchedule::second_difference_default(l));
  InequalityCheck chk("support-jacobi", "support-sense-jacobi-inequality", tol);
  double resolution = 0.0;
  bool equality = true;
  std::size_t skipped = 0;
  for (double t : grid) {
    auto sched = base.fitted(std::min(t, l - t), l);
    if (!sched) {
      ++skipped;
      continue;
    }
    const double ft = f(t);
    const double st = f.scale(t);
    double hi = -kInf, lo = kInf, noise = 0.0;
    std::vector<double> q;
    const int first_tail = sched->count + 1 - sched->tail;
    for (int j = first_tail; j <= sched->count; ++j) {
      const double tau = sched->step(j);
      const double fp = f(t + tau), fm = f(t - tau);
      q.push_back((fp + fm - 2.0 * ft) / (tau * tau));
      hi = std::max(hi, q.back());
      lo = std::min(lo, q.back());
      noise = std::max(noise, 4.0 * kEps * (f.scale(t + tau) + f.scale(t - tau) + 2.0 * st) /
                                  (tau * tau));
    }
    resolution = std::max(resolution, sched->smallest());
    const double rhs = -k.value * ft;
    // The finest quotient estimates the limit; the tail spread bounds how
    // far it may still move.
    const double spread = std::isfinite(hi - lo) ? hi - lo : 0.0;
    chk.add(t, q.back(), rhs, spread + noise);
    // Equality: the second-order extrapolated quotients settle at rhs. At a
    // kink they keep running away, by more than they differ from each other.
    const double r2 = sched->ratio * sched->ratio;
    const auto extrapolate = [&](std::size_t i) { return (q[i + 1] - r2 * q[i]) / (1.0 - r2); };
    double estimate = q.back(), drift = spread;
    if (q.size() >= 3) {
      estimate = extrapolate(q.size() - 2);
      drift = std::abs(estimate - extrapolate(q.size() - 3));
    }
    if (!(std::abs(estimate - rhs) <= tol.allowance(estimate, rhs) + 2.0 * noise + drift)) {
      equality = false;
    }
  }
  chk.set_resolution(resolution);
  chk.add_metric("equality_everywhere", (equality && chk.count() > 0) ? 1.0 : 0.0);
  chk.add_metric("skipped_points", static_cast<double>(skipped));
  return make_report("realfn", {chk.finish()});
}

VerificationReport quotient_monotone(const FunctionSpec& f, Curvature k,
                                     std::span<const double> grid, Tolerance tol) {
  if (k.positive() && f.l() > k.r_max() * (1.0 + 1e-12)) {
    throw DomainError("quotient_monotone: l exceeds pi/sqrt(k)");
  }
  InequalityCheck chk("sn-quotient-nonincreasing", "sn-quotient-monotonicity", tol);
  double prev = 0.0, prev_t = -1.0;
  bool first = true;
  double spacing = 0.0;
  for (double t : grid) {
    if (!(t > 0.0)) continue;
    const double s = sn(k, t);
    if (!(s > 0.0)) continue;
    const double ratio = f(t) / s;
    if (first) {
      chk.add_metric("limit_at_zero", ratio);
      chk.add_metric("smallest_t", t);
      first = false;
    } else {
      chk.add(t, ratio, prev);
      spacing = std::max(spacing, t - prev_t);
    }
    prev = ratio;
    prev_t = t;
  }
  chk.set_resolution(spacing);
  return make_report("realfn", {chk.finish()});
}

FunctionSpec right_derivative_profile(const FunctionSpec& f, std::span<const double> grid,
                                      std::optional<HSchedule> schedule) {
  std::vector<double> t(grid.begin(), grid.end());
  std::sort(t.begin(), t.end());
  if (t.empty() || t.front() > 0.0) t.insert(t.begin(), 0.0);
  const double l = f.l();
  const HSchedule base = schedule.value_or(HSchedule::dini_default(l));
  std::vector<double> v;
  v.reserve(t.size());
  for (double x : t) {
    if (x >= l) throw DomainError("right_derivative_profile: grid must lie in [0, l)");
    auto sched = base.fitted(l - x, l);
    if (!sched) throw DomainError("right_derivative_profile: no room at t = " + std::to_string(x));
    v.push_back(dini(f, x, DiniSide::upper_right, *sched).value);
  }
  return FunctionSpec::sampled(f.name() + "'+", std::move(t), std::move(v));
}

double right_derivative_at_zero(const FunctionSpec& f) {
  return dini(f, 0.0, DiniSide::upper_right).value;
}

namespace {

void downgrade_if_inapplicable(Check& c, bool applicable) {
  if (!applicable && c.status == Status::fail) c.status = Status::expected_possible_fail;
}

}  // namespace

VerificationReport check_sn_deficit_decreasing(const FunctionSpec& f, Curvature k,
                                               std::span<const double> grid, Tolerance tol) {
  const double l = f.l();
  if (k.positive() && l > k.r_max() * (1.0 + 1e-12)) {
    throw DomainError("sn deficit: l exceeds pi/sqrt(k)");
  }
  const bool applicable = !k.positive() || l <= k.quarter_period() * (1.0 + 1e-12);
  const auto slope = dini(f, 0.0, DiniSide::upper_right);
  const double c = slope.value;

  InequalityCheck bound("bounded-by-sn-multiple", "jacobi-sn-majorant", tol);
  bound.keep_details(false);
  for (double t : grid) {
    const double s = sn(k, t);
    bound.add(t, f(t), c * s, slope.uncertainty() * std::abs(s));
  }
  bound.add_metric("right_derivative_at_zero", c);

  const auto psi = FunctionSpec::closed_form(
      f.name() + "-deficit", l, [f, c, k](double t) { return f(t) - c * sn(k, t); });
  auto dec = is_decreasing_dini(psi, grid, tol).checks.front();
  dec.name = "deficit-decreasing";
  dec.anchor = "jacobi-sn-deficit-decreasing";
  if (!applicable) dec.note = "l exceeds pi/(2 sqrt k): outside the guaranteed regime";
  downgrade_if_inapplicable(dec, applicable);
  dec.metrics.emplace_back("applicable", applicable ? 1.0 : 0.0);
  return make_report("realfn", {bound.finish(), dec});
}

VerificationReport check_jacobi_consequence(const FunctionSpec& f, Curvature k,
                                            JacobiConsequence variant, Tolerance tol,
                                            std::size_t grid_points) {
  const double l = f.l();
  if (k.positive() && l > k.r_max() * (1.0 + 1e-12)) {
    throw HypothesisError("jacobi consequence: l exceeds pi/sqrt(k)");
  }
  const auto grid = numerics::linspace(0.0, l, grid_points);
  const double spacing = l / static_cast<double>(grid_points - 1);
  const double fl = f(l);

  switch (variant) {
    case JacobiConsequence::nonnegative_before_zero: {
      if (std::abs(fl) > tol.allowance(fl, 0.0)) {
        throw HypothesisError("nonnegative_before_zero requires f(l) = 0, got " +
                              std::to_string(fl));
      }
      InequalityCheck chk("nonnegative-before-zero", "jacobi-nonnegative-before-zero", tol);
      chk.keep_details(false);
      double fmin = kInf;
      for (double t : grid) {
        const double v = f(t);
        fmin = std::min(fmin, v);
        chk.add(t, -v, 0.0);
      }
      chk.set_resolution(spacing);
      chk.add_metric("min_f", fmin);
      return make_report("realfn", {chk.finish()});
    }
    case JacobiConsequence::rigid_on_touch: {
      const auto slope = dini(f, 0.0, DiniSide::upper_right);
      const double c = slope.value;
      const auto gap = [&](double t) { return std::abs(f(t) - c * sn(k, t)); };
      const auto allowed = [&](double t) {
        const double s = sn(k, t);
        return tol.allowance(f(t), c * s) + slope.uncertainty() * std::abs(s);
      };
      double touch = 0.0;
      for (double t : grid) {
        if (t > 0.0 && gap(t) <= allowed(t)) touch = t;
      }
      InequalityCheck chk("rigid-on-touch", "jacobi-touch-rigidity", tol);
      chk.keep_details(false);
      chk.set_resolution(spacing);
      chk.add_metric("touch_point", touch);
      if (touch == 0.0) {
        chk.set_note("no touching point observed; rigidity vacuous");
        auto c0 = chk.finish();
        c0.status = Status::pass;
        return make_report("realfn", {c0});
      }
      for (double t : grid) {
        if (t > touch) break;
        const double s = sn(k, t);
        chk.add(t, gap(t), 0.0, slope.uncertainty() * std::abs(s));
      }
      return make_report("realfn", {chk.finish()});
    }
    case JacobiConsequence::peak_before_quarter: {
      if (!k.positive()) throw HypothesisError("peak_before_quarter requires k > 0");
      if (std::abs(fl) > tol.allowance(fl, 0.0)) {
        throw HypothesisError("peak_before_quarter requires f(l) = 0");
      }
      double best = -kInf, argmax = 0.0;
      for (double t : grid) {
        const double v = f(t);
        if (v > best) {
          best = v;
          argmax = t;
        }
      }
      const double quarter = k.quarter_period();
      InequalityCheck peak("peak-before-quarter", "jacobi-peak-location", tol);
      peak.keep_details(false);
      // A grid argmax can trail the true maximiser by one spacing.
      peak.add(argmax, argmax, quarter, spacing);
      peak.set_resolution(spacing);
      peak.add_metric("argmax", argmax);
      peak.add_metric("max_f", best);

      InequalityCheck rigid("peak-rigidity", "jacobi-peak-rigidity", tol);
      rigid.keep_details(false);
      rigid.set_resolution(spacing);
      if (std::abs(argmax - quarter) <= spacing) {
        const auto slope = dini(f, 0.0, DiniSide::upper_right);
        for (double t : grid) {
          if (t > argmax) break;
          const double s = sn(k, t);
          rigid.add(t, std::abs(f(t) - slope.value * s), 0.0, slope.uncertainty() * s);
        }
      } else {
        rigid.set_note("maximum strictly before the quarter period; no rigidity to check");
      }
      return make_report("realfn", {peak.finish(), rigid.finish()});
    }
    case JacobiConsequence::strictly_decreasing: {
      if (!k.positive()) throw HypothesisError("strictly_decreasing requires k > 0");
      const double c = right_derivative_at_zero(f);
      if (!(c < 0.0)) throw HypothesisError("strictly_decreasing requires f'_+(0) < 0");
      const double end = std::min(l, k.quarter_period());
      const auto sub = numerics::linspace(0.0, end, grid_points);
      InequalityCheck chk("strictly-decreasing", "jacobi-strict-decrease", Tolerance{0.0, 0.0});
      chk.keep_details(false);
      for (std::size_t i = 1; i < sub.size(); ++i) {
        // Strictness: f(t_i) <= nextafter(f(t_{i-1}), -inf) iff f(t_i) < f(t_{i-1}).
        const double prev = f(sub[i - 1]);
        chk.add(sub[i], f(sub[i]), std::nextafter(prev, -kInf));
      }
      chk.set_resolution(end / static_cast<double>(grid_points - 1));
      chk.add_metric("right_derivative_at_zero", c);
      return make_report("realfn", {chk.finish()});
    }
  }
  throw HypothesisError("unknown jacobi consequence variant");
}

FunctionSpec counterexample_psi() {
  using std::numbers::pi;
  return FunctionSpec::closed_form(
      "psi-counterexample", pi,
      [](double t) { return t <= 0.5 * pi ? 0.5 * std::sin(2.0 * t) : std::cos(t); },
      [](double t) { return t < 0.5 * pi ? std::cos(2.0 * t) : -std::sin(t); });
}

}  // namespace complab
