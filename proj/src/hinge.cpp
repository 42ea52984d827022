#include "complab/hinge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "complab/errors.hpp"
#include "complab/numerics.hpp"
#include "complab/realfn.hpp"

namespace complab {

namespace {

using std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

double clamp_angle(double gamma) {
  if (gamma >= 0.0 && gamma <= pi) return gamma;
  if (gamma < 0.0 && gamma >= -1e-12) return 0.0;
  if (gamma > pi && gamma <= pi + 1e-12) return pi;
  throw DomainError("angle " + std::to_string(gamma) + " outside [0, pi]");
}

}  // namespace

double law_of_cosines(Curvature k, double a, double b, double gamma) {
  if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("law of cosines: sides must be finite and non-negative");
  }
  gamma = clamp_angle(gamma);
  const double s = std::sin(0.5 * gamma);
  const double s2 = s * s;
  const double kv = k.value;
  if (kv == 0.0) {
    const double d = a - b;
    return std::sqrt(d * d + 4.0 * a * b * s2);
  }
  if (kv > 0.0) {
    const ModelDomain dom(k);
    a = dom.guard(a);
    b = dom.guard(b);
    const double q = std::sqrt(kv);
    const double sd = std::sin(0.5 * q * (a - b));
    const double h = std::clamp(sd * sd + std::sin(q * a) * std::sin(q * b) * s2, 0.0, 1.0);
    return 2.0 / q * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
  }
  const double q = std::sqrt(-kv);
  const double sd = std::sinh(0.5 * q * (a - b));
  const double h = std::max(sd * sd + std::sinh(q * a) * std::sinh(q * b) * s2, 0.0);
  return 2.0 / q * std::asinh(std::sqrt(h));
}

void Hinge::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("hinge: a must be > 0");
  if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("hinge: l must be > 0");
  clamp_angle(theta);
  if (theta_bar) clamp_angle(*theta_bar);
  for (const Curvature c : {k, kbar}) {
    if (c.positive() && !(a < c.r_max() && l < c.r_max())) {
      std::ostringstream msg;
      msg << "hinge: a and l must be below pi/sqrt(" << c.value << ")";
      throw DomainError(msg.str());
    }
  }
}

Hinge hinge_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("hinge: expected a JSON object");
  const auto num = [&j](const char* key, std::optional<double> fallback) -> double {
    if (!j.contains(key)) {
      if (fallback) return *fallback;
      throw ConfigError(std::string("hinge: missing field '") + key + "'");
    }
    if (!j.at(key).is_number()) throw ConfigError(std::string("hinge: field '") + key + "' must be a number");
    return j.at(key).get<double>();
  };
  Hinge h;
  h.a = num("a", std::nullopt);
  h.theta = num("theta", std::nullopt);
  h.l = num("l", std::nullopt);
  h.k = Curvature(num("k", 0.0));
  h.kbar = Curvature(num("kbar", h.k.value));
  if (j.contains("theta_bar")) h.theta_bar = num("theta_bar", std::nullopt);
  for (const auto& [key, value] : j.items()) {
    if (key != "a" && key != "theta" && key != "l" && key != "k" && key != "kbar" &&
        key != "theta_bar") {
      throw ConfigError("hinge: unknown field '" + key + "'");
    }
  }
  h.validate();
  return h;
}

nlohmann::json to_json(const Hinge& h) {
  nlohmann::json j{{"a", h.a}, {"theta", h.theta}, {"l", h.l}, {"k", h.k.value},
                   {"kbar", h.kbar.value}};
  if (h.theta_bar) j["theta_bar"] = *h.theta_bar;
  return j;
}

DistanceProfile hinge_profile(Curvature kbar, double a, double theta,
                              std::span<const double> t_grid) {
  DistanceProfile p;
  p.kbar = kbar;
  p.t.assign(t_grid.begin(), t_grid.end());
  p.d.reserve(p.t.size());
  for (double t : p.t) p.d.push_back(law_of_cosines(kbar, a, t, theta));
  return p;
}

std::string to_csv(const DistanceProfile& p) {
  std::string out = "t,d\n";
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    out += format_number(p.t[i]) + "," + format_number(p.d[i]) + "\n";
  }
  return out;
}

std::vector<double> default_hinge_grid(double l, std::size_t n) {
  return numerics::linspace(1e-3 * l, l, n);
}

namespace {

std::vector<double> checked_grid(std::span<const double> t_grid, double l) {
  std::vector<double> g(t_grid.begin(), t_grid.end());
  for (double t : g) {
    if (!(t >= 0.0 && t <= l * (1.0 + 1e-12))) {
      throw DomainError("hinge: grid point " + std::to_string(t) + " outside [0, l]");
    }
  }
  return g;
}

}  // namespace

VerificationReport toponogov_check(const Hinge& h, std::span<const double> t_grid,
                                   Tolerance tol) {
  h.validate();
  const auto grid = checked_grid(t_grid, h.l);
  const bool applicable = h.kbar.value >= h.k.value;
  const Hinge hc = h;
  const auto f = FunctionSpec::closed_form("hinge-comparison", h.l, [hc](double t) {
    return phi(hc.k, law_of_cosines(hc.kbar, hc.a, t, hc.theta)) -
           phi(hc.k, law_of_cosines(hc.k, hc.a, t, hc.theta));
  }).with_scale([hc](double t) {
    // Both terms and the propagated error of each distance.
    double s = 0.0;
    for (const Curvature c : {hc.kbar, hc.k}) {
      const double d = law_of_cosines(c, hc.a, t, hc.theta);
      const double slope = hc.k.positive() ? 1.0 / std::sqrt(hc.k.value) : sn(hc.k, d);
      s += std::abs(phi(hc.k, d)) + slope * d;
    }
    return s;
  });

  InequalityCheck dist("distance-le-model", "hinge-distance-comparison", tol);
  for (double t : grid) {
    dist.add(t, law_of_cosines(h.kbar, h.a, t, h.theta), law_of_cosines(h.k, h.a, t, h.theta));
  }

  std::vector<double> inner;
  for (double t : grid) {
    if (t > 0.0 && t < h.l) inner.push_back(t);
  }
  auto jac = support_sense_jacobi(f, h.k, inner, std::nullopt, tol).checks.front();
  jac.name = "comparison-jacobi";
  jac.anchor = "hinge-comparison-jacobi";
  jac.details.clear();

  InequalityCheck nonpos("comparison-nonpositive", "hinge-comparison-nonpositive", tol);
  nonpos.keep_details(false);
  const auto slope = dini(f, 0.0, DiniSide::upper_right);
  nonpos.add(0.0, slope.value, 0.0, slope.uncertainty());
  nonpos.add_metric("right_derivative_at_zero", slope.value);
  for (double t : grid) nonpos.add(t, f(t), 0.0);

  const double end = h.k.positive() ? std::min(h.l, h.k.quarter_period()) : h.l;
  std::vector<double> head;
  for (double t : grid) {
    if (t <= end) head.push_back(t);
  }
  auto dec = is_decreasing_dini(f.restricted(end), head, tol).checks.front();
  dec.name = "comparison-decreasing";
  dec.anchor = "hinge-comparison-decreasing";

  std::vector<Check> checks{dist.finish(), jac, nonpos.finish(), dec};
  for (auto& c : checks) {
    if (!applicable) {
      if (c.status == Status::fail) c.status = Status::expected_possible_fail;
      c.note = "kbar < k: comparison not guaranteed";
    }
  }
  return make_report("toponogov", std::move(checks));
}

namespace {

struct QuotientPoint {
  double t, value, noise;
};

std::vector<QuotientPoint> relative_quotient(const Hinge& h, std::span<const double> grid) {
  std::vector<QuotientPoint> out;
  for (double t : grid) {
    if (!(t > 0.0)) continue;
    const double s = sn(h.k, t);
    if (!(s > 0.0)) continue;
    const double p1 = phi(h.k, law_of_cosines(h.kbar, h.a, t, h.theta));
    const double p2 = phi(h.k, law_of_cosines(h.k, h.a, t, *h.theta_bar));
    out.push_back({t, (p1 - p2) / s, 8.0 * kEps * (std::abs(p1) + std::abs(p2)) / s});
  }
  return out;
}

}  // namespace

std::string relative_quotient_csv(const Hinge& h, std::span<const double> t_grid) {
  if (!h.theta_bar) throw ConfigError("relative comparison needs theta_bar");
  h.validate();
  std::string out = "t,phi\n";
  for (const auto& q : relative_quotient(h, checked_grid(t_grid, h.l))) {
    out += format_number(q.t) + "," + format_number(q.value) + "\n";
  }
  return out;
}

VerificationReport relative_toponogov(const Hinge& h, std::span<const double> t_grid,
                                      Tolerance tol) {
  if (!h.theta_bar) throw ConfigError("relative comparison needs theta_bar");
  h.validate();
  const auto grid = checked_grid(t_grid, h.l);
  const bool applicable = h.kbar.value >= h.k.value;
  const double theta_bar = *h.theta_bar;

  InequalityCheck quotient("quotient-nonincreasing", "relative-hinge-quotient-monotone", tol);
  quotient.set_applicable(applicable);
  const auto q = relative_quotient(h, grid);
  for (std::size_t i = 1; i < q.size(); ++i) {
    quotient.add(q[i].t, q[i].value, q[i - 1].value, q[i].noise + q[i - 1].noise);
  }
  if (!q.empty()) quotient.add_metric("quotient_at_smallest_t", q.front().value);

  // Ratio against the k-hinge with the actual angle.
  InequalityCheck ratio("ratio-monotone", "relative-hinge-ratio-monotone", tol);
  ratio.set_applicable(applicable);
  std::size_t skipped = 0;
  if (theta_bar == h.theta) {
    ratio.set_note("equal angles: ratio undefined");
  } else {
    const bool decreasing = theta_bar < h.theta;
    ratio.set_note(decreasing ? "theta_bar < theta: nonincreasing, limit >= 1"
                              : "theta_bar > theta: nondecreasing, limit <= 1");
    std::vector<QuotientPoint> pts;
    for (double t : grid) {
      if (!(t > 0.0)) continue;
      const double pb = phi(h.k, law_of_cosines(h.k, h.a, t, theta_bar));
      const double num = phi(h.k, law_of_cosines(h.kbar, h.a, t, h.theta)) - pb;
      const double den = phi(h.k, law_of_cosines(h.k, h.a, t, h.theta)) - pb;
      if (std::abs(den) < 1e-10) {
        ++skipped;
        continue;
      }
      const double value = num / den;
      pts.push_back({t, value,
                     8.0 * kEps * (std::abs(num) + std::abs(pb)) / std::abs(den) *
                         (1.0 + std::abs(value))});
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const double extra = pts[i].noise + pts[i - 1].noise;
      if (decreasing) {
        ratio.add(pts[i].t, pts[i].value, pts[i - 1].value, extra);
      } else {
        ratio.add(pts[i].t, pts[i - 1].value, pts[i].value, extra);
      }
    }
    if (pts.size() >= 3) {
      // Limit at t = 0 by quadratic extrapolation through the first three
      // points; the gap to the linear extrapolation bounds its error.
      const auto& [t0, v0, n0] = pts[0];
      const auto& [t1, v1, n1] = pts[1];
      const auto& [t2, v2, n2] = pts[2];
      const double linear = v0 - t0 * (v1 - v0) / (t1 - t0);
      const double quad = v0 * (t1 * t2) / ((t0 - t1) * (t0 - t2)) +
                          v1 * (t0 * t2) / ((t1 - t0) * (t1 - t2)) +
                          v2 * (t0 * t1) / ((t2 - t0) * (t2 - t1));
      const double extra = std::abs(quad - linear) + 4.0 * (n0 + n1 + n2);
      if (decreasing) {
        ratio.add(0.0, 1.0, quad, extra);
      } else {
        ratio.add(0.0, quad, 1.0, extra);
      }
      ratio.add_metric("limit_at_zero", quad);
    }
  }
  ratio.add_metric("skipped_small_denominator", static_cast<double>(skipped));

  std::vector<Check> checks{quotient.finish(), ratio.finish()};
  if (!applicable) {
    for (auto& c : checks) c.note = "kbar < k: comparison not guaranteed";
  }
  return make_report("relative-toponogov", std::move(checks));
}

VerificationReport cosine_identity_check(Curvature k, double a, double theta1, double theta2,
                                         std::span<const double> t_grid, Tolerance tol) {
  InequalityCheck chk("cosine-identity", "hinge-cosine-identity", tol);
  const double factor = (std::cos(theta2) - std::cos(theta1)) * sn(k, a);
  double worst = 0.0;
  for (double t : t_grid) {
    const double lhs = phi(k, law_of_cosines(k, a, t, theta1)) -
                       phi(k, law_of_cosines(k, a, t, theta2));
    const double rhs = factor * sn(k, t);
    worst = std::max(worst, std::abs(lhs - rhs));
    chk.add(t, std::abs(lhs - rhs), 0.0);
  }
  chk.add_metric("max_abs_error", worst);
  return make_report("cosine-identity", {chk.finish()});
}

}  // namespace complab
