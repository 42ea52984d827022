#include "complab/geomlab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "complab/errors.hpp"
#include "complab/numerics.hpp"

namespace complab {

namespace {

using std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
const numerics::QuadratureOptions kQuad{1e-10, 1e-13, 40};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

struct Integration {
  std::vector<double> rho, y, dy;
};

Integration integrate_jacobi(const FunctionSpec& curvature, double rho_max, std::size_t steps) {
  const double h = rho_max / static_cast<double>(steps);
  const auto K = [&curvature](double t) { return curvature(t); };
  Integration out;
  out.rho.resize(steps + 1);
  out.y.resize(steps + 1);
  out.dy.resize(steps + 1);
  numerics::JacobiState s{0.0, 1.0};
  out.rho[0] = 0.0;
  out.y[0] = 0.0;
  out.dy[0] = 1.0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = h * static_cast<double>(i);
    s = numerics::rk4_jacobi_step(K, t, h, s);
    out.rho[i + 1] = i + 1 == steps ? rho_max : t + h;
    out.y[i + 1] = s.y;
    out.dy[i + 1] = s.dy;
  }
  return out;
}

}  // namespace

RotSurface::RotSurface(FunctionSpec curvature, std::optional<double> rho_cut, std::size_t steps) {
  if (steps < 16) throw ConfigError("surface: at least 16 integration steps required");
  auto d = std::make_shared<Data>(std::move(curvature));
  d->rho_max = d->curvature.l();
  d->h = d->rho_max / static_cast<double>(steps);

  auto run = integrate_jacobi(d->curvature, d->rho_max, steps);
  const auto fine = integrate_jacobi(d->curvature, d->rho_max, 2 * steps);
  for (std::size_t i = 0; i <= steps; ++i) {
    d->refinement_change = std::max(d->refinement_change, std::abs(run.y[i] - fine.y[2 * i]));
  }
  d->rho = std::move(run.rho);
  d->lambda = std::move(run.y);
  d->dlambda = std::move(run.dy);

  if (d->curvature.kind() == FunctionSpec::Kind::sampled) {
    const auto v = d->curvature.sample_v();
    d->min_curvature = *std::min_element(v.begin(), v.end());
  } else {
    d->min_curvature = kInf;
    for (double t : numerics::linspace(0.0, d->rho_max, 4097)) {
      d->min_curvature = std::min(d->min_curvature, d->curvature(t));
    }
  }
  data_ = d;

  // First zero of lambda: sign change between nodes, refined on the dense output.
  for (std::size_t i = 1; i < d->lambda.size(); ++i) {
    if (d->lambda[i] <= 0.0) {
      double lo = d->rho[i - 1], hi = d->rho[i];
      if (d->lambda[i] == 0.0) {
        d->first_zero = hi;
        break;
      }
      for (int it = 0; it < 200 && hi - lo > 1e-15 * d->rho_max; ++it) {
        const double mid = 0.5 * (lo + hi);
        (warp(mid) > 0.0 ? lo : hi) = mid;
      }
      d->first_zero = 0.5 * (lo + hi);
      break;
    }
  }
  // Roundoff can leave a zero at the last node slightly positive.
  if (!d->first_zero && std::abs(d->lambda.back()) <= 1e-9 * d->rho_max) {
    d->first_zero = d->rho_max;
  }

  const double limit = d->first_zero.value_or(d->rho_max);
  if (rho_cut) {
    if (!(*rho_cut > 0.0) || *rho_cut > d->rho_max) {
      throw ConfigError("surface: cut distance must lie in (0, rho_max]");
    }
    if (*rho_cut > limit * (1.0 + 1e-9)) {
      std::ostringstream msg;
      msg << "surface: cut distance " << *rho_cut << " exceeds the first zero " << limit
          << " of the warping function";
      throw ConfigError(msg.str());
    }
    d->rho_cut = std::min(*rho_cut, limit);
  } else {
    d->rho_cut = limit;
  }

  d->cumulative.assign(d->rho.size(), 0.0);
  for (std::size_t i = 0; i + 1 < d->rho.size(); ++i) {
    d->cumulative[i + 1] =
        d->cumulative[i] +
        numerics::integrate([this](double t) { return warp(t); }, d->rho[i], d->rho[i + 1], kQuad);
  }
}

RotSurface::Dense RotSurface::dense(double rho) const {
  const Data& d = *data_;
  if (!(rho >= 0.0 && rho <= d.rho_max * (1.0 + 1e-12))) {
    throw DomainError("surface: radius outside [0, rho_max]");
  }
  rho = std::min(rho, d.rho_max);
  const auto i =
      std::min(static_cast<std::size_t>(rho / d.h), d.rho.size() - 2);
  const double s = rho - d.rho[i];
  if (s == 0.0) return {d.lambda[i], d.dlambda[i]};
  const auto K = [&d](double t) { return d.curvature(t); };
  const auto st = numerics::rk4_jacobi_step(K, d.rho[i], s, {d.lambda[i], d.dlambda[i]});
  return {st.y, st.dy};
}

double RotSurface::warp(double rho) const { return dense(rho).y; }

double RotSurface::warp_derivative(double rho) const { return dense(rho).dy; }

double RotSurface::warp_integral(double rho) const {
  const Data& d = *data_;
  if (!(rho >= 0.0 && rho <= d.rho_max * (1.0 + 1e-12))) {
    throw DomainError("surface: radius outside [0, rho_max]");
  }
  rho = std::min(rho, d.rho_max);
  const auto i = std::min(static_cast<std::size_t>(rho / d.h), d.rho.size() - 2);
  return d.cumulative[i] +
         numerics::integrate([this](double t) { return warp(t); }, d.rho[i], rho, kQuad);
}

FunctionSpec warp_profile(const RotSurface& m) {
  const auto n = m.steps();
  std::vector<double> t(n + 1), v(n + 1);
  const double h = m.rho_max() / static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i) {
    t[i] = i == n ? m.rho_max() : h * static_cast<double>(i);
    v[i] = m.warp(t[i]);
  }
  return FunctionSpec::sampled_with(
      "warp", std::move(t), std::move(v), [m](double x) { return m.warp(x); },
      [m](double x) { return m.warp_derivative(x); });
}

int model_dimension(const ModelManifold& m) {
  return std::visit(overloaded{[](const SpaceForm& s) { return s.n.value(); },
                               [](const RotSurface&) { return 2; }},
                    m);
}

double model_cut(const ModelManifold& m) {
  return std::visit(overloaded{[](const SpaceForm& s) { return s.kbar.r_max(); },
                               [](const RotSurface& r) { return r.rho_cut(); }},
                    m);
}

double model_extent(const ModelManifold& m) {
  return std::visit(overloaded{[](const SpaceForm& s) { return s.kbar.r_max(); },
                               [](const RotSurface& r) { return r.rho_max(); }},
                    m);
}

double model_min_curvature(const ModelManifold& m) {
  return std::visit(overloaded{[](const SpaceForm& s) { return s.kbar.value; },
                               [](const RotSurface& r) { return r.min_curvature(); }},
                    m);
}

std::string model_name(const ModelManifold& m) {
  return std::visit(overloaded{[](const SpaceForm& s) {
                                 std::ostringstream out;
                                 out << "space-form(k=" << s.kbar.value << ",n=" << s.n.value()
                                     << ")";
                                 return out.str();
                               },
                               [](const RotSurface& r) {
                                 return "surface(" + r.curvature().name() + ")";
                               }},
                    m);
}

namespace {

double checked_radius(const ModelManifold& m, double rho) {
  const double ext = model_extent(m);
  if (!std::isfinite(rho) || rho < 0.0 || rho > ext * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "radius " << rho << " outside [0, " << ext << "] for " << model_name(m);
    throw DomainError(msg.str());
  }
  return std::min(rho, ext);
}

}  // namespace

double boundary_area(const ModelManifold& m, double rho) {
  rho = checked_radius(m, rho);
  return std::visit(overloaded{[rho](const SpaceForm& s) {
                                 if (rho >= s.kbar.r_max()) return 0.0;
                                 return sphere_area(s.kbar, s.n, rho);
                               },
                               [rho](const RotSurface& r) {
                                 if (rho >= r.rho_cut()) return 0.0;
                                 return 2.0 * pi * r.warp(rho);
                               }},
                    m);
}

double boundary_area_derivative(const ModelManifold& m, double rho) {
  rho = checked_radius(m, rho);
  return std::visit(overloaded{[rho](const SpaceForm& s) {
                                 if (rho >= s.kbar.r_max()) return 0.0;
                                 return sphere_area_derivative(s.kbar, s.n, rho);
                               },
                               [rho](const RotSurface& r) {
                                 if (rho >= r.rho_cut()) return 0.0;
                                 return 2.0 * pi * r.warp_derivative(rho);
                               }},
                    m);
}

double model_ball_volume(const ModelManifold& m, double r) {
  r = checked_radius(m, r);
  return std::visit(overloaded{[r](const SpaceForm& s) {
                                 return ball_volume(s.kbar, s.n, std::min(r, s.kbar.r_max()));
                               },
                               [r](const RotSurface& rs) {
                                 return 2.0 * pi * rs.warp_integral(std::min(r, rs.rho_cut()));
                               }},
                    m);
}

namespace {

bool dominates(const ModelManifold& m, Curvature k) {
  return model_min_curvature(m) >= k.value;
}

void require_model_radius(Curvature k, double rho, const char* what) {
  if (k.positive() && rho > k.r_max() * (1.0 + 1e-12)) {
    throw DomainError(std::string(what) + ": radius exceeds pi/sqrt(k)");
  }
}

const char* kNotDominated = "model curvature below k: comparison not guaranteed";

}  // namespace

VerificationReport bishop_gromov_ratio(const ModelManifold& m, Curvature k,
                                       std::span<const double> rho_grid, Tolerance tol) {
  const Dimension n(model_dimension(m));
  const bool applicable = dominates(m, k);
  InequalityCheck mono("volume-ratio-nonincreasing", "bishop-gromov", tol);
  InequalityCheck limit("volume-ratio-limit-one", "bishop-gromov-limit", Tolerance{1e-4, 0.0});
  mono.set_applicable(applicable);
  limit.set_applicable(applicable);
  double prev = 0.0, spacing = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    const double rho = rho_grid[i];
    if (!(rho > 0.0)) continue;
    require_model_radius(k, rho, "bishop-gromov");
    const double ratio = model_ball_volume(m, rho) / ball_volume(k, n, rho);
    if (first) {
      limit.add(rho, std::abs(ratio - 1.0), 0.0);
      limit.add_metric("ratio_at_smallest_radius", ratio);
      first = false;
    } else {
      mono.add(rho, ratio, prev);
      spacing = std::max(spacing, rho - rho_grid[i - 1]);
    }
    prev = ratio;
  }
  mono.set_resolution(spacing);
  if (!applicable) {
    mono.set_note(kNotDominated);
    limit.set_note(kNotDominated);
  }
  return make_report("bishop-gromov", {mono.finish(), limit.finish()});
}

VerificationReport area_ratio_monotonicity(const ModelManifold& m, Curvature k,
                                           std::span<const double> rho_grid, Tolerance tol) {
  const Dimension n(model_dimension(m));
  const bool applicable = dominates(m, k);
  InequalityCheck mono("area-ratio-nonincreasing", "area-ratio-monotone", tol);
  InequalityCheck deriv("area-derivative-le-ratio-model", "area-derivative-comparison", tol);
  mono.set_applicable(applicable);
  deriv.set_applicable(applicable);
  double prev = 0.0, spacing = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    const double rho = rho_grid[i];
    if (!(rho > 0.0)) continue;
    require_model_radius(k, rho, "area ratio");
    const double model_area = sphere_area(k, n, rho);
    if (!(model_area > 0.0)) continue;
    const double ratio = boundary_area(m, rho) / model_area;
    if (!first) {
      mono.add(rho, ratio, prev);
      spacing = std::max(spacing, rho - rho_grid[i - 1]);
    }
    first = false;
    prev = ratio;
    const double dm = boundary_area_derivative(m, rho);
    deriv.add(rho, dm, ratio * sphere_area_derivative(k, n, rho));
  }
  mono.set_resolution(spacing);
  if (!applicable) {
    mono.set_note(kNotDominated);
    deriv.set_note(kNotDominated);
  }
  return make_report("area-ratio", {mono.finish(), deriv.finish()});
}

VerificationReport check_root_warp_concavity(const ModelManifold& m, Curvature k,
                                             std::span<const double> grid, Tolerance tol) {
  const int n = model_dimension(m);
  const bool applicable = dominates(m, k);
  double l = model_cut(m);
  if (!std::isfinite(l)) {
    const double top = grid.empty() ? 1.0 : *std::max_element(grid.begin(), grid.end());
    l = 1.1 * top;
  }
  const double v1 = unit_sphere_measure(Dimension(n));
  const ModelManifold model = m;
  const auto root = FunctionSpec::closed_form("root-warp", l, [model, v1, n](double t) {
    const double lambda = boundary_area(model, t) / v1;
    return n == 2 ? lambda : std::pow(std::max(lambda, 0.0), 1.0 / (n - 1));
  });
  std::vector<double> inner;
  for (double t : grid) {
    if (t > 0.0 && t < l) inner.push_back(t);
  }
  auto jac = support_sense_jacobi(root, k, inner, std::nullopt, tol).checks.front();
  jac.name = "root-warp-jacobi";
  jac.anchor = "root-warp-concavity";
  jac.details.clear();
  if (!applicable && jac.status == Status::fail) jac.status = Status::expected_possible_fail;
  const bool equality = jac.metric("equality_everywhere") == 1.0;

  InequalityCheck rigid("root-warp-rigidity", "root-warp-rigidity", tol);
  rigid.keep_details(false);
  if (equality) {
    for (double t : inner) {
      const double lambda = boundary_area(m, t) / v1;
      const double model = std::pow(sn(k, t), n - 1);
      rigid.add(t, std::abs(lambda - model), 0.0);
    }
  } else {
    rigid.set_note("strict inequality somewhere; rigidity not triggered");
  }
  return make_report("root-warp", {jac, rigid.finish()});
}

// ---------------------------------------------------------------------------
// Equal-volume comparison

namespace {

double solve_equal_volume(const ModelManifold& m, double target) {
  if (target <= 0.0) return 0.0;
  double hi = model_cut(m);
  if (!std::isfinite(hi)) {
    hi = 1.0;
    for (int i = 0; i < 200 && model_ball_volume(m, hi) < target; ++i) hi *= 2.0;
  }
  numerics::RootOptions opts;
  opts.residual_tol = 1e-14 * target;
  opts.width_tol = 1e-14 * hi;
  return numerics::find_root_increasing([&](double s) { return model_ball_volume(m, s) - target; },
                                        0.0, hi, opts)
      .x;
}

double total_volume(const ModelManifold& m) {
  const double cut = model_cut(m);
  return std::isfinite(cut) ? model_ball_volume(m, cut) : kInf;
}

}  // namespace

EqualVolumeResult compare_equal_volume_balls(const ModelManifold& m, Curvature k, double r,
                                             Tolerance tol) {
  const Dimension n(model_dimension(m));
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("equal volume: r must be >= 0");
  if (k.positive() && !(r < k.r_max())) {
    throw DomainError("equal volume: r must be below pi/sqrt(k)");
  }
  const double total = total_volume(m);
  const auto target_of = [&](double s) { return ball_volume(k, n, s); };
  const double target = target_of(r);
  if (target > total * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "equal volume: Vol_k(B(" << r << ")) = " << target << " exceeds Vol(M) = " << total;
    throw InfeasibleRadius(msg.str());
  }

  EqualVolumeResult res;
  res.r = r;
  res.rbar = solve_equal_volume(m, target);
  res.residual = std::abs(model_ball_volume(m, res.rbar) - target);
  res.area_m = boundary_area(m, res.rbar);
  res.area_model = sphere_area(k, n, r);
  res.area_derivative_m = boundary_area_derivative(m, res.rbar);
  res.area_derivative_model = sphere_area_derivative(k, n, r);
  res.rbar_prime = res.area_m > 0.0 ? res.area_model / res.area_m : kInf;

  // Central differences of rbar(r) with one Richardson step.
  const double cut = model_cut(m);
  const double delta = 1e-4 * r;
  double fd_err = 0.0;
  res.discontinuity = !(res.area_m > 0.0);
  if (r > 0.0 && !res.discontinuity) {
    const auto rbar_at = [&](double s) {
      const double t = target_of(s);
      if (t > total) return kInf;
      return solve_equal_volume(m, t);
    };
    const auto diff = [&](double d) {
      const double up = r + d;
      if (k.positive() && up >= k.r_max()) return kInf;
      return (rbar_at(up) - rbar_at(r - d)) / (2.0 * d);
    };
    const double coarse = diff(delta);
    const double fine = diff(0.5 * delta);
    if (std::isfinite(coarse) && std::isfinite(fine) &&
        res.rbar + 2.0 * delta * std::max(coarse, 1.0) < cut) {
      res.rbar_prime_difference = (4.0 * fine - coarse) / 3.0;
      fd_err = std::abs(fine - coarse);
    } else {
      res.discontinuity = true;
    }
  }
  if (res.discontinuity) res.rbar_prime_difference = std::numeric_limits<double>::quiet_NaN();

  const bool applicable = dominates(m, k);
  InequalityCheck rbar_ge("rbar-ge-r", "equal-volume-rbar-ge-r", tol);
  InequalityCheck area_le("area-le-model", "equal-volume-area-comparison", tol);
  InequalityCheck deriv_le("area-derivative-le-model", "equal-volume-area-derivative-comparison",
                           tol);
  InequalityCheck prime("rbar-prime-ge-1", "equal-volume-rbar-prime-ge-1", tol);
  for (auto* c : {&rbar_ge, &area_le, &deriv_le, &prime}) {
    c->set_applicable(applicable);
    if (!applicable) c->set_note(kNotDominated);
  }
  rbar_ge.add(r, r, res.rbar);
  area_le.add(r, res.area_m, res.area_model);
  deriv_le.add(r, res.area_derivative_m, res.area_derivative_model);
  if (res.discontinuity) {
    prime.set_note("boundary area vanishes or the difference stencil meets the cut");
  } else {
    prime.add(r, 1.0, res.rbar_prime);
    if (r > 0.0) {
      prime.add(r, std::abs(res.rbar_prime_difference - res.rbar_prime), 0.0,
                9.0 * tol.allowance(res.rbar_prime_difference, res.rbar_prime) + fd_err);
    }
    prime.set_resolution(delta);
  }
  res.report = make_report("theorem-a", {rbar_ge.finish(), area_le.finish(), deriv_le.finish(),
                                         prime.finish()});
  return res;
}

double equal_volume_feasible_radius(const ModelManifold& m, Curvature k) {
  const Dimension n(model_dimension(m));
  const double total = total_volume(m);
  if (!std::isfinite(total)) return k.r_max();
  double hi = k.r_max();
  if (!std::isfinite(hi)) {
    hi = 1.0;
    for (int i = 0; i < 200 && ball_volume(k, n, hi) < total; ++i) hi *= 2.0;
  } else if (ball_volume(k, n, hi) <= total) {
    return hi;
  }
  numerics::RootOptions opts;
  opts.residual_tol = 1e-14 * total;
  opts.width_tol = 1e-14 * hi;
  return numerics::find_root_increasing([&](double s) { return ball_volume(k, n, s) - total; },
                                        0.0, hi, opts)
      .x;
}

std::vector<EqualVolumeResult> compare_equal_volume_balls(const ModelManifold& m, Curvature k,
                                                          std::span<const double> r_grid,
                                                          Tolerance tol) {
  std::vector<EqualVolumeResult> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) out.push_back(compare_equal_volume_balls(m, k, r, tol));
  return out;
}

std::string to_csv(std::span<const EqualVolumeResult> results) {
  std::string out =
      "r,rbar,residual,area_m,area_model,area_derivative_m,area_derivative_model,rbar_prime,"
      "rbar_prime_difference,discontinuity\n";
  for (const auto& x : results) {
    out += format_number(x.r) + "," + format_number(x.rbar) + "," + format_number(x.residual) +
           "," + format_number(x.area_m) + "," + format_number(x.area_model) + "," +
           format_number(x.area_derivative_m) + "," + format_number(x.area_derivative_model) +
           "," + format_number(x.rbar_prime) + "," + format_number(x.rbar_prime_difference) +
           "," + (x.discontinuity ? "1" : "0") + "\n";
  }
  return out;
}

nlohmann::json to_json(std::span<const EqualVolumeResult> results) {
  const auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return format_number(v);
  };
  auto arr = nlohmann::json::array();
  for (const auto& x : results) {
    arr.push_back({{"r", num(x.r)},
                   {"rbar", num(x.rbar)},
                   {"residual", num(x.residual)},
                   {"area_m", num(x.area_m)},
                   {"area_model", num(x.area_model)},
                   {"area_derivative_m", num(x.area_derivative_m)},
                   {"area_derivative_model", num(x.area_derivative_model)},
                   {"rbar_prime", num(x.rbar_prime)},
                   {"rbar_prime_difference", num(x.rbar_prime_difference)},
                   {"discontinuity", x.discontinuity}});
  }
  return arr;
}

VerificationReport compare_equal_area_spheres(const ModelManifold& m, Curvature k, double r,
                                              Tolerance tol) {
  const Dimension n(model_dimension(m));
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("equal area: r must be >= 0");
  if (k.positive() && r > k.quarter_period() * (1.0 + 1e-12)) {
    throw DomainError("equal area: r must not exceed pi/(2 sqrt k)");
  }
  const double target = sphere_area(k, n, r);
  double top = std::min(model_cut(m), model_extent(m));
  if (!std::isfinite(top)) {
    top = std::max(r, 1.0);
    for (int i = 0; i < 200 && boundary_area(m, top) < target; ++i) top *= 2.0;
  }
  const auto g = [&](double s) { return boundary_area(m, s) - target; };
  double rbar = 0.0;
  if (target > 0.0) {
    const auto scan = numerics::linspace(0.0, top, 4097);
    std::size_t hit = 0;
    for (std::size_t i = 1; i < scan.size(); ++i) {
      if (g(scan[i]) >= 0.0) {
        hit = i;
        break;
      }
    }
    if (hit == 0) {
      std::ostringstream msg;
      msg << "equal area: boundary area of " << model_name(m) << " never reaches " << target;
      throw NoSolution(msg.str());
    }
    double lo = scan[hit - 1], hi = scan[hit];
    for (int it = 0; it < 200 && hi - lo > 1e-15 * top; ++it) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) >= 0.0 ? hi : lo) = mid;
    }
    rbar = hi;
  }
  const bool applicable = dominates(m, k);
  InequalityCheck vol("ball-volume-ge-model", "equal-area-volume-comparison", tol);
  vol.set_applicable(applicable);
  if (!applicable) vol.set_note(kNotDominated);
  const double vm = model_ball_volume(m, rbar);
  const double vk = ball_volume(k, n, r);
  vol.add(r, vk, vm);
  vol.add_metric("rbar", rbar);
  vol.add_metric("volume_m", vm);
  vol.add_metric("volume_model", vk);
  vol.set_resolution(1e-15 * top);
  return make_report("corollary-b", {vol.finish()});
}

VerificationReport check_equal_volume_ratios_monotone(const ModelManifold& m, Curvature k,
                                                      std::span<const double> r_grid,
                                                      Tolerance tol) {
  const auto results = compare_equal_volume_balls(m, k, r_grid, tol);
  bool applicable = std::visit(
      overloaded{[k](const SpaceForm& s) { return s.kbar.value >= k.value; },
                 [k](const RotSurface& rs) { return k.value >= 0.0 && rs.min_curvature() >= k.value; }},
      m);
  const double cut = model_cut(m);
  if (std::holds_alternative<RotSurface>(m)) {
    for (const auto& x : results) {
      if (!(x.rbar < cut)) applicable = false;
    }
  }
  InequalityCheck radius("r-over-rbar-nonincreasing", "equal-volume-radius-ratio-monotone", tol);
  InequalityCheck area("area-ratio-nonincreasing", "equal-volume-area-ratio-monotone", tol);
  for (auto* c : {&radius, &area}) {
    c->set_applicable(applicable);
    if (!applicable) c->set_note("outside the guaranteed cases");
  }
  double prev_a = 0.0, prev_b = 0.0, spacing = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& x = results[i];
    if (!(x.r > 0.0) || !(x.area_model > 0.0)) continue;
    const double a = x.r / x.rbar;
    const double b = x.area_m / x.area_model;
    if (!first) {
      radius.add(x.r, a, prev_a);
      area.add(x.r, b, prev_b);
      spacing = std::max(spacing, x.r - r_grid[i - 1]);
    }
    first = false;
    prev_a = a;
    prev_b = b;
  }
  radius.set_resolution(spacing);
  area.set_resolution(spacing);
  radius.add_metric("applicable", applicable ? 1.0 : 0.0);
  area.add_metric("applicable", applicable ? 1.0 : 0.0);
  return make_report("theorem-c", {radius.finish(), area.finish()});
}

// ---------------------------------------------------------------------------
// Named models

namespace {

double parse_suffix(const std::string& name, std::size_t colon) {
  const std::string tail = name.substr(colon + 1);
  char* end = nullptr;
  const double v = std::strtod(tail.c_str(), &end);
  if (tail.empty() || end != tail.c_str() + tail.size() || !std::isfinite(v)) {
    throw ConfigError("model '" + name + "': expected a number after ':'");
  }
  return v;
}

}  // namespace

ModelManifold named_model(const std::string& name, int n) {
  const auto colon = name.find(':');
  const std::string head = name.substr(0, colon);
  if (head == "euclidean" && colon == std::string::npos) {
    return SpaceForm{Curvature(0.0), Dimension(n)};
  }
  if (head == "sphere" && colon != std::string::npos) {
    const double kb = parse_suffix(name, colon);
    if (!(kb > 0.0)) throw ConfigError("model '" + name + "': sphere curvature must be > 0");
    return SpaceForm{Curvature(kb), Dimension(n)};
  }
  if (head == "hyperbolic" && colon != std::string::npos) {
    const double kb = -std::abs(parse_suffix(name, colon));
    return SpaceForm{Curvature(kb), Dimension(n)};
  }
  if (name == "rp2" || name == "bump") {
    if (n != 2) throw ConfigError("model '" + name + "' is a surface: n must be 2");
    if (name == "rp2") {
      const auto K = FunctionSpec::closed_form("K=1", pi, [](double) { return 1.0; });
      return RotSurface(K, 0.5 * pi);
    }
    const auto K = FunctionSpec::closed_form("K=1/(1+rho^2)^2", 10.0, [](double t) {
      const double q = 1.0 + t * t;
      return 1.0 / (q * q);
    });
    return RotSurface(K, 10.0);
  }
  throw ConfigError("unknown model '" + name +
                    "' (expected euclidean, sphere:<k>, hyperbolic:<k>, rp2, bump)");
}

RotSurface load_curvature_profile(const std::filesystem::path& path,
                                  std::optional<double> rho_cut) {
  auto K = FunctionSpec::from_csv(path, "profile:" + path.filename().string());
  return RotSurface(std::move(K), rho_cut);
}

}  // namespace complab
