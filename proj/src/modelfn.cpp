#include "complab/modelfn.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "complab/errors.hpp"
#include "complab/numerics.hpp"

namespace complab {

using std::numbers::pi;

double Curvature::r_max() const {
  return value > 0.0 ? pi / std::sqrt(value) : std::numeric_limits<double>::infinity();
}

double Curvature::quarter_period() const { return 0.5 * r_max(); }

Dimension::Dimension(int n) : n_(n) {
  if (n < 2) throw DomainError("dimension must be >= 2, got " + std::to_string(n));
}

bool ModelDomain::contains(double r) const {
  return std::isfinite(r) && r >= 0.0 && r <= r_max * (1.0 + 1e-12);
}

double ModelDomain::guard(double r) const {
  if (!std::isfinite(r) || r < 0.0) {
    throw DomainError("radius must be finite and non-negative, got " + std::to_string(r));
  }
  if (r > r_max) {
    if (r - r_max <= 1e-12 * r_max) return r_max;
    throw DomainError("radius " + std::to_string(r) + " exceeds pi/sqrt(k) = " +
                      std::to_string(r_max));
  }
  return r;
}

double sn(Curvature k, double t) {
  t = ModelDomain(k).guard(t);
  const double kv = k.value;
  if (std::abs(kv) < kSmallCurvature) return t - kv * t * t * t / 6.0;
  if (kv > 0.0) {
    const double s = std::sqrt(kv);
    return std::sin(s * t) / s;
  }
  const double s = std::sqrt(-kv);
  return std::sinh(s * t) / s;
}

double csn(Curvature k, double t) {
  t = ModelDomain(k).guard(t);
  const double kv = k.value;
  if (std::abs(kv) < kSmallCurvature) return 1.0 - 0.5 * kv * t * t;
  if (kv > 0.0) return std::cos(std::sqrt(kv) * t);
  return std::cosh(std::sqrt(-kv) * t);
}

double phi(Curvature k, double rho) {
  if (!std::isfinite(rho) || rho < 0.0) {
    throw DomainError("phi: argument must be finite and non-negative");
  }
  const double kv = k.value;
  if (std::abs(kv) < kSmallCurvature) {
    const double r2 = rho * rho;
    return 0.5 * r2 - kv * r2 * r2 / 24.0;
  }
  // Half-angle forms avoid the cancellation in 1 - cos and cosh - 1.
  if (kv > 0.0) {
    const double s = std::sin(0.5 * std::sqrt(kv) * rho);
    return 2.0 * s * s / kv;
  }
  const double s = std::sinh(0.5 * std::sqrt(-kv) * rho);
  return 2.0 * s * s / (-kv);
}

double unit_sphere_measure(Dimension n) {
  // Gamma(n/2) from Gamma(1) = 1 or Gamma(1/2) = sqrt(pi).
  const int nv = n.value();
  double gamma_half_n = (nv % 2 == 0) ? 1.0 : std::sqrt(pi);
  for (int twice = (nv % 2 == 0) ? 2 : 1; twice < nv; twice += 2) {
    gamma_half_n *= 0.5 * twice;
  }
  return 2.0 * std::pow(pi, 0.5 * nv) / gamma_half_n;
}

double sphere_area(Curvature k, Dimension n, double r) {
  return unit_sphere_measure(n) * std::pow(sn(k, r), n.value() - 1);
}

double sphere_area_derivative(Curvature k, Dimension n, double r) {
  const int nv = n.value();
  return unit_sphere_measure(n) * (nv - 1) * std::pow(sn(k, r), nv - 2) * csn(k, r);
}

double ball_volume(Curvature k, Dimension n, double r) {
  r = ModelDomain(k).guard(r);
  const int power = n.value() - 1;
  const auto integrand = [&](double t) { return std::pow(sn(k, t), power); };
  numerics::QuadratureOptions opts;
  opts.rel_tol = 1e-13;
  return unit_sphere_measure(n) * numerics::integrate(integrand, 0.0, r, opts);
}

}  // namespace complab
