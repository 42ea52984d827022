#pragma once

#include <limits>

namespace complab {

/// Curvature constant k of the comparison space form S^n_k.
struct Curvature {
  double value = 0.0;

  constexpr Curvature() = default;
  constexpr explicit Curvature(double k) : value(k) {}

  /// pi/sqrt(k) for k > 0, +infinity otherwise.
  double r_max() const;
  /// pi/(2 sqrt(k)) for k > 0, +infinity otherwise.
  double quarter_period() const;
  bool positive() const { return value > 0.0; }
};

/// Dimension n >= 2 of the manifold.
class Dimension {
 public:
  explicit Dimension(int n);
  int value() const { return n_; }

 private:
  int n_;
};

/// Radii admissible for S^n_k: [0, r_max].
struct ModelDomain {
  Curvature k;
  double r_max;

  explicit ModelDomain(Curvature kk) : k(kk), r_max(kk.r_max()) {}
  bool contains(double r) const;
  /// Clamps inputs that overshoot r_max by at most 1e-12 r_max, throws
  /// DomainError beyond that or for negative/non-finite r.
  double guard(double r) const;
};

// Below |k| < kSmallCurvature the trigonometric branches are replaced by the
// flat branch plus its first-order correction in k.
inline constexpr double kSmallCurvature = 1e-9;

/// sn_k(t): sin(sqrt(k) t)/sqrt(k), t, sinh(sqrt(-k) t)/sqrt(-k).
double sn(Curvature k, double t);
/// sn_k'(t): cos(sqrt(k) t), 1, cosh(sqrt(-k) t).
double csn(Curvature k, double t);
/// phi_k(rho), the solution of phi'' + k phi = 1 with phi(0) = phi'(0) = 0.
double phi(Curvature k, double rho);

/// Volume of the unit (n-1)-sphere, 2 pi^(n/2) / Gamma(n/2).
double unit_sphere_measure(Dimension n);
/// Vol(dB(r)) in S^n_k, v1 sn_k^(n-1)(r).
double sphere_area(Curvature k, Dimension n, double r);
/// d/dr of sphere_area: v1 (n-1) sn_k^(n-2)(r) csn_k(r).
double sphere_area_derivative(Curvature k, Dimension n, double r);
/// Vol(B(r)) in S^n_k by adaptive quadrature of sphere_area.
double ball_volume(Curvature k, Dimension n, double r);

}  // namespace complab
