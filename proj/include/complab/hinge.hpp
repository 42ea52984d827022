#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "complab/modelfn.hpp"
#include "complab/report.hpp"

namespace complab {

/// Side c opposite the angle gamma in the triangle with sides a, b of the
/// space form of curvature k. Computed through the haversine form, which
/// stays accurate for thin and degenerate triangles. Throws DomainError
/// for negative sides, gamma outside [0, pi] or sides beyond pi/sqrt(k).
double law_of_cosines(Curvature k, double a, double b, double gamma);

/// Hinge at q: side |pq| = a, geodesic gamma of length l leaving q at
/// angle theta to [qp]. The hinge lives in the surface of curvature kbar
/// and is compared against curvature k.
struct Hinge {
  double a = 1.0;
  double theta = 0.0;
  double l = 1.0;
  Curvature k{0.0};
  Curvature kbar{0.0};
  /// Second angle for the relative comparison (the model hinge).
  std::optional<double> theta_bar;

  /// Throws DomainError when a side or the angle is out of range.
  void validate() const;
};

/// Reads {"a", "theta", "l", "k", "kbar", optional "theta_bar"}.
Hinge hinge_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Hinge& h);

struct DistanceProfile {
  Curvature kbar;
  std::vector<double> t;
  std::vector<double> d;  // |p gamma(t)|
};

/// |p gamma(t)| along the grid in the space form of curvature kbar.
DistanceProfile hinge_profile(Curvature kbar, double a, double theta,
                              std::span<const double> t_grid);
/// CSV with columns t,d.
std::string to_csv(const DistanceProfile& p);

/// Hinge comparison: the kbar distance stays below the k distance, and
/// f = phi_k(d_kbar) - phi_k(d_k) satisfies f'' + k f <= 0, f <= 0 with
/// f'_+(0) <= 0, and f nonincreasing (up to pi/(2 sqrt k) when k > 0).
/// Failures for kbar < k are expected-possible-fail.
VerificationReport toponogov_check(const Hinge& h, std::span<const double> t_grid,
                                   Tolerance tol = {});

/// Phi(t) = (phi_k(d_{kbar,theta}) - phi_k(d_{k,theta_bar})) / sn_k(t)
/// nonincreasing; the ratio against the k-hinge with angle theta is
/// monotone in the direction given by the sign of theta - theta_bar.
/// Requires h.theta_bar.
VerificationReport relative_toponogov(const Hinge& h, std::span<const double> t_grid,
                                      Tolerance tol = {});

/// CSV with columns t,phi for the quotient Phi of relative_toponogov.
std::string relative_quotient_csv(const Hinge& h, std::span<const double> t_grid);

/// phi_k(d_{theta1}(t)) - phi_k(d_{theta2}(t)) against
/// (cos theta2 - cos theta1) sn_k(a) sn_k(t) on the grid.
VerificationReport cosine_identity_check(Curvature k, double a, double theta1, double theta2,
                                         std::span<const double> t_grid, Tolerance tol = {});

/// Default hinge grid: 200 points from 1e-3 l to l.
std::vector<double> default_hinge_grid(double l, std::size_t n = 200);

}  // namespace complab
