#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "complab/modelfn.hpp"
#include "complab/numerics.hpp"
#include "complab/realfn.hpp"
#include "complab/report.hpp"

namespace complab {

/// Integral of f^m over [0, x] by adaptive quadrature.
double power_integral(const FunctionSpec& f, int m, double x);

/// Integral of sn_k^m over [0, r].
double sn_power_integral(Curvature k, int m, double r);

/// Matching equation int_0^x f^m = int_0^r sn_k^m for an admissible f.
/// Construction runs the admissibility checks and stores their report;
/// it does not reject inadmissible input.
class MatchingProblem {
 public:
  /// t0 defaults to l when f(l) > 0, otherwise to the last point of a
  /// uniform 4097-point grid where f > 0.
  MatchingProblem(FunctionSpec f, int m, Curvature k, std::optional<double> t0 = std::nullopt,
                  Tolerance tol = {});

  const FunctionSpec& f() const { return f_; }
  int m() const { return m_; }
  Curvature k() const { return k_; }
  double t0() const { return t0_; }
  const VerificationReport& admissibility() const { return admissibility_; }
  bool admissible() const { return admissibility_.all_pass(); }

  /// int_0^x f^m from a cumulative table; 0 <= x <= l.
  double power_integral(double x) const;
  /// int_0^r sn_k^m.
  double model_integral(double r) const;
  /// int_0^t0 f^m, the largest attainable left-hand side.
  double attainable() const { return attainable_; }
  /// Largest r whose matching point lies in [0, t0].
  double feasible_radius() const { return feasible_radius_; }
  /// 64 log-spaced radii from 1e-3 R to 0.999 R, R the feasible radius.
  std::vector<double> default_r_grid(std::size_t n = 64) const;

 private:
  FunctionSpec f_;
  int m_;
  Curvature k_;
  double t0_;
  VerificationReport admissibility_;
  double cell_ = 0.0;
  std::vector<double> cumulative_;
  double attainable_ = 0.0;
  double feasible_radius_ = 0.0;
};

/// Solution of the matching equation at one radius.
struct MatchingPoint {
  double r = 0.0;
  double x = 0.0;
  double residual = 0.0;  // |int_0^x f^m - int_0^r sn_k^m|
  double x_prime = 0.0;   // (sn_k(r) / f(x))^m, +inf where f(x) = 0
  double fx = 0.0;
  double dini_fx_right = 0.0;  // upper right Dini derivative of f at x
  double dini_fx_left = 0.0;   // upper left Dini derivative of f at x
  double dini_uncertainty = 0.0;
};

struct MatchingCurve {
  std::vector<MatchingPoint> points;
};

/// Throws InfeasibleRadius when r exceeds the feasible radius and
/// DomainError when r < 0 or r >= pi/sqrt(k) for k > 0.
MatchingPoint solve_x(const MatchingProblem& p, double r);

/// solve_x over a strictly increasing grid.
MatchingCurve matching_curve(const MatchingProblem& p, std::span<const double> r_grid);

/// CSV with columns r,x,x_prime,fx,residual.
std::string to_csv(const MatchingCurve& curve);

/// The four conclusions of the matching lemma on the grid: x >= r,
/// f(x) <= sn_k(r), Dini derivatives of f at x bounded by sn_k'(r), and
/// x' >= 1 (with x' cross-checked against a central difference of x(r)
/// within 10 tol).
VerificationReport verify_matching_conclusions(const MatchingProblem& p,
                                               std::span<const double> r_grid,
                                               Tolerance tol = {});

/// Both f(x)/sn_k(r) and r/x bounded by 1 and nonincreasing in r. The
/// claim is guaranteed for k >= 0 or f = sn_kbar with kbar > k; elsewhere
/// failures become expected-possible-fail.
VerificationReport check_matching_ratios(const MatchingProblem& p,
                                         std::span<const double> r_grid, Tolerance tol = {});

/// For f = sn_kbar with kbar in (-1, 0) matched against k = -1:
/// sn_kbar^m(x) > sqrt(-kbar) sinh^m(r) and sqrt(-kbar) x < r, strictly.
/// Pairs are (x, r).
VerificationReport check_sinh_power_bound(double kbar, int m,
                                          std::span<const std::pair<double, double>> pairs);
/// Builds the pairs by solving the matching equation over r_grid.
VerificationReport check_sinh_power_bound(double kbar, int m, std::span<const double> r_grid);

/// sinh t - cosh t / 2 - cos t / 2 + 1 on [0, 5]: the solution of
/// f'' - f = cos t - 1, f(0) = 0, f'(0) = 1.
FunctionSpec counterexample_sinh();

/// The same function as the convolution sinh t + int_0^t (cos s - 1) sinh(t - s) ds,
/// evaluated by quadrature.
double sinh_convolution(double t);

/// Draws f = sn_kbar(t) (1 - eps (t/l)^p) with kbar in [k, k + 1],
/// eps in [0, 0.5], p in {2, 3}; redraws until the matching admissibility
/// checks pass. Throws ConfigError after 100 rejected draws.
FunctionSpec random_admissible(numerics::SplitMix64& rng, Curvature k, double l);

}  // namespace complab
