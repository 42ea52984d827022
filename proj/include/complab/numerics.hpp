#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace complab::numerics {

using ScalarFn = std::function<double(double)>;

struct QuadratureOptions {
  double abs_tol = 1e-10;
  // When positive, the effective tolerance is min(abs_tol, rel_tol * |I|)
  // with I the coarse estimate, so that tiny integrals keep their digits.
  double rel_tol = 0.0;
  int max_depth = 40;
};

/// Adaptive Simpson quadrature of fn over [a, b] with Richardson correction.
/// Returns 0 for a == b; a > b yields the negated integral.
double integrate(const ScalarFn& fn, double a, double b,
                 const QuadratureOptions& opts = {});

struct RootOptions {
  double residual_tol = 1e-12;
  double width_tol = 1e-14;
  int max_iter = 400;
};

struct RootResult {
  double x = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Bracketed root of a nondecreasing function g with g(lo) <= 0 <= g(hi):
/// bisection safeguarded regula falsi (Illinois variant). Stops as soon as
/// |g| <= residual_tol or the bracket is narrower than width_tol. Among
/// several roots (plateaus) the smallest is approached.
RootResult find_root_increasing(const ScalarFn& g, double lo, double hi,
                                const RootOptions& opts = {});

std::vector<double> linspace(double lo, double hi, std::size_t n);
std::vector<double> logspace(double lo, double hi, std::size_t n);

/// Classical fourth-order Runge–Kutta step for y'' = -K(t) y written as the
/// first-order system (y, y').
struct JacobiState {
  double y = 0.0;
  double dy = 0.0;
};
JacobiState rk4_jacobi_step(const ScalarFn& curvature, double t, double h,
                            JacobiState s);

/// SplitMix64 generator. Identical streams on every platform, unlike the
/// std:: distributions.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi);  // inclusive

 private:
  std::uint64_t state_;
};

}  // namespace complab::numerics
