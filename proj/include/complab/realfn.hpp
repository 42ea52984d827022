#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "complab/modelfn.hpp"
#include "complab/report.hpp"

namespace complab {

/// Immutable real function on [0, l]. Copies share the underlying data.
class FunctionSpec {
 public:
  enum class Kind { closed_form, sampled };
  using Eval = std::function<double(double)>;

  /// Closed-form function with optional exact derivative.
  static FunctionSpec closed_form(std::string name, double l, Eval eval,
                                  Eval derivative = nullptr);
  /// Piecewise-linear interpolant of (t_i, v_i); t_0 = 0 < ... < t_N = l.
  static FunctionSpec sampled(std::string name, std::vector<double> t, std::vector<double> v);
  /// Sampled data whose values between nodes come from a caller-supplied
  /// interpolant. The interpolant must reproduce the node values.
  static FunctionSpec sampled_with(std::string name, std::vector<double> t,
                                   std::vector<double> v, Eval interpolant,
                                   Eval derivative = nullptr);
  /// Two-column CSV (t, f(t)); an optional non-numeric header line is skipped.
  static FunctionSpec from_csv(const std::filesystem::path& path, std::string name = {});

  /// Evaluates at t in [0, l]; inputs within 1e-12 l outside are clamped,
  /// anything further raises DomainError.
  double operator()(double t) const;

  double l() const { return impl_->l; }
  const std::string& name() const { return impl_->name; }
  Kind kind() const { return impl_->kind; }
  bool has_derivative() const { return static_cast<bool>(impl_->derivative); }
  double derivative(double t) const;
  std::span<const double> sample_t() const { return impl_->t; }
  std::span<const double> sample_v() const { return impl_->v; }

  /// Provenance: set when the function is sn_kbar for some kbar.
  std::optional<double> sn_curvature() const { return impl_->sn_curvature; }
  FunctionSpec with_sn_curvature(double kbar) const;

  /// Magnitude of the terms f(t) is computed from; roundoff bounds in
  /// difference quotients scale with it. Defaults to |f(t)|.
  double scale(double t) const;
  /// Same function with `magnitude` as the evaluation scale.
  FunctionSpec with_scale(Eval magnitude) const;

  /// Same function on the shorter domain [0, l_new].
  FunctionSpec restricted(double l_new) const;

 private:
  struct Impl {
    std::string name;
    double l = 1.0;
    Kind kind = Kind::closed_form;
    Eval eval;
    Eval derivative;
    std::vector<double> t, v;
    std::optional<double> sn_curvature;
    Eval scale;
  };
  explicit FunctionSpec(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// sn_kbar restricted to [0, l] with its exact derivative.
FunctionSpec sn_function(Curvature kbar, double l);

/// Geometric step schedule h_j = h0 q^j, j = 0..count; the estimate uses
/// the last `tail` steps.
struct HSchedule {
  double h0 = 0.01;
  double ratio = 0.5;
  int count = 20;
  int tail = 5;

  double step(int j) const;
  double smallest() const { return step(count); }
  /// Defaults for first-order Dini quotients on [0, l].
  static HSchedule dini_default(double l);
  /// Defaults for symmetric second differences on [0, l]. Coarser than the
  /// Dini schedule: second differences lose digits as 1/tau^2.
  static HSchedule second_difference_default(double l);
  /// Shrinks h0 so that every step fits in `room`; fewer refinements are
  /// kept if the steps would fall below the representable scale of l.
  /// Returns nullopt when fewer than `tail` steps remain.
  std::optional<HSchedule> fitted(double room, double l) const;
  void validate(double l) const;
};

enum class DiniSide { upper_right, lower_right, upper_left, lower_left };
std::string to_string(DiniSide side);

struct DiniEstimate {
  double value = 0.0;                               // may be +-infinity
  std::vector<std::pair<double, double>> quotients;  // (h, quotient), all steps
  DiniSide side = DiniSide::upper_right;
  double spread = 0.0;  // max - min of the tail quotients
  double noise = 0.0;   // roundoff bound of the tail quotients

  /// Resolution of the estimate: spread plus roundoff bound.
  double uncertainty() const { return spread + noise; }
};

/// One-sided Dini derivative estimate of f at t over the schedule.
DiniEstimate dini(const FunctionSpec& f, double t, DiniSide side, const HSchedule& schedule);
/// dini() with the default schedule fitted to the available room at t.
DiniEstimate dini(const FunctionSpec& f, double t, DiniSide side);

/// Decreasing-function test through Dini derivatives: D+ <= 0 and D- <= 0
/// on the grid (only D+ at t = 0 and only D- at t = l).
VerificationReport is_decreasing_dini(const FunctionSpec& f, std::span<const double> grid,
                                      Tolerance tol = {});

/// f'' + k f <= 0 in the support sense: symmetric second differences
/// bounded by -k f(t) over the tail of the tau-schedule.
VerificationReport support_sense_jacobi(const FunctionSpec& f, Curvature k,
                                        std::span<const double> grid,
                                        std::optional<HSchedule> schedule = std::nullopt,
                                        Tolerance tol = {});

/// f / sn_k nonincreasing along the grid. Metric "limit_at_zero" holds the
/// ratio at the smallest grid point.
VerificationReport quotient_monotone(const FunctionSpec& f, Curvature k,
                                     std::span<const double> grid, Tolerance tol = {});

/// Sampled profile of right-derivative estimates at the grid points (0 is
/// prepended when absent); domain is [0, last grid point].
FunctionSpec right_derivative_profile(const FunctionSpec& f, std::span<const double> grid,
                                      std::optional<HSchedule> schedule = std::nullopt);

/// f'_+(0) estimated from the upper right Dini derivative at 0.
double right_derivative_at_zero(const FunctionSpec& f);

/// For f with f'' + k f <= 0: checks f <= f'_+(0) sn_k and that the deficit
/// psi = f - f'_+(0) sn_k decreases. Outside l <= pi/(2 sqrt k) failures
/// are reported as expected-possible-fail.
VerificationReport check_sn_deficit_decreasing(const FunctionSpec& f, Curvature k,
                                               std::span<const double> grid,
                                               Tolerance tol = {});

/// Consequences of f'' + k f <= 0 examined by check_jacobi_consequence.
enum class JacobiConsequence {
  nonnegative_before_zero = 1,  // f(l) = 0 implies f >= 0
  rigid_on_touch = 2,           // touching f'_+(0) sn_k forces equality before
  peak_before_quarter = 3,      // k > 0, f(l) = 0: argmax <= pi/(2 sqrt k)
  strictly_decreasing = 4,      // k > 0, f'_+(0) < 0: strict decrease on the quarter period
};

/// Throws HypothesisError when the variant's hypotheses fail numerically.
VerificationReport check_jacobi_consequence(const FunctionSpec& f, Curvature k,
                                            JacobiConsequence variant, Tolerance tol = {},
                                            std::size_t grid_points = 1001);

/// 1/2 sin(2t) on [0, pi/2], cos t on [pi/2, pi].
FunctionSpec counterexample_psi();

}  // namespace complab
