#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "complab/modelfn.hpp"
#include "complab/realfn.hpp"
#include "complab/report.hpp"

namespace complab {

/// Space form of curvature kbar and dimension n, polar coordinates about
/// any point. The cut distance is pi/sqrt(kbar) for kbar > 0, infinite
/// otherwise.
struct SpaceForm {
  Curvature kbar;
  Dimension n{2};
};

/// Rotationally symmetric surface with Gauss curvature K(rho) about the
/// pole. The Jacobi field lambda'' + K lambda = 0, lambda(0) = 0,
/// lambda'(0) = 1 is integrated once at construction by fixed-step RK4.
class RotSurface {
 public:
  /// rho_max = K.l(). rho_cut defaults to the first zero of lambda, or
  /// rho_max when lambda stays positive. Throws ConfigError when rho_cut
  /// exceeds the first zero.
  explicit RotSurface(FunctionSpec curvature, std::optional<double> rho_cut = std::nullopt,
                      std::size_t steps = 4096);

  const FunctionSpec& curvature() const { return data_->curvature; }
  double rho_cut() const { return data_->rho_cut; }
  double rho_max() const { return data_->rho_max; }
  std::size_t steps() const { return data_->rho.size() - 1; }
  /// First zero of lambda in (0, rho_max], if any.
  std::optional<double> first_zero() const { return data_->first_zero; }
  /// Smallest curvature over the profile (samples, or a 4097-point grid).
  double min_curvature() const { return data_->min_curvature; }
  /// Sup-norm change of lambda at the nodes when the step is halved.
  double refinement_change() const { return data_->refinement_change; }

  /// lambda(rho) and lambda'(rho) on [0, rho_max], dense output by one RK4
  /// sub-step from the node to the left.
  double warp(double rho) const;
  double warp_derivative(double rho) const;
  /// int_0^rho lambda, rho in [0, rho_max].
  double warp_integral(double rho) const;

 private:
  struct Data {
    explicit Data(FunctionSpec k) : curvature(std::move(k)) {}
    FunctionSpec curvature;
    double rho_cut = 0.0;
    double rho_max = 0.0;
    double h = 0.0;
    std::vector<double> rho, lambda, dlambda, cumulative;
    std::optional<double> first_zero;
    double min_curvature = 0.0;
    double refinement_change = 0.0;
  };
  struct Dense {
    double y, dy;
  };
  Dense dense(double rho) const;
  std::shared_ptr<const Data> data_;
};

using ModelManifold = std::variant<SpaceForm, RotSurface>;

/// lambda of the surface as a sampled function on [0, rho_max] with the
/// RK4 dense output between nodes.
FunctionSpec warp_profile(const RotSurface& m);

int model_dimension(const ModelManifold& m);
/// Cut distance: pi/sqrt(kbar), +inf, or the declared rho_cut.
double model_cut(const ModelManifold& m);
/// Largest admissible radius: pi/sqrt(kbar), +inf, or rho_max.
double model_extent(const ModelManifold& m);
/// The curvature bound used for dominance: kbar, or min K.
double model_min_curvature(const ModelManifold& m);
std::string model_name(const ModelManifold& m);

/// Vol(dB(rho)); zero at and beyond the cut.
double boundary_area(const ModelManifold& m, double rho);
/// Right derivative of boundary_area in rho.
double boundary_area_derivative(const ModelManifold& m, double rho);
/// Vol(B(r)) = int_0^r boundary_area.
double model_ball_volume(const ModelManifold& m, double r);

/// Vol_M(B(rho)) / Vol_k(B(rho)) nonincreasing on the grid and within
/// 1e-4 of 1 at the smallest grid point.
VerificationReport bishop_gromov_ratio(const ModelManifold& m, Curvature k,
                                       std::span<const double> rho_grid, Tolerance tol = {});

/// Vol_M(dB(rho)) / Vol_k(dB(rho)) nonincreasing, and the right derivative
/// of the boundary area bounded by ratio * model derivative.
VerificationReport area_ratio_monotonicity(const ModelManifold& m, Curvature k,
                                           std::span<const double> rho_grid,
                                           Tolerance tol = {});

/// lambda^(1/(n-1)) satisfies f'' + k f <= 0 in the support sense on the
/// grid; when equality holds everywhere, lambda = sn_k^(n-1) is checked.
VerificationReport check_root_warp_concavity(const ModelManifold& m, Curvature k,
                                             std::span<const double> grid, Tolerance tol = {});

/// One radius of the equal-volume comparison: Vol_M(B(rbar)) = Vol_k(B(r)).
struct EqualVolumeResult {
  double r = 0.0;
  double rbar = 0.0;
  double residual = 0.0;
  double area_m = 0.0;                 // Vol(dB(p, rbar))
  double area_model = 0.0;             // Vol(dB~(r))
  double area_derivative_m = 0.0;      // right derivative at rbar
  double area_derivative_model = 0.0;  // derivative at r
  double rbar_prime = 0.0;             // area_model / area_m
  double rbar_prime_difference = 0.0;  // finite-difference estimate
  bool discontinuity = false;          // stencil meets the cut or area_m = 0
  VerificationReport report;
};

/// Solves for rbar and checks rbar >= r, area_m <= area_model, the
/// derivative comparison and rbar' >= 1. Throws InfeasibleRadius when
/// Vol_k(B(r)) exceeds the volume of M, DomainError for r outside the
/// model domain.
EqualVolumeResult compare_equal_volume_balls(const ModelManifold& m, Curvature k, double r,
                                             Tolerance tol = {});

/// Largest r with Vol_k(B(r)) <= Vol(M); +inf when both are unbounded.
double equal_volume_feasible_radius(const ModelManifold& m, Curvature k);

/// Engine over a grid, one result per radius.
std::vector<EqualVolumeResult> compare_equal_volume_balls(const ModelManifold& m, Curvature k,
                                                          std::span<const double> r_grid,
                                                          Tolerance tol = {});

std::string to_csv(std::span<const EqualVolumeResult> results);
nlohmann::json to_json(std::span<const EqualVolumeResult> results);

/// Smallest rbar with Vol_M(dB(rbar)) = Vol_k(dB~(r)); checks
/// Vol_M(B(rbar)) >= Vol_k(B(r)). Throws NoSolution when the boundary
/// area never reaches the target.
VerificationReport compare_equal_area_spheres(const ModelManifold& m, Curvature k, double r,
                                              Tolerance tol = {});

/// r/rbar and Vol_M(dB(rbar))/Vol_k(dB~(r)) nonincreasing along the grid.
/// Guaranteed for space forms with kbar >= k, and for surfaces with
/// min K >= k >= 0 while rbar stays below the cut; elsewhere failures are
/// expected-possible-fail.
VerificationReport check_equal_volume_ratios_monotone(const ModelManifold& m, Curvature k,
                                                      std::span<const double> r_grid,
                                                      Tolerance tol = {});

/// "euclidean", "sphere:<kbar>", "hyperbolic:<kbar>" (curvature -|kbar|)
/// in dimension n; "rp2" (K = 1 cut at pi/2) and "bump"
/// (K = 1/(1+rho^2)^2 on [0, 10]) for n = 2.
ModelManifold named_model(const std::string& name, int n = 2);

/// Surface from a two-column CSV (rho, K), interpolated piecewise linearly.
RotSurface load_curvature_profile(const std::filesystem::path& path,
                                  std::optional<double> rho_cut = std::nullopt);

}  // namespace complab
