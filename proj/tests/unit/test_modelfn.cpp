#include <cmath>
#include <numbers>

#include "complab/errors.hpp"
#include "complab/modelfn.hpp"
#include "complab/numerics.hpp"
#include "doctest.h"
#include "generators.hpp"

using namespace complab;
using std::numbers::pi;

namespace {

// Direct formulas, written independently of the library branches.
double sn_oracle(double k, double t) {
  if (k > 0) return std::sin(std::sqrt(k) * t) / std::sqrt(k);
  if (k < 0) return std::sinh(std::sqrt(-k) * t) / std::sqrt(-k);
  return t;
}
double csn_oracle(double k, double t) {
  if (k > 0) return std::cos(std::sqrt(k) * t);
  if (k < 0) return std::cosh(std::sqrt(-k) * t);
  return 1.0;
}
double phi_oracle(double k, double t) {
  if (k > 0) return (1.0 - std::cos(std::sqrt(k) * t)) / k;
  if (k < 0) return (std::cosh(std::sqrt(-k) * t) - 1.0) / (-k);
  return 0.5 * t * t;
}

}  // namespace

TEST_CASE("curvature domain constants") {
  CHECK(Curvature(1.0).r_max() == doctest::Approx(pi));
  CHECK(Curvature(4.0).quarter_period() == doctest::Approx(pi / 4.0));
  CHECK(std::isinf(Curvature(0.0).r_max()));
  CHECK(std::isinf(Curvature(-1.0).quarter_period()));
  CHECK_THROWS_AS(Dimension(1), DomainError);
  CHECK(Dimension(3).value() == 3);
}

TEST_CASE("sn, csn and phi agree with the direct formulas") {
  for (const double k : {-2.0, -1.0, -0.3, 0.0, 0.5, 1.0, 2.0}) {
    const double top = k > 0 ? pi / std::sqrt(k) : 3.0;
    for (const double t : numerics::linspace(0.0, top, 97)) {
      CAPTURE(k);
      CAPTURE(t);
      CHECK(sn(Curvature(k), t) == doctest::Approx(sn_oracle(k, t)).epsilon(1e-13).scale(1.0));
      CHECK(csn(Curvature(k), t) == doctest::Approx(csn_oracle(k, t)).epsilon(1e-13).scale(1.0));
      CHECK(phi(Curvature(k), t) == doctest::Approx(phi_oracle(k, t)).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("small curvature joins the flat branch continuously") {
  for (const double t : {0.1, 1.0, 2.5}) {
    for (const double k : {1e-10, -1e-10, 1e-8, -1e-8}) {
      CAPTURE(k);
      const double series_sn = t - k * t * t * t / 6.0;
      CHECK(sn(Curvature(k), t) == doctest::Approx(series_sn).epsilon(1e-14));
      CHECK(phi(Curvature(k), t) == doctest::Approx(0.5 * t * t - k * std::pow(t, 4) / 24.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("domain guard clamps roundoff and rejects real overshoot") {
  const Curvature one(1.0);
  CHECK(sn(one, pi * (1.0 + 1e-14)) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
  CHECK_THROWS_AS(sn(one, pi * 1.01), DomainError);
  CHECK_THROWS_AS(sn(one, -0.1), DomainError);
  CHECK_THROWS_AS(csn(Curvature(0.0), std::nan("")), DomainError);
  CHECK_THROWS_AS(phi(one, -1.0), DomainError);
}

TEST_CASE("sphere measures and volumes") {
  CHECK(unit_sphere_measure(Dimension(2)) == doctest::Approx(2.0 * pi));
  CHECK(unit_sphere_measure(Dimension(3)) == doctest::Approx(4.0 * pi));
  CHECK(unit_sphere_measure(Dimension(4)) == doctest::Approx(2.0 * pi * pi));
  CHECK(ball_volume(Curvature(1.0), Dimension(3), pi) ==
        doctest::Approx(2.0 * pi * pi).epsilon(1e-12));
  CHECK(ball_volume(Curvature(0.0), Dimension(3), 1.7) ==
        doctest::Approx(4.0 / 3.0 * pi * std::pow(1.7, 3)).epsilon(1e-12));
  CHECK(ball_volume(Curvature(-1.0), Dimension(2), 2.0) ==
        doctest::Approx(2.0 * pi * (std::cosh(2.0) - 1.0)).epsilon(1e-12));
  CHECK(ball_volume(Curvature(1.0), Dimension(2), 0.0) == 0.0);
  for (const double r : numerics::linspace(0.0, pi, 100)) {
    CHECK(std::abs(ball_volume(Curvature(1.0), Dimension(2), r) - 2.0 * pi * (1.0 - std::cos(r))) <
          1e-9);
  }
  CHECK(sphere_area(Curvature(1.0), Dimension(2), pi / 2.0) == doctest::Approx(2.0 * pi));
  CHECK(sphere_area_derivative(Curvature(0.0), Dimension(3), 2.0) == doctest::Approx(16.0 * pi));
}

TEST_CASE("property: pythagorean identity csn^2 + k sn^2 = 1") {
  gen::for_all(400, 11, [](gen::Source& s) {
    const double k = s.curvature();
    const double t = s.radius(k, 1.0, 2.0);
    const double v = std::pow(csn(Curvature(k), t), 2) + k * std::pow(sn(Curvature(k), t), 2);
    CHECK(std::abs(v - 1.0) < 1e-12);
  });
}

TEST_CASE("property: phi is the integral of sn") {
  gen::for_all(60, 12, [](gen::Source& s) {
    const double k = s.curvature();
    const double t = s.radius(k, 0.99, 2.0);
    const double integral =
        numerics::integrate([&](double u) { return sn(Curvature(k), u); }, 0.0, t, {1e-13, 0.0, 50});
    CHECK(phi(Curvature(k), t) == doctest::Approx(integral).epsilon(1e-10).scale(1.0));
  });
}

TEST_CASE("property: csn and the sphere area derivative match central differences") {
  gen::for_all(100, 13, [](gen::Source& s) {
    const double k = s.curvature();
    const double t = s.radius(k, 0.9, 2.0);
    const double h = 1e-5 * std::max(t, 1.0);
    if (t <= h) return;
    const double fd = (sn(Curvature(k), t + h) - sn(Curvature(k), t - h)) / (2.0 * h);
    CHECK(fd == doctest::Approx(csn(Curvature(k), t)).epsilon(1e-7).scale(1.0));
    const int n = s.integer(2, 5);
    const Dimension d(n);
    const double afd = (sphere_area(Curvature(k), d, t + h) - sphere_area(Curvature(k), d, t - h)) / (2.0 * h);
    CHECK(afd == doctest::Approx(sphere_area_derivative(Curvature(k), d, t)).epsilon(1e-6));
  });
}

TEST_CASE("property: ball volume is increasing and additive over radii") {
  gen::for_all(40, 14, [](gen::Source& s) {
    const double k = s.mixed_curvature();
    const int n = s.integer(2, 4);
    const double r1 = s.radius(k, 0.9, 2.0);
    const double r2 = std::min(r1 * 1.1, k > 0 ? 0.99 * pi / std::sqrt(k) : 2.5);
    const double v1 = ball_volume(Curvature(k), Dimension(n), r1);
    const double v2 = ball_volume(Curvature(k), Dimension(n), r2);
    CHECK(v2 >= v1);
    const double shell = numerics::integrate(
        [&](double u) { return sphere_area(Curvature(k), Dimension(n), u); }, r1, r2,
        {1e-12, 0.0, 50});
    CHECK(v2 - v1 == doctest::Approx(shell).epsilon(1e-8).scale(1.0));
  });
}
