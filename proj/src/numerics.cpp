#include "complab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace complab::numerics {

namespace {

struct SimpsonPanel {
  double a, m, b;
  double fa, fm, fb;
  double whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const ScalarFn& fn, const SimpsonPanel& p, double tol, int depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = fn(lm);
  const double frm = fn(rm);
  const double left = simpson(p.a, p.m, p.fa, flm, p.fm);
  const double right = simpson(p.m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  // Below the roundoff floor further halving cannot reduce delta.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                       (std::abs(left) + std::abs(right));
  if (depth <= 0 || std::abs(delta) <= std::max(15.0 * tol, floor) ||
      !(p.m > p.a && p.b > p.m)) {
    return left + right + delta / 15.0;
  }
  return adapt(fn, {p.a, lm, p.m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1) +
         adapt(fn, {p.m, rm, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const ScalarFn& fn, double a, double b,
                 const QuadratureOptions& opts) {
  if (a == b) return 0.0;
  if (a > b) return -integrate(fn, b, a, opts);
  const double m = 0.5 * (a + b);
  const double fa = fn(a), fm = fn(m), fb = fn(b);
  const double whole = simpson(a, b, fa, fm, fb);

  double tol = opts.abs_tol;
  if (opts.rel_tol > 0.0) {
    // The coarse panel can miss mass entirely; a 9-point trapezoid is a
    // safer magnitude estimate.
    double probe = 0.0;
    for (int i = 0; i <= 8; ++i) {
      const double w = (i == 0 || i == 8) ? 0.5 : 1.0;
      probe += w * std::abs(fn(a + (b - a) * i / 8.0));
    }
    probe *= (b - a) / 8.0;
    if (probe > 0.0) tol = std::min(tol, opts.rel_tol * probe);
  }
  return adapt(fn, {a, m, b, fa, fm, fb, whole}, tol, opts.max_depth);
}

RootResult find_root_increasing(const ScalarFn& g, double lo, double hi,
                                const RootOptions& opts) {
  double glo = g(lo);
  double ghi = g(hi);
  RootResult res;
  if (glo >= 0.0) return {lo, glo, 0};
  if (ghi <= 0.0) return {hi, ghi, 0};

  int side = 0;  // which end was retained last (Illinois bookkeeping)
  double best = lo, best_res = glo;
  for (int it = 1; it <= opts.max_iter; ++it) {
    res.iterations = it;
    const double width = hi - lo;
    double x = lo - glo * width / (ghi - glo);
    const double mid = 0.5 * (lo + hi);
    // Fall back to bisection whenever the secant point hugs an endpoint.
    if (!(x > lo + 0.01 * width && x < hi - 0.01 * width)) x = mid;
    const double gx = g(x);
    if (std::abs(gx) < std::abs(best_res)) {
      best = x;
      best_res = gx;
    }
    if (std::abs(gx) <= opts.residual_tol) return {x, gx, it};
    if (gx < 0.0) {
      lo = x;
      glo = gx;
      if (side == -1) ghi *= 0.5;
      side = -1;
    } else {
      hi = x;
      ghi = gx;
      if (side == +1) glo *= 0.5;
      side = +1;
    }
    if (hi - lo <= opts.width_tol) break;
  }
  // Report the bracket end closest to a sign change, preferring the
  // evaluated point with the smallest residual.
  res.x = best;
  res.residual = best_res;
  return res;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = hi;
  return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  auto e = linspace(std::log(lo), std::log(hi), n);
  for (auto& v : e) v = std::exp(v);
  if (n > 0) {
    e.front() = lo;
    e.back() = hi;
  }
  return e;
}

JacobiState rk4_jacobi_step(const ScalarFn& curvature, double t, double h,
                            JacobiState s) {
  const double k0 = curvature(t);
  const double kh = curvature(t + 0.5 * h);
  const double k1 = curvature(t + h);
  const double a1 = s.dy, b1 = -k0 * s.y;
  const double a2 = s.dy + 0.5 * h * b1, b2 = -kh * (s.y + 0.5 * h * a1);
  const double a3 = s.dy + 0.5 * h * b2, b3 = -kh * (s.y + 0.5 * h * a2);
  const double a4 = s.dy + h * b3, b4 = -k1 * (s.y + h * a3);
  return {s.y + h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4),
          s.dy + h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)};
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

int SplitMix64::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(next() % span);
}

}  // namespace complab::numerics
