#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace normproj {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces an angle into [0, 2π).
inline double wrap_two_pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Reduces an angle into (−π, π].
inline double wrap_pi(double a) {
  double r = wrap_two_pi(a);
  return r > kPi ? r - kTwoPi : r;
}

/// Golden-section search for the minimizer of a unimodal function on [lo, hi].
template <class Fn>
double golden_section_min(Fn&& fn, double lo, double hi, double tol, int max_iter = 300) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fn(c), fd = fn(d);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
  }
  return 0.5 * (a + b);
}

template <class Fn>
double golden_section_max(Fn&& fn, double lo, double hi, double tol, int max_iter = 300) {
  return golden_section_min([&](double x) { return -fn(x); }, lo, hi, tol, max_iter);
}

/// Bisection for a sign change of `fn` on [lo, hi]; `fn(lo)` and `fn(hi)` should differ in sign.
/// Stops when the bracket no longer shrinks in floating point.
template <class Fn>
double bisect_root(Fn&& fn, double lo, double hi, int max_iter = 200) {
  double flo = fn(lo);
  if (flo == 0.0) return lo;
  if (fn(hi) == 0.0) return hi;
  for (int it = 0; it < max_iter; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double fm = fn(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Minimizes a convex function of one variable given its derivative.
/// The minimizer is bracketed by doubling from `x0`, narrowed by golden section on values,
/// then polished by bisection on the derivative sign.
template <class Fn, class Dfn>
double minimize_convex_1d(Fn&& fn, Dfn&& dfn, double x0, double scale) {
  if (!(scale > 0.0)) scale = 1.0;
  double step = scale;
  double lo = x0 - step, hi = x0 + step;
  for (int it = 0; it < 200 && dfn(lo) > 0.0; ++it) {
    step *= 2.0;
    lo = x0 - step;
  }
  for (int it = 0; it < 200 && dfn(hi) < 0.0; ++it) {
    step *= 2.0;
    hi = x0 + step;
  }
  double x = golden_section_min(fn, lo, hi, 1e-6 * (hi - lo));
  double width = 1e-5 * (hi - lo);
  double a = x - width, b = x + width;
  for (int it = 0; it < 200 && dfn(a) > 0.0; ++it) a -= (width *= 2.0);
  for (int it = 0; it < 200 && dfn(b) < 0.0; ++it) b += (width *= 2.0);
  return bisect_root(dfn, a, b);
}

/// Uniform double in [0, 1) from a 64-bit engine, identical on every platform.
template <class Engine>
double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <class Engine>
double uniform(Engine& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

}  // namespace normproj
