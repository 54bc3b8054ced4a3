#include "normproj/cantor.hpp"

#include "normproj/error.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <string>

namespace normproj {

CantorSet::CantorSet(int branches, double ratio, int level_cap) : m_(branches), r_(ratio), cap_(level_cap) {
  if (m_ < 2) throw Error(Errc::InvalidArgument, "Cantor set needs at least two branches");
  if (!(ratio > 0.0) || !(m_ * ratio < 1.0))
    throw Error(Errc::InvalidArgument, "Cantor ratio must satisfy 0 < r < 1/m");
  if (cap_ < 1 || cap_ > 60) throw Error(Errc::InvalidArgument, "level cap must lie in [1, 60]");
  g_ = (1.0 - m_ * r_) / (m_ - 1);
  // Self-similarity: I = Σ_j r (j/m + I/m) + Σ_{j<m−1} g (j+1)/m.
  double branch_part = r_ * (m_ - 1) / 2.0;
  double gap_part = g_ * (m_ - 1) / 2.0;
  integral_ = (branch_part + gap_part) / (1.0 - r_);
}

double CantorSet::dimension() const { return std::log(static_cast<double>(m_)) / std::log(1.0 / r_); }

double CantorSet::covering_length(int k) const { return std::pow(m_ * r_, k); }

std::vector<Interval> CantorSet::level_intervals(int k) const {
  if (k < 0 || k > cap_) throw Error(Errc::InvalidArgument, "level out of range");
  if (std::pow(static_cast<double>(m_), k) > 1e8) throw Error(Errc::TooLarge, "too many covering intervals");
  std::vector<long double> left{0.0L};
  long double len = 1.0L;
  const long double stride = static_cast<long double>(r_) + static_cast<long double>(g_);
  for (int level = 0; level < k; ++level) {
    std::vector<long double> next;
    next.reserve(left.size() * m_);
    for (long double a : left)
      for (int j = 0; j < m_; ++j) next.push_back(a + j * stride * len);
    left.swap(next);
    len *= r_;
  }
  std::vector<Interval> out;
  out.reserve(left.size());
  for (long double a : left) out.push_back({static_cast<double>(a), static_cast<double>(a + len)});
  return out;
}

std::vector<Interval> CantorSet::gaps(int k) const {
  if (k < 0 || k > cap_) throw Error(Errc::InvalidArgument, "level out of range");
  if (std::pow(static_cast<double>(m_), k) > 1e8) throw Error(Errc::TooLarge, "too many gaps");
  std::vector<Interval> out;
  std::vector<long double> left{0.0L};
  long double len = 1.0L;
  const long double r = r_, stride = static_cast<long double>(r_) + static_cast<long double>(g_);
  for (int level = 0; level < k; ++level) {
    std::vector<long double> next;
    next.reserve(left.size() * m_);
    for (long double a : left) {
      for (int j = 0; j < m_; ++j) {
        long double lo = a + j * stride * len;
        next.push_back(lo);
        if (j + 1 < m_) out.push_back({static_cast<double>(lo + r * len), static_cast<double>(lo + stride * len)});
      }
    }
    left.swap(next);
    len *= r;
  }
  std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  return out;
}

namespace {

void require_unit(double t, const char* what) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(Errc::InvalidArgument, std::string(what) + " must lie in [0,1]");
}

// Interval-tree descent shared by the staircase and its integral.
// The input is treated as uncertain by a few ulps so that breakpoints produced by rounding
// snap to their exact staircase values.
struct Descent {
  long double prefix = 0.0L;   // staircase value at the left end of the current interval
  long double weight = 1.0L;   // staircase increase across the current interval, m^{-level}
  long double length = 1.0L;   // length of the current interval, r^level
  long double integral = 0.0L; // ∫ of the staircase from 0 to the left end of the current interval
  long double x = 0.0L;        // input in local coordinates of the current interval
  long double err = 0.0L;      // uncertainty of x in local coordinates
  bool exact = false;
  long double exact_value = 0.0L;  // staircase value when exact
  long double exact_integral = 0.0L;
};

Descent descend(const CantorSet& k, double t) {
  const int m = k.branches();
  const long double r = k.ratio();
  const long double g = k.gap();
  const long double stride = r + g;
  const long double total = k.staircase_integral();
  Descent d;
  d.x = t;
  d.err = 4.0L * DBL_EPSILON * std::max(std::abs(t), DBL_MIN);
  for (int level = 0; level < k.level_cap(); ++level) {
    const long double wstep = d.weight / m;
    if (d.x <= d.err) {
      d.exact = true;
      d.exact_value = d.prefix;
      d.exact_integral = d.integral + d.length * d.x * d.prefix;
      return d;
    }
    if (d.x >= 1.0L - d.err) {
      d.exact = true;
      d.exact_value = d.prefix + d.weight;
      d.exact_integral = d.integral + d.length * (d.prefix + d.weight * total) +
                         d.length * (d.x - 1.0L) * (d.prefix + d.weight);
      return d;
    }
    int j = static_cast<int>(std::floor(d.x / stride));
    j = std::clamp(j, 0, m - 1);
    long double lo = j * stride, hi = lo + r;
    // Integral over the whole branches and gaps left of branch j.
    auto left_part = [&](int branches_before) {
      long double acc = 0.0L;
      for (int i = 0; i < branches_before; ++i) {
        acc += r * (d.prefix + wstep * i + wstep * total);
        acc += g * (d.prefix + wstep * (i + 1));
      }
      return d.length * acc;
    };
    if (d.x < lo - d.err) {
      // Rounding put x just left of the branch; it sits in gap j−1.
      long double gap_lo = lo - g;
      d.exact = true;
      d.exact_value = d.prefix + wstep * j;
      d.exact_integral = d.integral + left_part(j) - d.length * g * d.exact_value +
                         d.length * (d.x - gap_lo) * d.exact_value;
      return d;
    }
    if (std::abs(d.x - lo) <= d.err) {
      d.exact = true;
      d.exact_value = d.prefix + wstep * j;
      d.exact_integral = d.integral + left_part(j) + d.length * (d.x - lo) * d.exact_value;
      return d;
    }
    if (d.x >= hi - d.err) {
      d.exact = true;
      d.exact_value = d.prefix + wstep * (j + 1);
      d.exact_integral = d.integral + left_part(j) + d.length * r * (d.prefix + wstep * j + wstep * total) +
                         d.length * (d.x - hi) * d.exact_value;
      return d;
    }
    d.integral += left_part(j);
    d.prefix += wstep * j;
    d.weight = wstep;
    d.length *= r;
    d.x = (d.x - lo) / r;
    d.err = d.err / r + 4.0L * LDBL_EPSILON;
    if (d.err > 1e-3L) break;
  }
  return d;
}

}  // namespace

namespace {

Bracketed staircase_from(const Descent& d) {
  if (d.exact) return {static_cast<double>(d.exact_value), 0.0};
  return {static_cast<double>(d.prefix + d.weight / 2), static_cast<double>(d.weight / 2)};
}

Bracketed integral_from(const Descent& d, double u) {
  long double c_int, c_err;
  if (d.exact) {
    c_int = d.exact_integral;
    c_err = d.length * d.err;
  } else {
    // Staircase on the unresolved interval lies between prefix and prefix + weight.
    long double part = d.length * d.x;
    c_int = d.integral + part * (d.prefix + d.weight / 2);
    c_err = part * d.weight / 2 + d.length * d.err;
  }
  long double uu = u;
  long double value = (c_int + uu * uu / 2.0L) / 8.0L;
  double err = static_cast<double>(c_err / 8.0L) + 4.0 * DBL_EPSILON * static_cast<double>(value);
  return {static_cast<double>(value), err};
}

}  // namespace

Bracketed staircase(const CantorSet& k, double t) {
  require_unit(t, "staircase argument");
  return staircase_from(descend(k, t));
}

Bracketed f_eval(const CantorSet& k, double t) {
  Bracketed c = staircase(k, t);
  return {0.5 * (c.value + t), 0.5 * c.error_bound};
}

Bracketed F_eval(const CantorSet& k, double u) {
  require_unit(u, "F argument");
  return integral_from(descend(k, u), u);
}

CantorEval cantor_eval(const CantorSet& k, double t) {
  require_unit(t, "Cantor argument");
  Descent d = descend(k, t);
  Bracketed c = staircase_from(d);
  return {{0.5 * (c.value + t), 0.5 * c.error_bound}, integral_from(d, t)};
}

}  // namespace normproj
