#pragma once

#include <vector>

namespace normproj {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// Self-similar Cantor set in [0,1] with `branches` pieces of length `ratio`, equally spaced.
class CantorSet {
 public:
  explicit CantorSet(int branches = 2, double ratio = 1.0 / 3.0, int level_cap = 40);

  int branches() const { return m_; }
  double ratio() const { return r_; }
  int level_cap() const { return cap_; }
  /// Length of each first-level gap.
  double gap() const { return g_; }
  double dimension() const;
  /// Left end of branch j at the first level.
  double branch_offset(int j) const { return j * (r_ + g_); }
  /// ∫₀¹ of the normalized staircase.
  double staircase_integral() const { return integral_; }

  /// The m^k covering intervals at level k, left to right.
  std::vector<Interval> level_intervals(int k) const;
  /// All gaps created at levels 1..k, left to right.
  std::vector<Interval> gaps(int k) const;
  /// Total length of the level-k covering, (m r)^k.
  double covering_length(int k) const;

 private:
  int m_;
  double r_;
  int cap_;
  double g_;
  double integral_;
};

/// A value with a bound on its distance to the exact result.
struct Bracketed {
  double value = 0.0;
  double error_bound = 0.0;
  double lower() const { return value - error_bound; }
  double upper() const { return value + error_bound; }
};

/// Normalized measure of [0, t] ∩ K. Exact at breakpoints and in gaps; otherwise
/// the descent stops once the input's rounding uncertainty fills the current interval.
Bracketed staircase(const CantorSet& k, double t);
/// ½(staircase(t) + t).
Bracketed f_eval(const CantorSet& k, double t);
/// ¼ ∫₀ᵘ f.
Bracketed F_eval(const CantorSet& k, double u);

struct CantorEval {
  Bracketed f;
  Bracketed F;
};

/// f and F from a single descent.
CantorEval cantor_eval(const CantorSet& k, double t);

}  // namespace normproj
