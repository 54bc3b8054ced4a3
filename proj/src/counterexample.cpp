#include "normproj/counterexample.hpp"

#include "normproj/error.hpp"
#include "normproj/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace normproj {

namespace {

Eigen::Vector2d unit(double a) { return {std::cos(a), std::sin(a)}; }
Eigen::Vector2d unit_tangent(double a) { return {-std::sin(a), std::cos(a)}; }
Eigen::Vector2d quarter_turn(const Eigen::Vector2d& v, int sign) {
  return sign > 0 ? Eigen::Vector2d(-v.y(), v.x()) : Eigen::Vector2d(v.y(), -v.x());
}

CurveSample make_sample(const CantorSet& k, double t) {
  CantorEval e = cantor_eval(k, t);
  CurveSample s;
  s.t = t;
  s.f = e.f.value;
  s.F = e.F.value;
  s.psi = s.f / (4.0 * (1.0 - s.F));
  s.theta = std::atan(s.psi);
  s.gamma = (1.0 - s.F) * unit(t);
  s.beta = unit(t + kPi / 2 + s.theta);
  return s;
}

}  // namespace

CounterexampleCurve::CounterexampleCurve(CantorSet k, int level) : k_(std::move(k)), level_(level) {
  if (level < 0 || level > k_.level_cap()) throw Error(Errc::InvalidArgument, "curve level exceeds the Cantor level cap");
  std::vector<Interval> cover = k_.level_intervals(level);
  grid_.reserve(3 * cover.size());
  for (std::size_t i = 0; i < cover.size(); ++i) {
    double lo = i == 0 ? 0.0 : cover[i].lo;
    double hi = i + 1 == cover.size() ? 1.0 : cover[i].hi;
    grid_.push_back(make_sample(k_, lo));
    grid_.push_back(make_sample(k_, hi));
    if (i + 1 < cover.size()) {
      CurveSample mid = make_sample(k_, 0.5 * (hi + cover[i + 1].lo));
      mid.gap_midpoint = true;
      grid_.push_back(mid);
    }
  }
  end_ = make_sample(k_, 1.0);
  // Outwardness: the normal must point away from the origin along the arc.
  CurveSample probe = make_sample(k_, 0.5);
  orientation_ = probe.gamma.dot(quarter_turn(probe.beta, +1)) > 0.0 ? +1 : -1;
}

CurveSample CounterexampleCurve::sample(double t) const { return make_sample(k_, t); }

double CounterexampleCurve::normal_angle(double t) const { return t + sample(t).theta; }

double CounterexampleCurve::beta_end_angle() const { return 1.0 + kPi / 2 + end_.theta; }

bool CounterexampleCurve::beta_monotone() const {
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    double a = grid_[i - 1].t + kPi / 2 + grid_[i - 1].theta;
    double b = grid_[i].t + kPi / 2 + grid_[i].theta;
    if (!(b > a)) return false;
  }
  return true;
}

CounterexampleCurve curve_samples(const CantorSet& k, int level) { return CounterexampleCurve(k, level); }

Eigen::Vector2d gauss_on_gamma(const CounterexampleCurve& curve, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(Errc::InvalidArgument, "curve parameter must lie in [0,1]");
  return quarter_turn(curve.beta(t), curve.orientation());
}

MeasureBounds increasing_image_bounds(const CantorSet& k, int level, const std::function<double(double)>& fn,
                                      double gap_lipschitz, double a, double b) {
  if (!(a >= 0.0 && b <= 1.0 && a < b)) throw Error(Errc::InvalidArgument, "need 0 <= a < b <= 1");
  std::vector<Interval> gaps = k.gaps(level);
  long double removed = 0.0L, removed_length = 0.0L;
  for (const Interval& g : gaps) {
    double lo = std::max(g.lo, a), hi = std::min(g.hi, b);
    if (hi <= lo) continue;
    removed += fn(hi) - fn(lo);
    removed_length += hi - lo;
  }
  MeasureBounds out;
  out.level = level;
  double upper = static_cast<double>((fn(b) - fn(a)) - removed);
  double remaining = std::max(0.0, static_cast<double>((b - a) - removed_length));
  out.upper = upper;
  out.lower = upper - gap_lipschitz * remaining;
  return out;
}

double theta_gap_lipschitz(const CounterexampleCurve& curve) {
  // dθ/dt ≤ ψ' = f'/(4(1−F)) + f F'/(4(1−F)²) with f' = ½ on gaps, f ≤ 1, F' = f/4 ≤ ¼.
  Bracketed f1 = F_eval(curve.cantor(), 1.0);
  double one_minus = 1.0 - f1.upper();
  return 1.0 / (8.0 * one_minus) + 1.0 / (16.0 * one_minus * one_minus);
}

MeasureBounds image_measure_bounds(const CounterexampleCurve& curve, int level) {
  if (level < 0 || level > curve.cantor().level_cap()) throw Error(Errc::InvalidArgument, "level exceeds cap");
  return increasing_image_bounds(curve.cantor(), level, [&](double t) { return curve.theta(t); },
                                 theta_gap_lipschitz(curve));
}

MeasureBounds f_image_measure_bounds(const CantorSet& k, int level) {
  return increasing_image_bounds(k, level, [&](double t) { return f_eval(k, t).value; }, 0.5);
}

namespace {

// Quintic Hermite interpolant on [a, a + w] matching value, first and second derivative at both ends.
struct Quintic {
  double a, w;
  std::array<double, 6> c;  // coefficients in τ = (φ − a)/w

  Quintic(double a_, double w_, double h0, double d0, double s0, double h1, double d1, double s1) : a(a_), w(w_) {
    // Hermite basis in τ, collected into monomial coefficients.
    const double v[6] = {h0, w * d0, w * w * s0, w * w * s1, w * d1, h1};
    const double basis[6][6] = {
        {1, 0, 0, -10, 15, -6},          // value at 0
        {0, 1, 0, -6, 8, -3},            // slope at 0
        {0, 0, 0.5, -1.5, 1.5, -0.5},    // curvature at 0
        {0, 0, 0, 0.5, -1, 0.5},         // curvature at 1
        {0, 0, 0, -4, 7, -3},            // slope at 1
        {0, 0, 0, 10, -15, 6},           // value at 1
    };
    c.fill(0.0);
    for (int b = 0; b < 6; ++b)
      for (int j = 0; j < 6; ++j) c[j] += v[b] * basis[b][j];
  }
  double value(double phi) const {
    double t = (phi - a) / w;
    return c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5]))));
  }
  double slope(double phi) const {
    double t = (phi - a) / w;
    return (c[1] + t * (2 * c[2] + t * (3 * c[3] + t * (4 * c[4] + t * 5 * c[5])))) / w;
  }
  double curvature(double phi) const {
    double t = (phi - a) / w;
    return (2 * c[2] + t * (6 * c[3] + t * (12 * c[4] + t * 20 * c[5]))) / (w * w);
  }
};

}  // namespace

CounterexampleNorm build_norm(const CounterexampleCurve& curve, const GlueOptions& options) {
  const std::size_t n = options.rows;
  if (n < 16 || n % 2 != 0) throw Error(Errc::InvalidArgument, "row count must be even and at least 16");
  if (n > (std::size_t{1} << 24)) throw Error(Errc::TooLarge, "row count above 2^24");
  const double theta1 = curve.theta1();
  if (!(theta1 > 0.0 && theta1 < kPi / 2 - 1.0))
    throw Error(Errc::InvalidArgument, "curve violates the end-angle condition of β");
  if (!curve.beta_monotone()) throw Error(Errc::InvalidArgument, "β is not injective on the sample grid");

  const double phi1 = curve.end_normal_angle();
  const double step = kTwoPi / static_cast<double>(n);
  const std::size_t half = n / 2;
  std::vector<double> h(n), dh(n);
  std::vector<ArcSource> src(n);

  // Γ rows: locate the parameter whose normal has the row angle, then read off the support data.
  double t_prev = 0.0;
  std::size_t glue_begin = half;
  for (std::size_t i = 0; i < half; ++i) {
    double phi = step * static_cast<double>(i);
    if (phi > phi1) {
      glue_begin = i;
      break;
    }
    double t = 0.0;
    if (i > 0) {
      auto offset = [&](double s) { return curve.normal_angle(s) - phi; };
      double hi = std::min(1.0, t_prev + step);
      t = offset(hi) < 0.0 ? bisect_root(offset, t_prev, 1.0) : bisect_root(offset, t_prev, hi);
    }
    t_prev = t;
    Eigen::Vector2d x = curve.gamma(t);
    h[i] = x.dot(unit(phi));
    dh[i] = x.dot(unit_tangent(phi));
    src[i] = ArcSource::gamma;
  }

  const Eigen::Vector2d x1 = curve.gamma(1.0);
  const double h0 = x1.dot(unit(phi1)), d0 = x1.dot(unit_tangent(phi1));
  const Eigen::Vector2d xpi = curve.gamma(0.0) * -1.0;
  const double hpi = xpi.dot(unit(kPi)), dpi = xpi.dot(unit_tangent(kPi));
  // Radius of the circular arc that best joins the two ends.
  const Eigen::Vector2d du = unit(kPi) - unit(phi1);
  const double base_radius = (xpi - x1).dot(du) / du.squaredNorm();

  const std::array<double, 5> scales = {1.0, 0.5, 2.0, 0.25, 4.0};
  for (double scale : scales) {
    const double rho = options.curvature_slack * scale * base_radius;
    Quintic q(phi1, kPi - phi1, h0, d0, rho - h0, hpi, dpi, rho - hpi);
    bool convex = true;
    const int checks = 4096;
    for (int j = 0; j <= checks && convex; ++j) {
      double phi = phi1 + (kPi - phi1) * j / checks;
      if (!(q.value(phi) + q.curvature(phi) > 0.0)) convex = false;
    }
    if (!convex) continue;
    for (std::size_t i = glue_begin; i < half; ++i) {
      double phi = step * static_cast<double>(i);
      h[i] = q.value(phi);
      dh[i] = q.slope(phi);
      src[i] = ArcSource::glue;
    }
    for (std::size_t i = 0; i < half; ++i) {
      h[i + half] = h[i];
      dh[i + half] = dh[i];
      src[i + half] = src[i] == ArcSource::gamma ? ArcSource::neg_gamma : ArcSource::neg_glue;
    }
    auto table = std::make_shared<SupportTable>(h, dh, src,
                                                TableOrigin{curve.cantor().branches(), curve.cantor().ratio(),
                                                            curve.level()});
    TableDiagnostics diag = table->diagnose();
    if (!diag.valid()) continue;
    GlueReport rep;
    rep.strategy = "quintic-hermite";
    rep.radius_scale = scale;
    rep.symmetry_defect = diag.symmetry_defect;
    rep.min_discrete_radius = diag.min_discrete_radius;
    rep.joint_mismatch = std::max({std::abs(q.value(phi1) - h0), std::abs(q.slope(phi1) - d0),
                                   std::abs(q.value(kPi) - hpi), std::abs(q.slope(kPi) - dpi)});
    return {NormModel::support_table(table), table, rep};
  }
  throw Error(Errc::GlueFailed, "no glue arc passed the convexity check");
}

}  // namespace normproj
