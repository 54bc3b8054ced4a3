#include "normproj/checks.hpp"

#include "normproj/boxdim.hpp"
#include "normproj/counterexample.hpp"
#include "normproj/error.hpp"
#include "normproj/numeric.hpp"
#include "normproj/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

namespace normproj {

namespace {

constexpr double kNormalImageLower10 = 0.12693824019955769;
constexpr int kNormLevel = 10;

struct Context {
  CheckConfig config;
  CounterexampleCurve curve{CantorSet(), kNormLevel};
  std::optional<CounterexampleNorm> ce;
  std::optional<Error> ce_error;

  explicit Context(const CheckConfig& c) : config(c) {
    try {
      GlueOptions o;
      o.curvature_slack = c.glue_slack;
      ce = build_norm(curve, o);
    } catch (const Error& e) {
      ce_error = e;
    }
  }

  const NormModel& counterexample() const {
    if (!ce) throw *ce_error;
    return ce->norm;
  }

  std::vector<NormModel> planar_models() const {
    Eigen::MatrixXd q(2, 2);
    q << 2.0, 0.3, 0.3, 0.5;
    return {NormModel::euclidean(), NormModel::lp(1.5), NormModel::lp(3.0), NormModel::lp(8.0),
            NormModel::inner_product(q), counterexample()};
  }
};

Eigen::VectorXd v2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

Eigen::VectorXd random_vector(std::mt19937_64& rng, int n) {
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = uniform(rng, -1, 1);
  return x;
}

double cross(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a(0) * b(1) - a(1) * b(0); }

double angle_between(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::abs(std::atan2(cross(a, b), a.dot(b)));
}

// Boolean conditions are folded into the defect as a unit penalty.
double penalty(bool ok) { return ok ? 0.0 : 1.0; }

struct Check {
  const char* name;
  double tolerance;
  std::function<void(const Context&, CheckReport&)> run;
};

void gauss_homeomorphism(const Context& ctx, CheckReport& r) {
  std::vector<NormModel> models = {NormModel::lp(1.5), NormModel::lp(2.0), NormModel::lp(3.0), NormModel::lp(8.0),
                                   ctx.counterexample()};
  std::ostringstream d;
  for (const NormModel& n : models) {
    GaussReport g = check_gauss_properties(n, 2048);
    r.worst_defect = std::max({r.worst_defect, g.antipodality_defect, penalty(g.monotone),
                               penalty(g.min_inner_product > 0.0)});
    r.samples += g.grid_size;
    d << n.describe() << ": antipodality " << g.antipodality_defect << ", min <v,G(v)> " << g.min_inner_product
      << (g.monotone ? "" : ", not monotone") << "; ";
  }
  r.detail = d.str();
}

void inverse_round_trip(const Context& ctx, CheckReport& r) {
  for (const NormModel& n : ctx.planar_models()) {
    for (int j = 0; j < 256; ++j) {
      double a = kTwoPi * (j + 0.5) / 256;
      Eigen::VectorXd w = v2(std::cos(a), std::sin(a));
      SpherePoint x = inverse_gauss(n, w);
      r.worst_defect = std::max({r.worst_defect, std::abs(eval_norm(n, x.coords) - 1.0),
                                 angle_between(gauss_map(n, x.coords), w)});
      ++r.samples;
    }
  }
  r.detail = "|‖G⁻¹(w)‖ − 1| and angle(G(G⁻¹(w)), w) over 256 directions per model";
}

void g_fixed_points(const Context& ctx, CheckReport& r) {
  Eigen::MatrixXd q(2, 2);
  q << 2.0, 0.3, 0.3, 0.5;
  std::vector<NormModel> models = {NormModel::lp(1.5), NormModel::lp(3.0), NormModel::inner_product(q),
                                   ctx.counterexample()};
  std::ostringstream d;
  for (const NormModel& n : models) {
    FixedPoints fp = find_gauss_fixed_points(n);
    ProjectionFamily fam = family_from_norm(n);
    for (const SpherePoint* p : {&fp.farthest, &fp.closest}) {
      HyperplaneNormal v(p->coords.normalized());
      double miss = angle_between(associated_g(fam, v).vector(), v.vector());
      r.worst_defect = std::max(r.worst_defect, std::min(miss, kPi - miss));
      ++r.samples;
    }
    r.worst_defect = std::max({r.worst_defect, fp.farthest_defect, fp.closest_defect});
    d << n.describe() << ": farthest " << fp.farthest.polar_angle << ", closest " << fp.closest.polar_angle << "; ";
  }
  r.detail = d.str();
}

void hyperplane_reduction(const Context& ctx, CheckReport& r) {
  std::mt19937_64 rng(ctx.config.seed);
  for (const NormModel& n : ctx.planar_models()) {
    for (int i = 0; i < 100; ++i) {
      HyperplaneNormal w = HyperplaneNormal::from_angle(uniform(rng, 0, kPi));
      Eigen::VectorXd x = random_vector(rng, 2);
      r.worst_defect = std::max(r.worst_defect, (project_hyperplane(n, w, x) - project_hyperplane_direct(n, w, x)).norm());
      ++r.samples;
    }
  }
  r.detail = "support-point route vs direct minimization, 100 triples per model";
}

void kernel_collinearity(const Context& ctx, CheckReport& r) {
  std::mt19937_64 rng(ctx.config.seed + 1);
  for (const NormModel& n : ctx.planar_models()) {
    for (int k = 0; k < 10; ++k) {
      HyperplaneNormal w = HyperplaneNormal::from_angle(uniform(rng, 0, kPi));
      Eigen::VectorXd u = inverse_gauss(n, w.vector()).coords.normalized();
      for (int i = 0; i < 10; ++i) {
        Eigen::VectorXd x = random_vector(rng, 2);
        Eigen::VectorXd d = x - project_hyperplane(n, w, x);
        if (d.norm() < 1e-3) continue;
        r.worst_defect = std::max(r.worst_defect, std::abs(cross(d.normalized(), u)));
        ++r.samples;
      }
    }
  }
  r.detail = "|x − P(x)| direction against the support point G⁻¹(w)";
}

void projector_invariants(const Context& ctx, CheckReport& r) {
  std::mt19937_64 rng(ctx.config.seed + 2);
  for (const NormModel& n : ctx.planar_models()) {
    ProjectionFamily fam = family_from_norm(n);
    for (int i = 0; i < 100; ++i) {
      HyperplaneNormal w = HyperplaneNormal::from_angle(uniform(rng, 0, kPi));
      LinearProjector p = fam.projector(w);
      Eigen::VectorXd x = random_vector(rng, 2);
      Eigen::VectorXd on = x - x.dot(w.vector()) * w.vector();
      r.worst_defect = std::max({r.worst_defect, (p.matrix * p.matrix - p.matrix).norm(), (p.apply(on) - on).norm(),
                                 std::abs(p.apply(x).dot(w.vector())), p.apply(p.kernel_dir).norm()});
      ++r.samples;
    }
  }
  r.detail = "P² = P, P = id on V, range in V, P(kernel) = 0";
}

void intertwiner_identity(const Context& ctx, CheckReport& r) {
  std::mt19937_64 rng(ctx.config.seed + 3);
  std::vector<ProjectionFamily> fams = {family_from_norm(NormModel::lp(3.0)), family_from_norm(ctx.counterexample()),
                                        angle_family([](double a) { return kPi / 2 + 0.4 * std::sin(2 * a); })};
  for (int i = 0; i < 100; ++i) {
    const ProjectionFamily& fam = fams[i % fams.size()];
    HyperplaneNormal v = HyperplaneNormal::from_angle(uniform(rng, 0, kPi));
    LinearProjector f = fam.projector(v);
    HyperplaneNormal gv = associated_g(fam, v);
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(2, 2) - gv.vector() * gv.vector().transpose();
    Intertwiner h = construct_intertwiner(f.matrix, g);
    Eigen::VectorXd x = random_vector(rng, 2);
    r.worst_defect = std::max({r.worst_defect, (h.apply(f.apply(x)) - g * x).norm(),
                               (h.apply_inverse(g * x) - f.apply(x)).norm()});
    ++r.samples;
  }
  r.detail = "h∘P_V = P^eucl_g(V) and its inverse on 100 samples";
}

double shadow_dimension(const LinearProjector& p, const PointCloud& cloud, const std::vector<double>& deltas) {
  std::vector<double> s = shadow_coordinates(p, cloud);
  std::vector<std::size_t> counts;
  for (double d : deltas) counts.push_back(count_bins(s, d));
  return fit_dimension(deltas, counts).slope;
}

void intertwiner_dimension(const Context& ctx, CheckReport& r) {
  PointCloud cloud = cantor_product(1.0 / 3.0, 10);
  std::vector<double> deltas = default_scales(cloud).deltas();
  std::ostringstream d;
  for (const NormModel& n : {NormModel::lp(3.0), ctx.counterexample()}) {
    ProjectionFamily fam = family_from_norm(n);
    for (const Eigen::VectorXd& u : {v2(0, 1), v2(1, 1).normalized().eval()}) {
      HyperplaneNormal w(gauss_map(n, u));
      LinearProjector f = fam.projector(w);
      LinearProjector g = make_projector(HyperplaneNormal(u), u);
      double kernel_miss = std::abs(cross(f.kernel_dir.normalized(), u));
      double df = shadow_dimension(f, cloud, deltas), dg = shadow_dimension(g, cloud, deltas);
      r.worst_defect = std::max({r.worst_defect, std::abs(df - dg), kernel_miss > 1e-6 ? 1.0 : 0.0});
      r.samples += 2;
      d << n.describe() << " kernel (" << u(0) << "," << u(1) << "): " << df << " vs " << dg << "; ";
    }
  }
  r.detail = d.str();
}

void gmap_round_trip(const Context&, CheckReport& r) {
  GMap g = [](const HyperplaneNormal& v) { return HyperplaneNormal::from_angle(v.angle() + 0.3 * std::sin(2 * v.angle())); };
  ProjectionFamily fam = family_from_gmap(g);
  DirectionGrid grid{720};
  for (int j = 0; j < grid.count; ++j) {
    HyperplaneNormal v = grid.normal(j);
    r.worst_defect = std::max(r.worst_defect, (associated_g(fam, v).vector() - g(v).vector()).norm());
    ++r.samples;
  }
  r.detail = "associated map of the family built from g recovers g on 720 directions";
}

void angle_family_kernels(const Context&, CheckReport& r) {
  auto alpha = [](double a) { return kPi / 2 + 0.4 * std::sin(2 * a); };
  ProjectionFamily fam = angle_family(alpha);
  DirectionGrid grid{720};
  for (int j = 0; j < grid.count; ++j) {
    HyperplaneNormal v = grid.normal(j);
    Eigen::Vector2d line = v.line_direction();
    double a = std::atan2(line.y(), line.x());
    if (a < 0) a += kPi;
    if (a >= kPi) a -= kPi;
    Eigen::VectorXd u = v2(std::cos(a + alpha(a)), std::sin(a + alpha(a)));
    HyperplaneNormal expected(u);
    r.worst_defect = std::max(r.worst_defect, (associated_g(fam, v).vector() - expected.vector()).norm());
    ++r.samples;
  }
  r.detail = "g(V) is the normal of the kernel line at angle L + α(L)";
}

void conjugation(const Context& ctx, CheckReport& r) {
  std::mt19937_64 rng(ctx.config.seed + 4);
  for (int trial = 0; trial < 50; ++trial) {
    for (int n : {2, 3}) {
      Eigen::MatrixXd a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = uniform(rng, -1, 1);
      Eigen::MatrixXd q = a * a.transpose() + 0.2 * Eigen::MatrixXd::Identity(n, n);
      NormModel model = NormModel::inner_product(q);
      for (int m : {1, n - 1}) {
        Eigen::MatrixXd v(n, m);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < m; ++j) v(i, j) = uniform(rng, -1, 1);
        Eigen::VectorXd x = random_vector(rng, n);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
        Eigen::MatrixXd basis = qr.householderQ() * Eigen::MatrixXd::Identity(n, m);
        Eigen::VectorXd c = conjugate_projection(q, v, x);
        Eigen::MatrixXd gram = v.transpose() * q * v;
        Eigen::VectorXd exact = v * gram.ldlt().solve(v.transpose() * q * x);
        // The iterative minimizer only agrees to its own stopping tolerance; compare norms of residuals.
        Eigen::VectorXd direct = project_subspace_direct(model, basis, x);
        double gap = eval_norm(model, x - c) - eval_norm(model, x - direct);
        r.worst_defect = std::max({r.worst_defect, (c - exact).norm(), std::max(gap, 0.0)});
        ++r.samples;
      }
    }
  }
  r.detail = "Q^{1/2} conjugation vs normal equations and direct Q-norm minimization";
}

void lp_witness(const Context& ctx, CheckReport& r) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(3) / std::sqrt(3.0);
  double d2 = linearity_defect([&](const Eigen::VectorXd& y) { return project_line_lp(2.0, v, y); }, 3, 100,
                               ctx.config.seed);
  double d4 = linearity_defect([&](const Eigen::VectorXd& y) { return project_line_lp(4.0, v, y); }, 3, 100,
                               ctx.config.seed);
  r.worst_defect = std::max(d2, penalty(d4 > 1e-3));
  r.samples = 200;
  std::ostringstream d;
  d << "linearity defect p=2: " << d2 << ", p=4: " << d4 << " (must exceed 1e-3)";
  r.detail = d.str();
}

void counterexample_constants(const Context& ctx, CheckReport& r) {
  const CounterexampleCurve& c = ctx.curve;
  double theta1 = std::atan(2.0 / 7.0);
  r.worst_defect = std::max({std::abs(c.F1() - 0.125), std::abs(c.theta1() - theta1), penalty(c.F1() <= 0.25),
                             penalty(c.theta1() > 0.0 && c.theta1() < kPi / 2 - 1.0)});
  r.samples = 4;
  std::ostringstream d;
  d.precision(17);
  d << "F(1) = " << c.F1() << ", θ(1) = " << c.theta1();
  r.detail = d.str();
}

void beta_monotone(const Context&, CheckReport& r) {
  CounterexampleCurve c(CantorSet(), 12);
  const auto& g = c.grid();
  double worst_step = kPi;
  for (std::size_t i = 1; i < g.size(); ++i)
    worst_step = std::min(worst_step, (g[i].t + g[i].theta) - (g[i - 1].t + g[i - 1].theta));
  r.worst_defect = penalty(c.beta_monotone() && worst_step > 0.0);
  r.samples = static_cast<int>(g.size());
  std::ostringstream d;
  d << "smallest step of t + π/2 + θ(t) on the level-12 grid: " << worst_step;
  r.detail = d.str();
}

void normal_image_measure(const Context& ctx, CheckReport& r) {
  MeasureBounds b = image_measure_bounds(ctx.curve, 10);
  r.worst_defect = std::max(std::abs(b.lower - kNormalImageLower10), penalty(b.lower > 0.0 && b.upper >= b.lower));
  r.samples = 1;
  std::ostringstream d;
  d.precision(17);
  d << "angular measure of β(K) in [" << b.lower << ", " << b.upper << "] at level 10";
  r.detail = d.str();
}

void f_image_measure(const Context&, CheckReport& r) {
  MeasureBounds b = f_image_measure_bounds(CantorSet(), 12);
  double upper = 0.5 * (1.0 + std::pow(2.0 / 3.0, 12));
  r.worst_defect = std::max(std::abs(b.lower - 0.5), std::abs(b.upper - upper));
  r.samples = 1;
  std::ostringstream d;
  d.precision(17);
  d << "Leb(f(K)) in [" << b.lower << ", " << b.upper << "]";
  r.detail = d.str();
}

void beta_dominates_w(const Context& ctx, CheckReport& r) {
  const auto& g = ctx.curve.grid();
  for (std::size_t i = 0; i < g.size(); i += 7) {
    for (std::size_t j = i + 1; j < g.size(); j += 11) {
      Eigen::Vector2d wi = Eigen::Vector2d(1.0, g[i].psi).normalized(), wj = Eigen::Vector2d(1.0, g[j].psi).normalized();
      r.worst_defect = std::max(r.worst_defect, (wi - wj).norm() - (g[i].beta - g[j].beta).norm());
      ++r.samples;
    }
  }
  r.worst_defect = std::max(r.worst_defect, 0.0);
  r.detail = "|w(t) − w(t')| − |β(t) − β(t')| over grid pairs";
}

void covering_comparison(const Context& ctx, CheckReport& r) {
  std::vector<double> beta_angles, w_angles;
  for (const CurveSample& s : ctx.curve.grid()) {
    if (s.gap_midpoint) continue;
    beta_angles.push_back(s.t + kPi / 2 + s.theta);
    w_angles.push_back(std::atan(s.psi));
  }
  // |Δw| ≤ |Δβ| as chords, so angular covers of β at δ give covers of w at (π/2)δ ≤ 2δ.
  std::ostringstream d;
  for (int k = 2; k <= 10; ++k) {
    double delta = std::pow(2.0, -k);
    std::size_t nw = interval_cover_count(w_angles, 2.0 * delta), nb = interval_cover_count(beta_angles, delta);
    r.worst_defect = std::max(r.worst_defect, static_cast<double>(nw) / static_cast<double>(nb) - 1.0);
    ++r.samples;
    if (k == 10) d << "at δ = 2^-10: N(w, 2δ) = " << nw << ", N(β, δ) = " << nb;
  }
  r.worst_defect = std::max(r.worst_defect, 0.0);
  r.detail = d.str();
}

void product_positive_measure(const Context&, CheckReport& r) {
  CantorSet k;
  const double a = 0.25;
  auto g = [](double t) { return 1.0 + t; };
  auto f = [&](double t) { return f_eval(k, t).value; };
  MeasureBounds mf = increasing_image_bounds(k, 10, f, 0.5, a, 1.0);
  MeasureBounds mh = increasing_image_bounds(k, 10, [&](double t) { return f(t) * g(t); }, 2.0, a, 1.0);
  r.worst_defect = penalty(mf.lower > 0.0 && mh.lower > 0.0 && mh.upper >= g(a) * mf.lower);
  r.samples = 2;
  std::ostringstream d;
  d << "Leb(f(F)) ≥ " << mf.lower << ", Leb((f·g)(F)) ≥ " << mh.lower << " on K ∩ [1/4, 1]";
  r.detail = d.str();
}

void glue_validity(const Context& ctx, CheckReport& r) {
  if (!ctx.ce) {
    r.worst_defect = 1.0;
    r.detail = ctx.ce_error->what();
    return;
  }
  const GlueReport& g = ctx.ce->glue;
  GaussReport gr = check_gauss_properties(ctx.ce->norm, 2048);
  r.worst_defect = std::max({g.symmetry_defect, g.joint_mismatch, penalty(g.min_discrete_radius > 0.0),
                             penalty(gr.monotone && gr.min_inner_product > 0.0), gr.antipodality_defect});
  r.samples = static_cast<int>(ctx.ce->table->size()) + gr.grid_size;
  std::ostringstream d;
  d << g.strategy << " glue, radius scale " << g.radius_scale << ", symmetry " << g.symmetry_defect
    << ", joint mismatch " << g.joint_mismatch << ", min h + h'' " << g.min_discrete_radius;
  r.detail = d.str();
}

void marstrand_probe(const Context&, CheckReport& r) {
  PointCloud cloud = cantor_product(1.0 / 3.0, 8);
  ScaleRange sc = default_scales(cloud);
  double dim = estimate_dim(cloud, sc).slope;
  SweepOptions o;
  o.threshold = 0.9 * std::min(1.0, dim);
  ExceptionalProfile p = dim_profile(NormModel::euclidean(), cloud, DirectionGrid{720}, sc, o);
  r.worst_defect = std::max(p.flagged_measure(), penalty(p.records[0].flagged && p.records[360].flagged));
  r.samples = 720;
  std::ostringstream d;
  d << "flagged measure " << p.flagged_measure() << " at threshold " << *o.threshold << ", mean slope "
    << p.mean_slope();
  r.detail = d.str();
}

void favard_probe(const Context& ctx, CheckReport& r) {
  DirectionGrid grid{180};
  double prev = INFINITY, worst_rel = 0.0;
  bool decreasing = true;
  std::ostringstream d;
  for (int g = 3; g <= 7; ++g) {
    PointCloud cloud = four_corner(g);
    double delta = std::pow(4.0, -g);
    double e = favard_proxy(NormModel::euclidean(), cloud, grid, delta);
    double c = favard_proxy(ctx.counterexample(), cloud, grid, delta);
    decreasing = decreasing && e < prev;
    prev = e;
    worst_rel = std::max(worst_rel, std::abs(c - e) / e);
    r.samples += 2 * grid.count;
    d << "g" << g << ": " << e << " / " << c << "; ";
  }
  r.worst_defect = std::max(worst_rel, penalty(decreasing));
  r.detail = d.str();
}

const std::vector<Check>& checks() {
  static const std::vector<Check> all = {
      {"gauss_homeomorphism", 1e-12, gauss_homeomorphism},
      {"inverse_gauss_round_trip", 1e-7, inverse_round_trip},
      {"g_fixed_points", 1e-6, g_fixed_points},
      {"hyperplane_reduction", 1e-7, hyperplane_reduction},
      {"kernel_collinearity", 1e-8, kernel_collinearity},
      {"projector_invariants", 1e-12, projector_invariants},
      {"intertwiner_identity", 1e-12, intertwiner_identity},
      {"intertwiner_dimension", 0.05, intertwiner_dimension},
      {"gmap_round_trip", 1e-12, gmap_round_trip},
      {"angle_family_kernels", 1e-12, angle_family_kernels},
      {"inner_product_conjugation", 1e-9, conjugation},
      {"lp_linearity_witness", 1e-9, lp_witness},
      {"counterexample_constants", 1e-6, counterexample_constants},
      {"beta_angle_monotone", 0.0, beta_monotone},
      {"normal_image_measure", 1e-9, normal_image_measure},
      {"f_image_measure", 1e-12, f_image_measure},
      {"beta_dominates_w", 1e-15, beta_dominates_w},
      {"covering_comparison", 0.0, covering_comparison},
      {"product_positive_measure", 0.0, product_positive_measure},
      {"glue_validity", 1e-6, glue_validity},
      {"marstrand_probe", 0.1, marstrand_probe},
      {"favard_probe", 0.2, favard_probe},
  };
  return all;
}

}  // namespace

std::vector<std::string> check_names() {
  std::vector<std::string> out;
  for (const Check& c : checks()) out.push_back(c.name);
  return out;
}

std::vector<CheckReport> run_all(const CheckConfig& config) {
  const Context ctx(config);
  const std::vector<Check>& all = checks();
  std::vector<CheckReport> reports(all.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < all.size(); i = next++) {
      CheckReport& r = reports[i];
      r.name = all[i].name;
      r.tolerance = all[i].tolerance;
      r.seed = config.seed;
      try {
        all[i].run(ctx, r);
        r.passed = r.worst_defect <= r.tolerance;
      } catch (const Error& e) {
        r.passed = false;
        r.worst_defect = 1.0;
        r.detail = e.what();
      }
    }
  };
  int threads = std::clamp(config.threads, 1, static_cast<int>(all.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  return reports;
}

}  // namespace normproj
