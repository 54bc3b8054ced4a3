#include "normproj/boxdim.hpp"
#include "normproj/checks.hpp"
#include "normproj/counterexample.hpp"
#include "normproj/error.hpp"
#include "normproj/fractals.hpp"
#include "normproj/numeric.hpp"
#include "normproj/report_io.hpp"
#include "normproj/sweep.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

using namespace normproj;

namespace {

struct RunConfig {
  // norm
  std::string norm = "euclidean";
  int dim = 2;
  double p = 2.0;
  std::vector<double> q;
  std::string table;
  int m = 2;
  double r = 1.0 / 3.0;
  int level = 12;
  std::size_t rows = 4096;
  double slack = 1.0;
  // set
  std::string set = "cantor-product";
  double ratio = 1.0 / 3.0;
  int gen = 8;
  int count = 4096;
  // scales and sweep
  std::optional<double> base;
  std::optional<int> kmin, kmax;
  int directions = 720;
  std::optional<double> threshold;
  int grid = 2048;
  // project
  std::vector<double> w, x;
  std::string method = "lemma";
  // run
  std::string out, json;
  std::uint64_t seed = 0x5EED;
  int threads = 1;
};

// Raised for flag values that violate a module precondition; exits with status 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

void validate_norm(const RunConfig& c) {
  require(c.dim >= 1, "--dim must be at least 1");
  if (c.norm == "lp") {
    require(c.p > 1.0 && std::isfinite(c.p), "--p must lie in (1, ∞)");
  } else if (c.norm == "inner-product") {
    require(c.q.size() == static_cast<std::size_t>(c.dim * c.dim), "--q needs dim² entries, row-major");
  } else if (c.norm == "table") {
    require(!c.table.empty(), "--table is required for a table norm");
    require(c.dim == 2, "table norms are planar");
  } else if (c.norm == "counterexample") {
    require(c.dim == 2, "the counterexample norm is planar");
  }
}

void validate_cantor(const RunConfig& c) {
  require(c.m >= 2, "--m must be at least 2");
  require(c.r > 0.0 && c.m * c.r < 1.0, "--r must satisfy 0 < m·r < 1");
  require(c.level >= 0 && c.level <= 40, "--level must lie in [0, 40]");
  require(c.rows >= 16 && c.rows % 2 == 0, "--rows must be even and at least 16");
}

void validate_set(const RunConfig& c) {
  require(c.gen >= 0, "--gen must be non-negative");
  if (c.set == "cantor-product") {
    require(c.ratio > 0.0 && c.ratio < 0.5, "--ratio must lie in (0, 1/2)");
    require(c.gen <= 12, "--gen above 12 is too large for the product set");
  } else if (c.set == "four-corner") {
    require(c.gen <= 10, "--gen above 10 is too large for the four-corner set");
  } else if (c.set == "cantor-line") {
    require(c.gen <= 24, "--gen above 24 is too large for the Cantor line");
  } else if (c.set == "square") {
    require(c.gen <= 12, "--gen above 12 is too large for the square");
  } else if (c.set == "circle") {
    require(c.count >= 1, "--count must be positive");
  }
}

void validate_scales(const RunConfig& c) {
  if (c.base) require(*c.base > 1.0, "--base must exceed 1");
  if (c.kmin && c.kmax) require(*c.kmax >= *c.kmin + 3, "--kmax must be at least --kmin + 3");
}

NormModel make_norm(const RunConfig& c) {
  if (c.norm == "euclidean") return NormModel::euclidean(c.dim);
  if (c.norm == "lp") return NormModel::lp(c.p, c.dim);
  if (c.norm == "inner-product") {
    Eigen::MatrixXd q(c.dim, c.dim);
    for (int i = 0; i < c.dim; ++i)
      for (int j = 0; j < c.dim; ++j) q(i, j) = c.q[i * c.dim + j];
    return NormModel::inner_product(q);
  }
  if (c.norm == "table") return NormModel::support_table(std::make_shared<SupportTable>(load_support_table(c.table)));
  GlueOptions o;
  o.rows = c.rows;
  o.curvature_slack = c.slack;
  return build_norm(CounterexampleCurve(CantorSet(c.m, c.r), c.level), o).norm;
}

PointCloud make_set(const RunConfig& c) {
  if (c.set == "cantor-product") return cantor_product(c.ratio, c.gen);
  if (c.set == "four-corner") return four_corner(c.gen);
  if (c.set == "cantor-line") return cantor_line(c.gen);
  if (c.set == "square") return filled_square(c.gen);
  return circle_cloud(c.count);
}

ScaleRange make_scales(const RunConfig& c, const PointCloud& cloud) {
  ScaleRange s = default_scales(cloud);
  if (c.base) {
    s.base = *c.base;
    // Recompute the finest admissible exponent for the new base.
    s.k_max = static_cast<int>(std::floor(std::log(1.0 / (2.0 * cloud.resolution)) / std::log(s.base) + 1e-9));
  }
  if (c.kmin) s.k_min = *c.kmin;
  if (c.kmax) s.k_max = *c.kmax;
  return s;
}

Json vec_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Primary artifact: the --out file, or stdout.
void emit(const RunConfig& c, const std::string& content) {
  if (c.out.empty()) {
    std::cout << content;
  } else {
    write_file(c.out, content);
  }
}

// Summary JSON: the --json file, or stdout.
void emit_summary(const RunConfig& c, const Json& j) {
  if (c.json.empty()) {
    std::cout << dump(j);
  } else {
    write_file(c.json, dump(j));
  }
}

int run_norm_info(const RunConfig& c) {
  validate_norm(c);
  if (c.norm == "counterexample") validate_cantor(c);
  require(c.grid >= 16, "--grid must be at least 16");
  NormModel n = make_norm(c);
  Json j{{"generator", generator()}, {"norm", n.describe()}, {"kind", to_string(n.kind())}, {"dim", n.dim()}};
  if (n.dim() == 2) {
    j["gauss"] = to_json(check_gauss_properties(n, c.grid));
    FixedPoints fp = find_gauss_fixed_points(n);
    j["fixed_points"] = Json{{"farthest", vec_json(fp.farthest.coords)},
                             {"farthest_polar_angle", num(fp.farthest.polar_angle)},
                             {"closest", vec_json(fp.closest.coords)},
                             {"closest_polar_angle", num(fp.closest.polar_angle)}};
  }
  emit(c, dump(j));
  return 0;
}

int run_gauss(const RunConfig& c) {
  validate_norm(c);
  if (c.norm == "counterexample") validate_cantor(c);
  require(c.dim == 2, "gauss tabulates planar norms only");
  require(c.grid >= 16, "--grid must be at least 16");
  NormModel n = make_norm(c);
  if (!c.out.empty()) {
    std::ostringstream os;
    os << version_header() << "\npolar,x,y,normal_angle,gx,gy\n";
    for (int j = 0; j < c.grid; ++j) {
      double a = kTwoPi * j / c.grid;
      SpherePoint s = sphere_point(n, a);
      Eigen::VectorXd g = gauss_map(n, s.coords);
      double ga = std::atan2(g(1), g(0));
      if (ga < 0) ga += kTwoPi;
      os << fmt(a) << ',' << fmt(s.coords(0)) << ',' << fmt(s.coords(1)) << ',' << fmt(ga) << ',' << fmt(g(0)) << ','
         << fmt(g(1)) << '\n';
    }
    write_file(c.out, os.str());
  }
  Json j{{"generator", generator()}, {"norm", n.describe()}};
  j.update(to_json(check_gauss_properties(n, c.grid)));
  emit_summary(c, j);
  return 0;
}

int run_project(const RunConfig& c) {
  validate_norm(c);
  if (c.norm == "counterexample") validate_cantor(c);
  require(c.w.size() == static_cast<std::size_t>(c.dim), "--w needs dim entries");
  require(c.x.size() == static_cast<std::size_t>(c.dim), "--x needs dim entries");
  require(to_vector(c.w).norm() > 0.0, "--w must be nonzero");
  require(c.method == "lemma" || c.method == "direct", "--method is lemma or direct");
  NormModel n = make_norm(c);
  HyperplaneNormal w(to_vector(c.w));
  Eigen::VectorXd x = to_vector(c.x);
  Eigen::VectorXd lemma = project_hyperplane(n, w, x), direct = project_hyperplane_direct(n, w, x);
  Eigen::VectorXd u = inverse_gauss(n, w.vector()).coords;
  Json j{{"generator", generator()},
         {"norm", n.describe()},
         {"method", c.method},
         {"w", vec_json(w.vector())},
         {"x", vec_json(x)},
         {"projection", vec_json(c.method == "lemma" ? lemma : direct)},
         {"kernel_dir", vec_json(u.normalized())},
         {"defect", num((lemma - direct).norm())}};
  emit(c, dump(j));
  return 0;
}

int run_counterexample_build(const RunConfig& c) {
  validate_cantor(c);
  require(!c.out.empty(), "--out is required");
  CantorSet k(c.m, c.r);
  CounterexampleCurve curve(k, c.level);
  GlueOptions o;
  o.rows = c.rows;
  o.curvature_slack = c.slack;
  CounterexampleNorm ce = build_norm(curve, o);
  std::ostringstream table;
  write_support_table_csv(table, *ce.table);
  write_file(c.out, table.str());
  MeasureBounds p2 = image_measure_bounds(curve, std::min(c.level, 12));
  Json j{{"generator", generator()},
         {"m", c.m},
         {"r", num(c.r)},
         {"s", num(k.dimension())},
         {"level", c.level},
         {"rows", c.rows},
         {"F1", num(curve.F1())},
         {"theta1", num(curve.theta1())},
         {"p2_lower_bound", num(p2.lower)},
         {"p2_upper_bound", num(p2.upper)},
         {"p2_level", p2.level},
         {"glue", Json{{"strategy", ce.glue.strategy},
                       {"radius_scale", num(ce.glue.radius_scale)},
                       {"symmetry_defect", num(ce.glue.symmetry_defect)},
                       {"min_discrete_radius", num(ce.glue.min_discrete_radius)},
                       {"joint_mismatch", num(ce.glue.joint_mismatch)}}}};
  std::string sidecar = std::filesystem::path(c.out).replace_extension(".json").string();
  if (sidecar == c.out) sidecar += ".json";
  write_file(sidecar, dump(j));
  if (!c.json.empty()) write_file(c.json, dump(j));
  return 0;
}

int run_set(const RunConfig& c) {
  validate_set(c);
  PointCloud cloud = make_set(c);
  std::ostringstream os;
  write_cloud_csv(os, cloud);
  emit(c, os.str());
  return 0;
}

int run_dim(const RunConfig& c) {
  validate_set(c);
  validate_scales(c);
  PointCloud cloud = make_set(c);
  ScaleRange sc = make_scales(c, cloud);
  DimensionEstimate e = estimate_dim(cloud, sc);
  if (!c.out.empty()) {
    std::ostringstream os;
    write_dimension_csv(os, e);
    write_file(c.out, os.str());
  }
  Json j{{"generator", generator()}, {"set", cloud.label}, {"points", cloud.size()}, {"base", num(sc.base)},
         {"k_min", sc.k_min},        {"k_max", sc.k_max}};
  j.update(to_json(e));
  j["caveat"] = kBoxDimCaveat;
  emit_summary(c, j);
  return 0;
}

int run_sweep(const RunConfig& c) {
  validate_norm(c);
  if (c.norm == "counterexample") validate_cantor(c);
  validate_set(c);
  validate_scales(c);
  require(c.dim == 2, "sweeps are planar");
  require(c.directions >= 36, "--directions must be at least 36");
  require(c.threads >= 1, "--threads must be positive");
  NormModel n = make_norm(c);
  PointCloud cloud = make_set(c);
  SweepOptions o;
  o.threshold = c.threshold;
  o.threads = c.threads;
  ExceptionalProfile p = dim_profile(n, cloud, DirectionGrid{c.directions}, make_scales(c, cloud), o);
  if (!c.out.empty()) {
    std::ostringstream os;
    write_profile_csv(os, p);
    write_file(c.out, os.str());
  }
  Json j = profile_summary(p);
  j["norm"] = n.describe();
  j["set"] = cloud.label;
  emit_summary(c, j);
  return 0;
}

int run_verify(const RunConfig& c) {
  require(c.threads >= 1, "--threads must be positive");
  CheckConfig cc;
  cc.seed = c.seed;
  cc.glue_slack = c.slack;
  cc.threads = c.threads;
  std::vector<CheckReport> reports = run_all(cc);
  Json arr = Json::array();
  bool all = true;
  for (const CheckReport& r : reports) {
    arr.push_back(to_json(r));
    all = all && r.passed;
  }
  Json j{{"generator", generator()}, {"all_passed", all}, {"reports", arr}};
  emit(c, dump(j));
  if (!c.out.empty()) {
    for (const CheckReport& r : reports)
      std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << fmt(r.worst_defect) << " <= " << fmt(r.tolerance)
                << ")\n";
  }
  return all ? 0 : 1;
}

bool is_validation(Errc e) {
  switch (e) {
    case Errc::InvalidArgument:
    case Errc::NotStrictlyConvex:
    case Errc::DegenerateSplitting:
    case Errc::TooLarge:
    case Errc::NotContracting:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"Closest-point projections in normed planes, Gauss maps and box-counting sweeps."};
  app.set_version_flag("--version", generator());
  app.set_config("--config", "", "key=value file; explicit flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  const std::vector<std::string> norms = {"euclidean", "lp", "inner-product", "table", "counterexample"};
  const std::vector<std::string> sets = {"cantor-product", "four-corner", "cantor-line", "square", "circle"};
  app.add_option("--norm", c.norm, "norm kind")->check(CLI::IsMember(norms))->capture_default_str();
  app.add_option("--dim", c.dim, "ambient dimension")->capture_default_str();
  app.add_option("--p", c.p, "lp exponent")->capture_default_str();
  app.add_option("--q", c.q, "inner-product matrix, row-major")->delimiter(',');
  app.add_option("--table", c.table, "support table CSV");
  app.add_option("--m", c.m, "Cantor branches")->capture_default_str();
  app.add_option("--r", c.r, "Cantor ratio")->capture_default_str();
  app.add_option("--level", c.level, "Cantor grid level")->capture_default_str();
  app.add_option("--rows", c.rows, "support table rows")->capture_default_str();
  app.add_option("--slack", c.slack, "glue curvature slack")->capture_default_str();
  app.add_option("--set", c.set, "point set")->check(CLI::IsMember(sets))->capture_default_str();
  app.add_option("--ratio", c.ratio, "product ratio")->capture_default_str();
  app.add_option("--gen", c.gen, "IFS generation")->capture_default_str();
  app.add_option("--count", c.count, "circle points")->capture_default_str();
  app.add_option("--base", c.base, "scale base");
  app.add_option("--kmin", c.kmin, "coarsest exponent");
  app.add_option("--kmax", c.kmax, "finest exponent");
  app.add_option("--directions", c.directions, "direction grid size")->capture_default_str();
  app.add_option("--threshold", c.threshold, "exceptional threshold");
  app.add_option("--grid", c.grid, "sphere grid size")->capture_default_str();
  app.add_option("--w", c.w, "hyperplane normal")->delimiter(',');
  app.add_option("--x", c.x, "point to project")->delimiter(',');
  app.add_option("--method", c.method, "lemma or direct")->capture_default_str();
  app.add_option("--out", c.out, "primary output path");
  app.add_option("--json", c.json, "summary JSON path");
  app.add_option("--seed", c.seed, "check seed")->capture_default_str();
  app.add_option("--threads", c.threads, "worker cap")->capture_default_str();

  auto sub = [&](const std::string& name, const std::string& help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  CLI::App* norm_info = sub("norm-info", "Gauss-map diagnostics and fixed points of a norm");
  CLI::App* gauss = sub("gauss", "tabulate the Gauss map along the unit sphere");
  CLI::App* project = sub("project", "closest point of a hyperplane");
  CLI::App* counterexample = sub("counterexample", "C¹ norm built on a Cantor staircase");
  counterexample->require_subcommand(1);
  CLI::App* build = counterexample->add_subcommand("build", "write the support table and its sidecar");
  build->fallthrough();
  CLI::App* set = sub("set", "write a fractal point cloud");
  CLI::App* dim = sub("dim", "box-counting dimension of a point cloud");
  CLI::App* sweep = sub("sweep", "projected dimension over a direction grid");
  CLI::App* verify = sub("verify", "run the property checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    require(c.threads >= 1, "--threads must be positive");
    if (norm_info->parsed()) return run_norm_info(c);
    if (gauss->parsed()) return run_gauss(c);
    if (project->parsed()) return run_project(c);
    if (build->parsed()) return run_counterexample_build(c);
    if (set->parsed()) return run_set(c);
    if (dim->parsed()) return run_dim(c);
    if (sweep->parsed()) return run_sweep(c);
    if (verify->parsed()) return run_verify(c);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_validation(e.code()) ? 2 : 1;
  }
  return 2;
}
