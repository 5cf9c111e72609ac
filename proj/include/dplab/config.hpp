// config.hpp - experiment configuration: one JSON document describing grid,
// exponents, coefficient and initial-map recipes, solver/analyzer/measure
// options. Validation errors carry the offending field.
#pragma once

#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "dplab/coefficient.hpp"
#include "dplab/exponents.hpp"
#include "dplab/field.hpp"
#include "dplab/regularity.hpp"
#include "dplab/solver.hpp"

namespace dplab {

struct CoefficientRecipe {
  std::string kind = "zero";  // zero|constant|dist_to_hyperplane|dist_to_ball|checkerboard
  double value = 0.0;         // constant
  Vec normal;                 // hyperplane
  double offset = 0.0;
  Point ball_center;          // dist_to_ball
  double ball_radius = 0.25;
  double period = 0.5;  // checkerboard
  double amplitude = 1.0;
  double scale = 1.0;
};

struct InitialMapRecipe {
  std::string kind = "hedgehog";  // constant|hedgehog|random_sphere|file
  Vec constant_value;
  Point hedgehog_center;
  std::string file_bin, file_json;
};

struct AnalyzerConfig {
  AnalyzerOptions options;
  double radii_max = 0.4;
  int radii_count = 5;
  double radii_factor = 0.8;
  double gamma = 0.5;
  int probe_stride = 1;
  std::vector<double> delta_grid = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5};
  double integrability_cap_factor = 4.0;
  int phase_census_stride = 8;
};

struct MeasureConfig {
  std::vector<double> kappa_ladder = {0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125};
  HausdorffOptions hausdorff;
  std::string delta_mode = "fixed";  // fixed | auto (analyzer delta_g_probe)
  double delta = 0.0;
  std::vector<int> capacity_meshes = {16, 24, 32};
};

struct ExperimentConfig {
  int dim = 3;
  int target_dim = 3;
  double half_extent = 1.0;
  int resolution = 64;  // nodes per axis
  Exponents exponents;
  CoefficientRecipe coefficient;
  InitialMapRecipe initial_map;
  SolveOptions solver;
  AnalyzerConfig analyzer;
  MeasureConfig measure;
  uint64_t seed = 1;
  std::string output_dir = "out";

  Grid make_grid() const { return Grid::cube(dim, half_extent, resolution - 1); }

  CoefficientField make_coefficient_field() const {
    const Grid g = make_grid();
    const auto& r = coefficient;
    if (r.kind == "zero") return coefficient_zero(g);
    if (r.kind == "constant") return coefficient_constant(g, r.value);
    if (r.kind == "dist_to_hyperplane")
      return coefficient_dist_to_hyperplane(g, exponents.alpha, r.normal, r.offset, r.scale);
    if (r.kind == "dist_to_ball")
      return coefficient_dist_to_ball(g, exponents.alpha, Ball(r.ball_center, r.ball_radius),
                                      r.scale);
    if (r.kind == "checkerboard")
      return coefficient_checkerboard(g, exponents.alpha, r.period, r.amplitude);
    throw ValidationError("config: unknown coefficient recipe '" + r.kind + "'");
  }

  GridField make_initial_field() const {
    const Grid g = make_grid();
    const auto& r = initial_map;
    if (r.kind == "constant") {
      Vec v = r.constant_value;
      if (v.size() != target_dim) throw ValidationError("config: constant value dimension");
      return field_constant(g, project_unit(v), true);
    }
    if (r.kind == "hedgehog") {
      if (target_dim != dim) throw ValidationError("config: hedgehog requires N = n");
      return field_hedgehog(g, r.hedgehog_center.size() == dim ? r.hedgehog_center : Point(dim));
    }
    if (r.kind == "random_sphere") return field_random_sphere(g, target_dim, seed);
    if (r.kind == "file") {
      GridField f = load_field(r.file_bin, r.file_json);
      if (!f.grid.same_layout(g)) throw ValidationError("config: field file grid mismatch");
      return f;
    }
    throw ValidationError("config: unknown initial map recipe '" + r.kind + "'");
  }

  std::vector<double> make_radii_ladder() const {
    return build_radii_ladder(make_grid(), analyzer.radii_max, analyzer.radii_count,
                              analyzer.radii_factor, analyzer.options.min_cells_per_radius);
  }

  void validate() const {
    if (dim < 1 || dim > kMaxDim) throw ValidationError("config: grid.n out of range");
    if (target_dim < 1 || target_dim > kMaxDim)
      throw ValidationError("config: grid.N out of range");
    if (resolution < 4) throw ValidationError("config: resolution too small");
    if (!(half_extent > 0.0)) throw ValidationError("config: extent must be positive");
    exponents.validate(target_dim);
    if (initial_map.kind == "hedgehog" && target_dim != dim)
      throw ValidationError("config: hedgehog requires N = n");
    solver.validate();
    if (!(analyzer.gamma >= 0.5 && analyzer.gamma < 1.0))
      throw ValidationError("config: analyzer.gamma in [1/2, 1)");
    if (!(measure.delta_mode == "fixed" || measure.delta_mode == "auto"))
      throw ValidationError("config: measure.delta_mode must be fixed|auto");
    if (measure.delta < 0.0) throw ValidationError("config: measure.delta must be >= 0");
    for (double k : measure.kappa_ladder)
      if (!(k > 0.0)) throw ValidationError("config: kappa ladder entries must be positive");
  }

 private:
  static Vec project_unit(Vec v) {
    const double n = norm2(v);
    if (n < 1e-12) throw ValidationError("config: constant map value must be nonzero");
    v *= 1.0 / n;
    return v;
  }
};

// --- JSON parsing ---------------------------------------------------------------

namespace detail {

inline Vec json_vec(const nlohmann::json& j) {
  if (!j.is_array() || j.size() > size_t(kMaxDim)) throw ValidationError("config: bad vector");
  Vec v(int(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v[int(i)] = j.at(i).get<double>();
  return v;
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    const auto& grid = j.at("grid");
    c.dim = grid.at("n").get<int>();
    c.target_dim = grid.at("N").get<int>();
    c.half_extent = grid.value("half_extent", 1.0);
    c.resolution = grid.at("resolution").get<int>();

    const auto& e = j.at("exponents");
    c.exponents.p = e.at("p").get<double>();
    c.exponents.q = e.at("q").get<double>();
    c.exponents.alpha = e.at("alpha").get<double>();
    c.exponents.beta = e.value("beta", 1.0);
    c.exponents.beta1 = e.value("beta1", 1.0);
    c.exponents.nu = e.value("nu", 1.0);
    c.exponents.L = e.value("L", 1.0);

    if (j.contains("coefficient")) {
      const auto& a = j.at("coefficient");
      c.coefficient.kind = a.at("recipe").get<std::string>();
      c.coefficient.value = a.value("value", 0.0);
      if (a.contains("normal")) c.coefficient.normal = detail::json_vec(a.at("normal"));
      c.coefficient.offset = a.value("offset", 0.0);
      if (a.contains("center")) c.coefficient.ball_center = detail::json_vec(a.at("center"));
      c.coefficient.ball_radius = a.value("radius", 0.25);
      c.coefficient.period = a.value("period", 0.5);
      c.coefficient.amplitude = a.value("amplitude", 1.0);
      c.coefficient.scale = a.value("scale", 1.0);
    }

    if (j.contains("initial_map")) {
      const auto& u = j.at("initial_map");
      c.initial_map.kind = u.at("recipe").get<std::string>();
      if (u.contains("value")) c.initial_map.constant_value = detail::json_vec(u.at("value"));
      if (u.contains("center")) c.initial_map.hedgehog_center = detail::json_vec(u.at("center"));
      c.initial_map.file_bin = u.value("bin", "");
      c.initial_map.file_json = u.value("sidecar", "");
    }

    if (j.contains("solver")) {
      const auto& s = j.at("solver");
      c.solver.max_iters = s.value("max_iters", c.solver.max_iters);
      c.solver.step0 = s.value("step0", c.solver.step0);
      c.solver.armijo_c = s.value("armijo_c", c.solver.armijo_c);
      c.solver.armijo_shrink = s.value("armijo_shrink", c.solver.armijo_shrink);
      c.solver.grad_tol = s.value("grad_tol", c.solver.grad_tol);
      c.solver.energy_tol = s.value("energy_tol", c.solver.energy_tol);
      c.solver.mu = s.value("mu", c.solver.mu);
    }

    if (j.contains("analyzer")) {
      const auto& a = j.at("analyzer");
      c.analyzer.options.epsilon = a.value("epsilon", 0.1);
      if (a.contains("epsilon_sweep"))
        c.analyzer.options.epsilon_sweep = a.at("epsilon_sweep").get<std::vector<double>>();
      c.analyzer.options.singular_floor = a.value("singular_floor", 1.0);
      c.analyzer.radii_max = a.value("radii_max", c.analyzer.radii_max);
      c.analyzer.radii_count = a.value("radii_count", c.analyzer.radii_count);
      c.analyzer.radii_factor = a.value("radii_factor", c.analyzer.radii_factor);
      c.analyzer.gamma = a.value("gamma", 0.5);
      c.analyzer.probe_stride = a.value("probe_stride", 1);
      c.analyzer.phase_census_stride = a.value("phase_census_stride", 8);
      if (a.contains("delta_grid"))
        c.analyzer.delta_grid = a.at("delta_grid").get<std::vector<double>>();
      c.analyzer.integrability_cap_factor = a.value("integrability_cap_factor", 4.0);
    }

    if (j.contains("measure")) {
      const auto& mjs = j.at("measure");
      if (mjs.contains("kappa_ladder"))
        c.measure.kappa_ladder = mjs.at("kappa_ladder").get<std::vector<double>>();
      c.measure.hausdorff.radius_grid_depth =
          mjs.value("radius_grid_depth", c.measure.hausdorff.radius_grid_depth);
      c.measure.hausdorff.quadrature.samples_per_axis =
          mjs.value("samples_per_axis", c.measure.hausdorff.quadrature.samples_per_axis);
      c.measure.delta_mode = mjs.value("delta_mode", std::string("fixed"));
      c.measure.delta = mjs.value("delta", 0.0);
      if (mjs.contains("capacity_meshes"))
        c.measure.capacity_meshes = mjs.at("capacity_meshes").get<std::vector<int>>();
    }

    c.seed = j.value("seed", uint64_t(1));
    c.output_dir = j.value("output_dir", std::string("out"));
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("config: ") + ex.what());
  }
  c.validate();
  return c;
}

struct LoadedConfig {
  ExperimentConfig config;
  std::string raw;  // exact file bytes, hashed into the manifest
};

inline LoadedConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(raw);
  } catch (const std::exception& ex) {
    throw ValidationError(std::string("config: parse error: ") + ex.what());
  }
  return LoadedConfig{parse_config(j), std::move(raw)};
}

}  // namespace dplab
