// field.hpp - discrete maps u: lattice -> R^N, optionally sphere-constrained,
// plus field recipes and the binary+sidecar serialization.
#pragma once

#include <fstream>
#include <vector>

#include <json.hpp>

#include "dplab/grid.hpp"

namespace dplab {

struct GridField {
  Grid grid;
  int target_dim = 0;           // N
  std::vector<double> values;   // node-major, N components per node
  bool constrained = false;
  double constraint_tol = 1e-9;

  static GridField zeros(const Grid& grid, int target_dim, bool constrained = false) {
    GridField f;
    f.grid = grid;
    f.target_dim = target_dim;
    f.constrained = constrained;
    f.values.assign(size_t(grid.node_count()) * size_t(target_dim), 0.0);
    return f;
  }

  Vec at(long node) const {
    Vec v(target_dim);
    const double* p = values.data() + size_t(node) * size_t(target_dim);
    for (int c = 0; c < target_dim; ++c) v[c] = p[c];
    return v;
  }
  void set(long node, const Vec& v) {
    double* p = values.data() + size_t(node) * size_t(target_dim);
    for (int c = 0; c < target_dim; ++c) p[c] = v[c];
  }
  double component(long node, int c) const {
    return values[size_t(node) * size_t(target_dim) + size_t(c)];
  }

  double max_constraint_violation() const {
    double worst = 0.0;
    const long n = grid.node_count();
    for (long i = 0; i < n; ++i) worst = std::max(worst, std::abs(norm2(at(i)) - 1.0));
    return worst;
  }

  void check_sphere_valued() const {
    if (!constrained) return;
    const double v = max_constraint_violation();
    if (v > constraint_tol)
      throw ConstraintError("field: sphere constraint violated by " + std::to_string(v));
  }

  void require_same_grid(const Grid& other, const char* what) const {
    if (!grid.same_layout(other))
      throw ValidationError(std::string("grid mismatch in ") + what);
  }

  double sup_norm() const {
    double s = 0.0;
    for (long i = 0; i < grid.node_count(); ++i) s = std::max(s, norm2(at(i)));
    return s;
  }

  // Arithmetic node mean over the closed ball (the discrete (u)_B).
  Vec mean_in_ball(const Ball& ball) const {
    Vec acc(target_dim);
    long count = 0;
    for_each_node_in_ball(grid, ball, [&](long node, const Point&) {
      acc += at(node);
      ++count;
    });
    if (count == 0) throw EmptyRegionError("field: ball contains no grid nodes");
    acc *= 1.0 / double(count);
    return acc;
  }
};

// --- field recipes -----------------------------------------------------------

inline GridField field_constant(const Grid& grid, const Vec& value, bool constrained = false) {
  GridField f = GridField::zeros(grid, value.size(), constrained);
  for (long i = 0; i < grid.node_count(); ++i) f.set(i, value);
  if (constrained) f.check_sphere_valued();
  return f;
}

// u(x) = (x - x0)/|x - x0|; nodes coinciding with the singular point get e_1.
inline GridField field_hedgehog(const Grid& grid, const Point& x0) {
  if (grid.dim < 2) throw ValidationError("hedgehog: needs dim >= 2");
  GridField f = GridField::zeros(grid, grid.dim, true);
  for (long i = 0; i < grid.node_count(); ++i) {
    Vec v = grid.node_point(i) - x0;
    const double r = norm2(v);
    if (r < 1e-14) {
      f.set(i, Vec::unit(grid.dim, 0));
    } else {
      v *= 1.0 / r;
      f.set(i, v);
    }
  }
  return f;
}

inline GridField field_hedgehog(const Grid& grid) { return field_hedgehog(grid, Point(grid.dim)); }

// u(x) = c + M x (componentwise affine), M given row-major N x n.
inline GridField field_affine(const Grid& grid, int target_dim, const Mat& slope,
                              const Vec& offset) {
  GridField f = GridField::zeros(grid, target_dim, false);
  for (long i = 0; i < grid.node_count(); ++i) {
    const Point x = grid.node_point(i);
    Vec v = offset;
    for (int c = 0; c < target_dim; ++c)
      for (int d = 0; d < grid.dim; ++d) v[c] += slope(c, d) * x[d];
    f.set(i, v);
  }
  return f;
}

// Independent uniform sphere values per node; stream-keyed so the result is
// identical regardless of evaluation order.
inline GridField field_random_sphere(const Grid& grid, int target_dim, uint64_t seed) {
  GridField f = GridField::zeros(grid, target_dim, true);
  for (long i = 0; i < grid.node_count(); ++i) {
    Rng rng(seed, uint64_t(i));
    f.set(i, rng.sphere_vec(target_dim));
  }
  return f;
}

inline GridField field_smooth_random(const Grid& grid, int target_dim, uint64_t seed,
                                     double amplitude = 1.0, int waves = 2) {
  GridField f = GridField::zeros(grid, target_dim, false);
  Rng rng(seed);
  // few random Fourier modes per component
  std::vector<Vec> ks;
  std::vector<double> phases, amps;
  for (int c = 0; c < target_dim; ++c)
    for (int w = 0; w < waves; ++w) {
      Vec k(grid.dim);
      for (int d = 0; d < grid.dim; ++d) k[d] = std::round(rng.uniform(-3.0, 3.0));
      ks.push_back(k);
      phases.push_back(rng.uniform(0.0, 2.0 * kPi));
      amps.push_back(rng.uniform(0.3, 1.0) * amplitude / double(waves));
    }
  for (long i = 0; i < grid.node_count(); ++i) {
    const Point x = grid.node_point(i);
    Vec v(target_dim);
    for (int c = 0; c < target_dim; ++c)
      for (int w = 0; w < waves; ++w) {
        const size_t m = size_t(c * waves + w);
        v[c] += amps[m] * std::sin(kPi * dot(ks[m], x) + phases[m]);
      }
    f.set(i, v);
  }
  return f;
}

// --- serialization: row-major float64 payload + JSON sidecar -----------------

inline void save_field(const GridField& f, const std::string& path_bin,
                       const std::string& path_json) {
  std::ofstream bin(path_bin, std::ios::binary);
  if (!bin) throw IoError("cannot open " + path_bin + " for writing");
  bin.write(reinterpret_cast<const char*>(f.values.data()),
            std::streamsize(f.values.size() * sizeof(double)));
  if (!bin) throw IoError("short write to " + path_bin);

  nlohmann::json j;
  j["dim"] = f.grid.dim;
  j["target_dim"] = f.target_dim;
  j["nodes"] = std::vector<int>(f.grid.nodes.begin(), f.grid.nodes.begin() + f.grid.dim);
  j["lo"] = std::vector<double>(f.grid.lo.begin(), f.grid.lo.begin() + f.grid.dim);
  j["hi"] = std::vector<double>(f.grid.hi.begin(), f.grid.hi.begin() + f.grid.dim);
  j["spacing"] = f.grid.spacing;
  j["constrained"] = f.constrained;
  j["constraint_tol"] = f.constraint_tol;
  j["order"] = "row-major";
  std::ofstream side(path_json);
  if (!side) throw IoError("cannot open " + path_json + " for writing");
  side << j.dump(2) << "\n";
}

inline GridField load_field(const std::string& path_bin, const std::string& path_json) {
  std::ifstream side(path_json);
  if (!side) throw IoError("cannot open " + path_json);
  nlohmann::json j;
  try {
    side >> j;
  } catch (const std::exception& e) {
    throw IoError("bad field sidecar " + path_json + ": " + e.what());
  }
  const int dim = j.at("dim").get<int>();
  if (dim < 1 || dim > kMaxDim) throw IoError("field sidecar: dim out of range");
  std::array<int, kMaxDim> nodes{};
  std::array<double, kMaxDim> lo{}, hi{};
  const auto jn = j.at("nodes");
  const auto jlo = j.at("lo");
  const auto jhi = j.at("hi");
  for (int d = 0; d < dim; ++d) {
    nodes[size_t(d)] = jn.at(size_t(d)).get<int>();
    lo[size_t(d)] = jlo.at(size_t(d)).get<double>();
    hi[size_t(d)] = jhi.at(size_t(d)).get<double>();
  }
  GridField f;
  f.grid = Grid::make(dim, lo, hi, nodes);
  f.target_dim = j.at("target_dim").get<int>();
  if (f.target_dim < 1 || f.target_dim > kMaxDim) throw IoError("field sidecar: target_dim out of range");
  f.constrained = j.at("constrained").get<bool>();
  f.constraint_tol = j.value("constraint_tol", 1e-9);

  const size_t expect = size_t(f.grid.node_count()) * size_t(f.target_dim);
  std::ifstream bin(path_bin, std::ios::binary);
  if (!bin) throw IoError("cannot open " + path_bin);
  f.values.resize(expect);
  bin.read(reinterpret_cast<char*>(f.values.data()), std::streamsize(expect * sizeof(double)));
  if (size_t(bin.gcount()) != expect * sizeof(double))
    throw IoError("field payload size mismatch in " + path_bin);
  return f;
}

}  // namespace dplab
