// grid.hpp - uniform lattice descriptor, ball geometry, node/cell indexing.
#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>

#include "dplab/core.hpp"

namespace dplab {

// Axis-aligned uniform lattice over a box. `nodes[d]` counts lattice points
// per axis; spacing is isotropic. Cells are the (nodes-1)^n sub-cubes between
// adjacent nodes; quadrature is midpoint per cell.
struct Grid {
  int dim = 0;
  std::array<int, kMaxDim> nodes{};
  std::array<double, kMaxDim> lo{};
  std::array<double, kMaxDim> hi{};
  double spacing = 0.0;

  static Grid make(int dim, const std::array<double, kMaxDim>& lo,
                   const std::array<double, kMaxDim>& hi,
                   const std::array<int, kMaxDim>& nodes) {
    if (dim < 1 || dim > kMaxDim) throw ValidationError("grid: dim out of range");
    Grid g;
    g.dim = dim;
    g.lo = lo;
    g.hi = hi;
    g.nodes = nodes;
    double h = 0.0;
    for (int d = 0; d < dim; ++d) {
      if (nodes[size_t(d)] < 2) throw ValidationError("grid: need at least 2 nodes per axis");
      if (!(hi[size_t(d)] > lo[size_t(d)])) throw ValidationError("grid: empty extent");
      const double hd = (hi[size_t(d)] - lo[size_t(d)]) / double(nodes[size_t(d)] - 1);
      if (d == 0) {
        h = hd;
      } else if (std::abs(hd - h) > 1e-12 * std::max(1.0, h)) {
        throw ValidationError("grid: anisotropic spacing not supported");
      }
    }
    g.spacing = h;
    return g;
  }

  // Cube [c-half, c+half]^dim with `cells` cells per axis.
  static Grid cube(int dim, double half, int cells) {
    std::array<double, kMaxDim> lo{}, hi{};
    std::array<int, kMaxDim> nn{};
    for (int d = 0; d < dim; ++d) {
      lo[size_t(d)] = -half;
      hi[size_t(d)] = half;
      nn[size_t(d)] = cells + 1;
    }
    return make(dim, lo, hi, nn);
  }

  long node_count() const {
    long c = 1;
    for (int d = 0; d < dim; ++d) c *= nodes[size_t(d)];
    return c;
  }
  long cell_count() const {
    long c = 1;
    for (int d = 0; d < dim; ++d) c *= nodes[size_t(d)] - 1;
    return c;
  }
  int cells_per_axis(int d) const { return nodes[size_t(d)] - 1; }

  double cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < dim; ++d) v *= spacing;
    return v;
  }

  // Row-major linearization, last axis fastest.
  long node_index(const std::array<int, kMaxDim>& mi) const {
    long idx = 0;
    for (int d = 0; d < dim; ++d) idx = idx * nodes[size_t(d)] + mi[size_t(d)];
    return idx;
  }
  std::array<int, kMaxDim> node_multi(long idx) const {
    std::array<int, kMaxDim> mi{};
    for (int d = dim - 1; d >= 0; --d) {
      mi[size_t(d)] = int(idx % nodes[size_t(d)]);
      idx /= nodes[size_t(d)];
    }
    return mi;
  }
  long cell_index(const std::array<int, kMaxDim>& mi) const {
    long idx = 0;
    for (int d = 0; d < dim; ++d) idx = idx * (nodes[size_t(d)] - 1) + mi[size_t(d)];
    return idx;
  }
  std::array<int, kMaxDim> cell_multi(long idx) const {
    std::array<int, kMaxDim> mi{};
    for (int d = dim - 1; d >= 0; --d) {
      const int m = nodes[size_t(d)] - 1;
      mi[size_t(d)] = int(idx % m);
      idx /= m;
    }
    return mi;
  }

  Point node_point(const std::array<int, kMaxDim>& mi) const {
    Point p(dim);
    for (int d = 0; d < dim; ++d) p[d] = lo[size_t(d)] + spacing * mi[size_t(d)];
    return p;
  }
  Point node_point(long idx) const { return node_point(node_multi(idx)); }

  Point cell_center(const std::array<int, kMaxDim>& mi) const {
    Point p(dim);
    for (int d = 0; d < dim; ++d) p[d] = lo[size_t(d)] + spacing * (mi[size_t(d)] + 0.5);
    return p;
  }
  Point cell_center(long idx) const { return cell_center(cell_multi(idx)); }

  bool node_in_range(const std::array<int, kMaxDim>& mi) const {
    for (int d = 0; d < dim; ++d)
      if (mi[size_t(d)] < 0 || mi[size_t(d)] >= nodes[size_t(d)]) return false;
    return true;
  }

  bool contains(const Point& p, double pad = 0.0) const {
    for (int d = 0; d < dim; ++d)
      if (p[d] < lo[size_t(d)] - pad || p[d] > hi[size_t(d)] + pad) return false;
    return true;
  }

  bool same_layout(const Grid& o) const {
    if (dim != o.dim) return false;
    for (int d = 0; d < dim; ++d) {
      if (nodes[size_t(d)] != o.nodes[size_t(d)]) return false;
      if (std::abs(lo[size_t(d)] - o.lo[size_t(d)]) > 1e-12) return false;
      if (std::abs(hi[size_t(d)] - o.hi[size_t(d)]) > 1e-12) return false;
    }
    return true;
  }

  std::string describe() const {
    std::ostringstream os;
    os << dim << "d[";
    for (int d = 0; d < dim; ++d) os << (d ? "x" : "") << nodes[size_t(d)];
    os << "] h=" << spacing;
    return os.str();
  }
};

// Open/closed distinction is immaterial for node sampling; membership tests
// use the closed ball.
struct Ball {
  Point center;
  double radius = 0.0;

  Ball() = default;
  Ball(Point c, double r) : center(std::move(c)), radius(r) {
    if (!(radius > 0.0)) throw ValidationError("ball: radius must be positive");
  }

  bool contains(const Point& p) const { return dist(center, p) <= radius; }
};

namespace detail {

// Iterate lattice multi-indices in the index box [lo_i, hi_i] per axis,
// lexicographic order. f(mi) is called for each.
inline void for_each_multi(int dim, const std::array<int, kMaxDim>& lo_i,
                           const std::array<int, kMaxDim>& hi_i,
                           const std::function<void(const std::array<int, kMaxDim>&)>& f) {
  std::array<int, kMaxDim> mi = lo_i;
  for (int d = 0; d < dim; ++d)
    if (lo_i[size_t(d)] > hi_i[size_t(d)]) return;
  while (true) {
    f(mi);
    int d = dim - 1;
    while (d >= 0) {
      if (++mi[size_t(d)] <= hi_i[size_t(d)]) break;
      mi[size_t(d)] = lo_i[size_t(d)];
      --d;
    }
    if (d < 0) return;
  }
}

}  // namespace detail

// Nodes of `grid` lying in the closed ball, lexicographic order.
inline void for_each_node_in_ball(const Grid& grid, const Ball& ball,
                                  const std::function<void(long, const Point&)>& f) {
  std::array<int, kMaxDim> lo_i{}, hi_i{};
  for (int d = 0; d < grid.dim; ++d) {
    const double a = (ball.center[d] - ball.radius - grid.lo[size_t(d)]) / grid.spacing;
    const double b = (ball.center[d] + ball.radius - grid.lo[size_t(d)]) / grid.spacing;
    lo_i[size_t(d)] = std::max(0, int(std::ceil(a - 1e-12)));
    hi_i[size_t(d)] = std::min(grid.nodes[size_t(d)] - 1, int(std::floor(b + 1e-12)));
  }
  detail::for_each_multi(grid.dim, lo_i, hi_i, [&](const std::array<int, kMaxDim>& mi) {
    const Point p = grid.node_point(mi);
    if (ball.contains(p)) f(grid.node_index(mi), p);
  });
}

// Cells whose centers lie in the closed ball, lexicographic order.
inline void for_each_cell_in_ball(const Grid& grid, const Ball& ball,
                                  const std::function<void(long, const Point&)>& f) {
  std::array<int, kMaxDim> lo_i{}, hi_i{};
  for (int d = 0; d < grid.dim; ++d) {
    const double a = (ball.center[d] - ball.radius - grid.lo[size_t(d)]) / grid.spacing - 0.5;
    const double b = (ball.center[d] + ball.radius - grid.lo[size_t(d)]) / grid.spacing - 0.5;
    lo_i[size_t(d)] = std::max(0, int(std::ceil(a - 1e-12)));
    hi_i[size_t(d)] = std::min(grid.nodes[size_t(d)] - 2, int(std::floor(b + 1e-12)));
  }
  detail::for_each_multi(grid.dim, lo_i, hi_i, [&](const std::array<int, kMaxDim>& mi) {
    const Point p = grid.cell_center(mi);
    if (ball.contains(p)) f(grid.cell_index(mi), p);
  });
}

// Region over which localized quantities integrate: the whole grid or the
// cells whose centers fall in a ball.
struct Region {
  std::optional<Ball> ball;

  static Region full() { return Region{}; }
  static Region in_ball(const Ball& b) { return Region{b}; }
  bool is_full() const { return !ball.has_value(); }
};

inline void for_each_region_cell(const Grid& grid, const Region& region,
                                 const std::function<void(long, const Point&)>& f) {
  if (region.is_full()) {
    const long nc = grid.cell_count();
    for (long c = 0; c < nc; ++c) f(c, grid.cell_center(c));
  } else {
    for_each_cell_in_ball(grid, *region.ball, f);
  }
}

}  // namespace dplab
