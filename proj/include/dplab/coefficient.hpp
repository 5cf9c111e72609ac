// coefficient.hpp - the grid-sampled modulating coefficient a(.) >= 0 and its
// Hoelder seminorm estimate.
#pragma once

#include <algorithm>
#include <vector>

#include "dplab/grid.hpp"

namespace dplab {

struct CoefficientField {
  Grid grid;
  std::vector<double> values;   // one per node
  double holder_seminorm = 0.0;

  double at(long node) const { return values[size_t(node)]; }

  // Multilinear interpolation; clamped to the box so measure/capacity probes
  // may evaluate right on the boundary.
  double interpolate(const Point& p) const {
    std::array<int, kMaxDim> base{};
    std::array<double, kMaxDim> frac{};
    for (int d = 0; d < grid.dim; ++d) {
      double t = (p[d] - grid.lo[size_t(d)]) / grid.spacing;
      t = std::clamp(t, 0.0, double(grid.nodes[size_t(d)] - 1));
      int b = std::min(int(t), grid.nodes[size_t(d)] - 2);
      base[size_t(d)] = b;
      frac[size_t(d)] = t - b;
    }
    double acc = 0.0;
    const int corners = 1 << grid.dim;
    for (int c = 0; c < corners; ++c) {
      double w = 1.0;
      std::array<int, kMaxDim> mi = base;
      for (int d = 0; d < grid.dim; ++d) {
        if (c & (1 << d)) {
          mi[size_t(d)] += 1;
          w *= frac[size_t(d)];
        } else {
          w *= 1.0 - frac[size_t(d)];
        }
      }
      acc += w * values[size_t(grid.node_index(mi))];
    }
    return acc;
  }

  // Mean of the 2^n corner values: the midpoint-quadrature value of a over a
  // cell (exact for affine coefficients).
  double cell_value(const std::array<int, kMaxDim>& cell_mi) const {
    double acc = 0.0;
    const int corners = 1 << grid.dim;
    for (int c = 0; c < corners; ++c) {
      std::array<int, kMaxDim> mi = cell_mi;
      for (int d = 0; d < grid.dim; ++d)
        if (c & (1 << d)) mi[size_t(d)] += 1;
      acc += values[size_t(grid.node_index(mi))];
    }
    return acc / double(corners);
  }
  double cell_value(long cell) const { return cell_value(grid.cell_multi(cell)); }

  // inf/sup of the node samples whose centers lie in the closed ball.
  struct BallRange {
    double min = 0.0, max = 0.0;
    long count = 0;
  };
  BallRange range_in_ball(const Ball& ball) const {
    BallRange r;
    r.min = std::numeric_limits<double>::infinity();
    r.max = -std::numeric_limits<double>::infinity();

    std::array<int, kMaxDim> lo_i{}, hi_i{};
    for (int d = 0; d < grid.dim; ++d) {
      const double a = (ball.center[d] - ball.radius - grid.lo[size_t(d)]) / grid.spacing;
      const double b = (ball.center[d] + ball.radius - grid.lo[size_t(d)]) / grid.spacing;
      lo_i[size_t(d)] = std::max(0, int(std::ceil(a - 1e-12)));
      hi_i[size_t(d)] = std::min(grid.nodes[size_t(d)] - 1, int(std::floor(b + 1e-12)));
      if (lo_i[size_t(d)] > hi_i[size_t(d)])
        throw EmptyRegionError("coefficient: ball contains no grid nodes");
    }
    std::array<long, kMaxDim> strides{};
    long stride = 1;
    for (int d = grid.dim - 1; d >= 0; --d) {
      strides[size_t(d)] = stride;
      stride *= grid.nodes[size_t(d)];
    }
    const double r2 = ball.radius * ball.radius;
    std::array<int, kMaxDim> mi = lo_i;
    while (true) {
      double dist2 = 0.0;
      long idx = 0;
      for (int d = 0; d < grid.dim; ++d) {
        const double c = grid.lo[size_t(d)] + grid.spacing * mi[size_t(d)] - ball.center[d];
        dist2 += c * c;
        idx += strides[size_t(d)] * mi[size_t(d)];
      }
      if (dist2 <= r2) {
        const double v = values[size_t(idx)];
        r.min = std::min(r.min, v);
        r.max = std::max(r.max, v);
        ++r.count;
      }
      int d = grid.dim - 1;
      while (d >= 0) {
        if (++mi[size_t(d)] <= hi_i[size_t(d)]) break;
        mi[size_t(d)] = lo_i[size_t(d)];
        --d;
      }
      if (d < 0) break;
    }
    if (r.count == 0) throw EmptyRegionError("coefficient: ball contains no grid nodes");
    return r;
  }

  void check_nonnegative() const {
    for (double v : values)
      if (!(v >= 0.0)) throw ValidationError("coefficient: values must be nonnegative");
  }
};

// Two-point quotient estimate of [a]_{0,alpha}. All axis-adjacent pairs are
// sampled (short distances dominate the sup for alpha < 1), then random long
// pairs up to the budget; the estimate is inflated 10% since node samples
// can only under-estimate the continuum seminorm.
inline double estimate_holder_seminorm(const Grid& grid, const std::vector<double>& values,
                                       double alpha, long pair_budget = 200000,
                                       uint64_t seed = 12345) {
  double best = 0.0;
  const long n_nodes = grid.node_count();
  long used = 0;
  for (long idx = 0; idx < n_nodes && used < pair_budget; ++idx) {
    const auto mi = grid.node_multi(idx);
    for (int d = 0; d < grid.dim; ++d) {
      auto mj = mi;
      mj[size_t(d)] += 1;
      if (mj[size_t(d)] >= grid.nodes[size_t(d)]) continue;
      const long jdx = grid.node_index(mj);
      const double q = std::abs(values[size_t(idx)] - values[size_t(jdx)]) /
                       std::pow(grid.spacing, alpha);
      best = std::max(best, q);
      ++used;
    }
  }
  Rng rng(seed);
  for (long k = used; k < pair_budget; ++k) {
    const long i = long(rng.next_u64() % uint64_t(n_nodes));
    const long j = long(rng.next_u64() % uint64_t(n_nodes));
    if (i == j) continue;
    const double d = dist(grid.node_point(i), grid.node_point(j));
    const double q = std::abs(values[size_t(i)] - values[size_t(j)]) / std::pow(d, alpha);
    best = std::max(best, q);
  }
  return best * 1.1;
}

// --- coefficient recipes ----------------------------------------------------

inline CoefficientField make_coefficient(const Grid& grid,
                                         const std::function<double(const Point&)>& f,
                                         double alpha, long seminorm_pair_budget = 200000) {
  CoefficientField c;
  c.grid = grid;
  c.values.resize(size_t(grid.node_count()));
  for (long i = 0; i < grid.node_count(); ++i) c.values[size_t(i)] = f(grid.node_point(i));
  c.check_nonnegative();
  c.holder_seminorm = estimate_holder_seminorm(grid, c.values, alpha, seminorm_pair_budget);
  return c;
}

inline CoefficientField coefficient_zero(const Grid& grid) {
  CoefficientField c;
  c.grid = grid;
  c.values.assign(size_t(grid.node_count()), 0.0);
  c.holder_seminorm = 0.0;
  return c;
}

inline CoefficientField coefficient_constant(const Grid& grid, double value) {
  if (!(value >= 0.0)) throw ValidationError("coefficient: constant must be >= 0");
  CoefficientField c;
  c.grid = grid;
  c.values.assign(size_t(grid.node_count()), value);
  c.holder_seminorm = 0.0;
  return c;
}

// a(x) = scale * |<x,normal> - offset|^alpha. Exact seminorm = scale along the
// normal direction; the zero set is the hyperplane.
inline CoefficientField coefficient_dist_to_hyperplane(const Grid& grid, double alpha,
                                                       Vec normal, double offset,
                                                       double scale = 1.0) {
  const double nn = norm2(normal);
  if (!(nn > 0.0)) throw ValidationError("coefficient: zero normal");
  normal *= 1.0 / nn;
  CoefficientField c;
  c.grid = grid;
  c.values.resize(size_t(grid.node_count()));
  for (long i = 0; i < grid.node_count(); ++i) {
    const double d = std::abs(dot(grid.node_point(i), normal) - offset);
    c.values[size_t(i)] = scale * std::pow(d, alpha);
  }
  c.holder_seminorm = scale;
  return c;
}

// a(x) = scale * dist(x, closed ball)^alpha; vanishes on the ball.
inline CoefficientField coefficient_dist_to_ball(const Grid& grid, double alpha,
                                                 const Ball& zero_set, double scale = 1.0) {
  CoefficientField c;
  c.grid = grid;
  c.values.resize(size_t(grid.node_count()));
  for (long i = 0; i < grid.node_count(); ++i) {
    const double d = std::max(0.0, dist(grid.node_point(i), zero_set.center) - zero_set.radius);
    c.values[size_t(i)] = scale * std::pow(d, alpha);
  }
  c.holder_seminorm = scale;
  return c;
}

// Smooth periodic two-material pattern; seminorm estimated from samples.
inline CoefficientField coefficient_checkerboard(const Grid& grid, double alpha, double period,
                                                 double amplitude) {
  if (!(period > 0.0)) throw ValidationError("coefficient: period must be positive");
  return make_coefficient(
      grid,
      [&](const Point& p) {
        double s = 1.0;
        for (int d = 0; d < grid.dim; ++d) s *= std::sin(kPi * p[d] / period);
        return amplitude * 0.5 * (1.0 + s);
      },
      alpha);
}

}  // namespace dplab
