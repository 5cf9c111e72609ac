// excess.hpp - the intrinsic excess E(u;B) = mean of H(x,Du) over a discrete
// ball and the eps-regularity test excess < H^-_B(eps/r).
#pragma once

#include "dplab/energy.hpp"

namespace dplab {

namespace detail {

// Direct bounding-box scan for the ball mean of H(x,Du); avoids per-cell
// index arithmetic and dispatch on the detector's hot path.
inline bool excess_fast(const DensityProfile& density, const GridField& field, const Ball& ball,
                        double& out) {
  if (density.variant != DensityVariant::pure_H) return false;
  const Grid& g = field.grid;
  const int n = g.dim, N = field.target_dim;

  std::array<int, kMaxDim> lo_i{}, hi_i{};
  for (int d = 0; d < n; ++d) {
    const double a = (ball.center[d] - ball.radius - g.lo[size_t(d)]) / g.spacing - 0.5;
    const double b = (ball.center[d] + ball.radius - g.lo[size_t(d)]) / g.spacing - 0.5;
    lo_i[size_t(d)] = std::max(0, int(std::ceil(a - 1e-12)));
    hi_i[size_t(d)] = std::min(g.nodes[size_t(d)] - 2, int(std::floor(b + 1e-12)));
    if (lo_i[size_t(d)] > hi_i[size_t(d)]) throw EmptyRegionError("excess: empty ball");
  }

  std::array<long, kMaxDim> strides{};
  long stride = 1;
  for (int d = n - 1; d >= 0; --d) {
    strides[size_t(d)] = stride;
    stride *= g.nodes[size_t(d)];
  }

  const double p = density.exponents.p, q = density.exponents.q;
  const bool p_is_two = (p == 2.0);
  const double* vals = field.values.data();
  const double* avals = density.coefficient.values.data();
  const double inv_h2 = 1.0 / (g.spacing * g.spacing);
  const double r2 = ball.radius * ball.radius;
  const int corners = 1 << n;
  const double inv_corners = 1.0 / double(corners);

  std::array<long, 16> coff{};
  for (int c = 0; c < corners; ++c) {
    long off = 0;
    for (int d = 0; d < n; ++d)
      if (c & (1 << d)) off += strides[size_t(d)];
    coff[size_t(c)] = off;
  }

  double acc = 0.0;
  long count = 0;
  std::array<int, kMaxDim> mi = lo_i;
  while (true) {
    // squared distance of the cell center to the ball center
    double dist2 = 0.0;
    long base = 0;
    for (int d = 0; d < n; ++d) {
      const double c = g.lo[size_t(d)] + g.spacing * (mi[size_t(d)] + 0.5) - ball.center[d];
      dist2 += c * c;
      base += strides[size_t(d)] * mi[size_t(d)];
    }
    if (dist2 <= r2) {
      double s2 = 0.0;
      const double* u0 = vals + size_t(base) * size_t(N);
      for (int d = 0; d < n; ++d) {
        const double* u1 = vals + size_t(base + strides[size_t(d)]) * size_t(N);
        for (int c = 0; c < N; ++c) {
          const double t = u1[c] - u0[c];
          s2 += t * t;
        }
      }
      s2 *= inv_h2;
      double a_cell = 0.0;
      for (int c = 0; c < corners; ++c) a_cell += avals[size_t(base + coff[size_t(c)])];
      a_cell *= inv_corners;
      double H = p_is_two ? s2 : std::pow(s2, 0.5 * p);
      if (a_cell != 0.0) H += a_cell * std::pow(s2, 0.5 * q);
      acc += H;
      ++count;
    }
    int d = n - 1;
    while (d >= 0) {
      if (++mi[size_t(d)] <= hi_i[size_t(d)]) break;
      mi[size_t(d)] = lo_i[size_t(d)];
      --d;
    }
    if (d < 0) break;
  }
  if (count == 0) throw EmptyRegionError("excess: empty ball");
  out = acc / double(count);
  return true;
}

}  // namespace detail

// Mean of H(x,Du) over the cells whose centers lie in the closed ball.
inline double excess(const DensityProfile& density, const GridField& field, const Ball& ball) {
  field.require_same_grid(density.grid(), "excess");
  double fast = 0.0;
  if (detail::excess_fast(density, field, ball, fast)) return fast;
  const auto cells = region_cells(field.grid, Region::in_ball(ball));
  const double E = total_energy_cells(density, field, cells, 0.0);
  return E / region_volume(field.grid, cells);
}

// True iff the ball certifies regularity at its center for this epsilon.
inline bool epsilon_regularity_test(const DensityProfile& density, const GridField& field,
                                    const Ball& ball, double eps) {
  if (!(ball.radius <= 1.0))
    throw ValidationError("epsilon_regularity_test: stated for radius <= 1");
  if (!(eps > 0.0)) throw ValidationError("epsilon_regularity_test: eps must be > 0");
  return excess(density, field, ball) <
         eval_H_frozen(density, ball, eps / ball.radius, FrozenSide::minus);
}

}  // namespace dplab
