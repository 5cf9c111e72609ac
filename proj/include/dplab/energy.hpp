// energy.hpp - discrete double-phase energy: per-cell forward differences,
// midpoint quadrature, and the exact gradient of the (optionally
// mu-regularized) discrete energy.
#pragma once

#include "dplab/density.hpp"
#include "dplab/parallel.hpp"
#include "dplab/vmaps.hpp"

namespace dplab {

// Forward-difference gradient of `field` on the cell with lower corner `mi`:
// z(c,d) = (u[mi+e_d][c] - u[mi][c]) / h.
inline Mat cell_gradient(const GridField& field, const std::array<int, kMaxDim>& mi) {
  const Grid& g = field.grid;
  Mat z(field.target_dim, g.dim);
  const long base = g.node_index(mi);
  const double inv_h = 1.0 / g.spacing;
  long stride = 1;
  std::array<long, kMaxDim> strides{};
  for (int d = g.dim - 1; d >= 0; --d) {
    strides[size_t(d)] = stride;
    stride *= g.nodes[size_t(d)];
  }
  const double* vals = field.values.data();
  const int N = field.target_dim;
  for (int d = 0; d < g.dim; ++d) {
    const long j = base + strides[size_t(d)];
    for (int c = 0; c < N; ++c)
      z(c, d) = (vals[size_t(j) * size_t(N) + size_t(c)] -
                 vals[size_t(base) * size_t(N) + size_t(c)]) * inv_h;
  }
  return z;
}

inline Mat cell_gradient(const GridField& field, long cell) {
  return cell_gradient(field, field.grid.cell_multi(cell));
}

// Mean of the corner values over a cell.
inline Vec cell_value(const GridField& field, const std::array<int, kMaxDim>& mi) {
  const Grid& g = field.grid;
  Vec acc(field.target_dim);
  const int corners = 1 << g.dim;
  for (int c = 0; c < corners; ++c) {
    std::array<int, kMaxDim> m = mi;
    for (int d = 0; d < g.dim; ++d)
      if (c & (1 << d)) m[size_t(d)] += 1;
    acc += field.at(g.node_index(m));
  }
  acc *= 1.0 / double(corners);
  return acc;
}

inline std::vector<long> region_cells(const Grid& grid, const Region& region) {
  std::vector<long> cells;
  if (region.is_full()) {
    cells.resize(size_t(grid.cell_count()));
    for (long c = 0; c < grid.cell_count(); ++c) cells[size_t(c)] = c;
  } else {
    for_each_cell_in_ball(grid, *region.ball, [&](long c, const Point&) { cells.push_back(c); });
  }
  if (cells.empty()) throw EmptyRegionError("region contains no cells");
  return cells;
}

inline double region_volume(const Grid& grid, const std::vector<long>& cells) {
  return grid.cell_volume() * double(cells.size());
}

namespace detail {

// Per-cell energy density value b * ((|z|^2+mu^2)^{p/2} + a (|z|^2+mu^2)^{q/2}).
inline double cell_energy_density(const DensityProfile& density, long cell, const GridField& field,
                                  double mu) {
  const auto mi = field.grid.cell_multi(cell);
  const Mat z = cell_gradient(field, mi);
  const double s = std::sqrt(frob_sq(z) + mu * mu);
  const double a_val = density.coefficient.cell_value(mi);
  const double bval = density.b_factor(field.grid.cell_center(mi), density.frozen_v);
  return density.radial(a_val, bval, s);
}

}  // namespace detail

// Energy over an explicit cell list. mu = 0 gives the plain double-phase
// energy; mu > 0 the C^1 regularization used by gradient descent.
inline double total_energy_cells(const DensityProfile& density, const GridField& field,
                                 const std::vector<long>& cells, double mu = 0.0) {
  field.require_same_grid(density.grid(), "total_energy");
  const double vol = field.grid.cell_volume();
  return vol * deterministic_sum(long(cells.size()), [&](long k) {
    return detail::cell_energy_density(density, cells[size_t(k)], field, mu);
  });
}

inline double total_energy(const DensityProfile& density, const GridField& field,
                           const Region& region = Region::full(), double mu = 0.0) {
  return total_energy_cells(density, field, region_cells(field.grid, region), mu);
}

// Exact gradient of the discretized, regularized energy with respect to the
// nodal values. Serial scatter over cells keeps it deterministic.
inline GridField energy_gradient_cells(const DensityProfile& density, const GridField& field,
                                       const std::vector<long>& cells, double mu) {
  field.require_same_grid(density.grid(), "energy_gradient");
  const Grid& g = field.grid;
  const Exponents& e = density.exponents;
  if (e.p < 2.0 && !(mu > 0.0))
    throw SingularityError("energy_gradient: mu > 0 required when p < 2");
  GridField grad = GridField::zeros(g, field.target_dim, false);

  std::array<long, kMaxDim> strides{};
  long stride = 1;
  for (int d = g.dim - 1; d >= 0; --d) {
    strides[size_t(d)] = stride;
    stride *= g.nodes[size_t(d)];
  }
  const double vol = g.cell_volume();
  const double inv_h = 1.0 / g.spacing;
  const int N = field.target_dim;

  for (long cell : cells) {
    const auto mi = g.cell_multi(cell);
    const Mat z = cell_gradient(field, mi);
    const double s2 = frob_sq(z) + mu * mu;
    double fac = 0.0;
    if (s2 > 0.0) {
      const double s = std::sqrt(s2);
      const double a_val = density.coefficient.cell_value(mi);
      const double bval = density.b_factor(g.cell_center(mi), density.frozen_v);
      fac = vol * bval *
            (e.p * std::pow(s, e.p - 2.0) + a_val * e.q * std::pow(s, e.q - 2.0));
    }
    if (fac == 0.0) continue;
    const long base = g.node_index(mi);
    for (int d = 0; d < g.dim; ++d) {
      const long j = base + strides[size_t(d)];
      for (int c = 0; c < N; ++c) {
        const double gcomp = fac * z(c, d) * inv_h;
        grad.values[size_t(j) * size_t(N) + size_t(c)] += gcomp;
        grad.values[size_t(base) * size_t(N) + size_t(c)] -= gcomp;
      }
    }
  }
  return grad;
}

inline GridField energy_gradient(const DensityProfile& density, const GridField& field,
                                 const Region& region = Region::full(), double mu = 1e-4) {
  return energy_gradient_cells(density, field, region_cells(field.grid, region), mu);
}

}  // namespace dplab
