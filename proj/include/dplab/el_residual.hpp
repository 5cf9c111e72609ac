// el_residual.hpp - discrete Euler-Lagrange residual of the frozen
// sphere-constrained problem: the test-function pairing vanishes at critical
// points under refinement.
#pragma once

#include "dplab/energy.hpp"
#include "dplab/solver.hpp"

namespace dplab {

// integral of  Ftilde'(x, s)(Dv/s) : Dphi  -  Ftilde'(x, s) s (v . phi)
// over the region, with s = sqrt(|Dv|^2 + mu^2); phi must vanish on the fixed
// shell of the region and be bounded.
inline double el_residual(const DensityProfile& density, const GridField& field,
                          const GridField& phi, const Region& region, double mu = 0.0) {
  field.require_same_grid(density.grid(), "el_residual");
  phi.require_same_grid(field.grid, "el_residual");
  if (phi.target_dim != field.target_dim)
    throw ValidationError("el_residual: phi target dim mismatch");
  for (double t : phi.values)
    if (!std::isfinite(t)) throw DomainError("el_residual: phi must be bounded");

  const SolverDomain dom = SolverDomain::build(field.grid, region);
  for (long i = 0; i < field.grid.node_count(); ++i)
    if (dom.touched[size_t(i)] == 1 && norm2(phi.at(i)) > 1e-12)
      throw DomainError("el_residual: phi must vanish on the boundary layer");

  const Grid& g = field.grid;
  const double vol = g.cell_volume();
  return vol * deterministic_sum(long(dom.cells.size()), [&](long k) {
    const auto mi = g.cell_multi(dom.cells[size_t(k)]);
    const Mat zv = cell_gradient(field, mi);
    const Mat zp = cell_gradient(phi, mi);
    const double s = std::sqrt(frob_sq(zv) + mu * mu);
    const double a_val = density.coefficient.cell_value(mi);
    const double bval = density.b_factor(g.cell_center(mi), density.frozen_v);
    if (s == 0.0) return 0.0;
    const double fp = density.radial_d1(a_val, bval, s);
    const Vec vbar = cell_value(field, mi);
    const Vec pbar = cell_value(phi, mi);
    return fp * dot(zv, zp) / s - fp * s * dot(vbar, pbar);
  });
}

}  // namespace dplab
