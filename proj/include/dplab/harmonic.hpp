// harmonic.hpp - comparison with the frozen Dirichlet minimizer on the half
// ball, and the averaged V-distance between the input and the comparison map.
#pragma once

#include "dplab/solver.hpp"
#include "dplab/vmaps.hpp"

namespace dplab {

struct HarmonicCompareResult {
  GridField h;            // input field with the half-ball interior replaced
  double v_distance = 0;  // mean over B_{r/2} of |V_p(Dv)-V_p(Dh)|^2 + a|V_q(Dv)-V_q(Dh)|^2
  bool max_principle_ok = true;
  SolveReport report;
};

// Mean V-distance between two fields over a cell set.
inline double v_distance_sq(const DensityProfile& density, const GridField& v, const GridField& h,
                            const std::vector<long>& cells) {
  const Grid& g = v.grid;
  const double p = density.exponents.p, q = density.exponents.q;
  const double sum = deterministic_sum(long(cells.size()), [&](long k) {
    const auto mi = g.cell_multi(cells[size_t(k)]);
    const Mat zv = cell_gradient(v, mi);
    const Mat zh = cell_gradient(h, mi);
    const double a_val = density.coefficient.cell_value(mi);
    return frob_sq(v_map(zv, p) - v_map(zh, p)) +
           a_val * frob_sq(v_map(zv, q) - v_map(zh, q));
  });
  return sum / double(cells.size());
}

// Solve the unconstrained frozen problem on the half ball with boundary v and
// frozen point value (v)_{B_r}; return the minimizer and the V-distance.
inline HarmonicCompareResult harmonic_compare(const DensityProfile& density, const GridField& v,
                                              const Ball& ball, const SolveOptions& opts) {
  v.require_same_grid(density.grid(), "harmonic_compare");
  const Ball half(ball.center, 0.5 * ball.radius);

  FrozenProblem problem;
  problem.ball = half;
  problem.boundary_values = boundary_layer_from(v, half);
  problem.frozen_point_v = v.mean_in_ball(ball);
  problem.constrained = false;

  HarmonicCompareResult out;
  auto [h, rep] = minimize_frozen_dirichlet(density, problem, opts);

  // stitch: h on the half-ball interior, v elsewhere
  GridField merged = v;
  merged.constrained = false;
  const SolverDomain dom = SolverDomain::build(v.grid, Region::in_ball(half));
  for (long i : dom.free_nodes) merged.set(i, h.at(i));

  out.v_distance = v_distance_sq(density, v, merged, dom.cells);
  out.max_principle_ok = rep.max_principle_ok;
  out.report = std::move(rep);
  out.h = std::move(merged);
  return out;
}

}  // namespace dplab
