// solver.hpp - constrained minimization over sphere-valued fields and the
// frozen Dirichlet problems on balls. Free nodes are the lattice points all
// of whose incident cells belong to the region, so the fixed set is exactly a
// one-node boundary shell.
#pragma once

#include "dplab/descent.hpp"
#include "dplab/energy.hpp"

namespace dplab {

struct SolveOptions {
  long max_iters = 5000;
  double step0 = 1.0;
  double armijo_c = 1e-4;
  double armijo_shrink = 0.5;
  double grad_tol = 1e-7;
  double energy_tol = 1e-13;
  double mu = -1.0;  // < 0: use 1e-4 * grid spacing
  uint64_t seed = 0;

  void validate() const {
    if (max_iters < 0) throw ValidationError("solver: max_iters must be >= 0");
    if (!(step0 > 0.0)) throw ValidationError("solver: step0 must be > 0");
    if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw ValidationError("solver: armijo_c in (0,1)");
    if (!(armijo_shrink > 0.0 && armijo_shrink < 1.0))
      throw ValidationError("solver: armijo_shrink in (0,1)");
    if (!(grad_tol > 0.0)) throw ValidationError("solver: grad_tol must be > 0");
    if (!(energy_tol > 0.0)) throw ValidationError("solver: energy_tol must be > 0");
  }

  double effective_mu(const Grid& g) const { return mu < 0.0 ? 1e-4 * g.spacing : mu; }
};

struct SolveReport {
  long iterations = 0;
  double final_energy = 0.0;               // plain (mu = 0) double-phase energy
  double final_energy_regularized = 0.0;   // objective actually minimized
  std::vector<double> energy_trace;        // objective per accepted step, non-increasing
  double max_constraint_violation = 0.0;
  double el_residual_norm = 0.0;           // sup |grad| / h^n at exit
  std::string termination;
  // frozen-problem diagnostics
  double competitor_energy = 0.0;          // H-energy of the supplied competitor
  bool comparison_ok = true;               // energy(v) <= (L/nu) * competitor
  double sup_solution = 0.0;
  double sup_boundary = 0.0;
  bool max_principle_ok = true;            // sup|h| <= sqrt(N) sup|boundary|
};

// Free/fixed split of the nodes touched by a cell region.
struct SolverDomain {
  std::vector<long> cells;
  std::vector<long> free_nodes;
  std::vector<uint8_t> touched;  // per node: 0 untouched, 1 fixed, 2 free

  static SolverDomain build(const Grid& grid, const Region& region) {
    SolverDomain dom;
    dom.cells = region_cells(grid, region);
    std::vector<uint8_t> cell_in(size_t(grid.cell_count()), 0);
    for (long c : dom.cells) cell_in[size_t(c)] = 1;
    dom.touched.assign(size_t(grid.node_count()), 0);

    // mark touched nodes (corners of region cells)
    for (long c : dom.cells) {
      const auto mi = grid.cell_multi(c);
      const int corners = 1 << grid.dim;
      for (int k = 0; k < corners; ++k) {
        auto m = mi;
        for (int d = 0; d < grid.dim; ++d)
          if (k & (1 << d)) m[size_t(d)] += 1;
        dom.touched[size_t(grid.node_index(m))] = 1;
      }
    }
    // free = all 2^dim incident cells exist and belong to the region
    const long n_nodes = grid.node_count();
    for (long i = 0; i < n_nodes; ++i) {
      if (!dom.touched[size_t(i)]) continue;
      const auto mi = grid.node_multi(i);
      bool free_node = true;
      const int corners = 1 << grid.dim;
      for (int k = 0; k < corners && free_node; ++k) {
        auto m = mi;
        for (int d = 0; d < grid.dim; ++d)
          if (k & (1 << d)) m[size_t(d)] -= 1;
        bool ok = true;
        for (int d = 0; d < grid.dim; ++d)
          if (m[size_t(d)] < 0 || m[size_t(d)] >= grid.nodes[size_t(d)] - 1) ok = false;
        if (!ok || !cell_in[size_t(grid.cell_index(m))]) free_node = false;
      }
      if (free_node) {
        dom.touched[size_t(i)] = 2;
        dom.free_nodes.push_back(i);
      }
    }
    return dom;
  }

  std::vector<long> fixed_nodes() const {
    std::vector<long> fixed;
    for (long i = 0; i < long(touched.size()); ++i)
      if (touched[size_t(i)] == 1) fixed.push_back(i);
    return fixed;
  }
};

namespace detail {

// Energy restricted to cells incident to at least one free node would equal
// the full region energy up to a constant; we keep the full region sum so
// reports carry the physical value.
struct FieldDescent {
  const DensityProfile* density;
  const SolverDomain* dom;
  GridField* field;
  double mu = 0.0;
  bool constrained = false;

  long dofs() const { return long(dom->free_nodes.size()) * field->target_dim; }

  void gather(std::vector<double>& x) const {
    const int N = field->target_dim;
    x.resize(size_t(dofs()));
    for (size_t k = 0; k < dom->free_nodes.size(); ++k) {
      const long node = dom->free_nodes[k];
      for (int c = 0; c < N; ++c)
        x[k * size_t(N) + size_t(c)] = field->values[size_t(node) * size_t(N) + size_t(c)];
    }
  }
  void scatter(const std::vector<double>& x) const {
    const int N = field->target_dim;
    for (size_t k = 0; k < dom->free_nodes.size(); ++k) {
      const long node = dom->free_nodes[k];
      for (int c = 0; c < N; ++c)
        field->values[size_t(node) * size_t(N) + size_t(c)] = x[k * size_t(N) + size_t(c)];
    }
  }

  double energy(const std::vector<double>& x) const {
    scatter(x);
    return total_energy_cells(*density, *field, dom->cells, mu);
  }

  void gradient(const std::vector<double>& x, std::vector<double>& g) const {
    scatter(x);
    const GridField full = energy_gradient_cells(*density, *field, dom->cells, mu);
    const int N = field->target_dim;
    g.resize(size_t(dofs()));
    for (size_t k = 0; k < dom->free_nodes.size(); ++k) {
      const long node = dom->free_nodes[k];
      Vec gn = full.at(node);
      if (constrained) {
        // tangent-space projection at the current (unit) value
        const Vec u = field->at(node);
        const double un2 = norm2_sq(u);
        if (un2 > 0.0) gn -= (dot(gn, u) / un2) * u;
      }
      for (int c = 0; c < N; ++c) g[k * size_t(N) + size_t(c)] = gn[c];
    }
  }

  void project(std::vector<double>& x) const {
    if (!constrained) return;
    const int N = field->target_dim;
    for (size_t k = 0; k < dom->free_nodes.size(); ++k) {
      double s = 0.0;
      for (int c = 0; c < N; ++c) {
        const double t = x[k * size_t(N) + size_t(c)];
        s += t * t;
      }
      if (s > 1e-24) {
        const double inv = 1.0 / std::sqrt(s);
        for (int c = 0; c < N; ++c) x[k * size_t(N) + size_t(c)] *= inv;
      } else {
        x[k * size_t(N)] = 1.0;
        for (int c = 1; c < N; ++c) x[k * size_t(N) + size_t(c)] = 0.0;
      }
    }
  }
};

inline SolveReport run_field_descent(const DensityProfile& density, GridField& field,
                                     const SolverDomain& dom, const SolveOptions& opts,
                                     bool constrained) {
  opts.validate();
  FieldDescent fd{&density, &dom, &field, opts.effective_mu(field.grid), constrained};

  DescentProblem prob;
  prob.energy = [&fd](const std::vector<double>& x) { return fd.energy(x); };
  prob.gradient = [&fd](const std::vector<double>& x, std::vector<double>& g) {
    fd.gradient(x, g);
  };
  prob.project = [&fd](std::vector<double>& x) { fd.project(x); };
  prob.grad_scale = 1.0 / field.grid.cell_volume();

  DescentOptions dopts;
  dopts.max_iters = opts.max_iters;
  dopts.step0 = opts.step0;
  dopts.armijo_c = opts.armijo_c;
  dopts.armijo_shrink = opts.armijo_shrink;
  dopts.grad_tol = opts.grad_tol;
  dopts.energy_tol = opts.energy_tol;

  std::vector<double> x;
  fd.gather(x);
  const DescentResult r = descend(prob, x, dopts);
  fd.scatter(x);

  SolveReport rep;
  rep.iterations = r.iterations;
  rep.energy_trace = r.energy_trace;
  rep.final_energy_regularized = r.final_energy;
  rep.final_energy = total_energy_cells(density, field, dom.cells, 0.0);
  rep.el_residual_norm = r.grad_norm;
  rep.termination = r.termination;
  if (constrained) {
    // only nodes of the solve domain count; the field may be undefined
    // elsewhere (ball problems on a larger grid)
    double worst = 0.0;
    for (long i = 0; i < field.grid.node_count(); ++i)
      if (dom.touched[size_t(i)])
        worst = std::max(worst, std::abs(norm2(field.at(i)) - 1.0));
    rep.max_constraint_violation = worst;
  }
  return rep;
}

}  // namespace detail

// Minimize the double-phase energy over sphere-valued competitors with the
// outer boundary shell held fixed at field0's values.
inline std::pair<GridField, SolveReport> minimize_constrained(const DensityProfile& density,
                                                              const GridField& field0,
                                                              const SolveOptions& opts) {
  field0.require_same_grid(density.grid(), "minimize_constrained");
  if (!field0.constrained) throw ConstraintError("minimize_constrained: field must be constrained");
  field0.check_sphere_valued();

  GridField u = field0;
  const SolverDomain dom = SolverDomain::build(u.grid, Region::full());
  SolveReport rep = detail::run_field_descent(density, u, dom, opts, /*constrained=*/true);
  return {std::move(u), std::move(rep)};
}

// Frozen Dirichlet problem data. boundary_values is a full-size field whose
// entries matter only on the fixed shell; NaN marks "unspecified".
struct FrozenProblem {
  Ball ball;
  GridField boundary_values;
  Vec frozen_point_v;
  bool constrained = false;
};

inline std::pair<GridField, SolveReport> minimize_frozen_dirichlet(const DensityProfile& density,
                                                                   const FrozenProblem& problem,
                                                                   const SolveOptions& opts) {
  problem.boundary_values.require_same_grid(density.grid(), "minimize_frozen_dirichlet");
  const Grid& grid = density.grid();
  const SolverDomain dom = SolverDomain::build(grid, Region::in_ball(problem.ball));
  if (dom.free_nodes.empty())
    throw EmptyRegionError("minimize_frozen_dirichlet: ball resolves no interior nodes");

  // freeze the v-argument of the density
  DensityProfile frozen = density;
  frozen.frozen_v = problem.frozen_point_v;

  const int N = problem.boundary_values.target_dim;
  GridField u = GridField::zeros(grid, N, problem.constrained);
  u.constraint_tol = problem.boundary_values.constraint_tol;

  // boundary layer: copy + completeness check
  Vec mean(N);
  long n_fixed = 0;
  for (long i = 0; i < grid.node_count(); ++i) {
    if (dom.touched[size_t(i)] != 1) continue;
    const Vec v = problem.boundary_values.at(i);
    for (int c = 0; c < N; ++c)
      if (!std::isfinite(v[c]))
        throw BoundaryError("minimize_frozen_dirichlet: incomplete boundary data");
    if (problem.constrained && std::abs(norm2(v) - 1.0) > u.constraint_tol)
      throw ConstraintError("minimize_frozen_dirichlet: boundary data not sphere-valued");
    u.set(i, v);
    mean += v;
    ++n_fixed;
  }
  if (n_fixed == 0) throw BoundaryError("minimize_frozen_dirichlet: no boundary layer");
  mean *= 1.0 / double(n_fixed);

  // initial interior guess: boundary mean (retracted in constrained mode)
  Vec fill = mean;
  if (problem.constrained) {
    const double m = norm2(fill);
    fill = (m > 1e-12) ? (1.0 / m) * fill : Vec::unit(N, 0);
  }
  for (long i : dom.free_nodes) u.set(i, fill);

  const double competitor = total_energy_cells(frozen, u, dom.cells, 0.0);

  SolveReport rep = detail::run_field_descent(frozen, u, dom, opts, problem.constrained);

  // frozen-problem comparison: energy(v) <= (L/nu) * energy(competitor)
  rep.competitor_energy = competitor;
  const double ratio_LN = frozen.exponents.L / frozen.exponents.nu;
  rep.comparison_ok = rep.final_energy <= ratio_LN * competitor + 1e-12;

  // maximum principle sup|h| <= sqrt(N) sup|boundary| (unconstrained solves)
  double sup_b = 0.0, sup_h = 0.0;
  for (long i = 0; i < grid.node_count(); ++i) {
    if (dom.touched[size_t(i)] == 1) sup_b = std::max(sup_b, norm2(u.at(i)));
    if (dom.touched[size_t(i)] == 2) sup_h = std::max(sup_h, norm2(u.at(i)));
  }
  rep.sup_boundary = sup_b;
  rep.sup_solution = std::max(sup_h, sup_b);
  rep.max_principle_ok =
      problem.constrained || rep.sup_solution <= std::sqrt(double(N)) * sup_b + 1e-12;
  return {std::move(u), std::move(rep)};
}

// Convenience: extract a boundary-layer field (NaN off the shell) for a ball
// region from an existing field.
inline GridField boundary_layer_from(const GridField& source, const Ball& ball) {
  const SolverDomain dom = SolverDomain::build(source.grid, Region::in_ball(ball));
  GridField bl = GridField::zeros(source.grid, source.target_dim, source.constrained);
  bl.constraint_tol = source.constraint_tol;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (auto& v : bl.values) v = nan;
  for (long i = 0; i < source.grid.node_count(); ++i)
    if (dom.touched[size_t(i)] == 1) bl.set(i, source.at(i));
  return bl;
}

}  // namespace dplab
