// capacity.hpp - relative Phi-capacity by constrained minimization of the
// discrete Phi-energy, and the measure-to-capacity trend check built from
// tent functions over nested coverings.
#pragma once

#include "dplab/descent.hpp"
#include "dplab/hausdorff.hpp"
#include "dplab/parallel.hpp"

namespace dplab {

struct CapacityOptions {
  long max_iters = 4000;
  double grad_tol = 1e-9;     // scaled by 1/h^n
  double energy_tol = 1e-12;
  double mu = -1.0;           // < 0: 1e-4 * mesh spacing
};

struct CapacityReport {
  double value = 0.0;  // discrete upper bound for Cap_Phi(K, Omega)
  int mesh = 0;        // cells per axis
  long iterations = 0;
  std::string termination;
};

// Minimal discrete int_Omega Phi(x,|Df|) over potentials f with f = 1 on the
// nodes of K, f = 0 on/outside the domain boundary, clamped to [0,1]. The
// value upper-bounds the continuum capacity as the mesh refines.
inline CapacityReport capacity_estimate(const Musielak& m, const PointCloudSet& K,
                                        const Ball& domain, int mesh_cells,
                                        const CapacityOptions& opts = {}) {
  const int n = domain.center.size();
  if (K.points.empty()) return CapacityReport{0.0, mesh_cells, 0, "empty"};
  for (const Point& p : K.points)
    if (dist(p, domain.center) >= domain.radius - 1e-12)
      throw GeometryError("capacity: K must lie strictly inside the domain");
  if (K.shape) {
    if (dist(K.shape->center, domain.center) + K.shape->radius >= domain.radius - 1e-12)
      throw GeometryError("capacity: K must lie strictly inside the domain");
  }

  // mesh over the domain bounding box
  std::array<double, kMaxDim> lo{}, hi{};
  std::array<int, kMaxDim> nn{};
  for (int d = 0; d < n; ++d) {
    lo[size_t(d)] = domain.center[d] - domain.radius;
    hi[size_t(d)] = domain.center[d] + domain.radius;
    nn[size_t(d)] = mesh_cells + 1;
  }
  const Grid g = Grid::make(n, lo, hi, nn);
  const double h = g.spacing;

  // K-nodes: nodes whose dual cells meet K (half-spacing pad keeps the
  // discrete trace centered on the true surface), else nodes of the cells
  // containing cloud points
  std::vector<uint8_t> clamped(size_t(g.node_count()), 0);
  if (K.shape) {
    const Ball padded(K.shape->center, K.shape->radius + 0.5 * h);
    for_each_node_in_ball(g, padded, [&](long node, const Point&) {
      clamped[size_t(node)] = 1;
    });
  }
  for (const Point& p : K.points) {
    std::array<int, kMaxDim> mi{};
    bool ok = true;
    for (int d = 0; d < n; ++d) {
      const int c = int(std::floor((p[d] - g.lo[size_t(d)]) / h));
      if (c < 0 || c > g.nodes[size_t(d)] - 2) ok = false;
      mi[size_t(d)] = std::clamp(c, 0, g.nodes[size_t(d)] - 2);
    }
    if (!ok) continue;
    const int corners = 1 << n;
    for (int k = 0; k < corners; ++k) {
      auto mj = mi;
      for (int d = 0; d < n; ++d)
        if (k & (1 << d)) mj[size_t(d)] += 1;
      clamped[size_t(g.node_index(mj))] = 1;
    }
  }

  // mesh resolves the gap between K and the boundary
  double min_gap = std::numeric_limits<double>::infinity();
  for (const Point& p : K.points) min_gap = std::min(min_gap, domain.radius - dist(p, domain.center));
  if (K.shape)
    min_gap = std::min(min_gap, domain.radius - dist(K.shape->center, domain.center) - K.shape->radius);
  if (min_gap < 3.0 * h)
    throw ResolutionError("capacity: mesh does not resolve dist(K, boundary)");

  // free nodes: strictly inside the domain ball and not clamped
  std::vector<long> free_nodes;
  std::vector<uint8_t> inside(size_t(g.node_count()), 0);
  for (long i = 0; i < g.node_count(); ++i) {
    const Point x = g.node_point(i);
    if (dist(x, domain.center) < domain.radius - 1e-12) {
      inside[size_t(i)] = 1;
      if (!clamped[size_t(i)]) free_nodes.push_back(i);
    }
  }

  // cells with centers inside the domain ball
  std::vector<long> cells;
  for_each_cell_in_ball(g, domain, [&](long c, const Point&) { cells.push_back(c); });

  // potential: 1 on K, 0 outside the domain, descent on the free nodes
  std::vector<double> f(size_t(g.node_count()), 0.0);
  for (long i = 0; i < g.node_count(); ++i)
    if (clamped[size_t(i)]) f[size_t(i)] = 1.0;

  const double mu = opts.mu < 0.0 ? 1e-4 * h : opts.mu;
  const double vol = g.cell_volume();

  std::array<long, kMaxDim> strides{};
  long stride = 1;
  for (int d = n - 1; d >= 0; --d) {
    strides[size_t(d)] = stride;
    stride *= g.nodes[size_t(d)];
  }

  auto cell_grad_sq = [&](long cell, const std::vector<double>& vals, Mat& z) {
    const auto mi = g.cell_multi(cell);
    const long base = g.node_index(mi);
    double s2 = 0.0;
    for (int d = 0; d < n; ++d) {
      const double t = (vals[size_t(base + strides[size_t(d)])] - vals[size_t(base)]) / h;
      z(0, d) = t;
      s2 += t * t;
    }
    return s2;
  };

  auto energy_of = [&](const std::vector<double>& vals) {
    return vol * deterministic_sum(long(cells.size()), [&](long k) {
      Mat zz(1, n);
      const double s2 = cell_grad_sq(cells[size_t(k)], vals, zz);
      return m.phi(g.cell_center(cells[size_t(k)]), std::sqrt(s2 + mu * mu));
    });
  };

  DescentProblem prob;
  prob.grad_scale = 1.0 / vol;
  prob.energy = [&](const std::vector<double>& x) {
    for (size_t k = 0; k < free_nodes.size(); ++k) f[size_t(free_nodes[k])] = x[k];
    return energy_of(f);
  };
  prob.gradient = [&](const std::vector<double>& x, std::vector<double>& grad) {
    for (size_t k = 0; k < free_nodes.size(); ++k) f[size_t(free_nodes[k])] = x[k];
    std::vector<double> full(size_t(g.node_count()), 0.0);
    Mat z(1, n);
    for (long cell : cells) {
      const double s2 = cell_grad_sq(cell, f, z);
      const double s = std::sqrt(s2 + mu * mu);
      if (s == 0.0) continue;
      const double w = vol * m.phi_dt(g.cell_center(cell), s) / s;
      const long base = g.node_index(g.cell_multi(cell));
      for (int d = 0; d < n; ++d) {
        const double gc = w * z(0, d) / h;
        full[size_t(base + strides[size_t(d)])] += gc;
        full[size_t(base)] -= gc;
      }
    }
    grad.resize(free_nodes.size());
    for (size_t k = 0; k < free_nodes.size(); ++k) grad[k] = full[size_t(free_nodes[k])];
  };
  prob.project = [&](std::vector<double>& x) {
    for (double& t : x) t = std::clamp(t, 0.0, 1.0);  // lattice truncation
  };

  // initial guess: linear in the distance between K hull and the boundary
  double k_extent = 0.0;
  for (const Point& p : K.points) k_extent = std::max(k_extent, dist(p, domain.center));
  if (K.shape) k_extent = std::max(k_extent, dist(K.shape->center, domain.center) + K.shape->radius);
  std::vector<double> x(free_nodes.size(), 0.0);
  for (size_t k = 0; k < free_nodes.size(); ++k) {
    const double r = dist(g.node_point(free_nodes[k]), domain.center);
    x[k] = std::clamp((domain.radius - r) / std::max(domain.radius - k_extent, 1e-12), 0.0, 1.0);
  }

  DescentOptions dopts;
  dopts.max_iters = opts.max_iters;
  dopts.grad_tol = opts.grad_tol;
  dopts.energy_tol = opts.energy_tol;
  dopts.step0 = h * h;  // quadratic-scale seed
  const DescentResult r = descend(prob, x, dopts);

  for (size_t k = 0; k < free_nodes.size(); ++k) f[size_t(free_nodes[k])] = x[k];
  CapacityReport rep;
  rep.mesh = mesh_cells;
  rep.iterations = r.iterations;
  rep.termination = r.termination;
  // report the unregularized energy of the final potential
  rep.value = vol * deterministic_sum(long(cells.size()), [&](long k) {
    Mat zz(1, n);
    const double s2 = cell_grad_sq(cells[size_t(k)], f, zz);
    return m.phi(g.cell_center(cells[size_t(k)]), std::sqrt(s2));
  });
  return rep;
}

// --- capacity upper bounds from tent functions over nested coverings -----------

struct CapacityTrendLevel {
  double kappa = 0.0;
  long balls = 0;
  double tent_energy = 0.0;   // int Phi(x,|Df_level|)
  double bound = 0.0;         // int Phi(x,|Dg_j|): capacity upper bound at level j
};

struct CapacityTrendReport {
  std::vector<CapacityTrendLevel> levels;
  std::vector<double> decay_ratios;  // bound_{j+1} / bound_j
  bool decreasing = false;
  double consistency_gap = 0.0;      // |bound_1 - tent_energy_1| / tent_energy_1
};

// The proof-construction trend: tents f_k = max_j (1 on B_j, linear on
// 2B_j \ B_j) over nested coverings, averaged into g_j = (1/S_j) sum f_k/k;
// the numeric Phi-energy of g_j is a decreasing capacity upper bound when
// H_Phi(E) < infty.
inline CapacityTrendReport capacity_trend(const Musielak& m, const PointCloudSet& set, double kappa0,
                                  int levels, const Grid& domain, int quad_per_ball = 24,
                                  bool probe_axioms = true) {
  if (set.points.empty()) throw ValidationError("capacity_trend: empty set");
  if (levels < 1) throw ValidationError("capacity_trend: need >= 1 level");
  if (probe_axioms) {
    const AxiomReport probe = axiom_probe(m, domain);
    if (probe.control_constant > m.axioms.c_d * (1.0 + 1e-9) ||
        probe.power_low_constant > m.axioms.c_g * (1.0 + 1e-9))
      throw AxiomError("capacity_trend: declared axiom constants fail on probe");
  }

  // nested coverings: level k covers E by balls of radius kappa_k centered at
  // cloud points, each claiming points within kappa_k/2, so every point sits
  // at depth >= kappa_k/2 inside its ball; kappa_{k+1} = kappa_k/8 keeps
  // supp f_{k+1} inside the inner balls of level k.
  struct Level {
    double kappa = 0.0;
    std::vector<Ball> balls;
  };
  std::vector<Level> lv(static_cast<size_t>(levels));
  double kappa = kappa0;
  for (int k = 0; k < levels; ++k) {
    lv[size_t(k)].kappa = kappa;
    std::vector<uint8_t> covered(set.points.size(), 0);
    for (size_t i = 0; i < set.points.size(); ++i) {
      if (covered[i]) continue;
      const Point& c = set.points[i];
      lv[size_t(k)].balls.emplace_back(c, kappa);
      for (size_t j = 0; j < set.points.size(); ++j)
        if (!covered[j] && dist(set.points[j], c) <= 0.5 * kappa) covered[j] = 1;
    }
    kappa /= 8.0;
  }

  // tent of level k at x: max over balls of the radial profile
  auto tent = [&](const Level& L, const Point& x, Vec& grad_out) {
    double best = 0.0;
    int best_ball = -1;
    for (size_t b = 0; b < L.balls.size(); ++b) {
      const double d = dist(x, L.balls[b].center);
      const double r = L.balls[b].radius;
      double v = 0.0;
      if (d <= r) v = 1.0;
      else if (d < 2.0 * r) v = 2.0 - d / r;
      if (v > best) {
        best = v;
        best_ball = int(b);
      }
    }
    grad_out = Vec(x.size());
    if (best_ball >= 0 && best < 1.0 && best > 0.0) {
      const Ball& B = L.balls[size_t(best_ball)];
      const double d = dist(x, B.center);
      if (d > 0.0) {
        for (int c = 0; c < x.size(); ++c)
          grad_out[c] = -(x[c] - B.center[c]) / (d * B.radius);
      }
    }
    return best;
  };

  // quadrature lattice per level: pitch kappa_k / quad_per_ball over the
  // union of the 2B bounding boxes; supports are disjoint across levels so
  // levels integrate independently.
  CapacityTrendReport rep;
  std::vector<double> annulus_energy(size_t(levels), 0.0);
  std::vector<double> Sj(size_t(levels), 0.0);
  double s_acc = 0.0;
  for (int k = 0; k < levels; ++k) {
    s_acc += 1.0 / double(k + 1);
    Sj[size_t(k)] = s_acc;
  }

  const int n = domain.dim;
  for (int k = 0; k < levels; ++k) {
    const Level& L = lv[size_t(k)];
    // bounding box of the level support
    Point lo = L.balls[0].center, hi = L.balls[0].center;
    for (const Ball& b : L.balls)
      for (int d = 0; d < n; ++d) {
        lo[d] = std::min(lo[d], b.center[d] - 2.0 * b.radius);
        hi[d] = std::max(hi[d], b.center[d] + 2.0 * b.radius);
      }
    const double pitch = L.kappa / double(quad_per_ball);
    std::array<long, kMaxDim> counts{};
    long total = 1;
    for (int d = 0; d < n; ++d) {
      counts[size_t(d)] = std::max<long>(1, long(std::ceil((hi[d] - lo[d]) / pitch)));
      total *= counts[size_t(d)];
    }
    const double cellvol = std::pow(pitch, double(n));
    annulus_energy[size_t(k)] = cellvol * deterministic_sum(total, [&](long idx) {
      Point x(n);
      long rem = idx;
      for (int d = n - 1; d >= 0; --d) {
        const long c = rem % counts[size_t(d)];
        rem /= counts[size_t(d)];
        x[d] = lo[d] + (double(c) + 0.5) * pitch;
      }
      Vec gr(n);
      const double v = tent(L, x, gr);
      const double gn = norm2(gr);
      if (v <= 0.0 || v >= 1.0 || gn == 0.0) return 0.0;
      return m.phi(x, gn);  // slope 1/r scaled later per level weight
    });
  }

  // bound_j = sum_{k<=j} int Phi(x, |D f_k| / (k S_j)); evaluated by scaling
  // the tent slope inside Phi, using per-level quadrature a second time
  for (int j = 0; j < levels; ++j) {
    double bound = 0.0;
    for (int k = 0; k <= j; ++k) {
      const Level& L = lv[size_t(k)];
      const double scale = 1.0 / (double(k + 1) * Sj[size_t(j)]);
      Point lo = L.balls[0].center, hi = L.balls[0].center;
      for (const Ball& b : L.balls)
        for (int d = 0; d < n; ++d) {
          lo[d] = std::min(lo[d], b.center[d] - 2.0 * b.radius);
          hi[d] = std::max(hi[d], b.center[d] + 2.0 * b.radius);
        }
      const double pitch = L.kappa / double(quad_per_ball);
      std::array<long, kMaxDim> counts{};
      long total = 1;
      for (int d = 0; d < n; ++d) {
        counts[size_t(d)] = std::max<long>(1, long(std::ceil((hi[d] - lo[d]) / pitch)));
        total *= counts[size_t(d)];
      }
      const double cellvol = std::pow(pitch, double(n));
      bound += cellvol * deterministic_sum(total, [&](long idx) {
        Point x(n);
        long rem = idx;
        for (int d = n - 1; d >= 0; --d) {
          const long c = rem % counts[size_t(d)];
          rem /= counts[size_t(d)];
          x[d] = lo[d] + (double(c) + 0.5) * pitch;
        }
        Vec gr(n);
        const double v = tent(L, x, gr);
        const double gn = norm2(gr);
        if (v <= 0.0 || v >= 1.0 || gn == 0.0) return 0.0;
        return m.phi(x, gn * scale);
      });
    }
    CapacityTrendLevel entry;
    entry.kappa = lv[size_t(j)].kappa;
    entry.balls = long(lv[size_t(j)].balls.size());
    entry.tent_energy = annulus_energy[size_t(j)];
    entry.bound = bound;
    rep.levels.push_back(entry);
  }

  rep.decreasing = true;
  for (size_t j = 1; j < rep.levels.size(); ++j) {
    const double ratio = rep.levels[j].bound / rep.levels[j - 1].bound;
    rep.decay_ratios.push_back(ratio);
    if (!(ratio < 1.0)) rep.decreasing = false;
  }
  if (!rep.levels.empty() && rep.levels[0].tent_energy > 0.0)
    rep.consistency_gap = std::abs(rep.levels[0].bound - rep.levels[0].tent_energy) /
                          rep.levels[0].tent_energy;
  return rep;
}

}  // namespace dplab
