// sphere.hpp - sphere projection, the bilipschitz projector family Pi_a and
// its inverse, the energy-controlled sphere extension, and stereographic
// chart machinery.
#pragma once

#include "dplab/energy.hpp"

namespace dplab {

// Pi(y) = y/|y|, idempotent on the sphere.
inline Vec project_sphere(const Vec& y) {
  const double n = norm2(y);
  if (!(n > 0.0)) throw ProjectionError("project_sphere: undefined at 0");
  return (1.0 / n) * y;
}

// Pi_a(y) = (y-a)/|y-a| for |a| < 1/2.
inline Vec projector_a(const Vec& y, const Vec& a) {
  Vec d = y - a;
  const double n = norm2(d);
  if (!(n > 0.0)) throw ProjectionError("projector_a: y == a");
  d *= 1.0 / n;
  return d;
}

// Inverse on the sphere: the unique y in S^{N-1} with (y-a)/|y-a| = w is
// y = a + t w, t the positive root of |a + t w| = 1.
inline Vec projector_a_inverse(const Vec& w, const Vec& a) {
  const double aw = dot(a, w);
  const double disc = aw * aw + 1.0 - norm2_sq(a);
  if (!(disc >= 0.0)) throw ProjectionError("projector_a_inverse: |a| >= 1");
  const double t = -aw + std::sqrt(disc);
  return a + t * w;
}

// --- stereographic chart ------------------------------------------------------

// S(y) = ((|y|^2-1)/(|y|^2+1), 2y/(|y|^2+1)) in R^N for y in R^{N-1}.
inline Vec stereographic_forward(const Vec& y) {
  const int Nm1 = y.size();
  const double y2 = norm2_sq(y);
  Vec v(Nm1 + 1);
  v[0] = (y2 - 1.0) / (y2 + 1.0);
  const double f = 2.0 / (y2 + 1.0);
  for (int i = 0; i < Nm1; ++i) v[i + 1] = f * y[i];
  return v;
}

// S^{-1}(v) = (v^i / (1 - v^1))_{i=2..N}, defined for v^1 < 1.
inline Vec stereographic_inverse(const Vec& v) {
  if (v[0] >= 1.0 - 1e-9) throw ChartError("stereographic_inverse: v1 too close to 1");
  const int Nm1 = v.size() - 1;
  Vec y(Nm1);
  const double f = 1.0 / (1.0 - v[0]);
  for (int i = 0; i < Nm1; ++i) y[i] = f * v[i + 1];
  return y;
}

// |DS(y) z| = chart_gradient_factor(y) * |z|.
inline double chart_gradient_factor(const Vec& y) { return 2.0 / (1.0 + norm2_sq(y)); }

// Explicit Jacobian DS(y): N x (N-1).
inline Mat stereographic_jacobian(const Vec& y) {
  const int Nm1 = y.size();
  const double y2 = norm2_sq(y);
  const double den = 1.0 + y2;
  Mat J(Nm1 + 1, Nm1);
  for (int j = 0; j < Nm1; ++j) J(0, j) = 4.0 * y[j] / (den * den);
  for (int i = 0; i < Nm1; ++i)
    for (int j = 0; j < Nm1; ++j)
      J(i + 1, j) = 2.0 * (i == j ? 1.0 : 0.0) / den - 4.0 * y[i] * y[j] / (den * den);
  return J;
}

// Apply an N x (N-1) Jacobian to an (N-1) x n gradient.
inline Mat apply_jacobian(const Mat& J, const Mat& z) {
  Mat out(J.rows, z.cols);
  for (int i = 0; i < J.rows; ++i)
    for (int d = 0; d < z.cols; ++d) {
      double s = 0.0;
      for (int k = 0; k < J.cols; ++k) s += J(i, k) * z(k, d);
      out(i, d) = s;
    }
  return out;
}

// Chart a sphere-valued field: requires u^1 < 1 strictly everywhere.
inline GridField chart_field(const GridField& u) {
  GridField y = GridField::zeros(u.grid, u.target_dim - 1, false);
  for (long i = 0; i < u.grid.node_count(); ++i) y.set(i, stereographic_inverse(u.at(i)));
  return y;
}

inline GridField unchart_field(const GridField& y) {
  GridField u = GridField::zeros(y.grid, y.target_dim + 1, true);
  for (long i = 0; i < y.grid.node_count(); ++i) u.set(i, stereographic_forward(y.at(i)));
  return u;
}

// Transported density in chart coordinates: G(x,y,z) = H(x, factor(y) |z|)
// evaluated per cell with the cell-averaged chart value.
inline double chart_energy(const DensityProfile& density, const GridField& chart,
                           const Region& region) {
  const auto cells = region_cells(chart.grid, region);
  const double vol = chart.grid.cell_volume();
  return vol * deterministic_sum(long(cells.size()), [&](long k) {
    const auto mi = chart.grid.cell_multi(cells[size_t(k)]);
    const Mat z = cell_gradient(chart, mi);
    const Vec yc = cell_value(chart, mi);
    const double t = chart_gradient_factor(yc) * frob(z);
    const double a_val = density.coefficient.cell_value(mi);
    const double bval =
        density.b_factor(chart.grid.cell_center(mi), stereographic_forward(yc));
    return density.radial(a_val, bval, t);
  });
}

// Ambient energy of the pulled-back gradient DS(y_c) Dy_c; equals
// chart_energy up to rounding.
inline double chart_pullback_energy(const DensityProfile& density, const GridField& chart,
                                    const Region& region) {
  const auto cells = region_cells(chart.grid, region);
  const double vol = chart.grid.cell_volume();
  return vol * deterministic_sum(long(cells.size()), [&](long k) {
    const auto mi = chart.grid.cell_multi(cells[size_t(k)]);
    const Mat z = cell_gradient(chart, mi);
    const Vec yc = cell_value(chart, mi);
    const Mat zu = apply_jacobian(stereographic_jacobian(yc), z);
    const double a_val = density.coefficient.cell_value(mi);
    const double bval =
        density.b_factor(chart.grid.cell_center(mi), stereographic_forward(yc));
    return density.radial(a_val, bval, frob(zu));
  });
}

// --- energy-controlled sphere extension ---------------------------------------

struct ExtensionResult {
  GridField extended;
  double ratio = 1.0;       // energy(extended) / energy(input), 0/0 reported as 1
  Vec center;               // the selected a0
  int samples_used = 0;
  int samples_rejected = 0;
};

// Projects a field with sphere-valued boundary back onto the sphere while
// keeping the boundary trace and controlling the energy: sample centers a in
// B^N_{1/2}(0), pick the one minimizing the energy of (v-a)/|v-a| (discrete
// Chebyshev selection), then undo the projector on the sphere.
inline ExtensionResult sphere_extension(const DensityProfile& density, const GridField& v,
                                        const Region& region, int sample_count,
                                        uint64_t seed = 0) {
  v.require_same_grid(density.grid(), "sphere_extension");
  const int N = v.target_dim;
  if (!(density.exponents.q < double(N)))
    throw ExponentError("sphere_extension: requires q < N");

  const auto cells = region_cells(v.grid, region);
  const SolverDomain dom = SolverDomain::build(v.grid, region);
  std::vector<long> nodes;
  for (long i = 0; i < v.grid.node_count(); ++i)
    if (dom.touched[size_t(i)]) nodes.push_back(i);

  const double input_energy = total_energy_cells(density, v, cells, 0.0);

  ExtensionResult best;
  best.center = Vec(N);
  bool have_best = false;
  int rejected = 0;

  const int budgets = 3;
  for (int attempt = 0; attempt < budgets && !have_best; ++attempt) {
    // a = 0 first (identity when v is already sphere-valued), then Halton
    // points in B^N_{1/2}(0); new attempts skip ahead in the sequence.
    std::vector<Vec> samples;
    samples.push_back(Vec(N));
    uint64_t idx = 1 + uint64_t(attempt) * 1000 + seed % 97;
    static const uint64_t bases[kMaxDim] = {2, 3, 5, 7};
    while (int(samples.size()) < sample_count) {
      Vec a(N);
      for (int c = 0; c < N; ++c) a[c] = halton(idx, bases[c]) - 0.5;
      ++idx;
      if (norm2(a) < 0.4995) samples.push_back(a);
    }

    GridField w = v;
    for (const Vec& a : samples) {
      // reject centers that come too close to a field value
      bool ok = true;
      for (long node : nodes) {
        if (dist(v.at(node), a) < 1e-6) {
          ok = false;
          break;
        }
      }
      if (!ok) {
        ++rejected;
        continue;
      }
      for (long node : nodes) w.set(node, projector_a(v.at(node), a));
      const double E = total_energy_cells(density, w, cells, 0.0);
      if (!have_best || E < best.ratio) {  // best.ratio holds E_a during the scan
        best.ratio = E;
        best.center = a;
        have_best = true;
      }
      ++best.samples_used;
    }
  }
  best.samples_rejected = rejected;
  if (!have_best)
    throw NumericalError("sphere_extension: all sampled centers rejected after budget");

  // compose with the inverse projector to land on the sphere
  GridField out = v;
  out.constrained = true;
  for (long node : nodes)
    out.set(node, projector_a_inverse(projector_a(v.at(node), best.center), best.center));
  const double out_energy = total_energy_cells(density, out, cells, 0.0);
  best.extended = std::move(out);
  best.ratio = (input_energy == 0.0 && out_energy == 0.0) ? 1.0 : out_energy / input_energy;
  return best;
}

}  // namespace dplab
