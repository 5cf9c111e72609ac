// ratios.hpp - numerical LHS/RHS probes for the Caccioppoli, Sobolev-Poincare
// and reverse-Hoelder inequalities, and the Morrey decay exponent fit.
#pragma once

#include "dplab/excess.hpp"

namespace dplab {

namespace detail {

// Node-based quadrature over the closed ball for zero-order integrands
// (field values, not gradients).
inline double node_quadrature(const GridField& field, const Ball& ball,
                              const std::function<double(long, const Point&)>& integrand) {
  double sum = 0.0;
  long count = 0;
  for_each_node_in_ball(field.grid, ball, [&](long node, const Point& p) {
    sum += integrand(node, p);
    ++count;
  });
  if (count == 0) throw EmptyRegionError("node quadrature: empty ball");
  return sum * field.grid.cell_volume();
}

}  // namespace detail

enum class CaccioppoliVariant { general, half, small_a };

// LHS/RHS of the selected Caccioppoli-type inequality on concentric balls
// B_r in B_R around `center`. Both sides are plain integrals (no constants),
// so a bounded ratio across refinements is the observable.
inline double caccioppoli_ratio(const DensityProfile& density, const GridField& field,
                                const Point& center, double r, double R,
                                CaccioppoliVariant variant) {
  if (!(r < R && R <= 1.0)) throw ValidationError("caccioppoli_ratio: need r < R <= 1");
  const Ball BR(center, R);
  const Vec mean = field.mean_in_ball(BR);
  const double lhs_radius = (variant == CaccioppoliVariant::general) ? r : R / 2.0;
  const Ball Blhs(center, lhs_radius);
  const double lhs = total_energy(density, field, Region::in_ball(Blhs));

  double rhs = 0.0;
  switch (variant) {
    case CaccioppoliVariant::general: {
      const double scale = 1.0 / (R - r);
      rhs = detail::node_quadrature(field, BR, [&](long node, const Point& p) {
        const double t = norm2(field.at(node) - mean) * scale;
        const double a_val = density.coefficient.at(node);
        return density.radial(a_val, density.b_factor(p, density.frozen_v), t);
      });
      break;
    }
    case CaccioppoliVariant::half: {
      const double a_inf = frozen_coefficients(density, BR).a_inf;
      rhs = detail::node_quadrature(field, BR, [&](long node, const Point&) {
        const double t = norm2(field.at(node) - mean) / R;
        return density.frozen_profile(a_inf, t);
      });
      break;
    }
    case CaccioppoliVariant::small_a: {
      const double a_inf = frozen_coefficients(density, BR).a_inf;
      const double bound =
          4.0 * density.coefficient.holder_seminorm * std::pow(R, density.exponents.alpha);
      if (!(a_inf <= bound + 1e-12))
        throw VariantError("caccioppoli_ratio: small_a requires inf a <= 4[a] R^alpha");
      const double p = density.exponents.p;
      rhs = detail::node_quadrature(field, BR, [&](long node, const Point&) {
        return std::pow(norm2(field.at(node) - mean) / R, p);
      });
      break;
    }
  }
  if (lhs == 0.0) return 0.0;
  if (rhs == 0.0) return std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

// [mean of H(x,(u-(u)_B)/r)] / [mean of H(x,Du)^d]^{1/d}; 0/0 reported as 0.
inline double poincare_ratio(const DensityProfile& density, const GridField& field,
                             const Ball& ball, double d_exponent) {
  if (!(ball.radius <= 1.0)) throw ValidationError("poincare_ratio: stated for radius <= 1");
  if (!(d_exponent > 0.0 && d_exponent < 1.0))
    throw ValidationError("poincare_ratio: d must lie in (0,1)");
  for (double t : field.values)
    if (!std::isfinite(t)) throw DomainError("poincare_ratio: field must be bounded");

  const Vec mean = field.mean_in_ball(ball);
  long n_nodes = 0;
  double num_sum = 0.0;
  for_each_node_in_ball(field.grid, ball, [&](long node, const Point& p) {
    const double t = norm2(field.at(node) - mean) / ball.radius;
    const double a_val = density.coefficient.at(node);
    num_sum += density.radial(a_val, density.b_factor(p, density.frozen_v), t);
    ++n_nodes;
  });
  if (n_nodes == 0) throw EmptyRegionError("poincare_ratio: empty ball");
  const double num = num_sum / double(n_nodes);

  const auto cells = region_cells(field.grid, Region::in_ball(ball));
  const double den_mean = deterministic_sum(long(cells.size()), [&](long k) {
    return std::pow(detail::cell_energy_density(density, cells[size_t(k)], field, 0.0),
                    d_exponent);
  }) / double(cells.size());
  const double den = std::pow(den_mean, 1.0 / d_exponent);

  if (num == 0.0) return 0.0;
  if (den == 0.0)
    throw NumericalError("poincare_ratio: zero denominator with nonzero numerator");
  return num / den;
}

// [mean_{B_R} H^{1+delta}]^{1/(1+delta)} / [mean_{B_2R} H]; 0 by convention
// when both sides vanish.
inline double higher_integrability_ratio(const DensityProfile& density, const GridField& field,
                                         const Ball& ball, double delta) {
  if (!(ball.radius <= 1.0))
    throw ValidationError("higher_integrability_ratio: stated for R <= 1");
  if (!(delta >= 0.0)) throw ValidationError("higher_integrability_ratio: delta >= 0");
  const Ball B2(ball.center, 2.0 * ball.radius);
  for (int d = 0; d < field.grid.dim; ++d)
    if (B2.center[d] - B2.radius < field.grid.lo[size_t(d)] - 1e-9 ||
        B2.center[d] + B2.radius > field.grid.hi[size_t(d)] + 1e-9)
      throw ValidationError("higher_integrability_ratio: B_2R not inside grid");

  const auto inner = region_cells(field.grid, Region::in_ball(ball));
  const double num_mean = deterministic_sum(long(inner.size()), [&](long k) {
    return std::pow(detail::cell_energy_density(density, inner[size_t(k)], field, 0.0),
                    1.0 + delta);
  }) / double(inner.size());
  const double num = std::pow(num_mean, 1.0 / (1.0 + delta));

  const auto outer = region_cells(field.grid, Region::in_ball(B2));
  const double den = deterministic_sum(long(outer.size()), [&](long k) {
    return detail::cell_energy_density(density, outer[size_t(k)], field, 0.0);
  }) / double(outer.size());

  if (num == 0.0) return 0.0;
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}

// Largest delta in `grid_deltas` keeping the reverse-Hoelder ratio under cap.
struct IntegrabilityProbe {
  double delta = 0.0;
  std::vector<std::pair<double, double>> ratios;  // (delta, ratio)
};

inline IntegrabilityProbe probe_higher_integrability(const DensityProfile& density,
                                                     const GridField& field, const Ball& ball,
                                                     const std::vector<double>& grid_deltas,
                                                     double cap) {
  IntegrabilityProbe out;
  for (double d : grid_deltas) {
    const double r = higher_integrability_ratio(density, field, ball, d);
    out.ratios.emplace_back(d, r);
    if (r <= cap) out.delta = std::max(out.delta, d);
  }
  return out;
}

// Least-squares exponent of t -> int_{B_t} H(x,Du).
struct MorreyFit {
  bool no_energy = false;
  double exponent = 0.0;
  double r2 = 0.0;
};

inline MorreyFit morrey_decay_fit(const DensityProfile& density, const GridField& field,
                                  const Point& point, const std::vector<double>& radii) {
  if (radii.size() < 4) throw ValidationError("morrey_decay_fit: need at least 4 radii");
  const auto [mn, mx] = std::minmax_element(radii.begin(), radii.end());
  if (!(*mx / *mn >= 10.0 - 1e-9))
    throw ValidationError("morrey_decay_fit: radii must span a decade");

  MorreyFit fit;
  std::vector<double> xs, ys;
  for (double t : radii) {
    const double E = total_energy(density, field, Region::in_ball(Ball(point, t)));
    if (t == *mn && E <= 0.0) {
      fit.no_energy = true;
      return fit;
    }
    if (E > 0.0) {
      xs.push_back(std::log(t));
      ys.push_back(std::log(E));
    }
  }
  if (xs.size() < 2) {
    fit.no_energy = true;
    return fit;
  }
  const double m = double(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  const double denom = m * sxx - sx * sx;
  fit.exponent = (m * sxy - sx * sy) / denom;
  const double ss_tot = syy - sy * sy / m;
  const double ss_res = ss_tot - fit.exponent * (sxy - sx * sy / m);
  fit.r2 = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace dplab
