// regularity.hpp - singular-point detection: intrinsic quotients over a radii
// ladder, three-way classification, batch classification over the grid with a
// non-maximum suppression pass, and the phase dichotomy of balls.
#pragma once

#include <map>
#include <memory>

#include "dplab/excess.hpp"
#include "dplab/parallel.hpp"

namespace dplab {

enum class Classification { regular, singular, inconclusive };

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::regular: return "regular";
    case Classification::singular: return "singular";
    default: return "inconclusive";
  }
}

struct AnalyzerOptions {
  double epsilon = 0.1;                      // classification default
  std::vector<double> epsilon_sweep = {0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5};
  double singular_floor = 1.0;               // quotient floor for a singular verdict
  int min_cells_per_radius = 3;              // radii below this resolution are rejected
};

struct RegularityReport {
  Point point;
  std::vector<double> radii;                // strictly decreasing
  std::vector<double> excess_values;
  std::vector<double> intrinsic_quotients;  // [H^-_{B_rho}(1/rho)]^{-1} * excess
  Classification classification = Classification::inconclusive;
  double epsilon_used = 0.0;
  double limsup_estimate = 0.0;             // max quotient over the 3 smallest radii
  double delta_g_probe = 0.0;
  double sigma_g_probe = 0.0;
};

// Quotient ladder at one point. Throws ResolutionError for radii finer than
// min_cells_per_radius lattice cells; callers building ladders filter first.
inline RegularityReport singular_indicator(const DensityProfile& density, const GridField& field,
                                           const Point& point, std::vector<double> radii,
                                           const AnalyzerOptions& opts = {}) {
  if (radii.empty()) throw ValidationError("singular_indicator: empty radii ladder");
  for (size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] < radii[i - 1]))
      throw ValidationError("singular_indicator: radii must be strictly decreasing");
  const double h = field.grid.spacing;
  for (double r : radii) {
    if (r < opts.min_cells_per_radius * h)
      throw ResolutionError("singular_indicator: radius below " +
                            std::to_string(opts.min_cells_per_radius) + " grid cells");
    Point lo = point, hi = point;
    for (int d = 0; d < field.grid.dim; ++d) {
      lo[d] -= r;
      hi[d] += r;
    }
    if (!field.grid.contains(lo, 1e-9) || !field.grid.contains(hi, 1e-9))
      throw ValidationError("singular_indicator: ball not inside grid");
  }

  RegularityReport rep;
  rep.point = point;
  rep.radii = radii;
  rep.epsilon_used = opts.epsilon;

  bool regular = false;
  double eps_used = std::numeric_limits<double>::infinity();
  double min_quotient = std::numeric_limits<double>::infinity();

  std::vector<double> sweep = opts.epsilon_sweep;
  sweep.push_back(opts.epsilon);
  std::sort(sweep.begin(), sweep.end());

  for (double rho : radii) {
    const Ball B(point, rho);
    const double exc = excess(density, field, B);
    // one coefficient scan per ball; all thresholds reuse it
    const double a_inf = frozen_coefficients(density, B).a_inf;
    const double quot = exc / density.frozen_profile(a_inf, 1.0 / rho);
    rep.excess_values.push_back(exc);
    rep.intrinsic_quotients.push_back(quot);
    min_quotient = std::min(min_quotient, quot);
    for (double eps : sweep) {
      if (exc < density.frozen_profile(a_inf, eps / rho)) {
        regular = true;
        eps_used = std::min(eps_used, eps);
        break;
      }
    }
  }

  const size_t k = std::min<size_t>(3, rep.intrinsic_quotients.size());
  for (size_t i = rep.intrinsic_quotients.size() - k; i < rep.intrinsic_quotients.size(); ++i)
    rep.limsup_estimate = std::max(rep.limsup_estimate, rep.intrinsic_quotients[i]);

  if (regular) {
    rep.classification = Classification::regular;
    rep.epsilon_used = eps_used;
  } else if (min_quotient >= opts.singular_floor) {
    rep.classification = Classification::singular;
  } else {
    rep.classification = Classification::inconclusive;
  }
  return rep;
}

// Radii ladder helper: geometric ladder from r_max down, keeping only radii
// resolving at least min_cells_per_radius cells.
inline std::vector<double> build_radii_ladder(const Grid& grid, double r_max, int count,
                                              double factor, int min_cells = 3) {
  std::vector<double> radii;
  double r = r_max;
  for (int i = 0; i < count; ++i) {
    if (r >= min_cells * grid.spacing) radii.push_back(r);
    r *= factor;
  }
  if (radii.empty()) throw ResolutionError("radii ladder: no resolved radii");
  return radii;
}

struct CellClassification {
  long cell = 0;
  Point center;
  Classification classification = Classification::inconclusive;
  double nms_value = 0.0;   // limsup estimate (or the screening quotient)
  double excess_min = 0.0;  // excess at the smallest ladder radius
  double coefficient_value = 0.0;
  std::shared_ptr<RegularityReport> detailed;  // present when the full ladder ran
};

struct ClassifyResult {
  std::vector<CellClassification> probes;       // one per probed cell
  std::vector<long> flagged;                    // singular cells after suppression
  std::vector<RegularityReport> flagged_reports;
  long census_regular = 0, census_singular = 0, census_inconclusive = 0;
};

// Batch the indicator over cell centers. A cheap first pass evaluates the
// smallest radius only: if the eps-regularity inequality already holds there
// for the largest swept eps the point is regular (the ladder quantifier is
// existential), otherwise the full ladder runs. A final pass keeps only
// locally maximal singular cells, so one analytic singularity yields one
// flagged cell rather than a cluster of its resolution-limited neighbors.
inline ClassifyResult classify_grid(const DensityProfile& density, const GridField& field,
                                    const std::vector<double>& radii,
                                    const AnalyzerOptions& opts = {}, int probe_stride = 1) {
  if (probe_stride < 1) throw ValidationError("classify_grid: probe_stride must be >= 1");
  const std::vector<double> ladder = radii;
  if (ladder.empty()) throw ValidationError("classify_grid: empty radii ladder");
  const double r_max = ladder.front(), r_min = ladder.back();
  const double eps_max =
      std::max(opts.epsilon, *std::max_element(opts.epsilon_sweep.begin(), opts.epsilon_sweep.end()));

  const Grid& g = field.grid;
  // probe cells whose full ladder fits inside the grid
  std::vector<long> probe_cells;
  for (long c = 0; c < g.cell_count(); ++c) {
    const auto mi = g.cell_multi(c);
    bool on_stride = true;
    for (int d = 0; d < g.dim; ++d)
      if (mi[size_t(d)] % probe_stride != 0) on_stride = false;
    if (!on_stride) continue;
    const Point p = g.cell_center(mi);
    bool fits = true;
    for (int d = 0; d < g.dim; ++d)
      if (p[d] - r_max < g.lo[size_t(d)] - 1e-9 || p[d] + r_max > g.hi[size_t(d)] + 1e-9)
        fits = false;
    if (fits) probe_cells.push_back(c);
  }

  ClassifyResult out;
  out.probes.resize(probe_cells.size());

  for_each_chunk(long(probe_cells.size()), [&](long, long b, long e) {
    for (long k = b; k < e; ++k) {
      const long cell = probe_cells[size_t(k)];
      CellClassification cc;
      cc.cell = cell;
      cc.center = g.cell_center(cell);
      cc.coefficient_value = density.coefficient.interpolate(cc.center);

      const Ball B_small(cc.center, r_min);
      const double exc = excess(density, field, B_small);
      const double a_inf = frozen_coefficients(density, B_small).a_inf;
      cc.excess_min = exc;
      cc.nms_value = exc / density.frozen_profile(a_inf, 1.0 / r_min);
      if (exc < density.frozen_profile(a_inf, eps_max / r_min)) {
        cc.classification = Classification::regular;
      } else {
        auto rep = std::make_shared<RegularityReport>(
            singular_indicator(density, field, cc.center, ladder, opts));
        cc.classification = rep->classification;
        cc.nms_value = rep->limsup_estimate;
        cc.detailed = std::move(rep);
      }
      out.probes[size_t(k)] = cc;
    }
  });

  // non-maximum suppression over probe neighbors
  std::map<long, size_t> by_cell;
  for (size_t i = 0; i < out.probes.size(); ++i) by_cell[out.probes[i].cell] = i;

  for (const auto& cc : out.probes) {
    switch (cc.classification) {
      case Classification::regular: ++out.census_regular; break;
      case Classification::singular: ++out.census_singular; break;
      default: ++out.census_inconclusive; break;
    }
    if (cc.classification != Classification::singular) continue;
    const auto mi = g.cell_multi(cc.cell);
    bool is_max = true;
    std::array<int, kMaxDim> off{};
    std::function<void(int)> visit = [&](int d) {
      if (!is_max) return;
      if (d == g.dim) {
        bool all_zero = true;
        for (int t = 0; t < g.dim; ++t)
          if (off[size_t(t)] != 0) all_zero = false;
        if (all_zero) return;
        auto mj = mi;
        for (int t = 0; t < g.dim; ++t) mj[size_t(t)] += off[size_t(t)] * probe_stride;
        bool valid = true;
        for (int t = 0; t < g.dim; ++t)
          if (mj[size_t(t)] < 0 || mj[size_t(t)] >= g.nodes[size_t(t)] - 1) valid = false;
        if (!valid) return;
        const auto it = by_cell.find(g.cell_index(mj));
        if (it == by_cell.end()) return;
        const auto& nb = out.probes[it->second];
        if (nb.nms_value > cc.nms_value) is_max = false;
        if (nb.nms_value == cc.nms_value && nb.cell < cc.cell) is_max = false;
        return;
      }
      for (int o = -1; o <= 1; ++o) {
        off[size_t(d)] = o;
        visit(d + 1);
      }
    };
    visit(0);
    if (is_max) out.flagged.push_back(cc.cell);
  }
  std::sort(out.flagged.begin(), out.flagged.end());
  for (long cell : out.flagged) {
    const auto& cc = out.probes[by_cell.at(cell)];
    out.flagged_reports.push_back(cc.detailed ? *cc.detailed
                                              : singular_indicator(density, field, cc.center,
                                                                   ladder, opts));
  }
  return out;
}

// --- phase dichotomy ----------------------------------------------------------

enum class Phase { p_phase, pq_phase };

struct PhaseLabel {
  Ball ball;
  Phase label = Phase::p_phase;
  double threshold = 0.0;  // 4 [a]_{0,alpha} r^{alpha-s}
  double s_value = 0.0;    // alpha + (gamma-1)(q-p)
  double a_inf = 0.0, a_sup = 0.0;
  bool consequent_ok = true;  // a_s <= 6[a] r^{alpha-s} (p) / a_s <= 1.5 a_i (pq)
};

inline PhaseLabel phase_classify(const Exponents& e, const CoefficientField& coeff,
                                 const Ball& ball, double gamma = 0.5) {
  if (!(gamma >= 0.5 && gamma < 1.0))
    throw ValidationError("phase_classify: gamma must lie in [1/2, 1)");
  PhaseLabel out;
  out.ball = ball;
  out.s_value = e.alpha + (gamma - 1.0) * (e.q - e.p);
  if (!(out.s_value > 0.0)) throw ExponentError("phase_classify: s = alpha+(gamma-1)(q-p) <= 0");
  const auto range = coeff.range_in_ball(ball);
  out.a_inf = range.min;
  out.a_sup = range.max;
  const double bracket = std::pow(ball.radius, e.alpha - out.s_value);
  out.threshold = 4.0 * coeff.holder_seminorm * bracket;
  out.label = (out.a_inf <= out.threshold) ? Phase::p_phase : Phase::pq_phase;
  if (out.label == Phase::p_phase) {
    out.consequent_ok = out.a_sup <= 6.0 * coeff.holder_seminorm * bracket + 1e-12;
  } else {
    out.consequent_ok = out.a_sup <= 1.5 * out.a_inf + 1e-12;
  }
  return out;
}

}  // namespace dplab
