// singular_measures.hpp - measure the detected singular set: split flagged
// cells by the phase of the coefficient and sweep the weighted Hausdorff
// estimates of each part.
#pragma once

#include "dplab/hausdorff.hpp"
#include "dplab/regularity.hpp"

namespace dplab {

struct FlaggedCell {
  long cell = 0;
  Point center;
  double coefficient_value = 0.0;
};

struct SingularMeasureReport {
  double delta = 0.0;
  std::vector<FlaggedCell> sigma_p;  // flagged cells with a(center) = 0
  std::vector<FlaggedCell> sigma_q;  // flagged cells with a(center) > 0
  std::vector<SweepEntry> sweep_p;
  std::vector<SweepEntry> sweep_q;
  bool decays_p = true;  // non-increasing and final < initial (or empty)
  bool decays_q = true;
  // q-part truncation diagnostics: smallest m with a > 1/m on sigma_q, and
  // the radius below which 2 m a_i(B) > 1 for balls touching it
  long m_truncation = 0;
  double kappa_tilde = 0.0;
};

inline bool sweep_decays(const std::vector<SweepEntry>& sweep) {
  if (sweep.size() < 2) return true;
  for (size_t i = 1; i < sweep.size(); ++i)
    if (sweep[i].integral > sweep[i - 1].integral + 1e-15) return false;
  return sweep.back().integral < sweep.front().integral || sweep.front().integral == 0.0;
}

// The measured family is admissible only while q(1+delta) <= n.
inline SingularMeasureReport singular_set_measures(const std::vector<FlaggedCell>& flags,
                                                   const Exponents& e,
                                                   const CoefficientField& coeff, double delta,
                                                   const std::vector<double>& kappa_ladder,
                                                   const HausdorffOptions& opts = {}) {
  const int n = coeff.grid.dim;
  if (!(e.q * (1.0 + delta) <= double(n) + 1e-12))
    throw ScopeError("singular_set_measures: requires q(1+delta) <= n");

  SingularMeasureReport rep;
  rep.delta = delta;
  for (const FlaggedCell& f : flags) {
    if (f.coefficient_value <= 1e-12)
      rep.sigma_p.push_back(f);
    else
      rep.sigma_q.push_back(f);
  }

  const Musielak phi = musielak_flagship(e, coeff, delta);

  auto cloud_of = [](const std::vector<FlaggedCell>& cells) {
    PointCloudSet s;
    s.descriptor = "grid-cells";
    for (const auto& f : cells) s.points.push_back(f.center);
    return s;
  };

  rep.sweep_p = hausdorff_sweep(phi, cloud_of(rep.sigma_p), kappa_ladder, opts);
  rep.sweep_q = hausdorff_sweep(phi, cloud_of(rep.sigma_q), kappa_ladder, opts);
  rep.decays_p = sweep_decays(rep.sweep_p);
  rep.decays_q = sweep_decays(rep.sweep_q);

  if (!rep.sigma_q.empty()) {
    double a_min = std::numeric_limits<double>::infinity();
    for (const auto& f : rep.sigma_q) a_min = std::min(a_min, f.coefficient_value);
    rep.m_truncation = long(std::ceil(1.0 / a_min)) + 1;
    // 2 m a_i(B) > 1 once holder drift over radius r stays below a_min/2:
    // [a] (2r)^alpha < a_min - 1/(2m)
    const double margin = a_min - 0.5 / double(rep.m_truncation);
    const double bracket = coeff.holder_seminorm > 0.0
                               ? std::pow(margin / coeff.holder_seminorm, 1.0 / e.alpha) / 2.0
                               : 1.0;
    rep.kappa_tilde = std::min(1.0, bracket);
  }
  return rep;
}

}  // namespace dplab
