// hausdorff.hpp - weighted Hausdorff measures by Caratheodory construction:
// ball costs h_Phi / h_Phi^{+-}, greedy covering search producing certified
// upper bounds, kappa sweeps with enforced monotonicity, and the three-way
// comparison on shared coverings.
#pragma once

#include <algorithm>
#include <numeric>

#include "dplab/musielak.hpp"

namespace dplab {

// Finite stand-in for the target set E.
struct PointCloudSet {
  std::vector<Point> points;
  std::string descriptor;          // "point" | "segment" | "grid-cells" | free-form
  std::optional<Ball> shape;       // analytic shape when known (e.g. capacity K)

  static PointCloudSet single(const Point& p) {
    PointCloudSet s;
    s.points.push_back(p);
    s.descriptor = "point";
    return s;
  }
  static PointCloudSet segment(const Point& a, const Point& b, int samples) {
    if (samples < 2) throw ValidationError("segment cloud: need >= 2 samples");
    PointCloudSet s;
    s.descriptor = "segment";
    for (int i = 0; i < samples; ++i) {
      const double t = double(i) / double(samples - 1);
      s.points.push_back(a + t * (b - a));
    }
    return s;
  }
  double resolution() const {
    // max nearest-neighbour distance; 0 for singletons
    if (points.size() < 2) return 0.0;
    double worst = 0.0;
    for (size_t i = 0; i < points.size(); ++i) {
      double nn = std::numeric_limits<double>::infinity();
      for (size_t j = 0; j < points.size(); ++j)
        if (j != i) nn = std::min(nn, dist(points[i], points[j]));
      worst = std::max(worst, nn);
    }
    return worst;
  }

  // Smallest admissible covering-ball radius. Finite sets ("point",
  // "grid-cells") are measured as they are, so arbitrarily small balls are
  // legitimate; clouds sampling a continuum set must not be resolved below
  // their sampling distance or the covering slips between samples.
  double radius_floor() const {
    if (descriptor == "point" || descriptor == "grid-cells") return 0.0;
    return resolution();
  }
};

struct Covering {
  std::vector<Ball> balls;
  double kappa = 0.0;

  void validate_covers(const PointCloudSet& set) const {
    for (const Ball& b : balls)
      if (b.radius > kappa + 1e-12) throw ValidationError("covering: ball radius above kappa");
    for (const Point& p : set.points) {
      bool covered = false;
      for (const Ball& b : balls)
        if (b.contains(p)) {
          covered = true;
          break;
        }
      if (!covered) throw ValidationError("covering: point left uncovered");
    }
  }
};

enum class HVariant { integral, plus, minus };

struct HPhiOptions {
  int samples_per_axis = 8;  // per-ball quadrature lattice
};

// Ball cost: integral variant is |B| times the sample mean of Phi(x, 1/r);
// plus/minus are |B| times max/min over the same samples, so
// minus <= integral <= plus holds exactly per ball.
inline double h_phi(const Musielak& m, const Ball& ball, HVariant variant,
                    const HPhiOptions& opts = {}) {
  const int n = ball.center.size();
  const double r = ball.radius;
  const double t = 1.0 / r;
  const int k = std::max(1, opts.samples_per_axis);

  double sum = 0.0, vmin = std::numeric_limits<double>::infinity(), vmax = 0.0;
  long count = 0;
  std::array<int, kMaxDim> idx{};
  while (true) {
    Point x = ball.center;
    double rr = 0.0;
    for (int d = 0; d < n; ++d) {
      const double o = -r + (idx[size_t(d)] + 0.5) * (2.0 * r / k);
      x[d] += o;
      rr += o * o;
    }
    if (rr <= r * r) {
      const double v = m.phi(x, t);
      sum += v;
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
      ++count;
    }
    int d = n - 1;
    while (d >= 0) {
      if (++idx[size_t(d)] < k) break;
      idx[size_t(d)] = 0;
      --d;
    }
    if (d < 0) break;
  }
  if (count == 0) {  // radius below the sample lattice: center value
    const double v = m.phi(ball.center, t);
    sum = v;
    vmin = vmax = v;
    count = 1;
  }
  const double volume = unit_ball_volume(n) * std::pow(r, double(n));
  switch (variant) {
    case HVariant::integral: return volume * (sum / double(count));
    case HVariant::plus: return volume * vmax;
    case HVariant::minus: return volume * vmin;
  }
  return 0.0;
}

inline double covering_cost(const Musielak& m, const Covering& cov, HVariant variant,
                            const HPhiOptions& opts = {}) {
  double total = 0.0;
  for (const Ball& b : cov.balls) total += h_phi(m, b, variant, opts);
  return total;
}

// --- greedy covering search -----------------------------------------------------

struct HausdorffOptions {
  int radius_grid_depth = 6;   // candidate radii kappa * 2^{-j}, j = 0..depth
  int perturb_passes = 2;      // local reassign/recenter refinement passes
  HPhiOptions quadrature;
};

namespace detail {

struct Cluster {
  Ball ball;
  std::vector<size_t> members;
};

inline Ball enclosing_ball(const std::vector<Point>& pts, const std::vector<size_t>& members,
                           double radius_floor) {
  const int n = pts[members[0]].size();
  Point lo = pts[members[0]], hi = pts[members[0]];
  for (size_t k : members)
    for (int d = 0; d < n; ++d) {
      lo[d] = std::min(lo[d], pts[k][d]);
      hi[d] = std::max(hi[d], pts[k][d]);
    }
  Point c(n);
  for (int d = 0; d < n; ++d) c[d] = 0.5 * (lo[d] + hi[d]);
  double r = radius_floor;
  for (size_t k : members) r = std::max(r, dist(c, pts[k]));
  return Ball(c, std::max(r, 1e-300));
}

}  // namespace detail

// Greedy covering of the point cloud at scale kappa. The construction is a
// certified covering, so its cost is an upper bound for the Caratheodory
// infimum at that scale.
inline Covering build_covering(const Musielak& m, const PointCloudSet& set, double kappa,
                               const HausdorffOptions& opts = {}) {
  if (set.points.empty()) return Covering{{}, kappa};
  const double res = set.resolution();
  if (set.points.size() > 1 && !(kappa > 2.0 * res))
    throw ResolutionError("hausdorff: kappa must exceed twice the point-cloud resolution");

  // Candidate radii: log grid kappa * 2^{-j}, floored at the cloud's
  // admissible scale. Clouds sampling a continuum set also get a claim
  // margin of half the sampling distance: every sample sits that deep inside
  // its ball, so adjacent footprints overlap across the sampling gaps and
  // the covering covers the underlying set, not just the samples.
  const double floor_r = set.radius_floor();
  const double margin = 0.5 * floor_r;
  std::vector<double> radii;
  for (int j = 0; j <= opts.radius_grid_depth; ++j) {
    const double rho = kappa * std::pow(0.5, j);
    if (rho >= floor_r) radii.push_back(rho);
  }
  if (floor_r > 0.0 && (radii.empty() || radii.back() > floor_r)) radii.push_back(floor_r);
  if (radii.empty()) throw ResolutionError("hausdorff: no admissible covering radius");

  std::vector<uint8_t> covered(set.points.size(), 0);
  std::vector<detail::Cluster> clusters;

  while (true) {
    // lexicographically-first uncovered point
    size_t seed = set.points.size();
    for (size_t i = 0; i < set.points.size(); ++i)
      if (!covered[i]) {
        seed = i;
        break;
      }
    if (seed == set.points.size()) break;

    // Best (radius, cluster) by cost per newly covered point; claimed points
    // must sit `margin` inside the ball. Radii descend and a smaller ball
    // must beat the incumbent by a clear factor: on cost ties the larger
    // ball wins, which keeps the search off resolution-scale artifacts.
    double best_eff = std::numeric_limits<double>::infinity();
    detail::Cluster best;
    for (double rho : radii) {
      const double reach = rho - margin;
      if (!(reach > 0.0)) continue;
      const double slack = 1e-9 * rho;
      detail::Cluster cl;
      for (size_t i = 0; i < set.points.size(); ++i)
        if (!covered[i] && dist(set.points[i], set.points[seed]) <= 2.0 * reach + slack)
          cl.members.push_back(i);
      for (int pass = 0; pass < 6 && !cl.members.empty(); ++pass) {
        Ball b = detail::enclosing_ball(set.points, cl.members, 0.0);
        if (b.radius <= reach + slack) break;
        std::vector<size_t> kept;
        for (size_t k : cl.members)
          if (dist(set.points[k], b.center) <= reach + slack) kept.push_back(k);
        if (kept.empty() || std::find(kept.begin(), kept.end(), seed) == kept.end()) {
          kept.clear();
          for (size_t i = 0; i < set.points.size(); ++i)
            if (!covered[i] && dist(set.points[i], set.points[seed]) <= reach + slack)
              kept.push_back(i);
          cl.members = kept;
          break;
        }
        cl.members = kept;
      }
      if (cl.members.empty()) continue;
      const Ball hull = detail::enclosing_ball(set.points, cl.members, 0.0);
      if (hull.radius > reach + slack) continue;
      cl.ball = Ball(hull.center, std::min(std::max(rho, hull.radius), kappa));
      const double eff =
          h_phi(m, cl.ball, HVariant::integral, opts.quadrature) / double(cl.members.size());
      if (eff < 0.999 * best_eff) {
        best_eff = eff;
        best = cl;
      }
    }
    if (best.members.empty()) {  // cover the seed alone at the smallest radius
      best.members.push_back(seed);
      best.ball = Ball(set.points[seed], radii.back());
    }
    for (size_t k : best.members) covered[k] = 1;
    clusters.push_back(std::move(best));
  }

  // local perturbation: reassign points to nearest centers, recenter, shrink
  for (int pass = 0; pass < opts.perturb_passes; ++pass) {
    std::vector<std::vector<size_t>> assign(clusters.size());
    for (size_t i = 0; i < set.points.size(); ++i) {
      size_t best_c = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (size_t c = 0; c < clusters.size(); ++c) {
        const double d = dist(set.points[i], clusters[c].ball.center);
        if (d < best_d) {
          best_d = d;
          best_c = c;
        }
      }
      assign[best_c].push_back(i);
    }
    std::vector<detail::Cluster> refined;
    bool valid = true;
    for (size_t c = 0; c < clusters.size(); ++c) {
      if (assign[c].empty()) continue;
      detail::Cluster cl;
      cl.members = assign[c];
      Ball b = detail::enclosing_ball(set.points, cl.members, 0.0);
      if (b.radius + margin > kappa) {
        valid = false;
        break;
      }
      // smallest candidate radius still enclosing the cluster plus margin
      // (radii descend)
      double rho = kappa;
      for (double cand : radii)
        if (cand >= b.radius + margin) rho = cand;
      cl.ball = Ball(b.center, std::max(rho, 1e-300));
      refined.push_back(std::move(cl));
    }
    if (!valid || refined.empty()) break;
    double old_cost = 0.0, new_cost = 0.0;
    for (const auto& c : clusters) old_cost += h_phi(m, c.ball, HVariant::integral, opts.quadrature);
    for (const auto& c : refined) new_cost += h_phi(m, c.ball, HVariant::integral, opts.quadrature);
    if (new_cost < old_cost) clusters = std::move(refined);
  }

  Covering cov;
  cov.kappa = kappa;
  for (const auto& c : clusters) cov.balls.push_back(c.ball);
  cov.validate_covers(set);
  return cov;
}

// Upper bound for H_{Phi,kappa}(E) (or the +- variants) from the greedy search.
inline double hausdorff_estimate(const Musielak& m, const PointCloudSet& set, double kappa,
                                 HVariant variant = HVariant::integral,
                                 const HausdorffOptions& opts = {}) {
  if (set.points.empty()) return 0.0;
  const Covering cov = build_covering(m, set, kappa, opts);
  return covering_cost(m, cov, variant, opts.quadrature);
}

// Sweep over a decreasing kappa ladder with running minima; the reported
// sequence is non-increasing, matching the monotonicity of the construction.
struct SweepEntry {
  double kappa = 0.0;
  double minus = 0.0, integral = 0.0, plus = 0.0;
};

inline std::vector<SweepEntry> hausdorff_sweep(const Musielak& m, const PointCloudSet& set,
                                               const std::vector<double>& kappas,
                                               const HausdorffOptions& opts = {}) {
  std::vector<double> ladder = kappas;
  std::sort(ladder.begin(), ladder.end(), std::greater<>());
  std::vector<SweepEntry> out;
  double run_minus = std::numeric_limits<double>::infinity();
  double run_int = run_minus, run_plus = run_minus;
  for (double kappa : ladder) {
    SweepEntry e;
    e.kappa = kappa;
    if (set.points.empty()) {
      e.minus = e.integral = e.plus = 0.0;
    } else {
      const Covering cov = build_covering(m, set, kappa, opts);
      e.minus = covering_cost(m, cov, HVariant::minus, opts.quadrature);
      e.integral = covering_cost(m, cov, HVariant::integral, opts.quadrature);
      e.plus = covering_cost(m, cov, HVariant::plus, opts.quadrature);
    }
    run_minus = std::min(run_minus, e.minus);
    run_int = std::min(run_int, e.integral);
    run_plus = std::min(run_plus, e.plus);
    e.minus = run_minus;
    e.integral = run_int;
    e.plus = run_plus;
    out.push_back(e);
  }
  return out;
}

// --- comparison chain -----------------------------------------------------------

struct ComparisonReport {
  bool chain_ok = true;         // minus <= integral <= plus per covering
  bool control_ok = true;       // plus <= (c_d/beta4^n) * minus per covering
  double worst_constant = 0.0;  // max over coverings of plus/minus
  double bound = 0.0;           // c_d / beta4^n
  long coverings = 0;
};

// Evaluates all three variants on shared coverings. Requires the declared
// control axiom to hold on a probe (AxiomError otherwise).
inline ComparisonReport hausdorff_comparison(const Musielak& m, const Grid& domain,
                                             const std::vector<Covering>& coverings,
                                             const HPhiOptions& quad = {},
                                             bool probe_axioms = true) {
  if (probe_axioms) {
    const AxiomReport probe = axiom_probe(m, domain);
    if (probe.control_constant > m.axioms.c_d * (1.0 + 1e-9))
      throw AxiomError("hausdorff_comparison: control axiom fails on probe (observed " +
                       std::to_string(probe.control_constant) + " > declared " +
                       std::to_string(m.axioms.c_d) + ")");
  }
  ComparisonReport rep;
  rep.bound = m.axioms.c_d / std::pow(m.axioms.beta4, double(m.dim));
  for (const Covering& cov : coverings) {
    const double lo = covering_cost(m, cov, HVariant::minus, quad);
    const double mid = covering_cost(m, cov, HVariant::integral, quad);
    const double hi = covering_cost(m, cov, HVariant::plus, quad);
    if (!(lo <= mid * (1.0 + 1e-12) && mid <= hi * (1.0 + 1e-12))) rep.chain_ok = false;
    if (!(hi <= rep.bound * lo * (1.0 + 1e-9))) rep.control_ok = false;
    if (lo > 0.0) rep.worst_constant = std::max(rep.worst_constant, hi / lo);
    ++rep.coverings;
  }
  return rep;
}

}  // namespace dplab
