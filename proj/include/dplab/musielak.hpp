// musielak.hpp - Caratheodory functions Phi(x,t) with the axiom pack used by
// the weighted measures and capacities, concrete instances (power laws, the
// flagship [t^p + a(x) t^q]^{1+delta}), and the sampling axiom probe.
#pragma once

#include <functional>
#include <memory>

#include "dplab/coefficient.hpp"
#include "dplab/exponents.hpp"

namespace dplab {

// Declared axiom constants. Probes compare against these; the construction
// routines require the ones they use.
struct MusielakAxioms {
  double beta3 = 0.5;   // Phi(x,beta3) <= 1 <= Phi(x,1/beta3)
  double beta4 = 1.0;   // sup_B Phi(x,beta4 t) <= c_d inf_B Phi(x,t)
  double c_d = 1.0;
  double c_g = 1.0;     // two-sided power-comparison constant
  double p_low = 2.0;   // exponents of the power comparison (0777-2)
  double q_high = 2.0;
  double m_const = 1.0; // envelope Phi(x,t) <= m(x) t^n, constant part
};

struct Musielak {
  std::string name;
  int dim = 0;  // ambient dimension n (the envelope exponent)
  std::function<double(const Point&, double)> phi;
  std::function<double(const Point&, double)> phi_dt;  // d/dt, for capacity descent
  MusielakAxioms axioms;

  double operator()(const Point& x, double t) const { return phi(x, t); }
};

// Phi(x,t) = w * t^gamma.
inline Musielak musielak_power(int dim, double gamma, double weight = 1.0) {
  if (!(gamma > 0.0)) throw ValidationError("musielak_power: gamma must be > 0");
  Musielak m;
  m.name = "t^" + std::to_string(gamma);
  m.dim = dim;
  m.phi = [gamma, weight](const Point&, double t) { return weight * std::pow(t, gamma); };
  m.phi_dt = [gamma, weight](const Point&, double t) {
    return weight * gamma * std::pow(t, gamma - 1.0);
  };
  m.axioms.beta3 = std::min(0.5, std::pow(1.0 / std::max(weight, 1.0), 1.0 / gamma));
  m.axioms.beta4 = 1.0;
  m.axioms.c_d = 1.0;
  m.axioms.c_g = 1.0;
  m.axioms.p_low = gamma;
  m.axioms.q_high = gamma;
  m.axioms.m_const = weight;
  return m;
}

// The flagship family Phi(x,t) = [t^p + a(x) t^q]^{1+delta}. The coefficient
// is evaluated by multilinear interpolation so Phi is continuous in x.
// With q <= p + alpha the two-sided control holds with beta4 = 1 and
// c_d = (1 + 2^alpha [a])^{1+delta}.
inline Musielak musielak_flagship(const Exponents& e, const CoefficientField& a, double delta) {
  if (!(delta >= 0.0)) throw ValidationError("musielak_flagship: delta must be >= 0");
  e.validate();
  Musielak m;
  m.name = "[t^p+a t^q]^{1+delta}";
  m.dim = a.grid.dim;
  const double p = e.p, q = e.q, dd = 1.0 + delta;
  // copy the coefficient into the closures; profiles outlive their inputs
  auto coeff = std::make_shared<CoefficientField>(a);
  m.phi = [coeff, p, q, dd](const Point& x, double t) {
    return std::pow(std::pow(t, p) + coeff->interpolate(x) * std::pow(t, q), dd);
  };
  m.phi_dt = [coeff, p, q, dd](const Point& x, double t) {
    const double av = coeff->interpolate(x);
    const double base = std::pow(t, p) + av * std::pow(t, q);
    if (base == 0.0) return 0.0;
    return dd * std::pow(base, dd - 1.0) *
           (p * std::pow(t, p - 1.0) + av * q * std::pow(t, q - 1.0));
  };
  double a_max = 0.0;
  for (double v : a.values) a_max = std::max(a_max, v);
  m.axioms.beta3 = std::min(0.5, std::pow(1.0 + a_max, -1.0 / p));
  m.axioms.beta4 = 1.0;
  m.axioms.c_d = std::pow(1.0 + std::pow(2.0, e.alpha) * a.holder_seminorm, dd);
  m.axioms.c_g = 1.0;
  m.axioms.p_low = p;            // Phi/t^p non-decreasing
  m.axioms.q_high = q * dd;      // Phi/t^{q(1+delta)} non-increasing
  m.axioms.m_const = std::pow(1.0 + a_max, dd);
  return m;
}

// --- axiom probe ---------------------------------------------------------------

struct AxiomReport {
  // smallest constants observed on the sample
  double envelope_constant = 0.0;      // Phi(x,t) / (m t^n) over t >= 1
  bool beta3_ok = true;                // declared beta3 satisfies (0777-1)
  double slope_constant = 0.0;         // (Phi(x,s)/s) / (Phi(x,t)/t), s <= t
  double power_low_constant = 0.0;     // (Phi(x,s)/s^p) / (Phi(x,t)/t^p)
  double power_high_constant = 0.0;    // (Phi(x,t)/t^q) / (Phi(x,s)/s^q)
  double control_constant = 0.0;       // sup_B Phi(.,b4 t) / inf_B Phi(.,t)
  bool pass = true;                    // all observed <= declared (with slack)
  std::string detail;
};

// Samples points, scale pairs s <= t and balls inside `domain`, and reports
// the smallest admissible constants next to the declared ones.
inline AxiomReport axiom_probe(const Musielak& m, const Grid& domain, long budget = 4000,
                               uint64_t seed = 99) {
  AxiomReport rep;
  Rng rng(seed);
  const int n = domain.dim;
  auto random_point = [&](double inset) {
    Point x(n);
    for (int d = 0; d < n; ++d)
      x[d] = rng.uniform(domain.lo[size_t(d)] + inset, domain.hi[size_t(d)] - inset);
    return x;
  };

  for (long k = 0; k < budget; ++k) {
    const Point x = random_point(0.0);
    // envelope over t >= 1
    const double t_env = std::exp(rng.uniform(0.0, std::log(64.0)));
    rep.envelope_constant =
        std::max(rep.envelope_constant,
                 m.phi(x, t_env) / (m.axioms.m_const * std::pow(t_env, double(n))));
    // normalization points
    if (m.phi(x, m.axioms.beta3) > 1.0 + 1e-12) rep.beta3_ok = false;
    if (m.phi(x, 1.0 / m.axioms.beta3) < 1.0 - 1e-12) rep.beta3_ok = false;
    // ordered scale pair
    double s = std::exp(rng.uniform(std::log(1e-3), std::log(64.0)));
    double t = std::exp(rng.uniform(std::log(1e-3), std::log(64.0)));
    if (s > t) std::swap(s, t);
    const double ps = m.phi(x, s), pt = m.phi(x, t);
    if (ps > 0.0 && pt > 0.0) {
      rep.slope_constant = std::max(rep.slope_constant, (ps / s) / (pt / t));
      rep.power_low_constant =
          std::max(rep.power_low_constant,
                   (ps / std::pow(s, m.axioms.p_low)) / (pt / std::pow(t, m.axioms.p_low)));
      rep.power_high_constant =
          std::max(rep.power_high_constant,
                   (pt / std::pow(t, m.axioms.q_high)) / (ps / std::pow(s, m.axioms.q_high)));
    }
  }

  // two-sided control on balls: sample sup/inf over a per-ball lattice
  const long n_balls = std::max<long>(16, budget / 50);
  for (long k = 0; k < n_balls; ++k) {
    const double extent = domain.hi[0] - domain.lo[0];
    const double r = std::exp(rng.uniform(std::log(extent / 256.0), std::log(0.45 * extent)));
    if (r > 1.0) continue;  // the control axiom is stated for r(B) <= 1
    const Point c = random_point(r);
    const double t = std::exp(rng.uniform(0.0, std::log(1.0 / r)));
    double sup_v = 0.0, inf_v = std::numeric_limits<double>::infinity();
    const int kk = 6;
    for (int i = 0; i < kk * kk * (n > 2 ? kk : 1); ++i) {
      Point y = c;
      double rr = 0.0;
      for (int d = 0; d < n; ++d) {
        const double o = rng.uniform(-r, r);
        y[d] += o;
        rr += o * o;
      }
      if (rr > r * r) continue;
      sup_v = std::max(sup_v, m.phi(y, m.axioms.beta4 * t));
      inf_v = std::min(inf_v, m.phi(y, t));
    }
    if (std::isfinite(inf_v) && inf_v > 0.0)
      rep.control_constant = std::max(rep.control_constant, sup_v / inf_v);
  }

  const double slack = 1.0 + 1e-9;
  rep.pass = rep.beta3_ok && rep.envelope_constant <= slack &&
             rep.power_low_constant <= m.axioms.c_g * slack &&
             rep.power_high_constant <= m.axioms.c_g * slack &&
             rep.control_constant <= m.axioms.c_d * slack;
  return rep;
}

}  // namespace dplab
