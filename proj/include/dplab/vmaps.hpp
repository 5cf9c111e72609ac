// vmaps.hpp - the auxiliary maps V_t(z) = |z|^{(t-2)/2} z, the equivalence
// ratio probe, and the monotonicity inner-product probe.
#pragma once

#include "dplab/density.hpp"

namespace dplab {

// V_t(z); defined as 0 at z = 0.
inline Mat v_map(const Mat& z, double t) {
  const double n = frob(z);
  Mat out = z;
  if (n == 0.0) return out;  // exponent (t-2)/2 > -1 for t > 0, limit is 0
  out *= std::pow(n, (t - 2.0) / 2.0);
  return out;
}

inline Vec v_map(const Vec& z, double t) {
  const double n = norm2(z);
  Vec out = z;
  if (n == 0.0) return out;
  out *= std::pow(n, (t - 2.0) / 2.0);
  return out;
}

// |V_p(z)|^2 + a |V_q(z)|^2 - H(a,z); identically 0 for the model density.
inline double v_identity_gap(const Exponents& e, double a_val, const Mat& z) {
  const Mat vp = v_map(z, e.p);
  const Mat vq = v_map(z, e.q);
  const double H = std::pow(frob(z), e.p) + a_val * std::pow(frob(z), e.q);
  return frob_sq(vp) + a_val * frob_sq(vq) - H;
}

// |V_t(z1)-V_t(z2)| / [(|z1|+|z2|)^{(t-2)/2} |z1-z2|].
inline double v_equivalence_ratio(const Mat& z1, const Mat& z2, double t) {
  const Mat d = z1 - z2;
  const double dn = frob(d);
  if (dn == 0.0) throw DegeneratePairError("v_equivalence_ratio: z1 == z2");
  const double scale = std::pow(frob(z1) + frob(z2), (t - 2.0) / 2.0);
  return frob(v_map(z1, t) - v_map(z2, t)) / (scale * dn);
}

struct MonotonicityProbe {
  double inner = 0.0;  // (dF(x,v,z1)-dF(x,v,z2)) : (z1-z2), must be >= 0
  double gap = 0.0;    // inner - (1/c) [ |V_p(z1)-V_p(z2)|^2 + a |V_q(z1)-V_q(z2)|^2 ]
};

// Euler-Lagrange flux A(x,z) = b(x,v) [ |z|^{p-2} z + (q/p) a(x) |z|^{q-2} z ]
// (the density gradient scaled by 1/p; the scaling is absorbed by the
// configured constant in the monotonicity probe).
inline Mat el_flux(const DensityProfile& density, double a_val, double bval, const Mat& z,
                   double mu) {
  const double p = density.exponents.p, q = density.exponents.q;
  const double s2 = frob_sq(z) + mu * mu;
  if (s2 == 0.0) {
    if (p < 2.0 || q < 2.0)
      throw SingularityError("el_flux: flux singular at 0 without regularization");
    return Mat(z.rows, z.cols);
  }
  const double s = std::sqrt(s2);
  const double fac =
      bval * (std::pow(s, p - 2.0) + (q / p) * a_val * std::pow(s, q - 2.0));
  Mat out = z;
  out *= fac;
  return out;
}

inline MonotonicityProbe monotonicity_gap(const DensityProfile& density, long node, const Mat& z1,
                                          const Mat& z2, double c = 8.0, double mu = 0.0) {
  detail::check_finite(z1);
  detail::check_finite(z2);
  if (node < 0 || node >= density.grid().node_count())
    throw IndexError("monotonicity_gap: node out of range");
  const double a_val = density.coefficient.at(node);
  const double bval = density.b_factor(density.grid().node_point(node), density.frozen_v);
  const Mat f1 = el_flux(density, a_val, bval, z1, mu);
  const Mat f2 = el_flux(density, a_val, bval, z2, mu);
  MonotonicityProbe probe;
  probe.inner = dot(f1 - f2, z1 - z2);
  const double vterm =
      frob_sq(v_map(z1, density.exponents.p) - v_map(z2, density.exponents.p)) +
      a_val * frob_sq(v_map(z1, density.exponents.q) - v_map(z2, density.exponents.q));
  probe.gap = probe.inner - vterm / c;
  return probe;
}

}  // namespace dplab
