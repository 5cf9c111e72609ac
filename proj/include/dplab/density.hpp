// density.hpp - the double-phase density H(x,z) = |z|^p + a(x)|z|^q, its
// b(x,v)-modulated variant, frozen two-sided variants over balls, and the
// radial profile with first/second derivatives.
#pragma once

#include <functional>

#include "dplab/coefficient.hpp"
#include "dplab/exponents.hpp"
#include "dplab/field.hpp"

namespace dplab {

enum class DensityVariant { pure_H, b_times_H };

// Radial density F(x,v,z) = Ftilde(x,v,|z|). For pure_H the profile is
// exactly t^p + a(x) t^q; the b_times_H variant multiplies it by a bounded
// Caratheodory factor b(x,v) with nu1 <= b <= L1.
struct DensityProfile {
  Exponents exponents;
  CoefficientField coefficient;
  DensityVariant variant = DensityVariant::pure_H;

  std::function<double(const Point&, const Vec&)> b;  // only for b_times_H
  double nu1 = 1.0, L1 = 1.0;
  // v-argument used when an operation has no field value in scope (frozen
  // evaluations); irrelevant for pure_H.
  Vec frozen_v;

  static DensityProfile pure(Exponents e, CoefficientField a) {
    e.validate();
    a.check_nonnegative();
    DensityProfile d;
    d.exponents = e;
    d.coefficient = std::move(a);
    return d;
  }

  static DensityProfile modulated(Exponents e, CoefficientField a,
                                  std::function<double(const Point&, const Vec&)> b,
                                  double nu1, double L1, Vec frozen_v = Vec{}) {
    if (!(nu1 > 0.0 && nu1 <= L1)) throw ValidationError("density: need 0 < nu1 <= L1");
    DensityProfile d = pure(std::move(e), std::move(a));
    d.variant = DensityVariant::b_times_H;
    d.b = std::move(b);
    d.nu1 = nu1;
    d.L1 = L1;
    d.frozen_v = std::move(frozen_v);
    // growth constants of the modulated density
    d.exponents.nu = nu1;
    d.exponents.L = L1;
    return d;
  }

  const Grid& grid() const { return coefficient.grid; }

  double b_factor(const Point& x, const Vec& v) const {
    if (variant == DensityVariant::pure_H) return 1.0;
    const double val = b(x, v);
    if (!(val > 0.0)) throw ValidationError("density: b(x,v) must be positive");
    return val;
  }

  // H evaluated from raw ingredients (t = |z| >= 0).
  double H0(double a_val, double t) const {
    return std::pow(t, exponents.p) + a_val * std::pow(t, exponents.q);
  }

  // Ftilde(x,v,t) and derivatives in t.
  double radial(double a_val, double bval, double t) const { return bval * H0(a_val, t); }
  double radial_d1(double a_val, double bval, double t) const {
    const double p = exponents.p, q = exponents.q;
    return bval * (p * std::pow(t, p - 1.0) + a_val * q * std::pow(t, q - 1.0));
  }
  double radial_d2(double a_val, double bval, double t) const {
    const double p = exponents.p, q = exponents.q;
    return bval * (p * (p - 1.0) * std::pow(t, p - 2.0) +
                   a_val * q * (q - 1.0) * std::pow(t, q - 2.0));
  }

  // Frozen one-variable profile with a fixed coefficient value (the H^-/H^+
  // maps of a ball are instances of this).
  double frozen_profile(double a_val, double t) const { return H0(a_val, t); }
};

// ---------------------------------------------------------------------------
// Core evaluations
// ---------------------------------------------------------------------------

namespace detail {

inline void check_finite(const Mat& z) {
  for (int k = 0; k < z.rows * z.cols; ++k)
    if (!std::isfinite(z.a[size_t(k)])) throw DomainError("density: non-finite gradient value");
}

}  // namespace detail

// H(x,z) at a lattice node. For b_times_H the current field value v enters
// through b(x,v); the overload without v uses the profile's frozen value.
inline double eval_H(const DensityProfile& density, long node, const Mat& z, const Vec& v) {
  if (node < 0 || node >= density.grid().node_count())
    throw IndexError("eval_H: node out of range");
  detail::check_finite(z);
  const double a_val = density.coefficient.at(node);
  const double bval = density.b_factor(density.grid().node_point(node), v);
  return density.radial(a_val, bval, frob(z));
}

inline double eval_H(const DensityProfile& density, long node, const Mat& z) {
  return eval_H(density, node, z, density.frozen_v);
}

enum class FrozenSide { minus, plus };

struct FrozenCoefficients {
  double a_inf = 0.0;
  double a_sup = 0.0;
};

inline FrozenCoefficients frozen_coefficients(const DensityProfile& density, const Ball& ball) {
  const auto r = density.coefficient.range_in_ball(ball);
  return FrozenCoefficients{r.min, r.max};
}

// H^-_B(t) = t^p + a_i(B) t^q  /  H^+_B(t) = t^p + a_s(B) t^q with a_i/a_s the
// min/max of the node samples in the closed ball.
inline double eval_H_frozen(const DensityProfile& density, const Ball& ball, double t,
                            FrozenSide side) {
  if (!(t >= 0.0)) throw DomainError("eval_H_frozen: t must be >= 0");
  const auto fc = frozen_coefficients(density, ball);
  return density.frozen_profile(side == FrozenSide::minus ? fc.a_inf : fc.a_sup, t);
}

}  // namespace dplab
