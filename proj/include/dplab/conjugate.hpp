// conjugate.hpp - convex conjugate of H0(s) = s^p + a0 s^q by bracketed 1-D
// maximization. H0 is superlinear, so sup_{s>0} (st - H0(s)) is attained.
#pragma once

#include <functional>

#include "dplab/exponents.hpp"

namespace dplab {

namespace detail {

// Golden-section maximization of f on [lo, hi].
inline double golden_max(const std::function<double(double)>& f, double lo, double hi,
                         int iters = 200) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters && (b - a) > 1e-15 * std::max(1.0, std::abs(b)); ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  const double xm = 0.5 * (a + b);
  return std::max({f(xm), f1, f2, 0.0});
}

}  // namespace detail

// H0*(t) = sup_{s>0} (s t - H0(s)). Always >= 0; exactly 0 at t = 0.
inline double conjugate_H0(double t, double a0, const Exponents& e) {
  if (!(t >= 0.0)) throw DomainError("conjugate_H0: t must be >= 0");
  if (!(a0 >= 0.0)) throw DomainError("conjugate_H0: a0 must be >= 0");
  if (t == 0.0) return 0.0;
  const auto objective = [&](double s) {
    return s * t - (std::pow(s, e.p) + a0 * std::pow(s, e.q));
  };
  // grow the bracket until the objective is decreasing at the right end
  double s_max = 1.0;
  for (int i = 0; i < 200; ++i) {
    if (objective(s_max) < 0.0 && objective(s_max) < objective(s_max / 2.0)) break;
    s_max *= 2.0;
  }
  return detail::golden_max(objective, 0.0, s_max);
}

// H0 itself, for use beside the conjugate in Young-type probes.
inline double H0_value(double s, double a0, const Exponents& e) {
  return std::pow(s, e.p) + a0 * std::pow(s, e.q);
}

}  // namespace dplab
