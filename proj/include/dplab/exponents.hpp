// exponents.hpp - the exponent/modulus parameter pack and its admissibility
// checks. The growth window 1 < p < q < p + alpha is strict; q < N is only
// required in sphere-constrained mode.
#pragma once

#include "dplab/core.hpp"

namespace dplab {

struct Exponents {
  double p = 2.0;
  double q = 2.4;
  double alpha = 0.5;   // Hoelder exponent of the coefficient
  double beta = 1.0;    // modulus-of-continuity exponent
  double beta1 = 1.0;   // radial-density Hoelder exponent
  double nu = 1.0;      // lower growth constant
  double L = 1.0;       // upper growth constant

  void validate(int target_dim = 0) const {
    if (!(p > 1.0)) throw ExponentError("exponents: p must be > 1");
    if (!(p < q)) throw ExponentError("exponents: need p < q strictly");
    if (!(q < p + alpha)) throw ExponentError("exponents: need q < p + alpha strictly");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ExponentError("exponents: alpha in (0,1]");
    if (!(beta > 0.0 && beta <= 1.0)) throw ExponentError("exponents: beta in (0,1]");
    if (!(beta1 > 0.0 && beta1 <= 1.0)) throw ExponentError("exponents: beta1 in (0,1]");
    if (!(nu > 0.0 && nu <= 1.0)) throw ExponentError("exponents: nu in (0,1]");
    if (!(L >= 1.0)) throw ExponentError("exponents: L >= 1");
    if (target_dim > 0 && !(q < double(target_dim)))
      throw ExponentError("exponents: constrained mode requires q < N");
  }
};

}  // namespace dplab
