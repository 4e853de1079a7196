#pragma once

#include <functional>

#include "ccert/precision.hpp"

namespace ccert {

/// Which end of the final bracket a bisection returns. The reference
/// solvers return the upper end for upper-style solutions (eps = t2) and
/// the lower end for lower-style ones (epsL = t1).
enum class BracketEnd { lower, upper };

struct BisectResult {
  double root = 0.0;
  bool converged = false;  // false when max_iter ran out
  int iterations = 0;
};

/// Bisection on [lo, hi]. `f` is never evaluated at the endpoints (the
/// caller guarantees the sign structure instead): `sign_at_hi` is +1 when
/// f > 0 on the hi side of the crossing, -1 when f < 0 there. On iteration
/// exhaustion the midpoint is returned with converged = false.
BisectResult bisect(const std::function<double(double)>& f, double lo,
                    double hi, const Precision& prec, BracketEnd end,
                    int sign_at_hi = +1);

}  // namespace ccert
