#pragma once

namespace ccert {

/// Numeric tolerances shared by the special-function and root-finding code.
///
/// `bisection_tol` is an absolute width on the bisection bracket,
/// `series_tol` a relative stopping tolerance for continued fractions and
/// series, `max_iter` the iteration cap after which a computation is
/// declared non-convergent.
struct Precision {
  double bisection_tol = 1e-10;
  double series_tol = 1e-14;
  int max_iter = 10000;

  bool valid() const {
    return bisection_tol > 0.0 && series_tol > 0.0 && max_iter >= 1;
  }
};

}  // namespace ccert
