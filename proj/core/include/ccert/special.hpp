#pragma once

#include <cstdint>

#include "ccert/precision.hpp"

namespace ccert {

/// ln Gamma(x) for x > 0, Lanczos approximation (g = 7, 9 coefficients).
double log_gamma(double x);

/// ln Beta(a,b) for a,b > 0. Uses a Stirling-corrected form for large
/// arguments to avoid the cancellation of the naive lgamma difference.
double log_beta(double a, double b);

/// ln C(n,k). Throws std::domain_error when k > n.
double log_binomial(std::int64_t n, std::int64_t k);

/// Regularized incomplete beta I_t(a,b), t in [0,1], a,b > 0.
/// Lentz continued fraction with the symmetry split at t <= (a+1)/(a+b+2).
/// Throws std::domain_error on bad arguments, std::runtime_error when the
/// continued fraction fails to converge within prec.max_iter.
double reg_inc_beta(double t, double a, double b, const Precision& prec = {});

/// Same as reg_inc_beta but with the complement tc = 1-t supplied
/// explicitly, so callers that track t near 0 or near 1 keep full relative
/// accuracy on both tails. Requires t + tc == 1 up to rounding.
double reg_inc_beta_c(double t, double tc, double a, double b,
                      const Precision& prec = {});

}  // namespace ccert
