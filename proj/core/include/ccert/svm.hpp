#pragma once

#include <string>
#include <vector>

#include "ccert/kernel.hpp"
#include "ccert/multiset.hpp"
#include "ccert/scheme.hpp"

namespace ccert {

/// Shared trained form of the two support-vector programs. For
/// classification `beta[i]` is y_i alpha_i, for regression alpha_i -
/// alpha*_i; either way the decision value is sum_i beta[i] k(x_i, x) + b.
struct SvmModel {
  std::vector<Point> x;
  std::vector<double> y;
  std::vector<double> beta;
  double b = 0.0;
  Kernel kernel;
  double rho = 1.0;       // primal slack weight; dual box is [0, rho/2]
  double tolerance = 0.0; // prediction tolerance t (regression only)
  bool regression = false;
  bool converged = true;
  int iterations = 0;
  double kkt_gap = 0.0;   // max violating pair gap at exit

  double decision(const Point& p) const;

  /// ||w||^2 + rho * sum of hinge slacks, the primal objective at (w, b).
  double primal_objective() const;

  std::string to_json() const;
};

/// Soft-margin classifier: minimizes ||w||^2 + rho * sum xi subject to
/// y_i (<w, phi(x_i)> + b) >= 1 - xi_i. Solved in the dual by SMO
/// (maximal violating pair) to KKT gap `kkt_tol`; ties in b broken by the
/// minimum-|b| point of the optimal interval.
SvmModel svm_train(const Multiset<LabeledExample>& s, const Kernel& kernel,
                   double rho, double kkt_tol = 1e-7,
                   int max_updates = 100000);

/// Epsilon-insensitive regression: minimizes ||w||^2 + rho * sum xi
/// subject to |y_i - <w, phi(x_i)> - b| <= t + xi_i.
SvmModel svr_train(const Multiset<LabeledExample>& s, const Kernel& kernel,
                   double rho, double t, double kkt_tol = 1e-7,
                   int max_updates = 100000);

/// Compression scheme built on svm_train. The compression is the margin
/// set {i : 1 - y_i f(x_i) >= -tol_margin}, a computable overestimate of
/// the minimal compression that keeps the bound valid (the one-sided bound
/// is increasing in cardinality).
Scheme<LabeledExample> svm_scheme(const Kernel& kernel, double rho,
                                  double tol_margin = 1e-6);

/// Compression scheme built on svr_train: margin set
/// {i : |y_i - f(x_i)| >= t - tol_margin}; loss = 1 iff |y - f(x)| > t.
Scheme<LabeledExample> svr_scheme(const Kernel& kernel, double rho, double t,
                                  double tol_margin = 1e-6);

}  // namespace ccert
