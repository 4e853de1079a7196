#pragma once

#include <string>
#include <vector>

#include "ccert/kernel.hpp"
#include "ccert/multiset.hpp"
#include "ccert/scheme.hpp"

namespace ccert {

/// Ternary classifier built from nested feature-space balls grown around a
/// chain of centers; label 0 means abstention. Regions are open balls
/// evaluated in construction order, the predictor uses the first region
/// containing the query.
struct GemModel {
  struct Region {
    Point center;
    double r2;      // squared feature-space radius; may be +inf
    double label;   // firm label of the region
  };

  std::vector<Region> regions;
  Multiset<LabeledExample> centers;  // the compression C, |C| <= budget
  int budget = 1;
  Kernel kernel;

  /// -1, 0 (abstain) or +1.
  double predict(const Point& p) const;

  /// 1 iff the prediction is a firm wrong label (|y - h(x)| = 2).
  int loss(const LabeledExample& z) const {
    const double h = predict(z.x);
    return std::fabs(z.y - h) == 2.0 ? 1 : 0;
  }

  std::string to_json() const;
};

/// Runs the center-growing construction: start from the anchor example,
/// grow the largest ball free of opposite labels, classify it, drop the
/// covered examples, promote the blocking example (smallest in the order
/// of X among ties) to the next center; stop when the center budget d is
/// reached or nothing is left.
GemModel gem_train(const Multiset<LabeledExample>& s,
                   const LabeledExample& anchor, int d, const Kernel& kernel);

/// Compression scheme with compress = the trained center multiset.
Scheme<LabeledExample> gem_scheme(const LabeledExample& anchor, int d,
                                  const Kernel& kernel);

}  // namespace ccert
