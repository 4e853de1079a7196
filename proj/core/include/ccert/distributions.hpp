#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ccert/example_types.hpp"
#include "ccert/rng.hpp"

namespace ccert {

/// Synthetic example laws. The continuous ones produce duplicate samples
/// with probability zero; point_mass deliberately concentrates all mass on
/// one atom.
struct GaussianLaw {
  int dim = 1;
  std::vector<double> mean;      // defaults to zeros
  std::vector<double> cov_diag;  // defaults to ones
};

struct UniformCubeLaw {
  int dim = 1;
  double lo = 0.0;
  double hi = 1.0;
};

struct LabeledBlobsLaw {
  std::vector<double> mean_pos;
  std::vector<double> mean_neg;
  double spread = 1.0;
};

struct NoisyLineLaw {
  double slope = 1.0;
  double intercept = 0.0;
  double noise = 0.1;
  double x_lo = -1.0;
  double x_hi = 1.0;
};

struct PointMassLaw {
  double atom = 0.0;
};

using Distribution = std::variant<GaussianLaw, UniformCubeLaw, LabeledBlobsLaw,
                                  NoisyLineLaw, PointMassLaw>;

inline Point draw_point(const GaussianLaw& law, Rng& rng) {
  Point p;
  p.x.resize(static_cast<std::size_t>(law.dim));
  for (int i = 0; i < law.dim; ++i) {
    const double m =
        i < static_cast<int>(law.mean.size()) ? law.mean[static_cast<std::size_t>(i)] : 0.0;
    const double v = i < static_cast<int>(law.cov_diag.size())
                         ? law.cov_diag[static_cast<std::size_t>(i)]
                         : 1.0;
    p.x[static_cast<std::size_t>(i)] = m + std::sqrt(v) * rng.normal();
  }
  return p;
}

inline Point draw_point(const UniformCubeLaw& law, Rng& rng) {
  Point p;
  p.x.resize(static_cast<std::size_t>(law.dim));
  for (int i = 0; i < law.dim; ++i)
    p.x[static_cast<std::size_t>(i)] = rng.uniform(law.lo, law.hi);
  return p;
}

inline LabeledExample draw_labeled(const LabeledBlobsLaw& law, Rng& rng) {
  LabeledExample e;
  e.y = rng.coin() ? 1.0 : -1.0;
  const std::vector<double>& mean = e.y > 0 ? law.mean_pos : law.mean_neg;
  e.x.x.resize(mean.size());
  for (std::size_t i = 0; i < mean.size(); ++i)
    e.x.x[i] = mean[i] + law.spread * rng.normal();
  return e;
}

inline LabeledExample draw_labeled(const NoisyLineLaw& law, Rng& rng) {
  LabeledExample e;
  const double x = rng.uniform(law.x_lo, law.x_hi);
  e.x = Point{x};
  e.y = law.slope * x + law.intercept + law.noise * rng.normal();
  return e;
}

inline double draw_scalar(const PointMassLaw& law, Rng&) { return law.atom; }

const char* distribution_kind(const Distribution& d);

}  // namespace ccert
