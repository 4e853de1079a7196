#include "ccert/gem.hpp"

#include <cmath>
#include <memory>
#include <limits>
#include <stdexcept>

namespace ccert {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double GemModel::predict(const Point& p) const {
  for (const Region& r : regions) {
    if (r.r2 == kInf) return r.label;
    if (kernel.feature_dist2(p, r.center) < r.r2) return r.label;
  }
  return 0.0;
}

std::string GemModel::to_json() const {
  std::string s = "{\"kind\":\"gem\",\"kernel\":" + kernel.to_json() +
                  ",\"budget\":" + std::to_string(budget) + ",\"regions\":[";
  for (std::size_t i = 0; i < regions.size(); ++i) {
    if (i) s += ',';
    const Region& r = regions[i];
    s += "{\"center\":" + describe(r.center) + ",\"r2\":" +
         (r.r2 == kInf ? std::string("\"inf\"") : describe(r.r2)) +
         ",\"label\":" + describe(r.label) + "}";
  }
  return s + "]}";
}

GemModel gem_train(const Multiset<LabeledExample>& s,
                   const LabeledExample& anchor, int d,
                   const Kernel& kernel) {
  if (d < 1) throw std::invalid_argument("gem_train: d must be >= 1");
  if (anchor.y != 1.0 && anchor.y != -1.0)
    throw std::invalid_argument("gem_train: anchor label must be +-1");
  for (const auto& [z, m] : s.entries())
    if (z.y != 1.0 && z.y != -1.0)
      throw std::invalid_argument("gem_train: labels must be +-1");
  GemModel model;
  model.budget = d;
  model.kernel = kernel;

  Multiset<LabeledExample> pending = s.with(anchor);
  LabeledExample center = anchor;

  while (true) {
    // Largest ball around the center free of opposite-label examples.
    double r2 = kInf;
    for (const auto& [z, m] : pending.entries())
      if (z.y != center.y)
        r2 = std::min(r2, kernel.feature_dist2(z.x, center.x));

    model.regions.push_back({center.x, r2, center.y});

    if (r2 == kInf) break;  // covers everything that is left

    if (r2 > 0.0) {
      Multiset<LabeledExample> rest;
      for (const auto& [z, m] : pending.entries())
        if (!(kernel.feature_dist2(z.x, center.x) < r2)) rest.insert(z, m);
      pending = rest;
    } else {
      // Opposite label at the center's own instance: shed one copy of the
      // center example only.
      pending = set_difference(pending, Multiset<LabeledExample>({center}));
    }

    // The blocking example becomes the next center: on the boundary,
    // opposite label, smallest instance in the order of X among ties.
    bool found = false;
    LabeledExample next{};
    for (const auto& [z, m] : pending.entries()) {
      if (z.y == center.y) continue;
      if (kernel.feature_dist2(z.x, center.x) == r2) {
        next = z;  // entries iterate in order; first hit is the smallest
        found = true;
        break;
      }
    }
    if (!found)
      throw std::logic_error("gem_train: boundary example vanished");
    model.centers.insert(next);
    center = next;

    if (model.centers.cardinality() == d || pending.empty()) break;
  }
  return model;
}

Scheme<LabeledExample> gem_scheme(const LabeledExample& anchor, int d,
                                  const Kernel& kernel) {
  Scheme<LabeledExample> s;
  s.name = "gem";
  s.compress = [anchor, d, kernel](const Multiset<LabeledExample>& u) {
    return gem_train(u, anchor, d, kernel).centers;
  };
  s.learner = [anchor, d, kernel](const Multiset<LabeledExample>& u) {
    auto m = std::make_shared<GemModel>(gem_train(u, anchor, d, kernel));
    Hypothesis<LabeledExample> h;
    h.predict = [m](const LabeledExample& z) { return m->predict(z.x); };
    h.loss = [m](const LabeledExample& z) { return m->loss(z); };
    return h;
  };
  s.reconstruct = s.learner;
  return s;
}

}  // namespace ccert
