#pragma once

#include <limits>

#include "ccert/scheme.hpp"

namespace ccert {

/// Compression = the largest element; hypothesis = the half line up to the
/// second-largest element. Satisfies preference and inclusion but not
/// coherence part I: a fresh point strictly between the second-largest and
/// the maximum is inappropriate yet leaves the compression unchanged.
inline Scheme<double> second_largest_scheme() {
  Scheme<double> s;
  s.name = "second_largest";
  s.compress = [](const Multiset<double>& u) {
    Multiset<double> out;
    if (!u.empty()) out.insert(u.entries().rbegin()->first);
    return out;
  };
  s.learner = [](const Multiset<double>& u) {
    // Second largest counted with multiplicity; ties at the maximum make
    // it equal the maximum. Empty input accepts everything.
    double threshold = std::numeric_limits<double>::infinity();
    if (!u.empty()) {
      auto it = u.entries().rbegin();
      if (it->second >= 2)
        threshold = it->first;
      else {
        auto next = std::next(it);
        threshold = (next == u.entries().rend()) ? it->first : next->first;
      }
    }
    Hypothesis<double> h;
    h.predict = [threshold](const double& z) { return z <= threshold ? 1.0 : 0.0; };
    h.loss = [threshold](const double& z) { return z <= threshold ? 0 : 1; };
    return h;
  };
  return s;
}

/// Caps the multiplicity of one designated atom at `cap`; identity on
/// everything else. Compression-only (no learner): the counterexample
/// scheme for the concentrated-mass requirement.
inline Scheme<double> trimming_scheme(double atom, std::int64_t cap) {
  if (cap < 1) throw std::invalid_argument("trimming_scheme: cap must be >= 1");
  Scheme<double> s;
  s.name = "trimming";
  s.compress = [atom, cap](const Multiset<double>& u) {
    Multiset<double> out;
    for (const auto& [z, m] : u.entries())
      out.insert(z, (z == atom && m > cap) ? cap : m);
    return out;
  };
  return s;
}

}  // namespace ccert
