#pragma once

#include <functional>
#include <optional>
#include <stdexcept>

#include "ccert/multiset.hpp"

namespace ccert {

/// A trained hypothesis, type-erased: `predict` is the raw output used for
/// extensional equality probes, `loss` the {0,1} appropriateness indicator.
template <class Z>
struct Hypothesis {
  std::function<double(const Z&)> predict;
  std::function<int(const Z&)> loss;
};

/// A compression function, optionally paired with a learner. compress(U)
/// must return a sub-multiset of U; callers assert this where cheap.
/// When `reconstruct` is present, reconstruct(compress(U)) must agree with
/// learner(U) extensionally.
template <class Z>
struct Scheme {
  std::string name;
  std::function<Multiset<Z>(const Multiset<Z>&)> compress;
  std::function<Hypothesis<Z>(const Multiset<Z>&)> learner;      // may be null
  std::function<Hypothesis<Z>(const Multiset<Z>&)> reconstruct;  // may be null

  bool has_learner() const { return static_cast<bool>(learner); }
};

/// True iff adding z to the *compression* of U changes the compression:
/// c(c(U) u {z}) != c(U). Evaluates compress exactly twice.
template <class Z>
bool change_of_compression(const Scheme<Z>& s, const Multiset<Z>& u,
                           const Z& z) {
  const Multiset<Z> cu = s.compress(u);
  return s.compress(cu.with(z)) != cu;
}

/// Variant for callers that already hold c(U); evaluates compress once.
template <class Z>
bool change_of_compression_from(const Scheme<Z>& s, const Multiset<Z>& cu,
                                const Z& z) {
  return s.compress(cu.with(z)) != cu;
}

/// The multiset of training examples the hypothesis gets wrong, with full
/// multiplicity.
template <class Z>
Multiset<Z> inappropriate_examples(const Scheme<Z>& s, const Multiset<Z>& u) {
  const Hypothesis<Z> h = s.learner(u);
  Multiset<Z> out;
  for (const auto& [z, m] : u.entries())
    if (h.loss(z) == 1) out.insert(z, m);
  return out;
}

/// Augments compress with the training examples the learner gets wrong
/// (those not already in the compression), and installs the learner itself
/// as the reconstruction map. Preserves the preference property of the
/// base scheme.
template <class Z>
Scheme<Z> augment(const Scheme<Z>& s) {
  if (!s.has_learner())
    throw std::invalid_argument("augment: scheme has no learner/loss");
  Scheme<Z> out;
  out.name = s.name + "+augmented";
  auto base_compress = s.compress;
  auto learner = s.learner;
  out.compress = [base_compress, learner](const Multiset<Z>& u) {
    const Multiset<Z> cu = base_compress(u);
    const Hypothesis<Z> h = learner(u);
    Multiset<Z> mis;
    for (const auto& [z, m] : u.entries())
      if (h.loss(z) == 1) mis.insert(z, m);
    return set_union(cu, set_difference(mis, cu));
  };
  out.learner = learner;
  out.reconstruct = learner;
  return out;
}

}  // namespace ccert
