#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "ccert/multiset.hpp"
#include "ccert/rng.hpp"
#include "ccert/scheme.hpp"

namespace ccert {

/// Outcome of a sampling-based property check. Zero violations means the
/// sampler found no counterexample, not a proof; the first counterexample
/// is kept (as a JSON fragment) for replay.
struct PropertyReport {
  std::string property;
  std::int64_t trials = 0;
  std::int64_t violations = 0;
  std::string counterexample;  // JSON object, empty when violations == 0

  bool passed() const { return violations == 0; }

  std::string to_json() const {
    std::string s = "{\"property\":\"" + property +
                    "\",\"trials\":" + std::to_string(trials) +
                    ",\"violations\":" + std::to_string(violations);
    if (!counterexample.empty()) s += ",\"counterexample\":" + counterexample;
    return s + "}";
  }
};

/// Random inputs for the checks: a law for whole training multisets and a
/// law for single fresh examples.
template <class Z>
struct Sampler {
  std::function<Multiset<Z>(Rng&)> draw_multiset;
  std::function<Z(Rng&)> draw_example;
};

namespace detail {

template <class Z>
std::string describe_multiset(const Multiset<Z>& u) {
  std::string s = "[";
  bool first = true;
  for (const auto& [z, m] : u.entries()) {
    if (!first) s += ',';
    first = false;
    s += "{\"z\":" + describe(z) + ",\"mult\":" + std::to_string(m) + "}";
  }
  return s + "]";
}

template <class Z>
void require_sub_multiset(const Multiset<Z>& c, const Multiset<Z>& u,
                          const char* where) {
  if (!c.subset_of(u))
    throw std::logic_error(std::string(where) +
                           ": compress output is not a sub-multiset");
}

}  // namespace detail

/// Preference check in its sandwich form: draws U, picks V with
/// c(U) <= V <= U by keeping each element of U\c(U) with probability 1/2,
/// and compares c(V) against c(U).
template <class Z>
PropertyReport check_preference(const Scheme<Z>& s, const Sampler<Z>& gen,
                                std::int64_t trials, std::uint64_t seed) {
  PropertyReport rep;
  rep.property = "preference";
  rep.trials = trials;
  for (std::int64_t t = 0; t < trials; ++t) {
    Rng rng = trial_rng(seed, static_cast<std::uint64_t>(t));
    const Multiset<Z> u = gen.draw_multiset(rng);
    const Multiset<Z> cu = s.compress(u);
    detail::require_sub_multiset(cu, u, "check_preference");
    Multiset<Z> v = cu;
    const Multiset<Z> rest = set_difference(u, cu);
    for (const auto& [z, m] : rest.entries())
      for (std::int64_t i = 0; i < m; ++i)
        if (rng.coin()) v.insert(z);
    const Multiset<Z> cv = s.compress(v);
    if (cv != cu) {
      ++rep.violations;
      if (rep.counterexample.empty())
        rep.counterexample = "{\"U\":" + detail::describe_multiset(u) +
                             ",\"V\":" + detail::describe_multiset(v) +
                             ",\"cU\":" + detail::describe_multiset(cu) +
                             ",\"cV\":" + detail::describe_multiset(cv) + "}";
    }
  }
  return rep;
}

template <class Z>
PropertyReport check_idempotence(const Scheme<Z>& s, const Sampler<Z>& gen,
                                 std::int64_t trials, std::uint64_t seed) {
  PropertyReport rep;
  rep.property = "idempotence";
  rep.trials = trials;
  for (std::int64_t t = 0; t < trials; ++t) {
    Rng rng = trial_rng(seed, static_cast<std::uint64_t>(t));
    const Multiset<Z> u = gen.draw_multiset(rng);
    const Multiset<Z> cu = s.compress(u);
    detail::require_sub_multiset(cu, u, "check_idempotence");
    const Multiset<Z> ccu = s.compress(cu);
    if (ccu != cu) {
      ++rep.violations;
      if (rep.counterexample.empty())
        rep.counterexample = "{\"U\":" + detail::describe_multiset(u) +
                             ",\"cU\":" + detail::describe_multiset(cu) +
                             ",\"ccU\":" + detail::describe_multiset(ccu) + "}";
    }
  }
  return rep;
}

/// Statistical falsifier for non-associativity: when p fresh examples each
/// leave the compression of U unchanged one at a time, the batch addition
/// must leave it unchanged too. Violations are counted, never proven
/// absent.
template <class Z>
PropertyReport check_non_associativity(const Scheme<Z>& s,
                                       const Sampler<Z>& gen,
                                       std::int64_t trials, int batch,
                                       std::uint64_t seed) {
  if (batch < 1)
    throw std::invalid_argument("check_non_associativity: batch must be >= 1");
  PropertyReport rep;
  rep.property = "non_associativity";
  rep.trials = trials;
  for (std::int64_t t = 0; t < trials; ++t) {
    Rng rng = trial_rng(seed, static_cast<std::uint64_t>(t));
    const Multiset<Z> u = gen.draw_multiset(rng);
    const Multiset<Z> cu = s.compress(u);
    detail::require_sub_multiset(cu, u, "check_non_associativity");
    std::vector<Z> fresh;
    fresh.reserve(static_cast<std::size_t>(batch));
    for (int i = 0; i < batch; ++i) fresh.push_back(gen.draw_example(rng));
    bool singles_unchanged = true;
    for (const Z& z : fresh)
      if (s.compress(u.with(z)) != cu) {
        singles_unchanged = false;
        break;
      }
    if (!singles_unchanged) continue;
    Multiset<Z> joint = u;
    for (const Z& z : fresh) joint.insert(z);
    const Multiset<Z> cj = s.compress(joint);
    if (cj != cu) {
      ++rep.violations;
      if (rep.counterexample.empty()) {
        std::string zs = "[";
        for (std::size_t i = 0; i < fresh.size(); ++i) {
          if (i) zs += ',';
          zs += describe(fresh[i]);
        }
        zs += "]";
        rep.counterexample = "{\"U\":" + detail::describe_multiset(u) +
                             ",\"batch\":" + zs +
                             ",\"cU\":" + detail::describe_multiset(cu) +
                             ",\"cJoint\":" + detail::describe_multiset(cj) +
                             "}";
      }
    }
  }
  return rep;
}

/// Every training example the hypothesis gets wrong must sit in the
/// compression with full multiplicity.
template <class Z>
PropertyReport check_inclusion(const Scheme<Z>& s, const Sampler<Z>& gen,
                               std::int64_t trials, std::uint64_t seed) {
  if (!s.has_learner())
    throw std::invalid_argument("check_inclusion: scheme has no learner/loss");
  PropertyReport rep;
  rep.property = "inclusion";
  rep.trials = trials;
  for (std::int64_t t = 0; t < trials; ++t) {
    Rng rng = trial_rng(seed, static_cast<std::uint64_t>(t));
    const Multiset<Z> u = gen.draw_multiset(rng);
    const Multiset<Z> cu = s.compress(u);
    detail::require_sub_multiset(cu, u, "check_inclusion");
    const Hypothesis<Z> h = s.learner(u);
    for (const auto& [z, m] : u.entries()) {
      if (h.loss(z) == 1 && cu.multiplicity(z) != m) {
        ++rep.violations;
        if (rep.counterexample.empty())
          rep.counterexample =
              "{\"U\":" + detail::describe_multiset(u) + ",\"z\":" +
              describe(z) + ",\"mult_in_U\":" + std::to_string(m) +
              ",\"mult_in_cU\":" + std::to_string(cu.multiplicity(z)) + "}";
        break;
      }
    }
  }
  return rep;
}

/// Part I: a fresh example the hypothesis gets wrong must change the
/// compression.
template <class Z>
PropertyReport check_coherence_I(const Scheme<Z>& s, const Sampler<Z>& gen,
                                 std::int64_t trials, std::uint64_t seed) {
  if (!s.has_learner())
    throw std::invalid_argument("check_coherence_I: scheme has no learner");
  PropertyReport rep;
  rep.property = "coherence1";
  rep.trials = trials;
  for (std::int64_t t = 0; t < trials; ++t) {
    Rng rng = trial_rng(seed, static_cast<std::uint64_t>(t));
    const Multiset<Z> u = gen.draw_multiset(rng);
    const Z z = gen.draw_example(rng);
    const Hypothesis<Z> h = s.learner(u);
    if (h.loss(z) != 1) continue;
    const Multiset<Z> cu = s.compress(u);
    detail::require_sub_multiset(cu, u, "check_coherence_I");
    if (!change_of_compression_from(s, cu, z)) {
      ++rep.violations;
      if (rep.counterexample.empty())
        rep.counterexample = "{\"U\":" + detail::describe_multiset(u) +
                             ",\"z\":" + describe(z) +
                             ",\"cU\":" + detail::describe_multiset(cu) + "}";
    }
  }
  return rep;
}

/// Part II: a change of compression must come from a fresh example the
/// hypothesis gets wrong.
template <class Z>
PropertyReport check_coherence_II(const Scheme<Z>& s, const Sampler<Z>& gen,
                                  std::int64_t trials, std::uint64_t seed) {
  if (!s.has_learner())
    throw std::invalid_argument("check_coherence_II: scheme has no learner");
  PropertyReport rep;
  rep.property = "coherence2";
  rep.trials = trials;
  for (std::int64_t t = 0; t < trials; ++t) {
    Rng rng = trial_rng(seed, static_cast<std::uint64_t>(t));
    const Multiset<Z> u = gen.draw_multiset(rng);
    const Z z = gen.draw_example(rng);
    const Multiset<Z> cu = s.compress(u);
    detail::require_sub_multiset(cu, u, "check_coherence_II");
    if (!change_of_compression_from(s, cu, z)) continue;
    const Hypothesis<Z> h = s.learner(u);
    if (h.loss(z) != 1) {
      ++rep.violations;
      if (rep.counterexample.empty())
        rep.counterexample = "{\"U\":" + detail::describe_multiset(u) +
                             ",\"z\":" + describe(z) +
                             ",\"cU\":" + detail::describe_multiset(cu) + "}";
    }
  }
  return rep;
}

}  // namespace ccert
