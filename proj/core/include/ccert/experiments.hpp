#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ccert/bounds.hpp"
#include "ccert/distributions.hpp"
#include "ccert/kernel.hpp"
#include "ccert/multiset.hpp"
#include "ccert/rng.hpp"
#include "ccert/scheme.hpp"

namespace ccert {

/// Which scheme a Monte Carlo run drives, with its hyper-parameters.
struct SchemeSpec {
  std::string kind;  // hull2 hull3 svm svr gem second_largest trimming
  Kernel kernel;
  double rho = 10.0;
  double svr_tolerance = 0.3;
  int gem_budget = 10;
  LabeledExample gem_anchor;   // default: origin with label +1 (dim fixed at parse)
  double trim_atom = 0.0;
  std::int64_t trim_cap = 100;
};

struct ExperimentConfig {
  SchemeSpec scheme;
  Distribution distribution;
  std::int64_t n_train = 100;
  double delta = 1e-3;
  std::int64_t trials = 10;
  std::int64_t n_test_risk = 10000;
  std::int64_t n_test_phi = 1000;
  std::uint64_t seed = 1;
};

/// Parse failure with the offending config field spelled out.
struct ConfigError : std::runtime_error {
  std::string field;
  ConfigError(std::string f, const std::string& msg)
      : std::runtime_error("config error at " + f + ": " + msg),
        field(std::move(f)) {}
};

ExperimentConfig parse_experiment_config(const std::string& json_text);

struct TrialResult {
  std::int64_t trial = 0;
  std::uint64_t seed = 0;
  std::int64_t k = 0;
  double risk_hat = 0.0;
  double phi_hat = 0.0;
  double eps = 0.0;
  double eps_low = 0.0;
  double eps_up = 0.0;
  bool inside = false;        // two-sided interval containment
  bool inside_upper = false;  // one-sided bound containment (risk <= eps)
  bool ok = true;             // false: scheme training failed, excluded
  std::string error;
  std::int64_t n_train = 0;   // carried for reports, not part of the CSV
};

/// Fraction of fresh draws the trained hypothesis gets wrong.
template <class Z>
double estimate_risk(const Scheme<Z>& s, const Multiset<Z>& train,
                     const std::function<Z(Rng&)>& law, std::int64_t n_test,
                     Rng& rng) {
  if (n_test < 1) throw std::invalid_argument("estimate_risk: n_test >= 1");
  const Hypothesis<Z> h = s.learner(train);
  std::int64_t bad = 0;
  for (std::int64_t i = 0; i < n_test; ++i)
    bad += h.loss(law(rng));
  return static_cast<double>(bad) / static_cast<double>(n_test);
}

/// Fraction of fresh draws whose addition to the compression changes it.
/// The compression of the training set is computed once.
template <class Z>
double estimate_phi(const Scheme<Z>& s, const Multiset<Z>& train,
                    const std::function<Z(Rng&)>& law, std::int64_t n_test,
                    Rng& rng) {
  if (n_test < 1) throw std::invalid_argument("estimate_phi: n_test >= 1");
  const Multiset<Z> c = s.compress(train);
  std::int64_t changed = 0;
  for (std::int64_t i = 0; i < n_test; ++i)
    changed += change_of_compression_from(s, c, law(rng)) ? 1 : 0;
  return static_cast<double>(changed) / static_cast<double>(n_test);
}

/// Runs cfg.trials independent trials; deterministic for a given master
/// seed regardless of `jobs`. The bound table for (n_train, delta) is
/// computed once and shared.
std::vector<TrialResult> run_trials(const ExperimentConfig& cfg, int jobs = 0);

struct CoverageSummary {
  std::int64_t trials = 0;
  std::int64_t excluded = 0;      // training failures
  double coverage = 0.0;          // fraction of ok trials with inside = true
  double coverage_upper = 0.0;    // fraction with risk_hat <= eps (+ slack)
  double mean_abs_dev = 0.0;      // mean |risk_hat - k/N|
  double max_abs_dev = 0.0;
  std::int64_t k_min = 0, k_max = 0;
  double risk_min = 0.0, risk_max = 0.0;
  double delta = 0.0;
  double threshold = 0.0;         // 1 - delta
};

CoverageSummary coverage_report(const std::vector<TrialResult>& results,
                                double delta);

std::string to_json(const CoverageSummary& s);

/// CSV: trial,seed,k,risk_hat,phi_hat,eps,eps_low,eps_up,inside.
/// Failed trials are omitted from rows (the summary counts them).
void write_trials_csv(const std::vector<TrialResult>& results,
                      std::ostream& os);

std::vector<TrialResult> read_trials_csv(std::istream& is,
                                         std::int64_t n_train = 0);

}  // namespace ccert
