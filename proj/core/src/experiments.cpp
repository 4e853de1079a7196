#include "ccert/experiments.hpp"

#include <atomic>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ccert/gem.hpp"
#include "ccert/hull.hpp"
#include "ccert/svm.hpp"
#include "ccert/toys.hpp"

namespace ccert {

using nlohmann::json;

const char* distribution_kind(const Distribution& d) {
  struct V {
    const char* operator()(const GaussianLaw&) const { return "gaussian"; }
    const char* operator()(const UniformCubeLaw&) const { return "uniform_cube"; }
    const char* operator()(const LabeledBlobsLaw&) const { return "labeled_blobs"; }
    const char* operator()(const NoisyLineLaw&) const { return "noisy_line"; }
    const char* operator()(const PointMassLaw&) const { return "point_mass"; }
  };
  return std::visit(V{}, d);
}

namespace {

double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

std::int64_t require_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<std::int64_t>();
}

std::vector<double> require_vec(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError(path, "expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

const json& require_field(const json& j, const char* name,
                          const std::string& path) {
  auto it = j.find(name);
  if (it == j.end()) throw ConfigError(path + "." + name, "missing field");
  return *it;
}

Kernel parse_kernel(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const std::string kind = require_field(j, "kind", path).get<std::string>();
  if (kind == "linear") return Kernel::linear();
  if (kind == "rbf")
    return Kernel::rbf(require_number(require_field(j, "gamma", path),
                                      path + ".gamma"));
  if (kind == "polynomial")
    return Kernel::polynomial(
        static_cast<int>(require_int(require_field(j, "degree", path),
                                     path + ".degree")),
        require_number(require_field(j, "coef", path), path + ".coef"));
  throw ConfigError(path + ".kind", "unknown kernel '" + kind + "'");
}

Distribution parse_distribution(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const std::string kind = require_field(j, "kind", path).get<std::string>();
  if (kind == "gaussian") {
    GaussianLaw law;
    law.dim = static_cast<int>(
        require_int(require_field(j, "dim", path), path + ".dim"));
    if (law.dim < 1) throw ConfigError(path + ".dim", "must be >= 1");
    if (j.contains("mean")) law.mean = require_vec(j["mean"], path + ".mean");
    if (j.contains("cov_diag"))
      law.cov_diag = require_vec(j["cov_diag"], path + ".cov_diag");
    for (double v : law.cov_diag)
      if (!(v > 0.0)) throw ConfigError(path + ".cov_diag", "must be positive");
    return law;
  }
  if (kind == "uniform_cube") {
    UniformCubeLaw law;
    law.dim = static_cast<int>(
        require_int(require_field(j, "dim", path), path + ".dim"));
    if (law.dim < 1) throw ConfigError(path + ".dim", "must be >= 1");
    law.lo = require_number(require_field(j, "lo", path), path + ".lo");
    law.hi = require_number(require_field(j, "hi", path), path + ".hi");
    if (!(law.lo < law.hi)) throw ConfigError(path + ".hi", "requires lo < hi");
    return law;
  }
  if (kind == "labeled_blobs") {
    LabeledBlobsLaw law;
    law.mean_pos =
        require_vec(require_field(j, "mean_pos", path), path + ".mean_pos");
    law.mean_neg =
        require_vec(require_field(j, "mean_neg", path), path + ".mean_neg");
    if (law.mean_pos.size() != law.mean_neg.size() || law.mean_pos.empty())
      throw ConfigError(path + ".mean_neg",
                        "class means must share a positive dimension");
    law.spread =
        require_number(require_field(j, "spread", path), path + ".spread");
    if (!(law.spread > 0.0)) throw ConfigError(path + ".spread", "must be > 0");
    return law;
  }
  if (kind == "noisy_line") {
    NoisyLineLaw law;
    law.slope = require_number(require_field(j, "slope", path), path + ".slope");
    law.intercept =
        require_number(require_field(j, "intercept", path), path + ".intercept");
    law.noise = require_number(require_field(j, "noise", path), path + ".noise");
    if (!(law.noise > 0.0)) throw ConfigError(path + ".noise", "must be > 0");
    if (j.contains("x_lo"))
      law.x_lo = require_number(j["x_lo"], path + ".x_lo");
    if (j.contains("x_hi"))
      law.x_hi = require_number(j["x_hi"], path + ".x_hi");
    if (!(law.x_lo < law.x_hi))
      throw ConfigError(path + ".x_hi", "requires x_lo < x_hi");
    return law;
  }
  if (kind == "point_mass") {
    PointMassLaw law;
    law.atom = require_number(require_field(j, "atom", path), path + ".atom");
    return law;
  }
  throw ConfigError(path + ".kind", "unknown distribution '" + kind + "'");
}

SchemeSpec parse_scheme(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  SchemeSpec spec;
  spec.kind = require_field(j, "kind", path).get<std::string>();
  const bool kernel_based =
      spec.kind == "svm" || spec.kind == "svr" || spec.kind == "gem";
  if (kernel_based && j.contains("kernel"))
    spec.kernel = parse_kernel(j["kernel"], path + ".kernel");
  else if (kernel_based)
    spec.kernel = Kernel::rbf(1.0);
  if (j.contains("rho")) {
    spec.rho = require_number(j["rho"], path + ".rho");
    if (!(spec.rho > 0.0)) throw ConfigError(path + ".rho", "must be > 0");
  }
  if (j.contains("tolerance")) {
    spec.svr_tolerance = require_number(j["tolerance"], path + ".tolerance");
    if (!(spec.svr_tolerance > 0.0))
      throw ConfigError(path + ".tolerance", "must be > 0");
  }
  if (j.contains("d")) {
    spec.gem_budget =
        static_cast<int>(require_int(j["d"], path + ".d"));
    if (spec.gem_budget < 1) throw ConfigError(path + ".d", "must be >= 1");
  }
  if (j.contains("anchor")) {
    const json& a = j["anchor"];
    spec.gem_anchor.x.x =
        require_vec(require_field(a, "x", path + ".anchor"), path + ".anchor.x");
    spec.gem_anchor.y =
        require_number(require_field(a, "y", path + ".anchor"), path + ".anchor.y");
    if (spec.gem_anchor.y != 1.0 && spec.gem_anchor.y != -1.0)
      throw ConfigError(path + ".anchor.y", "must be +1 or -1");
  }
  if (j.contains("atom"))
    spec.trim_atom = require_number(j["atom"], path + ".atom");
  if (j.contains("cap")) {
    spec.trim_cap = require_int(j["cap"], path + ".cap");
    if (spec.trim_cap < 1) throw ConfigError(path + ".cap", "must be >= 1");
  }
  static const char* known[] = {"hull2", "hull3", "svm", "svr",
                                "gem",   "second_largest", "trimming"};
  for (const char* k : known)
    if (spec.kind == k) return spec;
  throw ConfigError(path + ".kind", "unknown scheme '" + spec.kind + "'");
}

int point_law_dim(const Distribution& d) {
  if (const auto* g = std::get_if<GaussianLaw>(&d)) return g->dim;
  if (const auto* u = std::get_if<UniformCubeLaw>(&d)) return u->dim;
  return -1;
}

void check_compatibility(const ExperimentConfig& cfg) {
  const std::string& kind = cfg.scheme.kind;
  if (kind == "hull2" || kind == "hull3") {
    const int want = kind == "hull2" ? 2 : 3;
    if (point_law_dim(cfg.distribution) != want)
      throw ConfigError("$.distribution",
                        kind + " needs a gaussian or uniform_cube law of dim " +
                            std::to_string(want));
  } else if (kind == "svm" || kind == "gem") {
    if (!std::holds_alternative<LabeledBlobsLaw>(cfg.distribution))
      throw ConfigError("$.distribution", kind + " needs a labeled_blobs law");
  } else if (kind == "svr") {
    if (!std::holds_alternative<NoisyLineLaw>(cfg.distribution))
      throw ConfigError("$.distribution", "svr needs a noisy_line law");
  } else {
    const bool scalar =
        std::holds_alternative<PointMassLaw>(cfg.distribution) ||
        point_law_dim(cfg.distribution) == 1;
    if (!scalar)
      throw ConfigError("$.distribution",
                        kind + " needs a scalar law (point_mass or dim-1)");
  }
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError("$", e.what());
  }
  if (!root.is_object()) throw ConfigError("$", "expected a JSON object");
  ExperimentConfig cfg;
  cfg.scheme = parse_scheme(require_field(root, "scheme", "$"), "$.scheme");
  cfg.distribution =
      parse_distribution(require_field(root, "distribution", "$"),
                         "$.distribution");
  cfg.n_train = require_int(require_field(root, "n_train", "$"), "$.n_train");
  if (cfg.n_train < 1) throw ConfigError("$.n_train", "must be >= 1");
  cfg.delta = require_number(require_field(root, "delta", "$"), "$.delta");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
    throw ConfigError("$.delta", "must be inside (0,1)");
  cfg.trials = require_int(require_field(root, "trials", "$"), "$.trials");
  if (cfg.trials < 0) throw ConfigError("$.trials", "must be >= 0");
  if (root.contains("n_test_risk")) {
    cfg.n_test_risk = require_int(root["n_test_risk"], "$.n_test_risk");
    if (cfg.n_test_risk < 1) throw ConfigError("$.n_test_risk", "must be >= 1");
  }
  if (root.contains("n_test_phi")) {
    cfg.n_test_phi = require_int(root["n_test_phi"], "$.n_test_phi");
    if (cfg.n_test_phi < 1) throw ConfigError("$.n_test_phi", "must be >= 1");
  }
  if (root.contains("seed")) {
    if (!root["seed"].is_number_integer())
      throw ConfigError("$.seed", "expected an integer");
    cfg.seed = root["seed"].get<std::uint64_t>();
  }
  if (cfg.scheme.kind == "gem") {
    const auto* blobs = std::get_if<LabeledBlobsLaw>(&cfg.distribution);
    if (blobs && cfg.scheme.gem_anchor.x.x.empty())
      cfg.scheme.gem_anchor = {Point(std::vector<double>(
                                   blobs->mean_pos.size(), 0.0)),
                               1.0};
  }
  check_compatibility(cfg);
  return cfg;
}

namespace {

template <class Z>
std::vector<TrialResult> run_typed(const ExperimentConfig& cfg,
                                   const Scheme<Z>& scheme,
                                   const std::function<Z(Rng&)>& law,
                                   int jobs) {
  std::vector<TrialResult> results(
      static_cast<std::size_t>(cfg.trials));
  if (cfg.trials == 0) return results;
  const BoundTable table = bound_table(cfg.n_train, cfg.delta, {}, jobs);

  auto run_one = [&](std::int64_t i) {
    TrialResult& r = results[static_cast<std::size_t>(i)];
    r.trial = i;
    r.seed = trial_seed(cfg.seed, static_cast<std::uint64_t>(i));
    r.n_train = cfg.n_train;
    Rng rng = trial_rng(cfg.seed, static_cast<std::uint64_t>(i));
    try {
      Multiset<Z> train;
      for (std::int64_t t = 0; t < cfg.n_train; ++t) train.insert(law(rng));
      const Multiset<Z> c = scheme.compress(train);
      if (!c.subset_of(train))
        throw std::logic_error("compress output is not a sub-multiset");
      r.k = c.cardinality();

      std::int64_t n_risk_eff = cfg.n_test_risk;
      if (scheme.has_learner()) {
        const Hypothesis<Z> h = scheme.learner(train);
        std::int64_t bad = 0;
        for (std::int64_t t = 0; t < cfg.n_test_risk; ++t)
          bad += h.loss(law(rng));
        r.risk_hat =
            static_cast<double>(bad) / static_cast<double>(cfg.n_test_risk);
      }
      std::int64_t changed = 0;
      for (std::int64_t t = 0; t < cfg.n_test_phi; ++t)
        changed += change_of_compression_from(scheme, c, law(rng)) ? 1 : 0;
      r.phi_hat =
          static_cast<double>(changed) / static_cast<double>(cfg.n_test_phi);
      if (!scheme.has_learner()) {
        // No loss defined: the certificate is about the change-of-compression
        // probability itself.
        r.risk_hat = r.phi_hat;
        n_risk_eff = cfg.n_test_phi;
      }

      const BoundRow& row = table.rows[static_cast<std::size_t>(r.k)];
      r.eps = row.eps;
      r.eps_low = row.eps_low;
      r.eps_up = row.eps_up;
      const double slack =
          3.0 * std::sqrt(r.risk_hat * (1.0 - r.risk_hat) /
                          static_cast<double>(n_risk_eff));
      r.inside = row.eps_low - slack <= r.risk_hat &&
                 r.risk_hat <= row.eps_up + slack;
      r.inside_upper = r.risk_hat <= row.eps + slack;
    } catch (const std::exception& e) {
      r.ok = false;
      r.error = e.what();
    }
  };

  int width = jobs > 0 ? jobs
                       : static_cast<int>(std::thread::hardware_concurrency());
  width = std::max(1, std::min<int>(width, 64));
  if (width == 1 || cfg.trials == 1) {
    for (std::int64_t i = 0; i < cfg.trials; ++i) run_one(i);
  } else {
    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::int64_t i = next.fetch_add(1);
        if (i >= cfg.trials) return;
        run_one(i);
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < width; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return results;
}

}  // namespace

std::vector<TrialResult> run_trials(const ExperimentConfig& cfg, int jobs) {
  check_compatibility(cfg);
  const std::string& kind = cfg.scheme.kind;
  if (kind == "hull2" || kind == "hull3") {
    const int dim = kind == "hull2" ? 2 : 3;
    const Scheme<Point> scheme = hull_scheme(dim);
    std::function<Point(Rng&)> law;
    if (const auto* g = std::get_if<GaussianLaw>(&cfg.distribution))
      law = [lg = *g](Rng& rng) { return draw_point(lg, rng); };
    else
      law = [lu = std::get<UniformCubeLaw>(cfg.distribution)](Rng& rng) {
        return draw_point(lu, rng);
      };
    return run_typed<Point>(cfg, scheme, law, jobs);
  }
  if (kind == "svm" || kind == "svr" || kind == "gem") {
    Scheme<LabeledExample> scheme;
    std::function<LabeledExample(Rng&)> law;
    if (kind == "svr") {
      scheme = svr_scheme(cfg.scheme.kernel, cfg.scheme.rho,
                          cfg.scheme.svr_tolerance);
      law = [l = std::get<NoisyLineLaw>(cfg.distribution)](Rng& rng) {
        return draw_labeled(l, rng);
      };
    } else {
      scheme = kind == "svm"
                   ? svm_scheme(cfg.scheme.kernel, cfg.scheme.rho)
                   : gem_scheme(cfg.scheme.gem_anchor, cfg.scheme.gem_budget,
                                cfg.scheme.kernel);
      law = [l = std::get<LabeledBlobsLaw>(cfg.distribution)](Rng& rng) {
        return draw_labeled(l, rng);
      };
    }
    return run_typed<LabeledExample>(cfg, scheme, law, jobs);
  }
  // scalar toys
  const Scheme<double> scheme =
      kind == "trimming"
          ? trimming_scheme(cfg.scheme.trim_atom, cfg.scheme.trim_cap)
          : second_largest_scheme();
  std::function<double(Rng&)> law;
  if (const auto* pm = std::get_if<PointMassLaw>(&cfg.distribution))
    law = [atom = pm->atom](Rng&) { return atom; };
  else if (const auto* g = std::get_if<GaussianLaw>(&cfg.distribution))
    law = [lg = *g](Rng& rng) { return draw_point(lg, rng)[0]; };
  else
    law = [lu = std::get<UniformCubeLaw>(cfg.distribution)](Rng& rng) {
      return draw_point(lu, rng)[0];
    };
  return run_typed<double>(cfg, scheme, law, jobs);
}

CoverageSummary coverage_report(const std::vector<TrialResult>& results,
                                double delta) {
  if (results.empty())
    throw std::invalid_argument("coverage_report: no results");
  CoverageSummary s;
  s.trials = static_cast<std::int64_t>(results.size());
  s.delta = delta;
  s.threshold = 1.0 - delta;
  std::int64_t ok = 0, in = 0, in_up = 0;
  bool first = true;
  for (const TrialResult& r : results) {
    if (!r.ok) {
      ++s.excluded;
      continue;
    }
    ++ok;
    in += r.inside ? 1 : 0;
    in_up += r.inside_upper ? 1 : 0;
    const double dev = r.n_train > 0
                           ? std::fabs(r.risk_hat -
                                       static_cast<double>(r.k) /
                                           static_cast<double>(r.n_train))
                           : 0.0;
    s.mean_abs_dev += dev;
    s.max_abs_dev = std::max(s.max_abs_dev, dev);
    if (first) {
      s.k_min = s.k_max = r.k;
      s.risk_min = s.risk_max = r.risk_hat;
      first = false;
    } else {
      s.k_min = std::min(s.k_min, r.k);
      s.k_max = std::max(s.k_max, r.k);
      s.risk_min = std::min(s.risk_min, r.risk_hat);
      s.risk_max = std::max(s.risk_max, r.risk_hat);
    }
  }
  if (ok > 0) {
    s.coverage = static_cast<double>(in) / static_cast<double>(ok);
    s.coverage_upper = static_cast<double>(in_up) / static_cast<double>(ok);
    s.mean_abs_dev /= static_cast<double>(ok);
  }
  return s;
}

std::string to_json(const CoverageSummary& s) {
  json j;
  j["trials"] = s.trials;
  j["excluded"] = s.excluded;
  j["coverage"] = s.coverage;
  j["coverage_upper"] = s.coverage_upper;
  j["threshold"] = s.threshold;
  j["delta"] = s.delta;
  j["mean_abs_dev"] = s.mean_abs_dev;
  j["max_abs_dev"] = s.max_abs_dev;
  j["k_min"] = s.k_min;
  j["k_max"] = s.k_max;
  j["risk_min"] = s.risk_min;
  j["risk_max"] = s.risk_max;
  return j.dump(2) + "\n";
}

namespace {

void put_g12(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  os << buf;
}

}  // namespace

void write_trials_csv(const std::vector<TrialResult>& results,
                      std::ostream& os) {
  os << "trial,seed,k,risk_hat,phi_hat,eps,eps_low,eps_up,inside\n";
  for (const TrialResult& r : results) {
    if (!r.ok) continue;
    os << r.trial << ',' << r.seed << ',' << r.k << ',';
    put_g12(os, r.risk_hat);
    os << ',';
    put_g12(os, r.phi_hat);
    os << ',';
    put_g12(os, r.eps);
    os << ',';
    put_g12(os, r.eps_low);
    os << ',';
    put_g12(os, r.eps_up);
    os << ',' << (r.inside ? 1 : 0) << '\n';
  }
}

std::vector<TrialResult> read_trials_csv(std::istream& is,
                                         std::int64_t n_train) {
  std::vector<TrialResult> out;
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("trials csv: empty file");
  const std::string expect = "trial,seed,k,risk_hat,phi_hat,eps,eps_low,eps_up,inside";
  if (line != expect)
    throw std::runtime_error("trials csv: unexpected header '" + line + "'");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 9)
      throw std::runtime_error("trials csv: malformed row '" + line + "'");
    TrialResult r;
    r.trial = std::stoll(cells[0]);
    r.seed = std::stoull(cells[1]);
    r.k = std::stoll(cells[2]);
    r.risk_hat = std::stod(cells[3]);
    r.phi_hat = std::stod(cells[4]);
    r.eps = std::stod(cells[5]);
    r.eps_low = std::stod(cells[6]);
    r.eps_up = std::stod(cells[7]);
    r.inside = cells[8] == "1" || cells[8] == "true";
    r.inside_upper = r.risk_hat <= r.eps;  // slack not recoverable from csv
    r.n_train = n_train;
    out.push_back(r);
  }
  return out;
}

}  // namespace ccert
