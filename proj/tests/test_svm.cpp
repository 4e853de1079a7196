#include <doctest.h>

#include <cmath>

#include "ccert/properties.hpp"
#include "ccert/svm.hpp"
#include "qp_reference.hpp"

using namespace ccert;

namespace {

Multiset<LabeledExample> blobs(Rng& rng, int n, double sep = 2.0,
                               double spread = 0.8) {
  Multiset<LabeledExample> u;
  for (int i = 0; i < n; ++i) {
    const double y = rng.coin() ? 1.0 : -1.0;
    u.insert({Point{y * sep + spread * rng.normal(),
                    y * sep + spread * rng.normal()},
              y});
  }
  return u;
}

Sampler<LabeledExample> blob_sampler(int n) {
  Sampler<LabeledExample> g;
  g.draw_example = [](Rng& rng) {
    const double y = rng.coin() ? 1.0 : -1.0;
    return LabeledExample{Point{y * 2.0 + 0.8 * rng.normal(),
                                y * 2.0 + 0.8 * rng.normal()},
                          y};
  };
  g.draw_multiset = [n, g](Rng& rng) {
    Multiset<LabeledExample> u;
    for (int i = 0; i < n; ++i) u.insert(g.draw_example(rng));
    return u;
  };
  return g;
}

Sampler<LabeledExample> line_sampler(int n, double noise) {
  Sampler<LabeledExample> g;
  g.draw_example = [noise](Rng& rng) {
    const double x = rng.uniform(-1.0, 1.0);
    return LabeledExample{Point{x}, 0.7 * x + 0.1 + noise * rng.normal()};
  };
  g.draw_multiset = [n, g](Rng& rng) {
    Multiset<LabeledExample> u;
    for (int i = 0; i < n; ++i) u.insert(g.draw_example(rng));
    return u;
  };
  return g;
}

}  // namespace

TEST_CASE("two-point classifier solved by hand") {
  Multiset<LabeledExample> u;
  u.insert({Point{-1.0}, -1.0});
  u.insert({Point{1.0}, 1.0});
  const SvmModel m = svm_train(u, Kernel::linear(), 1000.0);
  REQUIRE(m.converged);
  // dual optimum alpha = (1/2, 1/2): f(x) = x, b = 0
  CHECK(m.b == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(m.decision(Point{0.5}) == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(m.decision(Point{-1.0}) == doctest::Approx(-1.0).epsilon(1e-5));
  CHECK(m.decision(Point{1.0}) == doctest::Approx(1.0).epsilon(1e-5));

  // both points sit at the margin, so both belong to the compression
  const Scheme<LabeledExample> s = svm_scheme(Kernel::linear(), 1000.0);
  CHECK(s.compress(u).cardinality() == 2);
}

TEST_CASE("all labels positive gives the constant classifier") {
  Multiset<LabeledExample> u;
  for (double x : {-2.0, -0.5, 0.1, 3.0}) u.insert({Point{x}, 1.0});
  const SvmModel m = svm_train(u, Kernel::linear(), 1.0);
  REQUIRE(m.converged);
  CHECK(m.b == doctest::Approx(1.0));
  for (const auto& [z, mult] : u.entries())
    CHECK(m.decision(z.x) >= 0.0);
  CHECK(m.primal_objective() == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("xor data separates under the rbf kernel") {
  Multiset<LabeledExample> u;
  u.insert({Point{0.0, 0.0}, 1.0});
  u.insert({Point{1.0, 1.0}, 1.0});
  u.insert({Point{0.0, 1.0}, -1.0});
  u.insert({Point{1.0, 0.0}, -1.0});
  const SvmModel m = svm_train(u, Kernel::rbf(1.0), 1000.0);
  REQUIRE(m.converged);
  for (const auto& [z, mult] : u.entries()) {
    const double f = m.decision(z.x);
    CHECK(z.y * f > 0.0);
  }
}

TEST_CASE("separable blobs compress to the margin set only") {
  Rng rng(100);
  const Multiset<LabeledExample> u = blobs(rng, 40, 4.0, 0.5);
  const Scheme<LabeledExample> s = svm_scheme(Kernel::linear(), 10.0);
  const Multiset<LabeledExample> c = s.compress(u);
  CHECK(c.cardinality() < u.cardinality() / 2);
  CHECK(c.subset_of(u));
}

TEST_CASE("svm preference holds under sampling") {
  const Scheme<LabeledExample> s = svm_scheme(Kernel::rbf(1.0), 10.0);
  CHECK(check_preference(s, blob_sampler(20), 300, 21).violations == 0);
}

TEST_CASE("svm coherence I holds, inclusion holds") {
  const Scheme<LabeledExample> s = svm_scheme(Kernel::linear(), 10.0);
  const Sampler<LabeledExample> g = blob_sampler(24);
  CHECK(check_coherence_I(s, g, 300, 22).violations == 0);
  CHECK(check_inclusion(s, g, 300, 23).violations == 0);
}

TEST_CASE("svm coherence II fails and is reported, not asserted") {
  const Scheme<LabeledExample> s = svm_scheme(Kernel::linear(), 10.0);
  const PropertyReport rep = check_coherence_II(s, blob_sampler(14), 400, 24);
  // a correctly-labeled fresh point inside the margin band changes the
  // compression without being misclassified
  CHECK(rep.violations > 0);
}

TEST_CASE("svr constant labels fit inside the tube") {
  Multiset<LabeledExample> u;
  for (double x : {-1.0, 0.0, 0.5, 2.0}) u.insert({Point{x}, 3.0});
  const SvmModel m = svr_train(u, Kernel::linear(), 10.0, 0.4);
  REQUIRE(m.converged);
  double wnorm = 0.0;
  for (double b : m.beta) wnorm += std::fabs(b);
  CHECK(wnorm <= 1e-9);  // w* = 0
  for (const auto& [z, mult] : u.entries())
    CHECK(std::fabs(z.y - m.decision(z.x)) <= 0.4 + 1e-9);
}

TEST_CASE("svr compression grows when the tube narrows") {
  Rng rng(7);
  Multiset<LabeledExample> u;
  for (int i = 0; i < 40; ++i) {
    const double x = rng.uniform(-1.0, 1.0);
    u.insert({Point{x}, 0.7 * x + 0.05 * rng.normal()});
  }
  const auto wide = svr_scheme(Kernel::linear(), 10.0, 0.25).compress(u);
  const auto narrow = svr_scheme(Kernel::linear(), 10.0, 0.02).compress(u);
  CHECK(wide.cardinality() < narrow.cardinality());
}

TEST_CASE("svr coherence II holds under a continuous-noise law") {
  const Scheme<LabeledExample> s = svr_scheme(Kernel::linear(), 10.0, 0.3);
  CHECK(check_coherence_II(s, line_sampler(16, 0.15), 300, 25).violations == 0);
}

TEST_CASE("svr preference holds under sampling") {
  const Scheme<LabeledExample> s = svr_scheme(Kernel::rbf(0.8), 10.0, 0.3);
  CHECK(check_preference(s, line_sampler(16, 0.15), 300, 26).violations == 0);
}

TEST_CASE("augmented svm contains every misclassified example") {
  Rng rng(31);
  // overlapping blobs: not separable
  const Multiset<LabeledExample> u = blobs(rng, 30, 0.6, 1.2);
  const Scheme<LabeledExample> s = svm_scheme(Kernel::linear(), 10.0);
  const Scheme<LabeledExample> aug = augment(s);
  const Multiset<LabeledExample> c = s.compress(u);
  const Multiset<LabeledExample> ca = aug.compress(u);
  CHECK(ca.cardinality() >= c.cardinality());
  const Hypothesis<LabeledExample> h = s.learner(u);
  for (const auto& [z, mult] : u.entries())
    if (h.loss(z) == 1) CHECK(ca.multiplicity(z) == mult);
}

TEST_CASE("smo matches the projected-gradient reference") {
  Rng rng(55);
  int classification_cases = 0, regression_cases = 0;
  for (int round = 0; round < 20; ++round) {
    const bool regression = round % 2 == 1;
    const int n = 6 + static_cast<int>(rng.uniform() * 35.0);
    const Kernel kernels[] = {Kernel::linear(), Kernel::rbf(0.7),
                              Kernel::polynomial(2, 1.0)};
    const Kernel& kernel = kernels[round % 3];
    const double rho = 2.0 + rng.uniform() * 18.0;
    SvmModel m;
    qpref::Problem pb;
    if (regression) {
      ++regression_cases;
      Multiset<LabeledExample> u;
      for (int i = 0; i < n; ++i) {
        const double x = rng.uniform(-1.0, 1.0);
        u.insert({Point{x}, 0.8 * x - 0.2 + 0.2 * rng.normal()});
      }
      m = svr_train(u, kernel, rho, 0.15);
      pb = qpref::build_svr_dual(m);
    } else {
      ++classification_cases;
      Multiset<LabeledExample> u = blobs(rng, n, 1.2, 1.0);
      m = svm_train(u, kernel, rho);
      pb = qpref::build_svm_dual(m);
    }
    REQUIRE(m.converged);
    CHECK(m.kkt_gap <= 1e-5);
    const std::vector<double> xref = qpref::solve(pb);
    const double p_ref = qpref::reference_primal(pb, xref, m);
    const double p_smo = m.primal_objective();
    const double scale = std::max({std::fabs(p_ref), std::fabs(p_smo), 1e-12});
    CHECK(std::fabs(p_smo - p_ref) / scale <= 1e-4);
  }
  CHECK(classification_cases > 0);
  CHECK(regression_cases > 0);
}

TEST_CASE("training input validation") {
  Multiset<LabeledExample> u;
  u.insert({Point{0.0}, 0.5});
  CHECK_THROWS_AS(svm_train(u, Kernel::linear(), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(svm_train({}, Kernel::linear(), 1.0), std::invalid_argument);
  Multiset<LabeledExample> ok;
  ok.insert({Point{0.0}, 1.0});
  CHECK_THROWS_AS(svr_train(ok, Kernel::linear(), 1.0, 0.0),
                  std::invalid_argument);
}
