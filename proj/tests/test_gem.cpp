#include <doctest.h>

#include "ccert/gem.hpp"
#include "ccert/properties.hpp"

using namespace ccert;

namespace {

Sampler<LabeledExample> blob_sampler(int n) {
  Sampler<LabeledExample> g;
  g.draw_example = [](Rng& rng) {
    const double y = rng.coin() ? 1.0 : -1.0;
    return LabeledExample{Point{y * 1.5 + rng.normal(), y * 1.5 + rng.normal()},
                          y};
  };
  g.draw_multiset = [n, g](Rng& rng) {
    Multiset<LabeledExample> u;
    for (int i = 0; i < n; ++i) u.insert(g.draw_example(rng));
    return u;
  };
  return g;
}

const LabeledExample kAnchor{Point{0.0, 0.0}, 1.0};

}  // namespace

TEST_CASE("uniform labels give one infinite region and an empty compression") {
  Multiset<LabeledExample> u;
  u.insert({Point{1.0, 0.0}, 1.0});
  u.insert({Point{0.0, 2.0}, 1.0});
  const GemModel m = gem_train(u, kAnchor, 3, Kernel::linear());
  CHECK(m.centers.cardinality() == 0);
  REQUIRE(m.regions.size() == 1);
  CHECK(m.regions[0].r2 == std::numeric_limits<double>::infinity());
  CHECK(m.predict(Point{100.0, -50.0}) == 1.0);
}

TEST_CASE("two opposite points in one dimension, budget one") {
  Multiset<LabeledExample> u;
  u.insert({Point{1.0}, -1.0});
  const LabeledExample anchor{Point{0.0}, 1.0};
  const GemModel m = gem_train(u, anchor, 1, Kernel::linear());
  CHECK(m.centers.cardinality() == 1);
  CHECK(m.centers.multiplicity({Point{1.0}, -1.0}) == 1);
  REQUIRE(m.regions.size() == 1);
  CHECK(m.regions[0].r2 == doctest::Approx(1.0));
  CHECK(m.predict(Point{0.5}) == 1.0);   // inside the open ball
  CHECK(m.predict(Point{1.0}) == 0.0);   // boundary abstains
  CHECK(m.predict(Point{5.0}) == 0.0);   // remainder abstains
}

TEST_CASE("loss is one only on firm wrong labels") {
  Multiset<LabeledExample> u;
  u.insert({Point{1.0}, -1.0});
  const GemModel m = gem_train(u, {Point{0.0}, 1.0}, 1, Kernel::linear());
  CHECK(m.loss({Point{0.2}, 1.0}) == 0);   // correct firm label
  CHECK(m.loss({Point{0.2}, -1.0}) == 1);  // wrong firm label
  CHECK(m.loss({Point{3.0}, 1.0}) == 0);   // abstention never loses
  CHECK(m.loss({Point{3.0}, -1.0}) == 0);
}

TEST_CASE("generous budget removes the abstention region") {
  Rng rng(77);
  Multiset<LabeledExample> u;
  for (int i = 0; i < 24; ++i) {
    const double y = rng.coin() ? 1.0 : -1.0;
    u.insert({Point{y + 0.7 * rng.normal(), 0.7 * rng.normal()}, y});
  }
  const GemModel m = gem_train(u, kAnchor, 1000, Kernel::linear());
  CHECK(m.regions.back().r2 == std::numeric_limits<double>::infinity());
  for (int probe = 0; probe < 300; ++probe) {
    const Point p{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
    CHECK(m.predict(p) != 0.0);
  }
}

TEST_CASE("budget caps the compression cardinality") {
  const Sampler<LabeledExample> g = blob_sampler(30);
  for (int d : {1, 3, 7}) {
    const Scheme<LabeledExample> s = gem_scheme(kAnchor, d, Kernel::rbf(1.0));
    Rng rng(d);
    for (int round = 0; round < 30; ++round) {
      const Multiset<LabeledExample> u = g.draw_multiset(rng);
      const Multiset<LabeledExample> c = s.compress(u);
      CHECK(c.cardinality() <= d);
      CHECK(c.subset_of(u));
    }
  }
}

TEST_CASE("gem preference and coherence I pass sampling checks") {
  const Scheme<LabeledExample> s = gem_scheme(kAnchor, 8, Kernel::linear());
  const Sampler<LabeledExample> g = blob_sampler(20);
  CHECK(check_preference(s, g, 300, 41).violations == 0);
  CHECK(check_idempotence(s, g, 300, 42).violations == 0);
  CHECK(check_coherence_I(s, g, 300, 43).violations == 0);
  CHECK(check_inclusion(s, g, 300, 44).violations == 0);
}

TEST_CASE("gem coherence II passes under a continuous law") {
  const Scheme<LabeledExample> s = gem_scheme(kAnchor, 8, Kernel::linear());
  CHECK(check_coherence_II(s, blob_sampler(20), 300, 45).violations == 0);
}

TEST_CASE("reconstruction from centers reproduces the predictor") {
  const Scheme<LabeledExample> s = gem_scheme(kAnchor, 6, Kernel::rbf(0.6));
  const Sampler<LabeledExample> g = blob_sampler(25);
  Rng rng(46);
  for (int round = 0; round < 25; ++round) {
    const Multiset<LabeledExample> u = g.draw_multiset(rng);
    const Hypothesis<LabeledExample> full = s.learner(u);
    const Hypothesis<LabeledExample> rec = s.reconstruct(s.compress(u));
    for (int probe = 0; probe < 100; ++probe) {
      const LabeledExample z = g.draw_example(rng);
      CHECK(full.predict(z) == rec.predict(z));
    }
  }
}

TEST_CASE("gem input validation") {
  Multiset<LabeledExample> u;
  u.insert({Point{1.0}, -1.0});
  CHECK_THROWS_AS(gem_train(u, {Point{0.0}, 0.5}, 1, Kernel::linear()),
                  std::invalid_argument);
  CHECK_THROWS_AS(gem_train(u, {Point{0.0}, 1.0}, 0, Kernel::linear()),
                  std::invalid_argument);
}
