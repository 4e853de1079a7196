#include <doctest.h>

#include "ccert/gem.hpp"
#include "ccert/hull.hpp"
#include "ccert/properties.hpp"
#include "ccert/svm.hpp"
#include "ccert/toys.hpp"

using namespace ccert;

TEST_CASE("second-largest worked example") {
  const Scheme<double> s = second_largest_scheme();
  Multiset<double> u({1.0, 2.0, 3.0});
  CHECK(s.compress(u) == Multiset<double>({3.0}));

  const Hypothesis<double> h = s.learner(u);
  CHECK(h.loss(2.0) == 0);   // hypothesis accepts up to the second largest
  CHECK(h.loss(2.5) == 1);   // inappropriate...
  CHECK_FALSE(change_of_compression(s, u, 2.5));  // ...yet no change
  CHECK(change_of_compression(s, u, 3.5));

  // ties at the maximum make the threshold equal the maximum
  Multiset<double> tie({1.0, 3.0, 3.0});
  CHECK(s.learner(tie).loss(3.0) == 0);
  CHECK(s.learner(tie).loss(3.0000001) == 1);
}

TEST_CASE("trimming caps only the designated atom") {
  const Scheme<double> s = trimming_scheme(7.0, 2);
  Multiset<double> u;
  u.insert(7.0, 5);
  u.insert(1.0, 4);
  const Multiset<double> c = s.compress(u);
  CHECK(c.multiplicity(7.0) == 2);
  CHECK(c.multiplicity(1.0) == 4);
  CHECK_THROWS_AS(trimming_scheme(0.0, 0), std::invalid_argument);
}

TEST_CASE("every reference scheme compresses empty to empty") {
  CHECK(hull_scheme(2).compress({}).empty());
  CHECK(hull_scheme(3).compress({}).empty());
  CHECK(svm_scheme(Kernel::linear(), 1.0).compress({}).empty());
  CHECK(svr_scheme(Kernel::linear(), 1.0, 0.1).compress({}).empty());
  CHECK(gem_scheme({Point{0.0}, 1.0}, 1, Kernel::linear()).compress({}).empty());
  CHECK(second_largest_scheme().compress({}).empty());
  CHECK(trimming_scheme(0.0, 1).compress({}).empty());
}

TEST_CASE("svr non-associativity holds under a density sampler") {
  Sampler<LabeledExample> g;
  g.draw_example = [](Rng& rng) {
    const double x = rng.uniform(-1.0, 1.0);
    return LabeledExample{Point{x}, 0.7 * x + 0.1 + 0.15 * rng.normal()};
  };
  g.draw_multiset = [g](Rng& rng) {
    Multiset<LabeledExample> u;
    for (int i = 0; i < 14; ++i) u.insert(g.draw_example(rng));
    return u;
  };
  const Scheme<LabeledExample> s = svr_scheme(Kernel::linear(), 10.0, 0.3);
  CHECK(check_non_associativity(s, g, 500, 2, 81).violations == 0);
}
