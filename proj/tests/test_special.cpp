#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ccert/bisect.hpp"
#include "ccert/rng.hpp"
#include "ccert/special.hpp"
#include "oracles.hpp"

using namespace ccert;

TEST_CASE("log_binomial small exact cases") {
  CHECK(log_binomial(5, 0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(log_binomial(4, 2) == doctest::Approx(std::log(6.0)).epsilon(1e-14));
  CHECK(log_binomial(10, 10) == doctest::Approx(0.0));
  CHECK_THROWS_AS(log_binomial(3, 4), std::domain_error);
}

TEST_CASE("log_binomial against big-integer oracle") {
  const std::int64_t cases[][2] = {{2000, 1000}, {2000, 1},    {2000, 1999},
                                   {500, 137},   {8000, 800},  {32001, 16000},
                                   {100, 50},    {1, 0},       {7, 3}};
  for (const auto& c : cases) {
    const double ln_exact = oracle::ln_big(oracle::binomial(c[0], c[1]));
    const double got = log_binomial(c[0], c[1]);
    const double scale = std::max(1.0, std::fabs(ln_exact));
    CHECK(std::fabs(got - ln_exact) / scale <= 1e-10);
  }
}

TEST_CASE("reg_inc_beta trivial values") {
  CHECK(reg_inc_beta(0.3, 1, 1) == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(reg_inc_beta(0.5, 2, 2) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(reg_inc_beta(0.0, 3, 4) == 0.0);
  CHECK(reg_inc_beta(1.0, 3, 4) == 1.0);
  CHECK_THROWS_AS(reg_inc_beta(-0.1, 1, 1), std::domain_error);
  CHECK_THROWS_AS(reg_inc_beta(1.1, 1, 1), std::domain_error);
  CHECK_THROWS_AS(reg_inc_beta(0.5, 0.0, 1), std::domain_error);
}

TEST_CASE("reg_inc_beta equals binomial tail sum at integer parameters") {
  // I_t(a, b) = P(Bin(a+b-1, t) >= a) for integer a, b.
  const double t = 0.7;
  const double expect =
      oracle::to_double(oracle::binomial_upper_tail(7, 3, oracle::BigRat(7, 10)));
  CHECK(reg_inc_beta(t, 3, 5) == doctest::Approx(expect).epsilon(1e-12));

  Rng rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const std::int64_t a = 1 + static_cast<std::int64_t>(rng.uniform() * 30);
    const std::int64_t b = 1 + static_cast<std::int64_t>(rng.uniform() * 30);
    const std::int64_t num = 1 + static_cast<std::int64_t>(rng.uniform() * 98);
    const oracle::BigRat tr(num, 100);
    const double got = reg_inc_beta(static_cast<double>(num) / 100.0,
                                    static_cast<double>(a),
                                    static_cast<double>(b));
    const double want =
        oracle::to_double(oracle::binomial_upper_tail(a + b - 1, a, tr));
    CHECK(std::fabs(got - want) <= 1e-10);
  }
}

TEST_CASE("reg_inc_beta symmetry and monotonicity") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = 0.5 + rng.uniform() * 4999.5;
    const double b = 0.5 + rng.uniform() * 4999.5;
    const double t = rng.uniform();
    const double s = reg_inc_beta(t, a, b) + reg_inc_beta(1.0 - t, b, a);
    CHECK(std::fabs(s - 1.0) <= 1e-10);
  }
  const double a = 3.7, b = 11.2;
  double prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double v = reg_inc_beta(i / 1000.0, a, b);
    CHECK(v >= prev - 1e-14);
    prev = v;
  }
}

TEST_CASE("reg_inc_beta complement form keeps the upper tail accurate") {
  // I_t(3,1) = t^3, so 1 - I = 3 tc + O(tc^2) for t = 1 - tc. The (t, tc)
  // entry point must resolve that even when tc is a few ulps.
  const double tc = 2.5e-16;
  const double v = reg_inc_beta_c(1.0 - tc, tc, 3.0, 1.0);
  CHECK(v < 1.0);
  CHECK(1.0 - v == doctest::Approx(3.0 * tc).epsilon(1e-10));
}

TEST_CASE("bisect linear and quadratic roots") {
  Precision prec;
  auto r1 = bisect([](double a) { return a - 0.25; }, 0.0, 1.0, prec,
                   BracketEnd::upper);
  CHECK(r1.converged);
  CHECK(std::fabs(r1.root - 0.25) <= 1e-10);

  auto r2 = bisect([](double a) { return a * a - 2.0; }, 0.0, 2.0, prec,
                   BracketEnd::lower);
  CHECK(r2.converged);
  CHECK(std::fabs(r2.root - std::sqrt(2.0)) <= 1e-10);
}

TEST_CASE("bisect halves the bracket each iteration") {
  Precision prec;
  prec.bisection_tol = 1e-12;
  auto r = bisect([](double a) { return a - 0.123456; }, 0.0, 1.0, prec,
                  BracketEnd::upper);
  CHECK(r.converged);
  // width after n iterations is exactly 2^-n of the initial width
  CHECK(std::pow(0.5, r.iterations) <= 1e-12);
  CHECK(std::pow(0.5, r.iterations - 1) > 1e-12);
}

TEST_CASE("bisect flags iteration exhaustion with the midpoint") {
  Precision prec;
  prec.max_iter = 3;
  prec.bisection_tol = 1e-15;
  auto r = bisect([](double a) { return a - 0.3; }, 0.0, 1.0, prec,
                  BracketEnd::upper);
  CHECK_FALSE(r.converged);
  CHECK(r.root > 0.0);
  CHECK(r.root < 1.0);
}

TEST_CASE("bisect solves the reference left-right equation at N=1") {
  // delta I_t(1,1) = t N (I_t(0,2) - I_t(1,1)) reduces to
  // delta t = t (1 - t); root 1 - delta.
  Precision prec;
  const double delta = 0.1;
  auto f = [delta](double t) {
    const double left = delta * reg_inc_beta(t, 1, 1);
    const double right = t * 1.0 * (1.0 - reg_inc_beta(t, 1, 1));
    return left - right;
  };
  auto r = bisect(f, 0.0, 1.0, prec, BracketEnd::upper);
  CHECK(std::fabs(r.root - 0.9) <= 1e-10);
}
