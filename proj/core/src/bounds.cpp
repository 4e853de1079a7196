#include "ccert/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <cstdio>
#include <thread>

#include "ccert/bisect.hpp"
#include "ccert/special.hpp"

namespace ccert {

namespace {

void require_valid(const BoundQuery& q) {
  if (!q.valid()) throw std::domain_error("BoundQuery: invalid (N,k,delta)");
}

double ln_one_minus(double alpha, double alpha_complement) {
  // Use whichever representation is exact on its side.
  if (alpha_complement > 0.25) return std::log1p(-alpha);
  return std::log(alpha_complement);
}

// Kahan-compensated accumulator.
struct CompSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

}  // namespace

double psi_c(const BoundQuery& q, double alpha, double alpha_complement) {
  require_valid(q);
  if (q.k == q.n)
    throw std::domain_error("psi: undefined for k = N (the bound is 1 there)");
  if (!(alpha < 1.0)) throw std::domain_error("psi: requires alpha < 1");
  const double lnu = ln_one_minus(alpha, alpha_complement);
  const std::int64_t n = q.n, k = q.k;
  // ln C(m,k) built incrementally from m = k; C(N,k) picked up on the way.
  double ln_cmk = 0.0;
  double ln_cnk = log_binomial(n, k);
  CompSum sum;
  for (std::int64_t m = k; m <= n - 1; ++m) {
    if (m > k)
      ln_cmk += std::log(static_cast<double>(m) / static_cast<double>(m - k));
    sum.add(std::exp(ln_cmk - ln_cnk - static_cast<double>(n - m) * lnu));
  }
  return q.delta / static_cast<double>(n) * sum.s;
}

double psi(const BoundQuery& q, double alpha) {
  return psi_c(q, alpha, 1.0 - alpha);
}

double psi_tilde_c(const BoundQuery& q, double alpha,
                   double alpha_complement) {
  require_valid(q);
  if (!(alpha < 1.0))
    throw std::domain_error("psi_tilde: requires alpha < 1");
  const double lnu = ln_one_minus(alpha, alpha_complement);
  const std::int64_t n = q.n, k = q.k;
  const double nd = static_cast<double>(n);
  double ln_cmk = 0.0;  // ln C(m,k), advanced from m = k to 4N
  const double ln_cnk = (k == n) ? 0.0 : log_binomial(n, k);
  CompSum head;  // m = k .. N-1
  CompSum tail;  // m = N+1 .. 4N
  for (std::int64_t m = k; m <= 4 * n; ++m) {
    if (m > k)
      ln_cmk += std::log(static_cast<double>(m) / static_cast<double>(m - k));
    if (m <= n - 1)
      head.add(std::exp(ln_cmk - ln_cnk - static_cast<double>(n - m) * lnu));
    else if (m >= n + 1)
      tail.add(std::exp(ln_cmk - ln_cnk + static_cast<double>(m - n) * lnu));
  }
  if (k == n) return q.delta / (6.0 * nd) * tail.s;
  return q.delta / (2.0 * nd) * head.s + q.delta / (6.0 * nd) * tail.s;
}

double psi_tilde(const BoundQuery& q, double alpha) {
  return psi_tilde_c(q, alpha, 1.0 - alpha);
}

std::pair<double, double> asymptotic_envelope(const BoundQuery& q) {
  require_valid(q);
  const double nd = static_cast<double>(q.n);
  const double kd = static_cast<double>(q.k);
  const double s = 2.0 * std::sqrt(kd + 1.0) / nd *
                   (std::log(1.0 / q.delta) + std::log(kd + 1.0) + 4.0);
  return {kd / nd - s, kd / nd + s};
}

// ---------------------------------------------------------------------------
// Root solvers.
//
// Both unit-crossing equations are solved in their incomplete-beta form; for
// k = 0..N and alpha in (0,1) they read
//
//   one-sided:  delta I_a(k+1, N-k)                            = a N B(a)
//   two-sided:  (d/3) I_a(k+1, N-k) + (d/6) I_a(k+1, 4N+1-k)   = (1 + d/6N) a N B(a)
//
// with B(a) = C(N,k) a^k (1-a)^(N-k), evaluated in the log domain. B(a) is
// algebraically the difference I_a(k, N-k+1) - I_a(k+1, N-k); the pmf form
// avoids the cancellation of that difference near the upper roots. The sign
// of (left - right) matches the sign of (psi - 1), resp. (psi_tilde - 1).
// ---------------------------------------------------------------------------

namespace {

struct AlphaPoint {
  double a;  // alpha
  double c;  // 1 - alpha, tracked exactly near 1
};

AlphaPoint from_alpha(double a) { return {a, 1.0 - a}; }

struct Equation {
  std::int64_t n;
  std::int64_t k;
  double delta;
  bool two_sided;
  double ln_cnk;  // ln C(N,k)
  Precision prec;

  Equation(const BoundQuery& q, bool ts, const Precision& p)
      : n(q.n), k(q.k), delta(q.delta), two_sided(ts),
        ln_cnk(log_binomial(q.n, q.k)), prec(p) {}

  // C(N,k) a^k (1-a)^(N-k), valid on (0,1).
  double pmf(const AlphaPoint& t) const {
    return std::exp(ln_cnk + static_cast<double>(k) * std::log(t.a) +
                    static_cast<double>(n - k) * ln_one_minus(t.a, t.c));
  }

  double left(const AlphaPoint& t) const {
    const double a1 = static_cast<double>(k) + 1.0;
    // I_a(N+1, 0) is 0 on (0,1); that b = 0 limit only arises at k = N.
    const double i_n =
        (n - k == 0) ? 0.0
                     : reg_inc_beta_c(t.a, t.c, a1,
                                      static_cast<double>(n - k), prec);
    if (!two_sided) return delta * i_n;
    const double i_4n = reg_inc_beta_c(
        t.a, t.c, a1, static_cast<double>(4 * n + 1 - k), prec);
    return delta / 3.0 * i_n + delta / 6.0 * i_4n;
  }

  double right(const AlphaPoint& t) const {
    const double nd = static_cast<double>(n);
    const double coeff = two_sided ? 1.0 + delta / (6.0 * nd) : 1.0;
    return coeff * t.a * nd * pmf(t);
  }

  bool left_above(const AlphaPoint& t) const { return left(t) > right(t); }

  // |left/right - 1|; within a factor (1 + delta/6N) of |psi - 1| at t.
  double residual(const AlphaPoint& t) const {
    const double l = left(t), r = right(t);
    if (r == 0.0) return std::numeric_limits<double>::infinity();
    return std::fabs(l / r - 1.0);
  }
};

// Ties (left == right, e.g. both underflown deep in a tail) take the
// not-above branch, matching the reference listings.
enum class HighSide { above_root, below_root };  // where the function exceeds 1

// Reference-style bisection on plain alpha. Returns the final bracket.
void bisect_alpha(const Equation& eq, HighSide high, double& lo, double& hi,
                  const Precision& prec) {
  int it = 0;
  while (hi - lo > prec.bisection_tol && it++ < prec.max_iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const bool above = eq.left_above(from_alpha(mid));
    const bool move_hi = (high == HighSide::above_root) ? above : !above;
    if (move_hi)
      hi = mid;
    else
      lo = mid;
  }
}

// Residual-driven refinement on (alpha, complement) pairs. Bisects
// geometrically in whichever coordinate is small, so brackets pinned
// against 0 or 1 keep full relative resolution. `ret` names the bracket
// end the caller will return (the side where the function is >= 1).
AlphaPoint refine(const Equation& eq, HighSide high, AlphaPoint lo,
                  AlphaPoint hi, BracketEnd ret, double target) {
  const AlphaPoint* conv = (ret == BracketEnd::upper) ? &hi : &lo;
  for (int it = 0; it < 700; ++it) {
    if (eq.residual(*conv) <= target) break;
    AlphaPoint mid;
    if (hi.a <= 0.5) {  // bracket in the lower half: work in alpha
      mid.a = (lo.a > 0.0) ? std::sqrt(lo.a * hi.a) : hi.a * 0x1p-10;
      mid.c = 1.0 - mid.a;
    } else if (lo.c <= 0.5) {  // upper half: work in the complement
      mid.c = (hi.c > 0.0) ? std::sqrt(lo.c * hi.c) : lo.c * 0x1p-10;
      mid.a = 1.0 - mid.c;
    } else {
      mid.a = 0.5 * (lo.a + hi.a);
      mid.c = 0.5 * (lo.c + hi.c);
    }
    const bool stuck_a = !(mid.a > lo.a && mid.a < hi.a);
    const bool stuck_c = !(mid.c < lo.c && mid.c > hi.c);
    if (stuck_a && stuck_c) break;
    const bool above = eq.left_above(mid);
    const bool move_hi = (high == HighSide::above_root) ? above : !above;
    if (move_hi)
      hi = mid;
    else
      lo = mid;
  }
  return *conv;
}

constexpr double kResidualTarget = 1e-7;  // internal; the contract is 1e-6

Bound solve(const Equation& eq, HighSide high, double lo0, double hi0,
            BracketEnd ret, const Precision& prec) {
  double lo = lo0, hi = hi0;
  bisect_alpha(eq, high, lo, hi, prec);
  if (ret == BracketEnd::lower && lo == lo0 && lo0 == 0.0)
    return {0.0, 1.0};  // clamped: the sub-zero root case
  AlphaPoint refined = refine(eq, high, from_alpha(lo), from_alpha(hi), ret,
                              kResidualTarget);
  if (eq.residual(refined) > 1e-6)
    throw std::runtime_error("bound solver: unit-crossing residual above 1e-6");
  return {refined.a, refined.c};
}

}  // namespace

Bound eps_upper(const BoundQuery& q, const Precision& prec) {
  require_valid(q);
  if (q.k == q.n) return {1.0, 0.0};
  Equation eq(q, /*two_sided=*/false, prec);
  return solve(eq, HighSide::above_root, 0.0, 1.0, BracketEnd::upper, prec);
}

EpsInterval eps_interval(const BoundQuery& q, const Precision& prec) {
  require_valid(q);
  EpsInterval out;
  const double ratio =
      static_cast<double>(q.k) / static_cast<double>(q.n);
  Equation eq(q, /*two_sided=*/true, prec);
  out.lower = (q.k == 0)
                  ? Bound{0.0, 1.0}
                  : solve(eq, HighSide::below_root, 0.0, ratio,
                          BracketEnd::lower, prec);
  out.upper = (q.k == q.n)
                  ? Bound{1.0, 0.0}
                  : solve(eq, HighSide::above_root, ratio, 1.0,
                          BracketEnd::upper, prec);
  return out;
}

BoundTable bound_table(std::int64_t n, double delta, const Precision& prec,
                       int jobs) {
  if (n < 1) throw std::domain_error("bound_table: N must be >= 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::domain_error("bound_table: delta outside (0,1)");
  BoundTable table;
  table.n = n;
  table.delta = delta;
  table.rows.resize(static_cast<std::size_t>(n) + 1);

  auto fill_row = [&](std::int64_t k) {
    BoundQuery q{n, k, delta};
    BoundRow& row = table.rows[static_cast<std::size_t>(k)];
    row.k = k;
    row.eps = eps_upper(q, prec).value;
    const EpsInterval iv = eps_interval(q, prec);
    row.eps_low = iv.lower.value;
    row.eps_up = iv.upper.value;
    const auto env = asymptotic_envelope(q);
    row.asym_low = env.first;
    row.asym_high = env.second;
  };

  int width = jobs > 0 ? jobs
                       : static_cast<int>(std::thread::hardware_concurrency());
  width = std::clamp(width, 1, 64);
  if (width == 1 || n < 64) {
    for (std::int64_t k = 0; k <= n; ++k) fill_row(k);
  } else {
    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::int64_t k = next.fetch_add(1);
        if (k > n) return;
        fill_row(k);
      }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < width; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return table;
}

namespace {

void put_g12(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  os << buf;
}

}  // namespace

void write_csv(const BoundTable& table, std::ostream& os) {
  os << "N,delta,k,eps,eps_low,eps_up,asym_low,asym_high\n";
  for (const BoundRow& r : table.rows) {
    os << table.n << ',';
    put_g12(os, table.delta);
    os << ',' << r.k << ',';
    put_g12(os, r.eps);
    os << ',';
    put_g12(os, r.eps_low);
    os << ',';
    put_g12(os, r.eps_up);
    os << ',';
    put_g12(os, r.asym_low);
    os << ',';
    put_g12(os, r.asym_high);
    os << '\n';
  }
}

}  // namespace ccert
