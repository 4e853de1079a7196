#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "ccert/precision.hpp"

namespace ccert {

/// One (N, k, delta) query: sample size, compressed cardinality, confidence.
struct BoundQuery {
  std::int64_t n = 1;      // sample size N >= 1
  std::int64_t k = 0;      // 0 <= k <= N
  double delta = 1e-6;     // confidence parameter in (0,1)

  bool valid() const {
    return n >= 1 && k >= 0 && k <= n && delta > 0.0 && delta < 1.0;
  }
};

/// A solved bound carried together with its exact complement 1 - value.
///
/// The roots for k close to N sit within a few double ulps of 1 (for
/// k = N-1 the solution obeys 1 - alpha ~ delta/N^2), so the complement is
/// the only representation with usable relative accuracy there. `value`
/// alone is what lands in tables and CSV output.
struct Bound {
  double value = 0.0;
  double complement = 1.0;
};

struct EpsInterval {
  Bound lower;  // the k/N-from-below solution, clamped at 0
  Bound upper;  // the k/N-from-above solution, 1 when k = N
};

struct BoundRow {
  std::int64_t k = 0;
  double eps = 0.0;       // one-sided upper bound
  double eps_low = 0.0;   // two-sided interval, lower edge
  double eps_up = 0.0;    // two-sided interval, upper edge
  double asym_low = 0.0;  // explicit envelope k/N - s (not clamped)
  double asym_high = 0.0; // explicit envelope k/N + s
};

struct BoundTable {
  std::int64_t n = 0;
  double delta = 0.0;
  std::vector<BoundRow> rows;  // k = 0..N in order
};

/// The scaling function behind the one-sided bound: a strictly increasing
/// map of alpha on (-inf,1) whose unique unit crossing is the bound for
/// cardinality k. Defined for k <= N-1; k = N throws std::domain_error,
/// as does alpha >= 1. Evaluated as a log-domain compensated sum.
double psi(const BoundQuery& q, double alpha);

/// psi with the complement of alpha supplied explicitly (see Bound).
double psi_c(const BoundQuery& q, double alpha, double alpha_complement);

/// The two-sided companion function: convex-shaped on (-inf,1) for k < N
/// with two unit crossings, strictly decreasing with a single crossing for
/// k = N. alpha >= 1 throws std::domain_error.
double psi_tilde(const BoundQuery& q, double alpha);
double psi_tilde_c(const BoundQuery& q, double alpha, double alpha_complement);

/// Solves psi = 1 on (0,1); returns exactly 1 for k = N. The returned
/// value is the upper end of the final bracket and satisfies
/// |psi(root) - 1| <= 1e-6 when re-evaluated through the pair.
Bound eps_upper(const BoundQuery& q, const Precision& prec = {});

/// Solves psi_tilde = 1: lower root clamped at 0 (lower bracket end),
/// upper root (upper bracket end), with upper = 1 exactly for k = N.
EpsInterval eps_interval(const BoundQuery& q, const Precision& prec = {});

/// Explicit envelope (k/N - s, k/N + s) with
/// s = 2 sqrt(k+1)/N (ln(1/delta) + ln(k+1) + 4). No clamping.
std::pair<double, double> asymptotic_envelope(const BoundQuery& q);

/// All rows k = 0..N. `jobs` <= 0 picks the hardware concurrency. Output
/// is byte-identical for any job count.
BoundTable bound_table(std::int64_t n, double delta, const Precision& prec = {},
                       int jobs = 0);

/// CSV with header N,delta,k,eps,eps_low,eps_up,asym_low,asym_high,
/// 12 significant digits, LF line endings, trailing newline.
void write_csv(const BoundTable& table, std::ostream& os);

}  // namespace ccert
