#pragma once

// Dense reference solver for the dual programs: accelerated projected
// gradient on min 1/2 x'Qx + p'x over the box [0,C]^n intersected with
// {s'x = 0}. Slow and simple on purpose; the test oracle for the SMO path.

#include <algorithm>
#include <cmath>
#include <vector>

#include "ccert/svm.hpp"

namespace qpref {

struct Problem {
  std::vector<double> q;  // n x n row-major
  std::vector<double> p;
  std::vector<double> s;  // +-1
  double c = 1.0;
  int n = 0;
};

// Projection onto {0 <= x <= C, s'x = 0} by bisection on the shift along s.
inline std::vector<double> project(const Problem& pb,
                                   const std::vector<double>& v) {
  double range = pb.c + 1.0;
  for (double vi : v) range = std::max(range, std::fabs(vi) + pb.c + 1.0);
  double lo = -range, hi = range;
  auto balance = [&](double lambda) {
    double acc = 0.0;
    for (int i = 0; i < pb.n; ++i) {
      const double xi = std::clamp(v[static_cast<std::size_t>(i)] -
                                       lambda * pb.s[static_cast<std::size_t>(i)],
                                   0.0, pb.c);
      acc += pb.s[static_cast<std::size_t>(i)] * xi;
    }
    return acc;
  };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (balance(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double lambda = 0.5 * (lo + hi);
  std::vector<double> x(static_cast<std::size_t>(pb.n));
  for (int i = 0; i < pb.n; ++i)
    x[static_cast<std::size_t>(i)] =
        std::clamp(v[static_cast<std::size_t>(i)] -
                       lambda * pb.s[static_cast<std::size_t>(i)],
                   0.0, pb.c);
  return x;
}

inline double objective(const Problem& pb, const std::vector<double>& x) {
  double acc = 0.0;
  for (int i = 0; i < pb.n; ++i) {
    double qx = 0.0;
    for (int j = 0; j < pb.n; ++j)
      qx += pb.q[static_cast<std::size_t>(i) * pb.n + j] *
            x[static_cast<std::size_t>(j)];
    acc += x[static_cast<std::size_t>(i)] *
           (0.5 * qx + pb.p[static_cast<std::size_t>(i)]);
  }
  return acc;
}

inline std::vector<double> solve(const Problem& pb, int max_iter = 500000,
                                 double fp_tol = 1e-11) {
  // Lipschitz bound by row sums.
  double lip = 1e-12;
  for (int i = 0; i < pb.n; ++i) {
    double row = 0.0;
    for (int j = 0; j < pb.n; ++j)
      row += std::fabs(pb.q[static_cast<std::size_t>(i) * pb.n + j]);
    lip = std::max(lip, row);
  }
  const double step = 1.0 / lip;
  std::vector<double> x = project(pb, std::vector<double>(
                                          static_cast<std::size_t>(pb.n), 0.0));
  std::vector<double> z = x;  // momentum point
  double t_momentum = 1.0;
  double f_prev = objective(pb, x);
  std::vector<double> grad(static_cast<std::size_t>(pb.n));
  std::vector<double> v(static_cast<std::size_t>(pb.n));
  for (int it = 0; it < max_iter; ++it) {
    for (int i = 0; i < pb.n; ++i) {
      double g = pb.p[static_cast<std::size_t>(i)];
      for (int j = 0; j < pb.n; ++j)
        g += pb.q[static_cast<std::size_t>(i) * pb.n + j] *
             z[static_cast<std::size_t>(j)];
      grad[static_cast<std::size_t>(i)] = g;
    }
    for (int i = 0; i < pb.n; ++i)
      v[static_cast<std::size_t>(i)] =
          z[static_cast<std::size_t>(i)] - step * grad[static_cast<std::size_t>(i)];
    const std::vector<double> x_new = project(pb, v);
    const double t_new =
        0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_momentum * t_momentum));
    for (int i = 0; i < pb.n; ++i)
      z[static_cast<std::size_t>(i)] =
          x_new[static_cast<std::size_t>(i)] +
          (t_momentum - 1.0) / t_new *
              (x_new[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)]);
    x = x_new;
    t_momentum = t_new;
    if (it % 100 == 99) {
      // restart the momentum when the objective backslides
      const double f_now = objective(pb, x);
      if (f_now > f_prev) {
        z = x;
        t_momentum = 1.0;
      }
      f_prev = f_now;
      // fixed-point residual of the projected gradient map at x
      for (int i = 0; i < pb.n; ++i) {
        double g = pb.p[static_cast<std::size_t>(i)];
        for (int j = 0; j < pb.n; ++j)
          g += pb.q[static_cast<std::size_t>(i) * pb.n + j] *
               x[static_cast<std::size_t>(j)];
        v[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] - step * g;
      }
      const std::vector<double> px = project(pb, v);
      double resid = 0.0;
      for (int i = 0; i < pb.n; ++i)
        resid = std::max(resid, std::fabs(px[static_cast<std::size_t>(i)] -
                                          x[static_cast<std::size_t>(i)]));
      if (resid <= fp_tol * std::max(1.0, pb.c)) return px;
    }
  }
  return x;
}

// --- adapters for the two support-vector duals -----------------------------

inline Problem build_svm_dual(const ccert::SvmModel& m) {
  const int n = static_cast<int>(m.x.size());
  Problem pb;
  pb.n = n;
  pb.c = m.rho / 2.0;
  pb.s = m.y;
  pb.p.assign(static_cast<std::size_t>(n), -1.0);
  pb.q.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      pb.q[static_cast<std::size_t>(i) * n + j] =
          m.y[static_cast<std::size_t>(i)] * m.y[static_cast<std::size_t>(j)] *
          m.kernel(m.x[static_cast<std::size_t>(i)],
                   m.x[static_cast<std::size_t>(j)]);
  return pb;
}

inline Problem build_svr_dual(const ccert::SvmModel& m) {
  const int n = static_cast<int>(m.x.size());
  Problem pb;
  pb.n = 2 * n;
  pb.c = m.rho / 2.0;
  pb.s.assign(static_cast<std::size_t>(2 * n), 1.0);
  pb.p.resize(static_cast<std::size_t>(2 * n));
  pb.q.assign(static_cast<std::size_t>(2 * n) * (2 * n), 0.0);
  for (int i = 0; i < n; ++i) {
    pb.s[static_cast<std::size_t>(n + i)] = -1.0;
    pb.p[static_cast<std::size_t>(i)] =
        m.tolerance - m.y[static_cast<std::size_t>(i)];
    pb.p[static_cast<std::size_t>(n + i)] =
        m.tolerance + m.y[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      const double v = m.kernel(m.x[static_cast<std::size_t>(i)],
                                m.x[static_cast<std::size_t>(j)]);
      pb.q[static_cast<std::size_t>(i) * (2 * n) + j] = v;
      pb.q[static_cast<std::size_t>(i) * (2 * n) + n + j] = -v;
      pb.q[static_cast<std::size_t>(n + i) * (2 * n) + j] = -v;
      pb.q[static_cast<std::size_t>(n + i) * (2 * n) + n + j] = v;
    }
  }
  return pb;
}

/// Primal objective at a reference dual point, using the same
/// optimal-interval minimum-|b| rule as the production solver.
inline double reference_primal(const Problem& pb, const std::vector<double>& x,
                               const ccert::SvmModel& shape) {
  const int n = static_cast<int>(shape.x.size());
  std::vector<double> grad(static_cast<std::size_t>(pb.n));
  for (int i = 0; i < pb.n; ++i) {
    double g = pb.p[static_cast<std::size_t>(i)];
    for (int j = 0; j < pb.n; ++j)
      g += pb.q[static_cast<std::size_t>(i) * pb.n + j] *
           x[static_cast<std::size_t>(j)];
    grad[static_cast<std::size_t>(i)] = g;
  }
  const double eps_act = 1e-8 * pb.c;
  double m_up = -1e300, m_low = 1e300;
  for (int t = 0; t < pb.n; ++t) {
    const double v = -pb.s[static_cast<std::size_t>(t)] *
                     grad[static_cast<std::size_t>(t)];
    const double xi = x[static_cast<std::size_t>(t)];
    const bool in_up =
        (pb.s[static_cast<std::size_t>(t)] > 0 && xi < pb.c - eps_act) ||
        (pb.s[static_cast<std::size_t>(t)] < 0 && xi > eps_act);
    const bool in_low =
        (pb.s[static_cast<std::size_t>(t)] > 0 && xi > eps_act) ||
        (pb.s[static_cast<std::size_t>(t)] < 0 && xi < pb.c - eps_act);
    if (in_up) m_up = std::max(m_up, v);
    if (in_low) m_low = std::min(m_low, v);
  }
  double b;
  if (m_up > m_low)
    b = 0.5 * (m_up + m_low);
  else if (m_up > 0.0)
    b = m_up;
  else if (m_low < 0.0)
    b = m_low;
  else
    b = 0.0;

  ccert::SvmModel ref = shape;
  ref.b = b;
  if (!shape.regression) {
    for (int i = 0; i < n; ++i)
      ref.beta[static_cast<std::size_t>(i)] =
          shape.y[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
  } else {
    for (int i = 0; i < n; ++i)
      ref.beta[static_cast<std::size_t>(i)] =
          x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(n + i)];
  }
  return ref.primal_objective();
}

}  // namespace qpref
