#include "ccert/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace ccert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTau = 1e-12;  // curvature floor for degenerate pairs

// Dual box-QP with one balance constraint:
//   min 1/2 x'Qx + p'x   s.t.  s'x = 0, 0 <= x_i <= C,  s_i in {-1,+1}.
// Covers both programs; the caller maps its variables in and out.
struct DualProblem {
  std::vector<double> q;  // n x n, row-major
  std::vector<double> p;
  std::vector<double> s;
  double c = 1.0;
  int n = 0;

  double qat(int i, int j) const { return q[static_cast<std::size_t>(i) * n + j]; }
};

struct DualSolution {
  std::vector<double> x;
  std::vector<double> grad;
  double gap = kInf;
  int iterations = 0;
  bool converged = false;
  double b_lo = -kInf, b_hi = kInf;  // optimal interval for the offset
};

DualSolution smo_solve(const DualProblem& pb, double kkt_tol,
                       int max_updates) {
  const int n = pb.n;
  DualSolution sol;
  sol.x.assign(static_cast<std::size_t>(n), 0.0);
  sol.grad = pb.p;  // gradient at x = 0
  auto& x = sol.x;
  auto& g = sol.grad;

  // Offset-interval classification needs slack against the box: a dual
  // variable parked within solver tolerance of a bound must not pin the
  // interval as if it were free.
  const double eps_act = 1e-8 * pb.c;
  auto fill_offset_interval = [&] {
    double lo = -kInf, hi = kInf;
    for (int t = 0; t < n; ++t) {
      const double v = -pb.s[t] * g[t];
      const bool in_up = (pb.s[t] > 0 && x[t] < pb.c - eps_act) ||
                         (pb.s[t] < 0 && x[t] > eps_act);
      const bool in_low = (pb.s[t] > 0 && x[t] > eps_act) ||
                          (pb.s[t] < 0 && x[t] < pb.c - eps_act);
      if (in_up && v > lo) lo = v;
      if (in_low && v < hi) hi = v;
    }
    sol.b_lo = lo;
    sol.b_hi = hi;
  };

  for (int it = 0;; ++it) {
    // Working-set selection: first index by maximal violation, second by
    // the largest second-order objective decrease (the cure for zig-zag on
    // the rank-deficient regression duals).
    int i = -1, j = -1;
    double m_up = -kInf, m_low = kInf;
    for (int t = 0; t < n; ++t) {
      const double v = -pb.s[t] * g[t];
      const bool in_up = (pb.s[t] > 0 && x[t] < pb.c) ||
                         (pb.s[t] < 0 && x[t] > 0.0);
      if (in_up && v > m_up) {
        m_up = v;
        i = t;
      }
    }
    double best_gain = 0.0;
    for (int t = 0; t < n; ++t) {
      const double v = -pb.s[t] * g[t];
      const bool in_low = (pb.s[t] > 0 && x[t] > 0.0) ||
                          (pb.s[t] < 0 && x[t] < pb.c);
      if (!in_low) continue;
      if (v < m_low) m_low = v;
      if (i < 0) continue;
      const double diff = m_up - v;
      if (diff <= 0.0) continue;
      double quad_it = pb.qat(i, i) + pb.qat(t, t) -
                       2.0 * pb.s[i] * pb.s[t] * pb.qat(i, t);
      if (quad_it <= kTau) quad_it = kTau;
      const double gain = diff * diff / quad_it;
      if (gain > best_gain) {
        best_gain = gain;
        j = t;
      }
    }
    sol.gap = (i >= 0 && m_low < kInf) ? m_up - m_low : -kInf;
    sol.iterations = it;
    if (sol.gap <= kkt_tol || j < 0) {
      sol.converged = sol.gap <= kkt_tol;
      fill_offset_interval();
      return sol;
    }
    if (it >= max_updates) {
      fill_offset_interval();
      return sol;  // non-converged, flagged by caller
    }

    // Two-variable step along s_i e_i - s_j e_j.
    double quad = pb.qat(i, i) + pb.qat(j, j) -
                  2.0 * pb.s[i] * pb.s[j] * pb.qat(i, j);
    if (quad <= kTau) quad = kTau;
    const double vj = -pb.s[j] * g[j];
    double d = (m_up - vj) / quad;
    // Box limits for x_i + s_i d and x_j - s_j d.
    auto limit = [&](double xi, double si, double sign) {
      // admissible d range so that xi + sign*si*d stays in [0, C]
      const double step = sign * si;
      if (step > 0) return (pb.c - xi) / step;
      return -xi / step;  // step < 0
    };
    d = std::min(d, limit(x[i], pb.s[i], +1.0));
    d = std::min(d, limit(x[j], pb.s[j], -1.0));
    if (!(d > 0.0)) {
      // Numerically stuck pair; treat as converged at the current gap.
      fill_offset_interval();
      return sol;
    }
    const double xi_new = std::clamp(x[i] + pb.s[i] * d, 0.0, pb.c);
    const double xj_new = std::clamp(x[j] - pb.s[j] * d, 0.0, pb.c);
    const double dxi = xi_new - x[i];
    const double dxj = xj_new - x[j];
    x[i] = xi_new;
    x[j] = xj_new;
    for (int t = 0; t < n; ++t)
      g[t] += pb.qat(t, i) * dxi + pb.qat(t, j) * dxj;
  }
}

// Offset minimizing |b| within the optimal interval [b_lo, b_hi].
double pick_offset(double b_lo, double b_hi) {
  if (b_lo > b_hi) {  // interval collapsed within solver tolerance
    const double mid = 0.5 * (b_lo + b_hi);
    return std::isfinite(mid) ? mid : 0.0;
  }
  if (b_lo > 0.0) return b_lo;
  if (b_hi < 0.0) return b_hi;
  return 0.0;
}

std::vector<double> gram(const std::vector<Point>& x, const Kernel& k) {
  const int n = static_cast<int>(x.size());
  std::vector<double> g(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = k(x[i], x[j]);
      g[static_cast<std::size_t>(i) * n + j] = v;
      g[static_cast<std::size_t>(j) * n + i] = v;
    }
  return g;
}

}  // namespace

double SvmModel::decision(const Point& p) const {
  double acc = b;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (beta[i] != 0.0) acc += beta[i] * kernel(x[i], p);
  return acc;
}

double SvmModel::primal_objective() const {
  const int n = static_cast<int>(x.size());
  double wnorm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    if (beta[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      if (beta[j] == 0.0) continue;
      wnorm2 += beta[static_cast<std::size_t>(i)] *
                beta[static_cast<std::size_t>(j)] * kernel(x[i], x[j]);
    }
  }
  double slack = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = decision(x[static_cast<std::size_t>(i)]);
    if (regression)
      slack += std::max(0.0, std::fabs(y[static_cast<std::size_t>(i)] - f) -
                                 tolerance);
    else
      slack += std::max(0.0, 1.0 - y[static_cast<std::size_t>(i)] * f);
  }
  return wnorm2 + rho * slack;
}

std::string SvmModel::to_json() const {
  std::string s = "{\"kind\":\"";
  s += regression ? "svr" : "svm";
  s += "\",\"kernel\":" + kernel.to_json() + ",\"rho\":" + describe(rho);
  if (regression) s += ",\"tolerance\":" + describe(tolerance);
  s += ",\"b\":" + describe(b) + ",\"converged\":";
  s += converged ? "true" : "false";
  s += ",\"support\":[";
  bool first = true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (beta[i] == 0.0) continue;
    if (!first) s += ',';
    first = false;
    s += "{\"x\":" + describe(x[i]) + ",\"y\":" + describe(y[i]) +
         ",\"beta\":" + describe(beta[i]) + "}";
  }
  return s + "]}";
}

SvmModel svm_train(const Multiset<LabeledExample>& train, const Kernel& kernel,
                   double rho, double kkt_tol, int max_updates) {
  if (train.empty()) throw std::invalid_argument("svm_train: empty training set");
  if (!(rho > 0.0)) throw std::invalid_argument("svm_train: rho must be positive");
  SvmModel model;
  model.kernel = kernel;
  model.rho = rho;
  for (const LabeledExample& e : train.items()) {
    if (e.y != 1.0 && e.y != -1.0)
      throw std::invalid_argument("svm_train: labels must be +-1");
    model.x.push_back(e.x);
    model.y.push_back(e.y);
  }
  const int n = static_cast<int>(model.x.size());
  const std::vector<double> k = gram(model.x, kernel);

  DualProblem pb;
  pb.n = n;
  pb.c = rho / 2.0;
  pb.s = model.y;
  pb.p.assign(static_cast<std::size_t>(n), -1.0);
  pb.q.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      pb.q[static_cast<std::size_t>(i) * n + j] =
          model.y[static_cast<std::size_t>(i)] *
          model.y[static_cast<std::size_t>(j)] *
          k[static_cast<std::size_t>(i) * n + j];

  const DualSolution sol = smo_solve(pb, kkt_tol, max_updates);
  model.converged = sol.converged;
  model.iterations = sol.iterations;
  model.kkt_gap = std::max(0.0, sol.gap);
  model.beta.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    model.beta[static_cast<std::size_t>(i)] =
        model.y[static_cast<std::size_t>(i)] * sol.x[static_cast<std::size_t>(i)];
  model.b = pick_offset(sol.b_lo, sol.b_hi);
  return model;
}

SvmModel svr_train(const Multiset<LabeledExample>& train, const Kernel& kernel,
                   double rho, double t, double kkt_tol, int max_updates) {
  if (train.empty()) throw std::invalid_argument("svr_train: empty training set");
  if (!(rho > 0.0)) throw std::invalid_argument("svr_train: rho must be positive");
  if (!(t > 0.0))
    throw std::invalid_argument("svr_train: prediction tolerance must be > 0");
  SvmModel model;
  model.kernel = kernel;
  model.rho = rho;
  model.tolerance = t;
  model.regression = true;
  for (const LabeledExample& e : train.items()) {
    model.x.push_back(e.x);
    model.y.push_back(e.y);
  }
  const int n = static_cast<int>(model.x.size());
  const std::vector<double> k = gram(model.x, kernel);

  // Variables [alpha; alpha*]; beta = alpha - alpha*.
  DualProblem pb;
  pb.n = 2 * n;
  pb.c = rho / 2.0;
  pb.s.assign(static_cast<std::size_t>(2 * n), 1.0);
  pb.p.resize(static_cast<std::size_t>(2 * n));
  pb.q.assign(static_cast<std::size_t>(2 * n) * (2 * n), 0.0);
  for (int i = 0; i < n; ++i) {
    pb.s[static_cast<std::size_t>(n + i)] = -1.0;
    pb.p[static_cast<std::size_t>(i)] = t - model.y[static_cast<std::size_t>(i)];
    pb.p[static_cast<std::size_t>(n + i)] =
        t + model.y[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      const double v = k[static_cast<std::size_t>(i) * n + j];
      pb.q[static_cast<std::size_t>(i) * (2 * n) + j] = v;
      pb.q[static_cast<std::size_t>(i) * (2 * n) + n + j] = -v;
      pb.q[static_cast<std::size_t>(n + i) * (2 * n) + j] = -v;
      pb.q[static_cast<std::size_t>(n + i) * (2 * n) + n + j] = v;
    }
  }

  const DualSolution sol = smo_solve(pb, kkt_tol, max_updates);
  model.converged = sol.converged;
  model.iterations = sol.iterations;
  model.kkt_gap = std::max(0.0, sol.gap);
  model.beta.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    model.beta[static_cast<std::size_t>(i)] =
        sol.x[static_cast<std::size_t>(i)] - sol.x[static_cast<std::size_t>(n + i)];
  model.b = pick_offset(sol.b_lo, sol.b_hi);
  return model;
}

namespace {

template <class Fit>
Scheme<LabeledExample> kernel_scheme(std::string name, Fit fit,
                                     bool regression, double t,
                                     double tol_margin) {
  Scheme<LabeledExample> s;
  s.name = std::move(name);
  s.compress = [fit, regression, t, tol_margin](
                   const Multiset<LabeledExample>& u) {
    if (u.empty()) return Multiset<LabeledExample>{};
    const SvmModel m = fit(u);
    if (!m.converged)
      throw std::runtime_error("kernel scheme: inner solve did not converge");
    Multiset<LabeledExample> out;
    for (const auto& [z, mult] : u.entries()) {
      const double f = m.decision(z.x);
      const bool in_margin_set =
          regression ? std::fabs(z.y - f) >= t - tol_margin
                     : 1.0 - z.y * f >= -tol_margin;
      if (in_margin_set) out.insert(z, mult);
    }
    return out;
  };
  s.learner = [fit, regression, t](const Multiset<LabeledExample>& u) {
    auto m = std::make_shared<SvmModel>(fit(u));
    if (!m->converged)
      throw std::runtime_error("kernel scheme: inner solve did not converge");
    Hypothesis<LabeledExample> h;
    h.predict = [m](const LabeledExample& z) { return m->decision(z.x); };
    if (regression)
      h.loss = [m, t](const LabeledExample& z) {
        return std::fabs(z.y - m->decision(z.x)) > t ? 1 : 0;
      };
    else
      h.loss = [m](const LabeledExample& z) {
        const double label = m->decision(z.x) >= 0.0 ? 1.0 : -1.0;
        return label != z.y ? 1 : 0;
      };
    return h;
  };
  s.reconstruct = s.learner;
  return s;
}

}  // namespace

Scheme<LabeledExample> svm_scheme(const Kernel& kernel, double rho,
                                  double tol_margin) {
  auto fit = [kernel, rho](const Multiset<LabeledExample>& u) {
    return svm_train(u, kernel, rho);
  };
  return kernel_scheme("svm", fit, /*regression=*/false, 0.0, tol_margin);
}

Scheme<LabeledExample> svr_scheme(const Kernel& kernel, double rho, double t,
                                  double tol_margin) {
  auto fit = [kernel, rho, t](const Multiset<LabeledExample>& u) {
    return svr_train(u, kernel, rho, t);
  };
  return kernel_scheme("svr", fit, /*regression=*/true, t, tol_margin);
}

}  // namespace ccert
