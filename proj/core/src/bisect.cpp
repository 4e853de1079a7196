#include "ccert/bisect.hpp"

#include <stdexcept>

namespace ccert {

BisectResult bisect(const std::function<double(double)>& f, double lo,
                    double hi, const Precision& prec, BracketEnd end,
                    int sign_at_hi) {
  if (!(lo < hi)) throw std::domain_error("bisect: requires lo < hi");
  if (!prec.valid()) throw std::domain_error("bisect: bad Precision");
  BisectResult r;
  while (hi - lo > prec.bisection_tol) {
    if (r.iterations >= prec.max_iter) {
      r.root = 0.5 * (lo + hi);
      return r;
    }
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at double resolution
    const double v = f(mid);
    if ((v > 0.0) == (sign_at_hi > 0))
      hi = mid;
    else
      lo = mid;
    ++r.iterations;
  }
  r.converged = true;
  r.root = (end == BracketEnd::upper) ? hi : lo;
  return r;
}

}  // namespace ccert
