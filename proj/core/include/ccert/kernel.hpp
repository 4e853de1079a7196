#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "ccert/example_types.hpp"

namespace ccert {

/// Inner-product oracle for the feature spaces of the kernel schemes.
struct Kernel {
  enum class Kind { linear, rbf, polynomial };

  Kind kind = Kind::linear;
  double gamma = 1.0;   // rbf
  int degree = 2;       // polynomial
  double coef = 1.0;    // polynomial

  static Kernel linear() { return {}; }
  static Kernel rbf(double g) { return {Kind::rbf, g, 2, 1.0}; }
  static Kernel polynomial(int d, double c) {
    return {Kind::polynomial, 1.0, d, c};
  }

  double operator()(const Point& a, const Point& b) const {
    if (a.dim() != b.dim())
      throw std::invalid_argument("Kernel: dimension mismatch");
    double dot = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) dot += a[i] * b[i];
    switch (kind) {
      case Kind::linear:
        return dot;
      case Kind::rbf: {
        double d2 = 0.0;
        for (std::size_t i = 0; i < a.dim(); ++i) {
          const double d = a[i] - b[i];
          d2 += d * d;
        }
        return std::exp(-gamma * d2);
      }
      case Kind::polynomial:
        return std::pow(dot + coef, degree);
    }
    return 0.0;
  }

  /// Squared feature-space distance ||phi(a) - phi(b)||^2.
  double feature_dist2(const Point& a, const Point& b) const {
    const double d2 =
        (*this)(a, a) - 2.0 * (*this)(a, b) + (*this)(b, b);
    return d2 > 0.0 ? d2 : 0.0;
  }

  std::string to_json() const {
    switch (kind) {
      case Kind::linear:
        return "{\"kind\":\"linear\"}";
      case Kind::rbf:
        return "{\"kind\":\"rbf\",\"gamma\":" + describe(gamma) + "}";
      case Kind::polynomial:
        return "{\"kind\":\"polynomial\",\"degree\":" + std::to_string(degree) +
               ",\"coef\":" + describe(coef) + "}";
    }
    return "{}";
  }
};

}  // namespace ccert
