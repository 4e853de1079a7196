#pragma once

#include <compare>
#include <cstdio>
#include <string>
#include <vector>

namespace ccert {

/// A point in R^d. Total order = lexicographic on coordinates, which is
/// also the tie-break order used by the kernel schemes.
struct Point {
  std::vector<double> x;

  Point() = default;
  explicit Point(std::vector<double> coords) : x(std::move(coords)) {}
  Point(std::initializer_list<double> coords) : x(coords) {}

  std::size_t dim() const { return x.size(); }
  double operator[](std::size_t i) const { return x[i]; }

  friend bool operator<(const Point& a, const Point& b) { return a.x < b.x; }
  friend bool operator==(const Point& a, const Point& b) { return a.x == b.x; }
};

/// Supervised example (x, y); y is +-1 for classification, real for
/// regression.
struct LabeledExample {
  Point x;
  double y = 0.0;

  friend bool operator<(const LabeledExample& a, const LabeledExample& b) {
    if (a.x < b.x) return true;
    if (b.x < a.x) return false;
    return a.y < b.y;
  }
  friend bool operator==(const LabeledExample& a, const LabeledExample& b) {
    return a.x == b.x && a.y == b.y;
  }
};

// Compact JSON fragments for counterexample records.

inline std::string describe(double z) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", z);
  return buf;
}

inline std::string describe(const Point& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    if (i) s += ',';
    s += describe(p.x[i]);
  }
  return s + "]";
}

inline std::string describe(const LabeledExample& e) {
  return "{\"x\":" + describe(e.x) + ",\"y\":" + describe(e.y) + "}";
}

}  // namespace ccert
