#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace ccert {

/// Finite multiset over an example space Z. Z must carry a strict total
/// order (operator<); equality of examples is the order's equivalence,
/// i.e. exact comparison -- floating-point examples compare by value with
/// no tolerance. Immutable-style value semantics: operations return new
/// multisets.
template <class Z>
class Multiset {
 public:
  using map_type = std::map<Z, std::int64_t>;

  Multiset() = default;

  explicit Multiset(const std::vector<Z>& items) {
    for (const Z& z : items) insert(z);
  }

  void insert(const Z& z, std::int64_t count = 1) {
    if (count <= 0) throw std::domain_error("Multiset: count must be positive");
    entries_[z] += count;
  }

  std::int64_t multiplicity(const Z& z) const {
    auto it = entries_.find(z);
    return it == entries_.end() ? 0 : it->second;
  }

  std::int64_t cardinality() const {
    std::int64_t total = 0;
    for (const auto& [z, m] : entries_) total += m;
    return total;
  }

  bool empty() const { return entries_.empty(); }

  const map_type& entries() const { return entries_; }

  /// Every element expanded to its multiplicity, in order.
  std::vector<Z> items() const {
    std::vector<Z> out;
    out.reserve(static_cast<std::size_t>(cardinality()));
    for (const auto& [z, m] : entries_)
      for (std::int64_t i = 0; i < m; ++i) out.push_back(z);
    return out;
  }

  /// Distinct values, in order.
  std::vector<Z> support() const {
    std::vector<Z> out;
    out.reserve(entries_.size());
    for (const auto& [z, m] : entries_) out.push_back(z);
    return out;
  }

  friend Multiset set_union(const Multiset& u, const Multiset& v) {
    Multiset out = u;
    for (const auto& [z, m] : v.entries_) out.entries_[z] += m;
    return out;
  }

  friend Multiset set_intersection(const Multiset& u, const Multiset& v) {
    Multiset out;
    for (const auto& [z, m] : u.entries_) {
      const std::int64_t mv = v.multiplicity(z);
      if (mv > 0) out.entries_[z] = m < mv ? m : mv;
    }
    return out;
  }

  friend Multiset set_difference(const Multiset& u, const Multiset& v) {
    Multiset out;
    for (const auto& [z, m] : u.entries_) {
      const std::int64_t d = m - v.multiplicity(z);
      if (d > 0) out.entries_[z] = d;
    }
    return out;
  }

  /// mu_this(z) <= mu_other(z) for all z.
  bool subset_of(const Multiset& other) const {
    for (const auto& [z, m] : entries_)
      if (m > other.multiplicity(z)) return false;
    return true;
  }

  Multiset with(const Z& z) const {
    Multiset out = *this;
    out.insert(z);
    return out;
  }

  bool operator==(const Multiset& other) const {
    return entries_ == other.entries_;
  }
  bool operator!=(const Multiset& other) const { return !(*this == other); }

 private:
  map_type entries_;
};

}  // namespace ccert
