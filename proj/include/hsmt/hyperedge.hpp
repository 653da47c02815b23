#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "hsmt/common.hpp"

namespace hsmt {

// Set of distinct vertices, stored sorted. Vertices are 0-based internally;
// all external formats (JSON, CLI) are 1-based and convert at the
// serialization boundary.
class Hyperedge {
 public:
  Hyperedge() = default;
  Hyperedge(std::initializer_list<int> vs) : v_(vs) { normalize(); }
  explicit Hyperedge(std::vector<int> vs) : v_(std::move(vs)) { normalize(); }

  size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }
  const std::vector<int>& vertices() const { return v_; }
  int operator[](size_t i) const { return v_[i]; }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  bool contains(int v) const {
    return std::binary_search(v_.begin(), v_.end(), v);
  }

  bool subset_of(const Hyperedge& other) const {
    return std::includes(other.v_.begin(), other.v_.end(), v_.begin(), v_.end());
  }

  Hyperedge without(int v) const {
    std::vector<int> out;
    out.reserve(v_.size());
    for (int x : v_)
      if (x != v) out.push_back(x);
    return Hyperedge(std::move(out));
  }

  Hyperedge with(int v) const {
    std::vector<int> out = v_;
    out.push_back(v);
    return Hyperedge(std::move(out));
  }

  // Position of v within the sorted vertex list; -1 if absent.
  int index_of(int v) const {
    auto it = std::lower_bound(v_.begin(), v_.end(), v);
    if (it == v_.end() || *it != v) return -1;
    return static_cast<int>(it - v_.begin());
  }

  // Occupation bitmask relative to this edge's own vertex ordering.
  // Requires size() <= 63.
  uint64_t local_mask_of(const Hyperedge& subset) const {
    uint64_t m = 0;
    for (int v : subset.v_) {
      int idx = index_of(v);
      if (idx < 0) throw ValidationError("subset vertex not in edge");
      m |= uint64_t{1} << idx;
    }
    return m;
  }

  void check_range(int n) const {
    for (int v : v_)
      if (v < 0 || v >= n)
        throw ValidationError("edge vertex " + std::to_string(v + 1) +
                              " out of range [1," + std::to_string(n) + "]");
  }

  bool operator==(const Hyperedge&) const = default;
  auto operator<=>(const Hyperedge&) const = default;

  std::string str() const {
    std::string s = "{";
    for (size_t i = 0; i < v_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(v_[i] + 1);
    }
    return s + "}";
  }

 private:
  void normalize() {
    std::sort(v_.begin(), v_.end());
    auto dup = std::adjacent_find(v_.begin(), v_.end());
    if (dup != v_.end()) throw ValidationError("duplicate vertex in edge");
  }

  std::vector<int> v_;
};

// All k-subsets of {0,...,n-1} in colexicographic order. This is the fixed
// global edge ordering used by the gate block of the token grammar.
inline std::vector<Hyperedge> colex_subsets(int n, int k) {
  std::vector<Hyperedge> out;
  if (k < 0 || k > n) return out;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.emplace_back(idx);
    // Colex successor: bump the smallest position that can move without
    // colliding with the next one.
    int j = 0;
    while (j + 1 < k && idx[j] + 1 == idx[j + 1]) ++j;
    if (j == k - 1 && (k == 0 || idx[j] + 1 == n)) break;
    if (k == 0) break;
    ++idx[j];
    for (int i = 0; i < j; ++i) idx[i] = i;
  }
  if (k == 0) out = {Hyperedge{}};
  return out;
}

// All subsets (including empty) of the given edge.
inline std::vector<Hyperedge> all_subsets(const Hyperedge& e) {
  std::vector<Hyperedge> out;
  size_t k = e.size();
  for (uint64_t m = 0; m < (uint64_t{1} << k); ++m) {
    std::vector<int> vs;
    for (size_t i = 0; i < k; ++i)
      if (m >> i & 1) vs.push_back(e[i]);
    out.emplace_back(std::move(vs));
  }
  return out;
}

inline uint64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  uint64_t r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace hsmt
