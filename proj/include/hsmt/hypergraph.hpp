#pragma once

#include <map>
#include <string>

#include "hsmt/hyperedge.hpp"

namespace hsmt {

// Weighted hypergraph over n vertices with edge cardinality <= k.
//
// Weights are in units of pi: an edge with weight e applies the diagonal
// phase exp(i*pi*e) on basis strings where every edge vertex is occupied.
// Absent key == weight 0; stored weights of exactly 0 are pruned so the map
// is always canonical.
class WeightedHypergraph {
 public:
  WeightedHypergraph() = default;
  WeightedHypergraph(int n, int k) : n_(n), k_(k) {}

  int n() const { return n_; }
  int k() const { return k_; }
  const std::map<Hyperedge, double>& weights() const { return w_; }
  size_t entry_count() const { return w_.size(); }

  double weight(const Hyperedge& e) const {
    auto it = w_.find(e);
    return it == w_.end() ? 0.0 : it->second;
  }

  void check_edge(const Hyperedge& e) const {
    if (e.empty() || static_cast<int>(e.size()) > k_)
      throw ValidationError("edge cardinality " + std::to_string(e.size()) +
                            " outside [1," + std::to_string(k_) + "]");
    e.check_range(n_);
  }

  void add_weight(const Hyperedge& e, double delta) {
    check_edge(e);
    if (delta == 0.0) return;
    auto [it, inserted] = w_.try_emplace(e, 0.0);
    it->second += delta;
    if (it->second == 0.0) w_.erase(it);
  }

  void set_weight(const Hyperedge& e, double value) {
    check_edge(e);
    if (value == 0.0)
      w_.erase(e);
    else
      w_[e] = value;
  }

  void erase(const Hyperedge& e) { w_.erase(e); }

  bool operator==(const WeightedHypergraph&) const = default;

 private:
  int n_ = 0;
  int k_ = 0;
  std::map<Hyperedge, double> w_;
};

// Returns the canonical form: zero weights pruned, keys sorted (the map
// representation is sorted by construction). Idempotent. Edges wider than k
// are a structural error.
inline WeightedHypergraph canonicalize(const WeightedHypergraph& g) {
  WeightedHypergraph out(g.n(), g.k());
  for (const auto& [e, w] : g.weights()) {
    out.check_edge(e);
    if (w != 0.0) out.set_weight(e, w);
  }
  return out;
}

}  // namespace hsmt
