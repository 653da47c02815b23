#pragma once

#include <cstdint>
#include <vector>

namespace hsmt {

// Seedable, splittable generator (splitmix64 core). Every trajectory gets
// its own stream, and the stream for token i is derived from the trajectory
// stream by index, so sample and enumerate modes see identical branch orders
// regardless of how many draws earlier tokens consumed.
class SplitRng {
 public:
  explicit SplitRng(uint64_t seed) : state_(mix(seed ^ 0x9e3779b97f4a7c15ULL)) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1).
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  // Independent child stream; deterministic in (this stream's key, index).
  SplitRng child(uint64_t index) const {
    SplitRng c(0);
    c.state_ = mix(state_ ^ mix(index * 0xbf58476d1ce4e5b9ULL + 0x94d049bb133111ebULL));
    return c;
  }

  // Picks an index from cumulative weights (weights need not sum to one;
  // they are renormalized). Branches are visited in the order given.
  size_t pick(const std::vector<double>& weights) {
    double total = 0;
    for (double w : weights) total += w;
    double u = next_double() * total;
    double acc = 0;
    for (size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

 private:
  static uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  uint64_t state_;
};

}  // namespace hsmt
