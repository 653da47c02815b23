#pragma once

#include <string>
#include <vector>

#include "hsmt/common.hpp"

namespace hsmt {

// Per-token measurement outcomes. Entry i is the eigenphase (in (-pi, pi])
// returned by token i; gate tokens contribute a deterministic 0.
// Qumode position measurements record the residue as a real value.
using MeasurementRecord = std::vector<double>;

struct Outcome {
  MeasurementRecord y;
  double p = 0.0;
};

// Exact enumerated conditional distribution over outcome strings.
struct OutcomeDistribution {
  std::vector<Outcome> rows;

  double total() const {
    double t = 0;
    for (const auto& r : rows) t += r.p;
    return t;
  }

  // Canonical order: lexicographic in y. Rows with (circularly) identical y
  // strings are merged.
  void normalize_order(double tol = kPhaseClusterTol);
};

// Writes one JSON object per row: {"y":[...],"p":...}, probabilities with 17
// significant digits.
std::string distribution_to_jsonl(const OutcomeDistribution& d);

// Total variation distance between two enumerated distributions. Outcome
// strings are matched componentwise with circular tolerance: per position,
// the union of observed values is clustered and each value is replaced by
// its cluster id before comparing.
double total_variation(const OutcomeDistribution& a, const OutcomeDistribution& b,
                       double tol = 1e-7);

// Per-position clustering of the union of values seen at that position.
// Returns, for each row of each input, the vector of cluster ids.
std::vector<std::vector<std::vector<int>>> cluster_positions(
    const std::vector<const OutcomeDistribution*>& dists, double tol);

std::string format_probability(double p);  // %.16e, 17 significant digits

}  // namespace hsmt
