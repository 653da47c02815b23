#pragma once

#include <array>
#include <optional>

#include "hsmt/hypergraph.hpp"
#include "hsmt/record.hpp"
#include "hsmt/token.hpp"

namespace hsmt {

// Token prefix that prepares a k-uniform weighted hypergraph latent: n
// X-basis preparation tokens (angle upsilon each) followed by one gate token
// per k-subset in the fixed colex order. Conditioned on every preparation
// landing on its plus branch, the latent is the hypergraph state of g.
TokenSequence prep_gate_prefix(const WeightedHypergraph& g, double upsilon);

// Prefix for the reference state: all-zero preparation angles and zero gate
// weights (the latent stays in the computational all-zero state).
TokenSequence reference_prefix(int n, int k);

// Measurement suffix of length (n - |edge|) + 2 that antidistinguishes
// {psi1, psi2, reference}: single-site Z (or position) measurements on the
// edge's complement, the parity observable exp(i*pi*(R-1)) of the edge, and
// the X-product on the edge. psi1 and psi2 must share an edge whose integer
// weights differ by exactly 1 and carry no weight on proper sub-edges of it.
TokenSequence build_antidistinguishing_sequence(const WeightedHypergraph& psi1,
                                                const WeightedHypergraph& psi2,
                                                Setting setting);

struct Certificate {
  double max_triple_product = 0.0;
  std::optional<MeasurementRecord> witness_y;  // outcome attaining the max, if > 0
  bool pass = false;
  std::string to_json() const;
};

// Enumerates the three completed sequences (prefix + suffix), maps outcomes
// to canonical labels (preparation branches to plus/minus, everything else
// by clustering the union of observed values), and reports the maximum over
// outcome strings of the product of the three probabilities. Passes iff
// that maximum is exactly zero.
Certificate check_antidistinguishability(const std::array<TokenSequence, 3>& prefixes,
                                         const TokenSequence& suffix, int n, int k,
                                         EngineKind engine = EngineKind::Dense);

}  // namespace hsmt
