#pragma once

#include <optional>

#include "hsmt/dense_engine.hpp"
#include "hsmt/hypergraph.hpp"
#include "hsmt/record.hpp"
#include "hsmt/rng.hpp"
#include "hsmt/token.hpp"

namespace hsmt {

enum class QubitFlag : uint8_t { Zbasis0, Xplus, Xminus, MeasuredOut0, MeasuredOut1 };

// Latent state of the scalable qubit engine: a weighted hypergraph over the
// X-basis qubits plus per-qubit basis flags. Graph edges only ever touch
// qubits flagged Xplus/Xminus, and a measured-out qubit never reappears.
struct HypergraphLatent {
  int n = 0;
  int k = 0;
  WeightedHypergraph graph;      // weights in units of pi
  std::vector<QubitFlag> flags;
  double global_phase_e = 0.0;   // weight accumulated on the empty edge; debug only
  MeasurementRecord record;
  size_t peak_entries = 0;

  static HypergraphLatent initial(int n, int k) {
    HypergraphLatent l;
    l.n = n;
    l.k = k;
    l.graph = WeightedHypergraph(n, k);
    l.flags.assign(n, QubitFlag::Zbasis0);
    return l;
  }

  bool is_live(int q) const {
    return flags[q] == QubitFlag::Xplus || flags[q] == QubitFlag::Xminus;
  }
  bool is_measured(int q) const {
    return flags[q] == QubitFlag::MeasuredOut0 || flags[q] == QubitFlag::MeasuredOut1;
  }
  int live_x_count() const {
    int c = 0;
    for (int q = 0; q < n; ++q) c += is_live(q);
    return c;
  }
  void note_peak() { peak_entries = std::max(peak_entries, graph.entry_count()); }
};

// Adds e to the edge weight. O(1); all edge qubits must be in the X basis.
void hg_apply_ckz(HypergraphLatent& latent, const Hyperedge& edge, double e);

struct PrepBranch {
  double phase = 0.0;  // recorded eigenphase
  double prob = 1.0;
  bool projects = false;  // false: trivial measurement, flag unchanged
  bool minus = false;     // true: project onto the X-minus eigenstate
};

// Branches of measuring exp(2i*upsilon*X) on a fresh qubit. upsilon = 0 mod
// pi gives a deterministic phase-0 outcome without preparing the qubit.
std::vector<PrepBranch> hg_prep_branches(const HypergraphLatent& latent, int qubit,
                                         double upsilon);
void hg_prep_commit(HypergraphLatent& latent, int qubit, const PrepBranch& b);

// Z measurement with graph contraction: bit 0 deletes every edge containing
// the qubit, bit 1 moves each such weight onto the edge minus the qubit
// (weights landing on the empty edge become recorded global phase).
struct ZBranch {
  int bit = 0;
  double prob = 1.0;
};
std::vector<ZBranch> hg_measure_z_branches(const HypergraphLatent& latent, int qubit);
void hg_measure_z_commit(HypergraphLatent& latent, int qubit, int bit);

// Exact amplitude vector of the residual state once at most k qubits remain
// unmeasured. Bit t of the state corresponds to live_qubits[t].
struct ResidualDense {
  Hyperedge live_qubits;
  DenseState state;
};
ResidualDense hg_dense_handoff(const HypergraphLatent& latent);

struct HgRunStats {
  size_t peak_entries = 0;
};

// End-to-end runner over the token grammar: prep, gates, recap replay,
// Z-measurement contraction, then dense finish for the residual
// measurements. General measurements on more than k live qubits are
// rejected.
class HypergraphEngine {
 public:
  HypergraphEngine(int n, int k) : n_(n), k_(k) {}

  MeasurementRecord run_sequence_sample(const TokenSequence& tokens, SplitRng rng,
                                        HgRunStats* stats = nullptr) const;
  OutcomeDistribution run_sequence_enumerate(const TokenSequence& tokens,
                                             size_t max_rows = size_t{1} << 22,
                                             HgRunStats* stats = nullptr) const;

  int n() const { return n_; }
  int k() const { return k_; }

 private:
  int n_;
  int k_;
};

}  // namespace hsmt
