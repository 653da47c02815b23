#pragma once

#include <map>
#include <optional>

#include "hsmt/record.hpp"
#include "hsmt/rng.hpp"
#include "hsmt/token.hpp"
#include "hsmt/unitary_meas.hpp"

namespace hsmt {

// Exact dense simulator of the qubit unit cell; ground truth for the
// scalable engines at small n.

// Applies the multi-controlled phase gate with angle gamma (radians) to the
// edge qubits. Under OnesProjector this is exp(-i*gamma) on basis strings
// with every edge qubit occupied, i.e. a hypergraph weight of -gamma/pi.
void apply_ckz(DenseState& state, const Hyperedge& edge, double gamma,
               CkzConvention conv = CkzConvention::OnesProjector);

// The measured operator: exp(-i sum phi_j X_j) * exp(-i sum theta_w |1><1|_w),
// right factor applied first, as a 2^|beta| matrix. Matrix bit t corresponds
// to the t-th (sorted) vertex of beta; theta keys are subsets of beta.
Eigen::MatrixXcd build_g_unitary(const Hyperedge& beta, const std::vector<double>& phi,
                                 const std::map<Hyperedge, double>& theta);

struct PhaseEstimationOutcome {
  double phase = 0.0;       // eigenphase in (-pi, pi]
  double probability = 0.0;
  DenseState post_state;
};

// All eigenphase-cluster branches with probability above the sampling floor.
std::vector<PhaseEstimationOutcome> measure_g_branches(const DenseState& state,
                                                       const Hyperedge& beta,
                                                       const std::vector<double>& phi,
                                                       const std::map<Hyperedge, double>& theta);

// Born-samples one branch.
PhaseEstimationOutcome measure_g(const DenseState& state, const Hyperedge& beta,
                                 const std::vector<double>& phi,
                                 const std::map<Hyperedge, double>& theta, SplitRng& rng);

// Replay mode: projects onto the branch with the given eigenphase. A forced
// outcome without support is an inconsistent record.
PhaseEstimationOutcome measure_g_forced(const DenseState& state, const Hyperedge& beta,
                                        const std::vector<double>& phi,
                                        const std::map<Hyperedge, double>& theta,
                                        double outcome);

class DenseEngine {
 public:
  DenseEngine(int n, CkzConvention conv = CkzConvention::OnesProjector)
      : n_(n), conv_(conv) {}

  // One trajectory; the branch at token i draws from rng.child(i).
  MeasurementRecord run_sequence_sample(const TokenSequence& tokens, SplitRng rng) const;

  // Exact joint distribution by depth-first branching over eigenphase
  // clusters. max_rows guards against infeasible enumerations.
  OutcomeDistribution run_sequence_enumerate(const TokenSequence& tokens,
                                             size_t max_rows = size_t{1} << 22) const;

  // Enumeration from an arbitrary initial state (used by certificates that
  // compare conditioned preparations directly).
  OutcomeDistribution enumerate_from(const DenseState& initial, const TokenSequence& tokens,
                                     size_t max_rows = size_t{1} << 22) const;

  int n() const { return n_; }

 private:
  int n_;
  CkzConvention conv_;
};

}  // namespace hsmt
