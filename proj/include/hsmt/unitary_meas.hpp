#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hsmt/common.hpp"
#include "hsmt/dense_state.hpp"

namespace hsmt {

// Exact model of phase estimation: a projective measurement onto the
// eigenphase clusters of a unitary, returning the eigenphase modulo 2*pi.

struct PhaseCluster {
  double phase = 0.0;          // representative phase in (-pi, pi]
  Eigen::MatrixXcd basis;      // orthonormal columns spanning the cluster
};

struct UnitarySpectrum {
  int dim = 0;
  std::vector<PhaseCluster> clusters;  // sorted by phase ascending
};

// Decomposes a unitary into eigenphase clusters. Eigenphases that differ
// circularly by less than tol merge into one projector. Throws if u is not
// unitary to 1e-10 or if the cluster projectors fail to resolve the
// identity to 1e-10.
UnitarySpectrum phase_clusters(const Eigen::MatrixXcd& u, double tol = kPhaseClusterTol);

// Branch probabilities of measuring the spectrum on the target qubits of
// the state (targets indexed into the state's qubits, sorted ascending;
// matrix bit t of the spectrum corresponds to targets[t]).
std::vector<double> cluster_probabilities(const DenseState& state,
                                          const std::vector<int>& targets,
                                          const UnitarySpectrum& spec);

// Projects onto one cluster and renormalizes with the given probability.
void project_cluster(DenseState& state, const std::vector<int>& targets,
                     const PhaseCluster& cluster, double prob);

}  // namespace hsmt
