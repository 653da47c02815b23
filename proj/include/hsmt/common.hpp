#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hsmt {

using cplx = std::complex<double>;

// Two eigenphases closer than this (circularly) belong to one measurement
// cluster; degenerate spectra must merge into a single projector.
inline constexpr double kPhaseClusterTol = 1e-9;

// Outcomes with probability below this floor are removed from the sample
// space so that floating-point dust cannot create spurious support.
inline constexpr double kProbFloor = 1e-12;

inline constexpr double kNormTol = 1e-12;
inline constexpr double kCompletenessTol = 1e-10;

enum class EngineKind { Dense, Hypergraph, Qumode };

// Qubit vs qumode rendering of the token grammar.
enum class Setting { Qubit, Qumode };

// The multi-controlled phase gate is diagonal; the two conventions differ in
// which basis string of the edge acquires the phase. OnesProjector applies
// exp(-i*gamma) where all edge qubits are 1, ZerosProjector where all are 0.
enum class CkzConvention { OnesProjector, ZerosProjector };

// Wraps a phase into the canonical branch (-pi, pi].
inline double canon_phase(double x) {
  double y = std::remainder(x, 2.0 * M_PI);
  if (y <= -M_PI) y += 2.0 * M_PI;
  return y;
}

// Circular distance between two phases.
inline double phase_dist(double a, double b) {
  return std::abs(std::remainder(a - b, 2.0 * M_PI));
}

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hsmt
