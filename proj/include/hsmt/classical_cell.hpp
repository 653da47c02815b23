#pragma once

#include <vector>

#include "hsmt/token.hpp"

namespace hsmt {

// Classical phase-space latent of the Hamiltonian unit cell, plus the
// ancilla pair used to read out the last output.
struct ClassicalLatent {
  std::vector<double> q;
  std::vector<double> p;
  double q0 = 0.0;
  double p0 = 1.0;

  static ClassicalLatent zeros(int n) {
    ClassicalLatent l;
    l.q.assign(n, 0.0);
    l.p.assign(n, 0.0);
    return l;
  }
};

struct ClassicalStep {
  ClassicalLatent latent;
  double y = 0.0;
};

// Closed-form composition of the three exactly-integrable flows of one unit
// cell: the gate Hamiltonian gamma * prod_{a in alpha} q_a, then the
// ancilla-coupled diagonal part (sum theta_w prod q) * p0, then the
// ancilla-coupled shift part (sum phi_j p_j) * p0, with a fresh ancilla
// q0 = 0, p0 = 1 each step. The output is the final ancilla position. The
// latent update is polynomial of degree at most k-1 in (q, p).
ClassicalStep classical_unit_cell(const ClassicalLatent& latent, const Token& token);

}  // namespace hsmt
