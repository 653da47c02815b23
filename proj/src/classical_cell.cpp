#include "hsmt/classical_cell.hpp"

namespace hsmt {

namespace {

double product_over(const std::vector<double>& q, const Hyperedge& vars, int skip) {
  double prod = 1.0;
  for (int v : vars)
    if (v != skip) prod *= q[v];
  return prod;
}

}  // namespace

ClassicalStep classical_unit_cell(const ClassicalLatent& latent, const Token& token) {
  ClassicalStep out;
  out.latent = latent;
  out.latent.q0 = 0.0;
  out.latent.p0 = 1.0;
  auto& q = out.latent.q;
  auto& p = out.latent.p;
  const int n = static_cast<int>(q.size());
  token.validate(n);

  // Gate flow: momentum kick from gamma * prod_{a in alpha} q_a.
  if (token.alpha && token.gamma != 0.0)
    for (int a : *token.alpha) p[a] -= token.gamma * product_over(q, *token.alpha, a);

  // Diagonal flow (sum theta_w prod q) * p0: kicks p and accumulates the
  // readout; positions are frozen here.
  for (const auto& [w, theta] : token.theta) {
    if (theta == 0.0) continue;
    for (int a : w) p[a] -= theta * product_over(q, w, a);
    out.latent.q0 += theta * product_over(q, w, -1);
  }

  // Shift flow (sum phi_j p_j) * p0: moves positions by phi and reads the
  // momenta into the ancilla; momenta are frozen here.
  if (token.beta) {
    const auto& beta = *token.beta;
    for (size_t j = 0; j < beta.size(); ++j) {
      out.latent.q0 += token.phi[j] * p[beta[j]];
      q[beta[j]] += token.phi[j];
    }
  }

  out.y = out.latent.q0;
  return out;
}

}  // namespace hsmt
