#pragma once

#include <vector>

#include "hsmt/hyperedge.hpp"
#include "hsmt/kernels.hpp"

namespace hsmt {

// Normalized complex amplitude vector over the 2^n computational basis.
// Index bit q holds the occupation of qubit q.
struct DenseState {
  int n = 0;
  std::vector<cplx> amps;

  static DenseState all_zero(int n_) {
    DenseState s;
    s.n = n_;
    s.amps.assign(size_t{1} << n_, cplx{0, 0});
    s.amps[0] = 1.0;
    return s;
  }

  static DenseState uniform_plus(int n_) {
    DenseState s;
    s.n = n_;
    size_t dim = size_t{1} << n_;
    s.amps.assign(dim, cplx{1.0 / std::sqrt(double(dim)), 0});
    return s;
  }

  size_t dim() const { return amps.size(); }

  double norm2() const { return kern::norm2(amps.data(), amps.size()); }

  void renormalize() {
    double n2 = norm2();
    if (n2 <= 0) throw ValidationError("cannot renormalize zero state");
    kern::scale(amps.data(), amps.size(), 1.0 / std::sqrt(n2));
  }

  void check_norm(double tol = kNormTol) const {
    if (std::abs(norm2() - 1.0) > tol)
      throw ValidationError("state norm drifted beyond tolerance");
  }

  // Diagonal phase on every basis string whose bits match the pattern.
  void phase_where(uint64_t mask, uint64_t match, cplx phase) {
    kern::phase_mask(amps.data(), amps.size(), mask, match, phase);
  }
};

}  // namespace hsmt
