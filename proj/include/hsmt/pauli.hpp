#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>

#include "hsmt/common.hpp"

namespace hsmt {

// Pauli string in X/Z normal form: i^phase_pow * prod_j X_j^{x_j} Z_j^{z_j}.
// Multiplication is sign-exact under XZ = -ZX per qubit.
struct PauliString {
  int n = 0;
  uint64_t x = 0;
  uint64_t z = 0;
  uint8_t phase_pow = 0;  // power of i: 0,1,2,3 <-> +1, i, -1, -i

  static PauliString identity(int n) { return PauliString{n, 0, 0, 0}; }
  static PauliString px(int n, int q) { return PauliString{n, uint64_t{1} << q, 0, 0}; }
  static PauliString pz(int n, int q) { return PauliString{n, 0, uint64_t{1} << q, 0}; }

  PauliString operator*(const PauliString& o) const {
    if (n != o.n) throw ValidationError("pauli size mismatch");
    PauliString r;
    r.n = n;
    r.x = x ^ o.x;
    r.z = z ^ o.z;
    r.phase_pow = static_cast<uint8_t>(
        (phase_pow + o.phase_pow + 2 * __builtin_popcountll(z & o.x)) & 3);
    return r;
  }

  PauliString negated() const {
    PauliString r = *this;
    r.phase_pow = static_cast<uint8_t>((r.phase_pow + 2) & 3);
    return r;
  }

  bool commutes_with(const PauliString& o) const {
    return (__builtin_popcountll(x & o.z) + __builtin_popcountll(z & o.x)) % 2 == 0;
  }

  bool is_identity() const { return x == 0 && z == 0 && phase_pow == 0; }
  bool is_minus_identity() const { return x == 0 && z == 0 && phase_pow == 2; }

  cplx scalar_phase() const {
    static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[phase_pow & 3];
  }

  Eigen::MatrixXcd dense() const;
  std::string str() const;

  bool operator==(const PauliString&) const = default;
};

struct MagicSquare {
  std::array<std::array<PauliString, 3>, 3> entries;

  // The standard two-qubit square whose rows and columns each commute and
  // multiply to +I except the last column, which gives -I.
  static MagicSquare standard_two_qubit();
};

struct LineReport {
  bool commuting = false;
  PauliString product;
};

struct MagicSquareReport {
  std::array<LineReport, 3> rows;
  std::array<LineReport, 3> cols;

  bool all_commuting() const;
  // rows multiply to +I, columns to (+I, +I, -I)
  bool has_standard_parity() const;
};

MagicSquareReport verify_magic_square(const MagicSquare& sq);

std::string report_to_json(const MagicSquareReport& r);

}  // namespace hsmt
