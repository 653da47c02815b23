#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>

#include "hsmt/hyperedge.hpp"
#include "hsmt/record.hpp"
#include "hsmt/rng.hpp"
#include "hsmt/token.hpp"

namespace hsmt {

enum class ModeFlag : uint8_t { SqueezedQ0, Gkp, MeasuredOut };

// Qumode latent on the residue quotient. Weights are exact rationals with
// denominator d, stored as integer numerators reduced mod 2d (the diagonal
// phases exp(i*pi*(a/d)*prod q) are periodic in each position with period
// 2d, so residues mod 2d are a lossless quotient of the integer lattice).
struct LatticeState {
  int n = 0;
  int k = 0;
  int d = 1;
  std::map<Hyperedge, int64_t> numer;  // numerators in [1, 2d)
  std::vector<ModeFlag> flags;
  std::vector<int> residues;  // valid where MeasuredOut
  int64_t global_num = 0;     // empty-edge numerator; debug only
  MeasurementRecord record;

  static LatticeState initial(int n, int k, int d) {
    LatticeState s;
    s.n = n;
    s.k = k;
    s.d = d;
    s.flags.assign(n, ModeFlag::SqueezedQ0);
    s.residues.assign(n, 0);
    return s;
  }

  int64_t modulus() const { return 2 * int64_t{d}; }

  void add_num(const Hyperedge& e, int64_t delta) {
    int64_t m = modulus();
    delta = ((delta % m) + m) % m;
    if (e.empty()) {
      global_num = (global_num + delta) % m;
      return;
    }
    if (delta == 0) return;
    auto [it, inserted] = numer.try_emplace(e, 0);
    it->second = (it->second + delta) % m;
    if (it->second == 0) numer.erase(it);
  }
};

// Residual dense vector over (2d)^|live| residues once at most k modes
// remain; digit t (base 2d) of the index is the residue of live_modes[t].
struct LatticeResidual {
  Hyperedge live_modes;
  int d = 1;
  Eigen::VectorXcd amps;
};

// Gate: increments the edge weight by e = -gamma/pi, which must be an exact
// multiple of 1/d. Edges touching a position-squeezed or measured mode
// reduce first (q=0 nullifies, a measured residue multiplies in).
void cv_apply_ckz(LatticeState& state, const Hyperedge& edge, double gamma);

// Measurement branches of the preparation token exp(2i*upsilon*p) on a
// fresh mode. upsilon = 0 is trivial; integer upsilon coprime with 2d gives
// 2d equiprobable branches, where branch j projects onto the Fourier mode
// with phase weight j on the vertex (j = 0 is the uniform GKP state).
struct CvPrepBranch {
  double phase = 0.0;
  double prob = 1.0;
  bool projects = false;
  int64_t fourier_j = 0;
};
std::vector<CvPrepBranch> cv_prep_branches(const LatticeState& state, int mode,
                                           double upsilon);
void cv_prep_commit(LatticeState& state, int mode, const CvPrepBranch& b);

// Exact position measurement: uniform over residues on a live mode, residue
// 0 on a squeezed mode. Contracts edges by substituting the residue.
struct CvQBranch {
  int residue = 0;
  double prob = 1.0;
};
std::vector<CvQBranch> cv_measure_q_branches(const LatticeState& state, int mode);
void cv_measure_q_commit(LatticeState& state, int mode, int residue);

LatticeResidual cv_dense_handoff(const LatticeState& state);

// Residue-space operator of a measurement token: shift each mode by phi/2
// (which must be integral) after the diagonal exp(-i sum theta prod q)
// (whose angles must be multiples of pi/d).
Eigen::MatrixXcd cv_build_g_unitary(const LatticeResidual& res, const Hyperedge& beta,
                                    const std::vector<double>& phi,
                                    const std::map<Hyperedge, double>& theta);

// Measures exp(i*pi*(R-1)) for the edge's stabilizer polynomial R, then the
// joint residue-shift prod X_i; Born sampling with projection.
std::pair<double, double> measure_r_then_xproduct(LatticeState& state,
                                                  LatticeResidual& res,
                                                  const Hyperedge& edge, SplitRng& rng);

class QumodeEngine {
 public:
  QumodeEngine(int n, int k, int d = 1) : n_(n), k_(k), d_(d) {
    if (d < 1) throw ValidationError("denominator must be >= 1");
  }

  MeasurementRecord run_sequence_sample(const TokenSequence& tokens, SplitRng rng) const;
  OutcomeDistribution run_sequence_enumerate(const TokenSequence& tokens,
                                             size_t max_rows = size_t{1} << 22) const;

  int n() const { return n_; }
  int k() const { return k_; }
  int d() const { return d_; }

 private:
  int n_;
  int k_;
  int d_;
};

}  // namespace hsmt
