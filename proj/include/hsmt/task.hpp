#pragma once

#include <array>
#include <string>
#include <vector>

#include "hsmt/record.hpp"
#include "hsmt/rng.hpp"
#include "hsmt/token.hpp"

namespace hsmt {

// Smooth 2*pi-periodic bump: 1 on [pi/2, pi] mod 2*pi, 0 on [3*pi/2, 2*pi]
// mod 2*pi, values in [0,1] everywhere (the "bubble wrap" profile used to
// tie preparation angles to the gate-weight norm).
double bubble_wrap(double x);

// Structured tail measurement spec. Raw carries explicit (phi, theta);
// RPoly and XProd are rendered per setting: the parity observable
// exp(i*pi*(R-1)) of the remaining k-edge and the X-product on it.
struct TailSpec {
  enum class Kind { Raw, RPoly, XProd };
  Kind kind = Kind::Raw;
  std::vector<double> phi;
  std::map<Hyperedge, double> theta;  // keys within the remaining k-subset

  static TailSpec raw(std::vector<double> phi_, std::map<Hyperedge, double> theta_) {
    return TailSpec{Kind::Raw, std::move(phi_), std::move(theta_)};
  }
  static TailSpec rpoly() { return TailSpec{Kind::RPoly, {}, {}}; }
  static TailSpec xprod() { return TailSpec{Kind::XProd, {}, {}}; }

  bool operator==(const TailSpec&) const = default;
};

// One task instance: preparation angles, gate weights over the colex edge
// order, the ordered single-site measurement targets b, and the tail specs
// acting on the complement of b.
struct HsmtInstance {
  int n = 0;
  int k = 0;
  long long ell = 0;
  std::vector<double> upsilon;  // length n
  std::vector<double> gamma;    // length C(n,k), colex edge order, radians
  std::vector<int> b;           // n-k distinct targets (0-based internally)
  std::vector<TailSpec> tail;

  void validate() const;
  Hyperedge remaining_edge() const;  // complement of b, size k
  long long min_ell() const;

  std::string to_json() const;
  static HsmtInstance from_json(const std::string& s);

  bool operator==(const HsmtInstance&) const = default;
};

// Renders the instance into its token sequence: n preparation tokens
// (0, i, 0, -2*upsilon_i, 0), the C(n,k) gate tokens (v, 0, -gamma_v, 0, 0)
// in colex order, n recap queries, the n-k single-site measurement tokens
// (theta = 1 for qubits, the exact-position marker theta = 0 for qumodes),
// then the tail measurements on the remaining k-subset.
TokenSequence build_sequence(const HsmtInstance& inst, Setting setting);

// A translation is correct when the recap block repeats the preparation
// block verbatim, the gate block is all zeros, and the whole record lies in
// the support of the quantum distribution (checked by enumeration).
bool validate_translation(const HsmtInstance& inst, const MeasurementRecord& y,
                          EngineKind engine = EngineKind::Hypergraph);

// Three prep+gate prefixes preparing pairwise-inequivalent latents (the
// unweighted state, the single-edge weight-1 state, and the computational
// reference) plus the shared antidistinguishing suffix.
struct ContextualTriple {
  std::array<TokenSequence, 3> prefixes;
  TokenSequence suffix;
  Hyperedge edge;
};
ContextualTriple build_contextual_triple(int n, int k,
                                         Setting setting = Setting::Qubit);

// Alignment of the preparation block against the constrained phase
// structure: Strict requires kappa == 0 for every token at t <= tau1;
// PrepExempt additionally admits the single-site X-preparation form there.
enum class PrepAlignment { Strict, PrepExempt };

// True iff tokens at t <= tau1 carry no measurement content (up to the
// preparation exemption), tokens in (tau1, tau2] are single-site Z-type
// measurements with gamma = 0 and distinct targets (exactly tau2 - tau1 of
// them), and every token after tau2 has gamma = 0.
bool validate_phase_structure(const TokenSequence& tokens, size_t tau1, size_t tau2,
                              PrepAlignment alignment = PrepAlignment::PrepExempt);

// Seeded random instance generator. upsilon_mode: "bubble" ties every
// upsilon to bubble_wrap of the squared gate norm, "zero" and "one" fix it,
// "random" draws uniforms. anti_tail emits the RPoly+XProd suffix instead
// of raw random measurements; lattice restricts gammas to multiples of
// pi/denominator so the qumode engine accepts the instance.
struct GenOptions {
  std::string upsilon_mode = "bubble";
  bool anti_tail = false;
  bool lattice = false;
  int denominator = 1;
};
HsmtInstance generate_instance(int n, int k, long long ell, SplitRng& rng,
                               const GenOptions& opts = {});

// Canonical discrete relabeling of a record produced by running the
// instance under the given setting; used for the qubit/qumode mod-2
// correspondence, where outcome values differ but branch structure must
// agree. Requires denominator 1 in the qumode setting.
std::vector<int> labels_for_instance(const HsmtInstance& inst, Setting setting,
                                     const MeasurementRecord& y);

OutcomeDistribution relabel_distribution(const HsmtInstance& inst, Setting setting,
                                         const OutcomeDistribution& dist);

}  // namespace hsmt
