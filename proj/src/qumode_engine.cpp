#include "hsmt/qumode_engine.hpp"

#include <functional>
#include <numeric>
#include <unordered_map>

#include "hsmt/rpoly.hpp"
#include "hsmt/unitary_meas.hpp"

namespace hsmt {

namespace {

int64_t lattice_round(double x, const char* what) {
  double r = std::round(x);
  if (std::abs(x - r) > 1e-9)
    throw ValidationError(std::string(what) + " is not lattice-compatible");
  return static_cast<int64_t>(r);
}

}  // namespace

void cv_apply_ckz(LatticeState& state, const Hyperedge& edge, double gamma) {
  edge.check_range(state.n);
  if (edge.empty() || static_cast<int>(edge.size()) > state.k)
    throw ValidationError("edge cardinality outside [1,k]");
  double e = -gamma / M_PI;
  int64_t a = lattice_round(e * state.d, "edge weight denominator");
  if (a % (2 * int64_t{state.d}) == 0) return;
  std::vector<int> keep;
  for (int q : edge) {
    switch (state.flags[q]) {
      case ModeFlag::SqueezedQ0:
        return;  // q = 0 nullifies the phase
      case ModeFlag::MeasuredOut:
        a *= state.residues[q];
        break;
      case ModeFlag::Gkp:
        keep.push_back(q);
        break;
    }
  }
  state.add_num(Hyperedge(std::move(keep)), a);
}

std::vector<CvPrepBranch> cv_prep_branches(const LatticeState& state, int mode,
                                           double upsilon) {
  if (mode < 0 || mode >= state.n) throw ValidationError("mode out of range");
  if (state.flags[mode] != ModeFlag::SqueezedQ0)
    throw ValidationError("mode already prepared or measured out");
  int64_t u = lattice_round(upsilon, "preparation angle");
  int64_t m = 2 * int64_t{state.d};
  if (u % m == 0) return {CvPrepBranch{0.0, 1.0, false, 0}};
  if (std::gcd(std::abs(u), m) != 1)
    throw ValidationError("preparation angle does not resolve single residue modes");
  std::vector<CvPrepBranch> out;
  for (int64_t j = 0; j < m; ++j) {
    CvPrepBranch b;
    b.phase = canon_phase(M_PI * double(j) * double(u) / state.d);
    b.prob = 1.0 / double(m);
    b.projects = true;
    b.fourier_j = j;
    out.push_back(b);
  }
  return out;
}

void cv_prep_commit(LatticeState& state, int mode, const CvPrepBranch& b) {
  state.record.push_back(b.phase);
  if (!b.projects) return;
  state.flags[mode] = ModeFlag::Gkp;
  if (b.fourier_j != 0) state.add_num(Hyperedge{mode}, b.fourier_j);
}

std::vector<CvQBranch> cv_measure_q_branches(const LatticeState& state, int mode) {
  if (mode < 0 || mode >= state.n) throw ValidationError("mode out of range");
  switch (state.flags[mode]) {
    case ModeFlag::MeasuredOut:
      throw ValidationError("mode already measured out");
    case ModeFlag::SqueezedQ0:
      return {CvQBranch{0, 1.0}};
    case ModeFlag::Gkp: {
      int m = 2 * state.d;
      std::vector<CvQBranch> out;
      for (int r = 0; r < m; ++r) out.push_back(CvQBranch{r, 1.0 / m});
      return out;
    }
  }
  return {};
}

void cv_measure_q_commit(LatticeState& state, int mode, int residue) {
  state.flags[mode] = ModeFlag::MeasuredOut;
  state.residues[mode] = residue;
  std::vector<std::pair<Hyperedge, int64_t>> touched;
  for (const auto& [e, a] : state.numer)
    if (e.contains(mode)) touched.push_back({e, a});
  for (const auto& [e, a] : touched) {
    state.numer.erase(e);
    state.add_num(e.without(mode), a * residue);
  }
}

LatticeResidual cv_dense_handoff(const LatticeState& state) {
  std::vector<int> live;
  for (int q = 0; q < state.n; ++q)
    if (state.flags[q] != ModeFlag::MeasuredOut) live.push_back(q);
  if (static_cast<int>(live.size()) > state.k)
    throw ValidationError("dense handoff requires at most k unmeasured modes");

  LatticeResidual out;
  out.live_modes = Hyperedge(live);
  out.d = state.d;
  const int m = static_cast<int>(live.size());
  const int base = 2 * state.d;
  size_t dim = 1;
  for (int t = 0; t < m; ++t) dim *= base;
  out.amps = Eigen::VectorXcd::Zero(dim);

  int gkp_count = 0;
  for (int q : live) gkp_count += state.flags[q] == ModeFlag::Gkp;
  const double mag = std::pow(1.0 / double(base), 0.5 * gkp_count);

  std::vector<int64_t> digits(m, 0);
  for (size_t idx = 0; idx < dim; ++idx) {
    size_t rem = idx;
    bool allowed = true;
    for (int t = 0; t < m; ++t) {
      digits[t] = rem % base;
      rem /= base;
      if (state.flags[live[t]] == ModeFlag::SqueezedQ0 && digits[t] != 0) allowed = false;
    }
    if (!allowed) continue;
    int64_t num = state.global_num;
    for (const auto& [e, a] : state.numer) {
      int64_t prod = 1;
      for (int q : e) prod *= digits[out.live_modes.index_of(q)];
      num += a * prod;
    }
    out.amps(idx) = std::polar(mag, M_PI * double(num) / state.d);
  }
  return out;
}

Eigen::MatrixXcd cv_build_g_unitary(const LatticeResidual& res, const Hyperedge& beta,
                                    const std::vector<double>& phi,
                                    const std::map<Hyperedge, double>& theta) {
  const int m = static_cast<int>(res.live_modes.size());
  const int base = 2 * res.d;
  const size_t dim = res.amps.size();
  if (phi.size() != beta.size()) throw ValidationError("phi length != |beta|");

  std::vector<int64_t> shift(m, 0);
  for (size_t t = 0; t < beta.size(); ++t) {
    int local = res.live_modes.index_of(beta[t]);
    if (local < 0) throw ValidationError("measurement targets a measured-out mode");
    shift[local] = lattice_round(phi[t] / 2.0, "shift amount");
  }
  struct DiagTerm {
    std::vector<int> locals;
    double angle;
  };
  std::vector<DiagTerm> terms;
  for (const auto& [w, v] : theta) {
    if (!w.subset_of(beta)) throw ValidationError("theta key not a subset of beta");
    lattice_round(v * res.d / M_PI, "theta angle");
    DiagTerm dt;
    dt.angle = v;
    for (int q : w) dt.locals.push_back(res.live_modes.index_of(q));
    terms.push_back(std::move(dt));
  }

  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<int64_t> digits(m);
  for (size_t idx = 0; idx < dim; ++idx) {
    size_t rem = idx;
    for (int t = 0; t < m; ++t) {
      digits[t] = rem % base;
      rem /= base;
    }
    double angle = 0;
    for (const auto& dt : terms) {
      int64_t prod = 1;
      for (int l : dt.locals) prod *= digits[l];
      angle -= dt.angle * double(prod);
    }
    size_t target = 0;
    size_t mult = 1;
    for (int t = 0; t < m; ++t) {
      int64_t nd = (digits[t] + shift[t]) % base;
      if (nd < 0) nd += base;
      target += size_t(nd) * mult;
      mult *= base;
    }
    g(target, idx) = std::polar(1.0, angle);
  }
  return g;
}

namespace {

std::vector<double> full_cluster_probs(const Eigen::VectorXcd& amps,
                                       const UnitarySpectrum& spec) {
  std::vector<double> probs;
  probs.reserve(spec.clusters.size());
  double total = 0;
  for (const auto& c : spec.clusters) {
    double p = (c.basis.adjoint() * amps).squaredNorm();
    probs.push_back(p);
    total += p;
  }
  if (std::abs(total - 1.0) > kCompletenessTol)
    throw ValidationError("cluster probabilities do not sum to one");
  return probs;
}

void full_project(Eigen::VectorXcd& amps, const PhaseCluster& c, double prob) {
  amps = c.basis * (c.basis.adjoint() * amps);
  amps /= std::sqrt(prob);
}

struct RunState {
  LatticeState lattice;
  std::optional<LatticeResidual> residual;
  size_t recap_seen = 0;
};

struct StepBranch {
  double outcome = 0.0;
  double prob = 1.0;
  int tag = 0;
};

class Runner {
 public:
  Runner(int n, int k, int d, const TokenSequence& tokens)
      : n_(n), k_(k), d_(d), tokens_(tokens) {
    for (const Token& t : tokens) t.validate(n);
  }

  size_t token_count() const { return tokens_.size(); }

  std::vector<StepBranch> advance(RunState& st, size_t i) const {
    const Token& t = tokens_[i];
    if (t.alpha) {
      if (st.residual) throw ValidationError("gate after dense handoff unsupported");
      cv_apply_ckz(st.lattice, *t.alpha, t.gamma);
    }
    if (!t.beta) {
      if (t.is_recap()) {
        if (st.recap_seen >= st.lattice.record.size())
          throw ValidationError("recap beyond recorded outcomes");
        st.lattice.record.push_back(st.lattice.record[st.recap_seen++]);
      } else {
        st.lattice.record.push_back(0.0);
      }
      return {};
    }
    return measurement_branches(st, i);
  }

  void commit(RunState& st, size_t i, const StepBranch& b) const {
    const Token& t = tokens_[i];
    if (st.residual) {
      if (is_exact_q(t)) {
        commit_residual_q(st, (*t.beta)[0], b);
        return;
      }
      const auto& spec = residual_spec(st, i);
      auto probs = full_cluster_probs(st.residual->amps, spec);
      full_project(st.residual->amps, spec.clusters[b.tag], probs[b.tag]);
      st.lattice.record.push_back(b.outcome);
      return;
    }
    int q = (*t.beta)[0];
    if (t.theta.empty()) {
      CvPrepBranch pb;
      pb.phase = b.outcome;
      pb.prob = b.prob;
      pb.projects = true;
      pb.fourier_j = b.tag;
      cv_prep_commit(st.lattice, q, pb);
    } else {
      cv_measure_q_commit(st.lattice, q, b.tag);
      st.lattice.record.push_back(b.outcome);
    }
  }

 private:
  static bool is_exact_q(const Token& t) {
    if (!t.beta || t.beta->size() != 1 || t.theta.size() != 1) return false;
    const auto& [w, v] = *t.theta.begin();
    if (!(w == *t.beta) || v != 0.0) return false;
    for (double p : t.phi)
      if (p != 0.0) return false;
    return true;
  }

  std::vector<StepBranch> measurement_branches(RunState& st, size_t i) const {
    const Token& t = tokens_[i];
    if (!st.residual) {
      if (t.beta->size() == 1 && t.theta.empty()) {
        bool trivial = true;
        for (double p : t.phi)
          if (phase_dist(p, 0.0) >= kPhaseClusterTol) trivial = false;
        if (trivial) {
          st.lattice.record.push_back(0.0);
          return {};
        }
        double upsilon = -t.phi[0] / 2.0;
        auto pbs = cv_prep_branches(st.lattice, (*t.beta)[0], upsilon);
        if (pbs.size() == 1 && !pbs[0].projects) {
          st.lattice.record.push_back(pbs[0].phase);
          return {};
        }
        std::vector<StepBranch> out;
        for (const auto& pb : pbs)
          out.push_back({pb.phase, pb.prob, static_cast<int>(pb.fourier_j)});
        return out;
      }
      if (is_exact_q(t)) {
        auto qbs = cv_measure_q_branches(st.lattice, (*t.beta)[0]);
        if (qbs.size() == 1) {
          cv_measure_q_commit(st.lattice, (*t.beta)[0], qbs[0].residue);
          st.lattice.record.push_back(0.0);
          return {};
        }
        std::vector<StepBranch> out;
        for (const auto& qb : qbs)
          out.push_back({double(qb.residue), qb.prob, qb.residue});
        return out;
      }
      st.residual = cv_dense_handoff(st.lattice);
    }
    if (is_exact_q(t)) return residual_q_branches(st, (*t.beta)[0]);
    const auto& spec = residual_spec(st, i);
    auto probs = full_cluster_probs(st.residual->amps, spec);
    std::vector<StepBranch> out;
    for (size_t c = 0; c < probs.size(); ++c)
      if (probs[c] >= kProbFloor)
        out.push_back({spec.clusters[c].phase, probs[c], static_cast<int>(c)});
    return out;
  }

  std::vector<StepBranch> residual_q_branches(const RunState& st, int mode) const {
    int local = st.residual->live_modes.index_of(mode);
    if (local < 0) throw ValidationError("mode already measured out");
    const int base = 2 * d_;
    size_t stride = 1;
    for (int t = 0; t < local; ++t) stride *= base;
    std::vector<double> probs(base, 0.0);
    for (int idx = 0; idx < st.residual->amps.size(); ++idx)
      probs[(idx / stride) % base] += std::norm(st.residual->amps(idx));
    std::vector<StepBranch> out;
    for (int r = 0; r < base; ++r)
      if (probs[r] >= kProbFloor) out.push_back({double(r), probs[r], r});
    return out;
  }

  void commit_residual_q(RunState& st, int mode, const StepBranch& b) const {
    int local = st.residual->live_modes.index_of(mode);
    const int base = 2 * d_;
    size_t stride = 1;
    for (int t = 0; t < local; ++t) stride *= base;
    for (int idx = 0; idx < st.residual->amps.size(); ++idx)
      if (int((idx / stride) % base) != b.tag) st.residual->amps(idx) = 0;
    st.residual->amps /= std::sqrt(b.prob);
    st.lattice.record.push_back(b.outcome);
  }

  const UnitarySpectrum& residual_spec(const RunState& st, size_t i) const {
    auto it = spec_cache_.find(i);
    if (it != spec_cache_.end()) return it->second;
    const Token& t = tokens_[i];
    auto spec = phase_clusters(
        cv_build_g_unitary(*st.residual, *t.beta, t.phi, t.theta));
    return spec_cache_.emplace(i, std::move(spec)).first->second;
  }

  int n_;
  int k_;
  int d_;
  const TokenSequence& tokens_;
  mutable std::unordered_map<size_t, UnitarySpectrum> spec_cache_;
};

}  // namespace

std::pair<double, double> measure_r_then_xproduct(LatticeState& state,
                                                  LatticeResidual& res,
                                                  const Hyperedge& edge, SplitRng& rng) {
  if (!(res.live_modes == edge))
    throw ValidationError("live mode set must equal the measured edge");
  MultilinearPoly r = compute_r_qumode(edge);
  std::map<Hyperedge, double> theta;
  for (const auto& [vars, c] : r.terms) theta[vars] = -M_PI * double(c);
  std::vector<double> zero_phi(edge.size(), 0.0);

  auto spec_r = phase_clusters(cv_build_g_unitary(res, edge, zero_phi, theta));
  auto probs_r = full_cluster_probs(res.amps, spec_r);
  std::vector<size_t> live;
  std::vector<double> w;
  for (size_t c = 0; c < probs_r.size(); ++c)
    if (probs_r[c] >= kProbFloor) {
      live.push_back(c);
      w.push_back(probs_r[c]);
    }
  size_t pick_r = live[rng.pick(w)];
  full_project(res.amps, spec_r.clusters[pick_r], probs_r[pick_r]);
  double out_r = spec_r.clusters[pick_r].phase;
  state.record.push_back(out_r);

  std::vector<double> shift_phi(edge.size(), 2.0);
  auto spec_x = phase_clusters(cv_build_g_unitary(res, edge, shift_phi, {}));
  auto probs_x = full_cluster_probs(res.amps, spec_x);
  live.clear();
  w.clear();
  for (size_t c = 0; c < probs_x.size(); ++c)
    if (probs_x[c] >= kProbFloor) {
      live.push_back(c);
      w.push_back(probs_x[c]);
    }
  size_t pick_x = live[rng.pick(w)];
  full_project(res.amps, spec_x.clusters[pick_x], probs_x[pick_x]);
  double out_x = spec_x.clusters[pick_x].phase;
  state.record.push_back(out_x);
  return {out_r, out_x};
}

MeasurementRecord QumodeEngine::run_sequence_sample(const TokenSequence& tokens,
                                                    SplitRng rng) const {
  Runner runner(n_, k_, d_, tokens);
  RunState st;
  st.lattice = LatticeState::initial(n_, k_, d_);
  for (size_t i = 0; i < runner.token_count(); ++i) {
    auto branches = runner.advance(st, i);
    if (branches.empty()) continue;
    std::vector<double> w(branches.size());
    for (size_t b = 0; b < branches.size(); ++b) w[b] = branches[b].prob;
    SplitRng token_rng = rng.child(i);
    runner.commit(st, i, branches[token_rng.pick(w)]);
  }
  return st.lattice.record;
}

OutcomeDistribution QumodeEngine::run_sequence_enumerate(const TokenSequence& tokens,
                                                         size_t max_rows) const {
  Runner runner(n_, k_, d_, tokens);
  OutcomeDistribution dist;
  std::function<void(RunState&, size_t, double)> walk = [&](RunState& st, size_t i,
                                                            double p) {
    if (i == runner.token_count()) {
      if (dist.rows.size() >= max_rows)
        throw InfeasibleError("enumeration exceeds row budget");
      dist.rows.push_back({st.lattice.record, p});
      return;
    }
    auto branches = runner.advance(st, i);
    if (branches.empty()) {
      walk(st, i + 1, p);
      return;
    }
    for (const auto& b : branches) {
      RunState next = st;
      runner.commit(next, i, b);
      walk(next, i + 1, p * b.prob);
    }
  };
  RunState st;
  st.lattice = LatticeState::initial(n_, k_, d_);
  walk(st, 0, 1.0);
  dist.normalize_order();
  return dist;
}

}  // namespace hsmt
