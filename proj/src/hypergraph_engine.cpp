#include "hsmt/hypergraph_engine.hpp"

#include <functional>
#include <unordered_map>

namespace hsmt {

void hg_apply_ckz(HypergraphLatent& latent, const Hyperedge& edge, double e) {
  for (int q : edge)
    if (!latent.is_live(q))
      throw ValidationError("gate edge touches a qubit outside the X basis");
  if (e == 0.0) return;
  latent.graph.add_weight(edge, e);
  latent.note_peak();
}

std::vector<PrepBranch> hg_prep_branches(const HypergraphLatent& latent, int qubit,
                                         double upsilon) {
  if (qubit < 0 || qubit >= latent.n) throw ValidationError("qubit out of range");
  if (latent.flags[qubit] != QubitFlag::Zbasis0)
    throw ValidationError("qubit already prepared or measured out");
  double plus = canon_phase(2.0 * upsilon);
  double minus = canon_phase(-2.0 * upsilon);
  if (phase_dist(plus, minus) < kPhaseClusterTol) {
    // exp(2i*upsilon*X) is proportional to the identity: a trivial
    // measurement with a deterministic phase and no projection.
    return {PrepBranch{plus, 1.0, false, false}};
  }
  return {PrepBranch{plus, 0.5, true, false}, PrepBranch{minus, 0.5, true, true}};
}

void hg_prep_commit(HypergraphLatent& latent, int qubit, const PrepBranch& b) {
  latent.record.push_back(b.phase);
  if (!b.projects) return;
  latent.flags[qubit] = b.minus ? QubitFlag::Xminus : QubitFlag::Xplus;
  // The X-minus eigenstate is the plus state with a weight-1 vertex edge, so
  // one sign convention covers all contraction rules.
  if (b.minus) latent.graph.add_weight(Hyperedge{qubit}, 1.0);
  latent.note_peak();
}

std::vector<ZBranch> hg_measure_z_branches(const HypergraphLatent& latent, int qubit) {
  if (qubit < 0 || qubit >= latent.n) throw ValidationError("qubit out of range");
  if (latent.is_measured(qubit)) throw ValidationError("qubit already measured out");
  if (latent.flags[qubit] == QubitFlag::Zbasis0) return {ZBranch{0, 1.0}};
  return {ZBranch{0, 0.5}, ZBranch{1, 0.5}};
}

void hg_measure_z_commit(HypergraphLatent& latent, int qubit, int bit) {
  latent.flags[qubit] = bit ? QubitFlag::MeasuredOut1 : QubitFlag::MeasuredOut0;
  std::vector<std::pair<Hyperedge, double>> touched;
  for (const auto& [e, w] : latent.graph.weights())
    if (e.contains(qubit)) touched.push_back({e, w});
  for (const auto& [e, w] : touched) {
    latent.graph.erase(e);
    if (bit) {
      Hyperedge rest = e.without(qubit);
      if (rest.empty())
        latent.global_phase_e += w;
      else
        latent.graph.add_weight(rest, w);
    }
  }
  latent.note_peak();
}

ResidualDense hg_dense_handoff(const HypergraphLatent& latent) {
  std::vector<int> live;
  for (int q = 0; q < latent.n; ++q)
    if (!latent.is_measured(q)) live.push_back(q);
  if (static_cast<int>(live.size()) > latent.k)
    throw ValidationError("dense handoff requires at most k unmeasured qubits");

  ResidualDense out;
  out.live_qubits = Hyperedge(live);
  const int m = static_cast<int>(live.size());
  out.state.n = m;
  out.state.amps.assign(size_t{1} << m, cplx{0, 0});

  int x_count = 0;
  uint64_t z0_mask = 0;
  for (int t = 0; t < m; ++t) {
    if (latent.is_live(live[t]))
      ++x_count;
    else
      z0_mask |= uint64_t{1} << t;
  }
  const double mag = std::pow(0.5, 0.5 * x_count);
  for (uint64_t z = 0; z < (uint64_t{1} << m); ++z) {
    if (z & z0_mask) continue;  // unprepared qubits stay in |0>
    double e_total = latent.global_phase_e;
    for (const auto& [edge, w] : latent.graph.weights()) {
      bool all = true;
      for (int q : edge) {
        int t = out.live_qubits.index_of(q);
        if (t < 0 || !(z >> t & 1)) {
          all = false;
          break;
        }
      }
      if (all) e_total += w;
    }
    out.state.amps[z] = std::polar(mag, M_PI * e_total);
  }
  return out;
}

namespace {

bool all_near_zero(const std::vector<double>& v) {
  for (double x : v)
    if (phase_dist(x, 0.0) >= kPhaseClusterTol) return false;
  return true;
}

// Run-time state for one branch of a trajectory.
struct RunState {
  HypergraphLatent latent;
  std::optional<ResidualDense> residual;
  size_t recap_seen = 0;
};

struct StepBranch {
  double phase = 0.0;
  double prob = 1.0;
  int tag = 0;
};

class Runner {
 public:
  Runner(int n, int k, const TokenSequence& tokens) : n_(n), k_(k), tokens_(tokens) {
    for (const Token& t : tokens) t.validate(n);
  }

  // Applies the deterministic part of token i (gate, recap, trivial
  // measurement). Returns measurement branches if the token branches; in
  // that case the state is untouched and commit() must be called.
  std::vector<StepBranch> advance(RunState& st, size_t i) const {
    const Token& t = tokens_[i];
    if (t.alpha) apply_gate(st, *t.alpha, t.gamma);
    if (!t.beta) {
      if (t.is_recap()) {
        if (st.recap_seen >= st.latent.record.size())
          throw ValidationError("recap beyond recorded outcomes");
        st.latent.record.push_back(st.latent.record[st.recap_seen++]);
      } else {
        st.latent.record.push_back(0.0);
      }
      return {};
    }
    return measurement_branches(st, i);
  }

  void commit(RunState& st, size_t i, const StepBranch& b) const {
    const Token& t = tokens_[i];
    if (st.residual) {
      const auto& spec = residual_spec(st, i);
      std::vector<int> targets = local_targets(*st.residual, *t.beta);
      std::vector<double> probs =
          cluster_probabilities(st.residual->state, targets, spec);
      project_cluster(st.residual->state, targets, spec.clusters[b.tag], probs[b.tag]);
      st.residual->state.check_norm();
      st.latent.record.push_back(b.phase);
      return;
    }
    int q = (*t.beta)[0];
    if (t.theta.empty()) {
      PrepBranch pb;
      pb.phase = b.phase;
      pb.prob = b.prob;
      pb.projects = true;
      pb.minus = b.tag == 1;
      hg_prep_commit(st.latent, q, pb);
    } else {
      hg_measure_z_commit(st.latent, q, b.tag);
      st.latent.record.push_back(b.phase);
    }
  }

  size_t token_count() const { return tokens_.size(); }

 private:
  void apply_gate(RunState& st, const Hyperedge& edge, double gamma) const {
    double e = -gamma / M_PI;
    if (st.residual) {
      for (int q : edge)
        if (st.residual->live_qubits.index_of(q) < 0)
          throw ValidationError("gate edge touches a measured-out qubit");
      apply_ckz(st.residual->state, Hyperedge(local_targets(*st.residual, edge)), gamma);
      return;
    }
    // Reduce the edge against Z-basis facts: a |0> qubit nullifies the
    // projector, a measured 1 drops out of it.
    std::vector<int> keep;
    bool nullified = false;
    for (int q : edge) {
      switch (st.latent.flags[q]) {
        case QubitFlag::Zbasis0:
        case QubitFlag::MeasuredOut0:
          nullified = true;
          break;
        case QubitFlag::MeasuredOut1:
          break;
        default:
          keep.push_back(q);
      }
      if (nullified) break;
    }
    if (!nullified && e != 0.0) {
      if (keep.empty())
        st.latent.global_phase_e += e;
      else
        hg_apply_ckz(st.latent, Hyperedge(std::move(keep)), e);
    }
  }

  std::vector<StepBranch> measurement_branches(RunState& st, size_t i) const {
    const Token& t = tokens_[i];
    if (!st.residual) {
      if (t.beta->size() == 1 && t.theta.empty()) {
        if (all_near_zero(t.phi)) {
          st.latent.record.push_back(0.0);  // identity measurement
          return {};
        }
        double upsilon = -t.phi[0] / 2.0;
        int q = (*t.beta)[0];
        auto pbs = hg_prep_branches(st.latent, q, upsilon);
        if (pbs.size() == 1 && !pbs[0].projects) {
          st.latent.record.push_back(pbs[0].phase);
          return {};
        }
        std::vector<StepBranch> out;
        for (const auto& pb : pbs)
          out.push_back({pb.phase, pb.prob, pb.minus ? 1 : 0});
        return out;
      }
      if (t.beta->size() == 1 && t.theta.size() == 1 &&
          t.theta.begin()->first == *t.beta && all_near_zero(t.phi)) {
        double tv = t.theta.begin()->second;
        double one_phase = canon_phase(-tv);
        if (phase_dist(one_phase, 0.0) < kPhaseClusterTol) {
          st.latent.record.push_back(0.0);
          return {};
        }
        int q = (*t.beta)[0];
        auto zbs = hg_measure_z_branches(st.latent, q);
        if (zbs.size() == 1) {
          hg_measure_z_commit(st.latent, q, 0);
          st.latent.record.push_back(0.0);
          return {};
        }
        return {StepBranch{0.0, 0.5, 0}, StepBranch{one_phase, 0.5, 1}};
      }
      // General measurement: only defined once at most k qubits survive.
      st.residual = hg_dense_handoff(st.latent);
    }
    const auto& spec = residual_spec(st, i);
    std::vector<int> targets = local_targets(*st.residual, *t.beta);
    std::vector<double> probs = cluster_probabilities(st.residual->state, targets, spec);
    std::vector<StepBranch> out;
    for (size_t c = 0; c < probs.size(); ++c)
      if (probs[c] >= kProbFloor)
        out.push_back({spec.clusters[c].phase, probs[c], static_cast<int>(c)});
    return out;
  }

  std::vector<int> local_targets(const ResidualDense& res, const Hyperedge& beta) const {
    std::vector<int> out;
    for (int q : beta) {
      int t = res.live_qubits.index_of(q);
      if (t < 0) throw ValidationError("measurement targets a measured-out qubit");
      out.push_back(t);
    }
    return out;
  }

  const UnitarySpectrum& residual_spec(const RunState& st, size_t i) const {
    auto it = spec_cache_.find(i);
    if (it != spec_cache_.end()) return it->second;
    const Token& t = tokens_[i];
    // Token theta/phi act on beta; relabel to the residual's local qubits.
    Hyperedge local(local_targets(*st.residual, *t.beta));
    std::map<Hyperedge, double> theta_local;
    for (const auto& [w, v] : t.theta) {
      std::vector<int> lv;
      for (int q : w) lv.push_back(st.residual->live_qubits.index_of(q));
      theta_local[Hyperedge(lv)] = v;
    }
    // phi stays aligned because beta and live_qubits are both sorted.
    auto spec = phase_clusters(build_g_unitary(local, t.phi, theta_local));
    return spec_cache_.emplace(i, std::move(spec)).first->second;
  }

  int n_;
  int k_;
  const TokenSequence& tokens_;
  mutable std::unordered_map<size_t, UnitarySpectrum> spec_cache_;
};

}  // namespace

MeasurementRecord HypergraphEngine::run_sequence_sample(const TokenSequence& tokens,
                                                        SplitRng rng,
                                                        HgRunStats* stats) const {
  Runner runner(n_, k_, tokens);
  RunState st;
  st.latent = HypergraphLatent::initial(n_, k_);
  for (size_t i = 0; i < runner.token_count(); ++i) {
    auto branches = runner.advance(st, i);
    if (branches.empty()) continue;
    std::vector<double> w(branches.size());
    for (size_t b = 0; b < branches.size(); ++b) w[b] = branches[b].prob;
    SplitRng token_rng = rng.child(i);
    runner.commit(st, i, branches[token_rng.pick(w)]);
  }
  if (stats) stats->peak_entries = st.latent.peak_entries;
  return st.latent.record;
}

OutcomeDistribution HypergraphEngine::run_sequence_enumerate(const TokenSequence& tokens,
                                                             size_t max_rows,
                                                             HgRunStats* stats) const {
  Runner runner(n_, k_, tokens);
  OutcomeDistribution dist;
  size_t peak = 0;

  std::function<void(RunState&, size_t, double)> walk = [&](RunState& st, size_t i,
                                                            double p) {
    if (i == runner.token_count()) {
      if (dist.rows.size() >= max_rows)
        throw InfeasibleError("enumeration exceeds row budget");
      peak = std::max(peak, st.latent.peak_entries);
      dist.rows.push_back({st.latent.record, p});
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
  st.latent = HypergraphLatent::initial(n_, k_);
  walk(st, 0, 1.0);
  if (stats) stats->peak_entries = peak;
  dist.normalize_order();
  return dist;
}

}  // namespace hsmt
