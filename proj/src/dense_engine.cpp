#include "hsmt/dense_engine.hpp"

#include <functional>

namespace hsmt {

void apply_ckz(DenseState& state, const Hyperedge& edge, double gamma, CkzConvention conv) {
  edge.check_range(state.n);
  if (gamma == 0.0) return;
  uint64_t mask = 0;
  for (int q : edge) mask |= uint64_t{1} << q;
  uint64_t match = conv == CkzConvention::OnesProjector ? mask : 0;
  state.phase_where(mask, match, std::polar(1.0, -gamma));
}

Eigen::MatrixXcd build_g_unitary(const Hyperedge& beta, const std::vector<double>& phi,
                                 const std::map<Hyperedge, double>& theta) {
  const int b = static_cast<int>(beta.size());
  if (phi.size() != beta.size()) throw ValidationError("phi length != |beta|");
  const int dim = 1 << b;

  // Diagonal factor from the theta terms.
  Eigen::VectorXcd diag = Eigen::VectorXcd::Ones(dim);
  for (const auto& [w, t] : theta) {
    uint64_t m = beta.local_mask_of(w);
    cplx ph = std::polar(1.0, -t);
    for (int s = 0; s < dim; ++s)
      if ((uint64_t(s) & m) == m) diag(s) *= ph;
  }

  // Product of single-qubit X rotations; bit t of the index is beta[t].
  Eigen::MatrixXcd g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      cplx entry = diag(j);
      for (int t = 0; t < b && entry != cplx{0, 0}; ++t) {
        double c = std::cos(phi[t]), s = std::sin(phi[t]);
        bool bi = i >> t & 1, bj = j >> t & 1;
        entry *= bi == bj ? cplx{c, 0} : cplx{0, -s};
      }
      g(i, j) = entry;
    }
  }
  return g;
}

std::vector<PhaseEstimationOutcome> measure_g_branches(const DenseState& state,
                                                       const Hyperedge& beta,
                                                       const std::vector<double>& phi,
                                                       const std::map<Hyperedge, double>& theta) {
  beta.check_range(state.n);
  UnitarySpectrum spec = phase_clusters(build_g_unitary(beta, phi, theta));
  std::vector<int> targets = beta.vertices();
  std::vector<double> probs = cluster_probabilities(state, targets, spec);
  std::vector<PhaseEstimationOutcome> out;
  for (size_t c = 0; c < spec.clusters.size(); ++c) {
    if (probs[c] < kProbFloor) continue;
    PhaseEstimationOutcome o;
    o.phase = spec.clusters[c].phase;
    o.probability = probs[c];
    o.post_state = state;
    project_cluster(o.post_state, targets, spec.clusters[c], probs[c]);
    o.post_state.check_norm();
    out.push_back(std::move(o));
  }
  return out;
}

PhaseEstimationOutcome measure_g(const DenseState& state, const Hyperedge& beta,
                                 const std::vector<double>& phi,
                                 const std::map<Hyperedge, double>& theta, SplitRng& rng) {
  auto branches = measure_g_branches(state, beta, phi, theta);
  std::vector<double> w(branches.size());
  for (size_t i = 0; i < branches.size(); ++i) w[i] = branches[i].probability;
  return branches[rng.pick(w)];
}

PhaseEstimationOutcome measure_g_forced(const DenseState& state, const Hyperedge& beta,
                                        const std::vector<double>& phi,
                                        const std::map<Hyperedge, double>& theta,
                                        double outcome) {
  auto branches = measure_g_branches(state, beta, phi, theta);
  for (auto& b : branches)
    if (phase_dist(b.phase, outcome) < 1e-7) return std::move(b);
  throw ValidationError("inconsistent record: forced outcome has zero probability");
}

namespace {

struct TokenPlan {
  const Token* tok;
  std::optional<UnitarySpectrum> spec;  // present when the token measures
  std::vector<int> targets;
};

std::vector<TokenPlan> plan_tokens(int n, const TokenSequence& tokens) {
  std::vector<TokenPlan> plan(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    t.validate(n);
    plan[i].tok = &t;
    if (t.beta) {
      plan[i].spec = phase_clusters(build_g_unitary(*t.beta, t.phi, t.theta));
      plan[i].targets = t.beta->vertices();
    }
  }
  return plan;
}

}  // namespace

MeasurementRecord DenseEngine::run_sequence_sample(const TokenSequence& tokens,
                                                   SplitRng rng) const {
  auto plan = plan_tokens(n_, tokens);
  DenseState state = DenseState::all_zero(n_);
  MeasurementRecord rec;
  size_t recap_count = 0;
  for (size_t i = 0; i < plan.size(); ++i) {
    const Token& t = *plan[i].tok;
    if (t.alpha) apply_ckz(state, *t.alpha, t.gamma, conv_);
    if (t.beta) {
      const auto& spec = *plan[i].spec;
      std::vector<double> probs = cluster_probabilities(state, plan[i].targets, spec);
      std::vector<size_t> live;
      std::vector<double> w;
      for (size_t c = 0; c < probs.size(); ++c)
        if (probs[c] >= kProbFloor) {
          live.push_back(c);
          w.push_back(probs[c]);
        }
      SplitRng token_rng = rng.child(i);
      size_t c = live[token_rng.pick(w)];
      project_cluster(state, plan[i].targets, spec.clusters[c], probs[c]);
      state.check_norm();
      rec.push_back(spec.clusters[c].phase);
    } else if (t.is_recap()) {
      if (recap_count >= rec.size()) throw ValidationError("recap beyond recorded outcomes");
      rec.push_back(rec[recap_count++]);
    } else {
      rec.push_back(0.0);
    }
  }
  return rec;
}

OutcomeDistribution DenseEngine::run_sequence_enumerate(const TokenSequence& tokens,
                                                        size_t max_rows) const {
  return enumerate_from(DenseState::all_zero(n_), tokens, max_rows);
}

OutcomeDistribution DenseEngine::enumerate_from(const DenseState& initial,
                                                const TokenSequence& tokens,
                                                size_t max_rows) const {
  auto plan = plan_tokens(n_, tokens);
  OutcomeDistribution dist;

  std::function<void(DenseState&, size_t, double, MeasurementRecord&)> walk =
      [&](DenseState& state, size_t i, double p, MeasurementRecord& rec) {
        if (i == plan.size()) {
          if (dist.rows.size() >= max_rows)
            throw InfeasibleError("enumeration exceeds row budget");
          dist.rows.push_back({rec, p});
          return;
        }
        const Token& t = *plan[i].tok;
        if (t.alpha) apply_ckz(state, *t.alpha, t.gamma, conv_);
        if (t.beta) {
          const auto& spec = *plan[i].spec;
          std::vector<double> probs = cluster_probabilities(state, plan[i].targets, spec);
          for (size_t c = 0; c < probs.size(); ++c) {
            if (probs[c] < kProbFloor) continue;
            DenseState next = state;
            project_cluster(next, plan[i].targets, spec.clusters[c], probs[c]);
            rec.push_back(spec.clusters[c].phase);
            walk(next, i + 1, p * probs[c], rec);
            rec.pop_back();
          }
        } else if (t.is_recap()) {
          size_t replay_idx = 0, seen = 0;
          for (size_t j = 0; j < i; ++j)
            if (plan[j].tok->is_recap()) ++seen;
          replay_idx = seen;
          if (replay_idx >= rec.size())
            throw ValidationError("recap beyond recorded outcomes");
          rec.push_back(rec[replay_idx]);
          walk(state, i + 1, p, rec);
          rec.pop_back();
        } else {
          rec.push_back(0.0);
          walk(state, i + 1, p, rec);
          rec.pop_back();
        }
      };

  DenseState state = initial;
  MeasurementRecord rec;
  walk(state, 0, 1.0, rec);
  dist.normalize_order();
  return dist;
}

}  // namespace hsmt
