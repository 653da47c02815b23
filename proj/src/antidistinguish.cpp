#include "hsmt/antidistinguish.hpp"

#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include "hsmt/dense_engine.hpp"
#include "hsmt/hypergraph_engine.hpp"
#include "hsmt/rpoly.hpp"

namespace hsmt {

TokenSequence prep_gate_prefix(const WeightedHypergraph& g, double upsilon) {
  for (const auto& [e, w] : g.weights()) {
    (void)w;
    if (static_cast<int>(e.size()) != g.k())
      throw ValidationError("prefix preparation requires a k-uniform graph");
  }
  TokenSequence out;
  for (int q = 0; q < g.n(); ++q)
    out.push_back(Token::measurement(Hyperedge{q}, {-2.0 * upsilon}));
  for (const Hyperedge& e : colex_subsets(g.n(), g.k()))
    out.push_back(Token::gate(e, -M_PI * g.weight(e)));
  return out;
}

TokenSequence reference_prefix(int n, int k) {
  return prep_gate_prefix(WeightedHypergraph(n, k), 0.0);
}

namespace {

bool near_integer(double x) { return std::abs(x - std::round(x)) < 1e-9; }

Hyperedge find_unit_difference_edge(const WeightedHypergraph& a,
                                    const WeightedHypergraph& b) {
  std::map<Hyperedge, double> diff;
  for (const auto& [e, w] : a.weights()) diff[e] += w;
  for (const auto& [e, w] : b.weights()) diff[e] -= w;
  for (const auto& [e, dw] : diff) {
    if (std::abs(std::abs(dw) - 1.0) > 1e-9) continue;
    if (static_cast<int>(e.size()) != a.k()) continue;
    if (!near_integer(a.weight(e)) || !near_integer(b.weight(e))) continue;
    // Proper sub-edges of the candidate must be unweighted in both states;
    // they would survive the complement contraction and spoil the parity
    // argument.
    bool clean = true;
    for (const auto& [e2, w2] : a.weights())
      if (!(e2 == e) && e2.subset_of(e) && w2 != 0.0) clean = false;
    for (const auto& [e2, w2] : b.weights())
      if (!(e2 == e) && e2.subset_of(e) && w2 != 0.0) clean = false;
    if (clean) return e;
  }
  throw ValidationError("no qualifying edge with weights differing by 1");
}

}  // namespace

TokenSequence build_antidistinguishing_sequence(const WeightedHypergraph& psi1,
                                                const WeightedHypergraph& psi2,
                                                Setting setting) {
  if (psi1.n() != psi2.n() || psi1.k() != psi2.k())
    throw ValidationError("state shape mismatch");
  const int n = psi1.n();
  const int k = psi1.k();
  Hyperedge edge = find_unit_difference_edge(psi1, psi2);

  TokenSequence out;
  for (int q = 0; q < n; ++q) {
    if (edge.contains(q)) continue;
    std::map<Hyperedge, double> theta;
    theta[Hyperedge{q}] = setting == Setting::Qubit ? 1.0 : 0.0;
    out.push_back(Token::measurement(Hyperedge{q}, {0.0}, std::move(theta)));
  }

  MultilinearPoly r =
      setting == Setting::Qubit ? compute_r_qubit(edge) : compute_r_qumode(edge);
  std::map<Hyperedge, double> theta_r;
  for (const auto& [vars, c] : r.terms) theta_r[vars] = -M_PI * double(c);
  out.push_back(Token::measurement(edge, std::vector<double>(k, 0.0), std::move(theta_r)));

  double xphi = setting == Setting::Qubit ? M_PI / 2.0 : 2.0;
  out.push_back(Token::measurement(edge, std::vector<double>(k, xphi)));
  return out;
}

namespace {

enum class LabelKind { PrepOrGate, Cluster };

struct PositionRule {
  LabelKind kind = LabelKind::Cluster;
  double plus = 0.0;   // prep tokens: phase of the plus branch
  double minus = 0.0;  // and of the minus branch
};

std::vector<PositionRule> position_rules(const TokenSequence& seq) {
  std::vector<PositionRule> rules;
  for (const Token& t : seq) {
    PositionRule r;
    if (!t.beta) {
      if (t.is_recap()) throw ValidationError("recap tokens unsupported in certificates");
      r.kind = LabelKind::PrepOrGate;  // gate: outcome always 0
    } else if (t.beta->size() == 1 && t.theta.empty()) {
      r.kind = LabelKind::PrepOrGate;
      r.plus = canon_phase(-t.phi[0]);
      r.minus = canon_phase(t.phi[0]);
    }
    rules.push_back(r);
  }
  return rules;
}

// Replaces prep/gate outcomes with 0/1 branch labels in place.
void apply_prep_labels(OutcomeDistribution& d, const std::vector<PositionRule>& rules) {
  for (auto& row : d.rows) {
    for (size_t p = 0; p < row.y.size(); ++p) {
      if (rules[p].kind != LabelKind::PrepOrGate) continue;
      double v = row.y[p];
      row.y[p] =
          phase_dist(v, rules[p].plus) <= phase_dist(v, rules[p].minus) ? 0.0 : 1.0;
    }
  }
}

}  // namespace

Certificate check_antidistinguishability(const std::array<TokenSequence, 3>& prefixes,
                                         const TokenSequence& suffix, int n, int k,
                                         EngineKind engine) {
  std::array<TokenSequence, 3> seqs;
  std::array<OutcomeDistribution, 3> dists;
  for (int s = 0; s < 3; ++s) {
    seqs[s] = prefixes[s];
    seqs[s].insert(seqs[s].end(), suffix.begin(), suffix.end());
    if (seqs[s].size() != seqs[0].size())
      throw ValidationError("prefixes must have equal length");
    switch (engine) {
      case EngineKind::Dense:
        dists[s] = DenseEngine(n).run_sequence_enumerate(seqs[s]);
        break;
      case EngineKind::Hypergraph:
        dists[s] = HypergraphEngine(n, k).run_sequence_enumerate(seqs[s]);
        break;
      default:
        throw ValidationError("unsupported engine for certificates");
    }
    apply_prep_labels(dists[s], position_rules(seqs[s]));
    dists[s].normalize_order();
  }

  auto ids = cluster_positions({&dists[0], &dists[1], &dists[2]}, 1e-7);
  std::array<std::map<std::vector<int>, double>, 3> maps;
  std::map<std::vector<int>, MeasurementRecord> rep;
  for (int s = 0; s < 3; ++s) {
    for (size_t i = 0; i < dists[s].rows.size(); ++i) {
      maps[s][ids[s][i]] += dists[s].rows[i].p;
      rep.emplace(ids[s][i], dists[s].rows[i].y);
    }
  }

  Certificate cert;
  cert.max_triple_product = 0.0;
  for (const auto& [y, p0] : maps[0]) {
    auto it1 = maps[1].find(y);
    auto it2 = maps[2].find(y);
    if (it1 == maps[1].end() || it2 == maps[2].end()) continue;
    double prod = p0 * it1->second * it2->second;
    if (prod > cert.max_triple_product) {
      cert.max_triple_product = prod;
      cert.witness_y = rep.at(y);
    }
  }
  cert.pass = cert.max_triple_product == 0.0;
  if (cert.pass) cert.witness_y.reset();
  return cert;
}

std::string Certificate::to_json() const {
  nlohmann::ordered_json j;
  j["max_triple_product"] = max_triple_product;
  if (witness_y) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (double v : *witness_y) arr.push_back(v);
    j["witness_y"] = arr;
  } else {
    j["witness_y"] = nullptr;
  }
  j["pass"] = pass;
  return j.dump();
}

}  // namespace hsmt
