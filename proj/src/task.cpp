#include "hsmt/task.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "hsmt/antidistinguish.hpp"
#include "hsmt/dense_engine.hpp"
#include "hsmt/hypergraph_engine.hpp"
#include "hsmt/rpoly.hpp"

namespace hsmt {

double bubble_wrap(double x) {
  if (std::isnan(x)) throw ValidationError("NaN input");
  const double two_pi = 2.0 * M_PI;
  double m = x - two_pi * std::floor(x / two_pi);  // [0, 2*pi)
  auto g = [](double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double ea = std::exp(-1.0 / t);
    double eb = std::exp(-1.0 / (1.0 - t));
    return ea / (ea + eb);
  };
  const double half_pi = M_PI / 2.0;
  return g(m / half_pi) * g((1.5 * M_PI - m) / half_pi);
}

long long HsmtInstance::min_ell() const {
  return static_cast<long long>(binom(n, k)) + 3LL * n - k;
}

Hyperedge HsmtInstance::remaining_edge() const {
  std::set<int> bs(b.begin(), b.end());
  std::vector<int> rest;
  for (int q = 0; q < n; ++q)
    if (!bs.count(q)) rest.push_back(q);
  return Hyperedge(rest);
}

void HsmtInstance::validate() const {
  if (n < 1 || k < 1 || k > n) throw ValidationError("need 1 <= k <= n");
  if (ell < min_ell())
    throw ValidationError("ell below the grammar minimum C(n,k) + 3n - k");
  if (static_cast<int>(upsilon.size()) != n) throw ValidationError("upsilon length != n");
  if (gamma.size() != binom(n, k)) throw ValidationError("gamma length != C(n,k)");
  if (static_cast<int>(b.size()) != n - k) throw ValidationError("b length != n-k");
  std::set<int> bs(b.begin(), b.end());
  if (bs.size() != b.size()) throw ValidationError("b entries must be distinct");
  for (int q : b)
    if (q < 0 || q >= n) throw ValidationError("b entry out of range");
  if (static_cast<long long>(tail.size()) != ell - min_ell())
    throw ValidationError("tail length inconsistent with ell");
  Hyperedge rest = remaining_edge();
  for (const TailSpec& ts : tail) {
    if (ts.kind != TailSpec::Kind::Raw) continue;
    if (ts.phi.size() != size_t(k)) throw ValidationError("tail phi length != k");
    for (const auto& [w, v] : ts.theta) {
      (void)v;
      if (!w.subset_of(rest))
        throw ValidationError("tail measurement leaves the complement of b");
    }
  }
}

TokenSequence build_sequence(const HsmtInstance& inst, Setting setting) {
  inst.validate();
  TokenSequence out;
  out.reserve(inst.ell);
  for (int i = 0; i < inst.n; ++i)
    out.push_back(Token::measurement(Hyperedge{i}, {-2.0 * inst.upsilon[i]}));

  auto edges = colex_subsets(inst.n, inst.k);
  for (size_t idx = 0; idx < edges.size(); ++idx)
    out.push_back(Token::gate(edges[idx], -inst.gamma[idx]));

  for (int i = 0; i < inst.n; ++i) out.push_back(Token::recap());

  const double eps = setting == Setting::Qubit ? 1.0 : 0.0;
  for (int bi : inst.b) {
    std::map<Hyperedge, double> theta;
    theta[Hyperedge{bi}] = eps;
    out.push_back(Token::measurement(Hyperedge{bi}, {0.0}, std::move(theta)));
  }

  Hyperedge rest = inst.remaining_edge();
  for (const TailSpec& ts : inst.tail) {
    switch (ts.kind) {
      case TailSpec::Kind::Raw:
        out.push_back(Token::measurement(rest, ts.phi, ts.theta));
        break;
      case TailSpec::Kind::RPoly: {
        MultilinearPoly r = setting == Setting::Qubit ? compute_r_qubit(rest)
                                                      : compute_r_qumode(rest);
        std::map<Hyperedge, double> theta;
        for (const auto& [vars, c] : r.terms) theta[vars] = -M_PI * double(c);
        out.push_back(
            Token::measurement(rest, std::vector<double>(inst.k, 0.0), std::move(theta)));
        break;
      }
      case TailSpec::Kind::XProd: {
        double xphi = setting == Setting::Qubit ? M_PI / 2.0 : 2.0;
        out.push_back(Token::measurement(rest, std::vector<double>(inst.k, xphi)));
        break;
      }
    }
  }
  if (static_cast<long long>(out.size()) != inst.ell)
    throw ValidationError("rendered sequence length mismatch");
  return out;
}

bool validate_translation(const HsmtInstance& inst, const MeasurementRecord& y,
                          EngineKind engine) {
  inst.validate();
  if (static_cast<long long>(y.size()) != inst.ell)
    throw ValidationError("record length != ell");
  const int n = inst.n;
  const size_t c = binom(inst.n, inst.k);
  for (size_t i = n; i < n + c; ++i)
    if (std::abs(y[i]) > 1e-12) return false;
  for (int i = 0; i < n; ++i)
    if (y[n + c + i] != y[i]) return false;

  TokenSequence tokens = build_sequence(inst, Setting::Qubit);
  OutcomeDistribution dist;
  switch (engine) {
    case EngineKind::Dense:
      dist = DenseEngine(n).run_sequence_enumerate(tokens);
      break;
    case EngineKind::Hypergraph:
      dist = HypergraphEngine(n, inst.k).run_sequence_enumerate(tokens);
      break;
    default:
      throw ValidationError("unsupported engine for translation validation");
  }
  for (const auto& row : dist.rows) {
    bool match = true;
    for (size_t i = 0; i < y.size() && match; ++i)
      if (phase_dist(y[i], row.y[i]) > 1e-7) match = false;
    if (match) return true;
  }
  return false;
}

ContextualTriple build_contextual_triple(int n, int k, Setting setting) {
  if (k < 2) throw ValidationError("contextual triples need k >= 2");
  if (n < k) throw ValidationError("need n >= k");
  ContextualTriple out;
  WeightedHypergraph psi1(n, k);
  WeightedHypergraph psi2(n, k);
  std::vector<int> first(k);
  std::iota(first.begin(), first.end(), 0);
  out.edge = Hyperedge(first);
  psi2.set_weight(out.edge, 1.0);
  out.prefixes[0] = prep_gate_prefix(psi1, 1.0);
  out.prefixes[1] = prep_gate_prefix(psi2, 1.0);
  out.prefixes[2] = reference_prefix(n, k);
  out.suffix = build_antidistinguishing_sequence(psi1, psi2, setting);
  return out;
}

bool validate_phase_structure(const TokenSequence& tokens, size_t tau1, size_t tau2,
                              PrepAlignment alignment) {
  if (tau1 > tau2 || tau2 > tokens.size()) return false;
  auto kappa_zero = [](const Token& t) {
    for (double p : t.phi)
      if (p != 0.0) return false;
    for (const auto& [w, v] : t.theta) {
      (void)w;
      if (v != 0.0) return false;
    }
    return true;
  };
  auto is_prep_form = [](const Token& t) {
    return !t.alpha && t.beta && t.beta->size() == 1 && t.theta.empty();
  };
  for (size_t i = 0; i < tau1; ++i) {
    const Token& t = tokens[i];
    if (kappa_zero(t)) continue;
    if (alignment == PrepAlignment::PrepExempt && is_prep_form(t)) continue;
    return false;
  }
  std::set<int> targets;
  for (size_t i = tau1; i < tau2; ++i) {
    const Token& t = tokens[i];
    if (t.gamma != 0.0) return false;
    if (!t.beta || t.beta->size() != 1) return false;
    for (double p : t.phi)
      if (p != 0.0) return false;
    if (t.theta.size() != 1 || !(t.theta.begin()->first == *t.beta)) return false;
    targets.insert((*t.beta)[0]);
  }
  if (targets.size() != tau2 - tau1) return false;
  for (size_t i = tau2; i < tokens.size(); ++i)
    if (tokens[i].gamma != 0.0) return false;
  return true;
}

// --- instance JSON ---------------------------------------------------------

std::string HsmtInstance::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["k"] = k;
  j["ell"] = ell;
  j["upsilon"] = upsilon;
  j["gamma"] = gamma;
  nlohmann::ordered_json bj = nlohmann::ordered_json::array();
  for (int q : b) bj.push_back(q + 1);
  j["b"] = bj;
  nlohmann::ordered_json tj = nlohmann::ordered_json::array();
  for (const TailSpec& ts : tail) {
    nlohmann::ordered_json e;
    switch (ts.kind) {
      case TailSpec::Kind::RPoly:
        e["op"] = "rpoly";
        break;
      case TailSpec::Kind::XProd:
        e["op"] = "xprod";
        break;
      case TailSpec::Kind::Raw: {
        e["phi"] = ts.phi;
        nlohmann::ordered_json th = nlohmann::ordered_json::object();
        for (const auto& [w, v] : ts.theta) th[subset_key(w)] = v;
        e["theta"] = th;
        break;
      }
    }
    tj.push_back(e);
  }
  j["tail"] = tj;
  return j.dump();
}

HsmtInstance HsmtInstance::from_json(const std::string& s) {
  nlohmann::json j = nlohmann::json::parse(s);
  HsmtInstance inst;
  inst.n = j.at("n").get<int>();
  inst.k = j.at("k").get<int>();
  inst.ell = j.at("ell").get<long long>();
  inst.upsilon = j.at("upsilon").get<std::vector<double>>();
  inst.gamma = j.at("gamma").get<std::vector<double>>();
  for (const auto& x : j.at("b")) inst.b.push_back(x.get<int>() - 1);
  for (const auto& e : j.at("tail")) {
    if (e.contains("op")) {
      std::string op = e["op"].get<std::string>();
      if (op == "rpoly")
        inst.tail.push_back(TailSpec::rpoly());
      else if (op == "xprod")
        inst.tail.push_back(TailSpec::xprod());
      else
        throw ValidationError("unknown tail op: " + op);
    } else {
      TailSpec ts;
      ts.phi = e.at("phi").get<std::vector<double>>();
      if (e.contains("theta"))
        for (auto it = e["theta"].begin(); it != e["theta"].end(); ++it)
          ts.theta[subset_from_key(it.key())] = it.value().get<double>();
      inst.tail.push_back(std::move(ts));
    }
  }
  inst.validate();
  return inst;
}

HsmtInstance generate_instance(int n, int k, long long ell, SplitRng& rng,
                               const GenOptions& opts) {
  HsmtInstance inst;
  inst.n = n;
  inst.k = k;
  inst.ell = ell;
  const size_t c = binom(n, k);
  for (size_t i = 0; i < c; ++i) {
    if (opts.lattice) {
      int span = 2 * opts.denominator;
      int64_t num = int64_t(rng.next_u64() % (2 * span + 1)) - span;
      inst.gamma.push_back(M_PI * double(num) / opts.denominator);
    } else {
      inst.gamma.push_back((rng.next_double() * 2.0 - 1.0) * M_PI);
    }
  }
  double norm2 = 0;
  for (double g : inst.gamma) norm2 += g * g;
  for (int i = 0; i < n; ++i) {
    if (opts.upsilon_mode == "bubble")
      inst.upsilon.push_back(opts.lattice ? (norm2 == 0.0 ? 0.0 : 1.0)
                                          : bubble_wrap(norm2));
    else if (opts.upsilon_mode == "zero")
      inst.upsilon.push_back(0.0);
    else if (opts.upsilon_mode == "one")
      inst.upsilon.push_back(1.0);
    else if (opts.upsilon_mode == "random")
      inst.upsilon.push_back(rng.next_double());
    else
      throw ValidationError("unknown upsilon mode: " + opts.upsilon_mode);
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.next_u64() % (i + 1)]);
  inst.b.assign(perm.begin(), perm.begin() + (n - k));

  long long tail_count = ell - inst.min_ell();
  if (tail_count < 0) throw ValidationError("ell below the grammar minimum");
  Hyperedge rest = inst.remaining_edge();
  auto rest_subsets = all_subsets(rest);
  for (long long t = 0; t < tail_count; ++t) {
    if (opts.anti_tail && t == 0) {
      inst.tail.push_back(TailSpec::rpoly());
      continue;
    }
    if (opts.anti_tail && t == 1) {
      inst.tail.push_back(TailSpec::xprod());
      continue;
    }
    TailSpec ts;
    ts.kind = TailSpec::Kind::Raw;
    for (int i = 0; i < k; ++i) {
      if (opts.lattice)
        ts.phi.push_back(2.0 * double(int64_t(rng.next_u64() % 5) - 2));
      else
        ts.phi.push_back((rng.next_double() * 2.0 - 1.0) * M_PI);
    }
    size_t picks = 1 + rng.next_u64() % 2;
    for (size_t p = 0; p < picks; ++p) {
      const Hyperedge& w = rest_subsets[1 + rng.next_u64() % (rest_subsets.size() - 1)];
      double v = opts.lattice
                     ? M_PI * double(int64_t(rng.next_u64() % 5) - 2) / opts.denominator
                     : (rng.next_double() * 2.0 - 1.0) * M_PI;
      ts.theta[w] = v;
    }
    inst.tail.push_back(std::move(ts));
  }
  inst.validate();
  return inst;
}

// --- canonical labels ------------------------------------------------------

namespace {

int prep_label(double upsilon, Setting setting, int d, double y) {
  if (setting == Setting::Qubit) {
    double plus = canon_phase(2.0 * upsilon);
    double minus = canon_phase(-2.0 * upsilon);
    if (phase_dist(plus, minus) < kPhaseClusterTol) return 0;
    return phase_dist(y, plus) <= phase_dist(y, minus) ? 0 : 1;
  }
  int64_t u = static_cast<int64_t>(std::llround(upsilon));
  int m = 2 * d;
  if (u % m == 0) return 0;
  int best = 0;
  double bd = phase_dist(y, 0.0);
  for (int j = 1; j < m; ++j) {
    double dist = phase_dist(y, M_PI * double(j) * double(u) / d);
    if (dist < bd) {
      bd = dist;
      best = j;
    }
  }
  return best;
}

int binary_phase_label(double y) {
  return phase_dist(y, 0.0) <= phase_dist(y, M_PI) ? 0 : 1;
}

}  // namespace

std::vector<int> labels_for_instance(const HsmtInstance& inst, Setting setting,
                                     const MeasurementRecord& y) {
  inst.validate();
  if (static_cast<long long>(y.size()) != inst.ell)
    throw ValidationError("record length != ell");
  const int n = inst.n;
  const int k = inst.k;
  const size_t c = binom(n, k);
  const int d = 1;  // labels are defined for the unit-denominator lattice
  std::vector<int> out(y.size(), 0);
  size_t pos = 0;
  for (int i = 0; i < n; ++i, ++pos)
    out[pos] = prep_label(inst.upsilon[i], setting, d, y[pos]);
  for (size_t i = 0; i < c; ++i, ++pos) out[pos] = 0;  // gate block
  for (int i = 0; i < n; ++i, ++pos) out[pos] = out[i];  // recap replays prep
  for (int i = 0; i < n - k; ++i, ++pos) {
    if (setting == Setting::Qubit)
      out[pos] = phase_dist(y[pos], 0.0) < 0.5 ? 0 : 1;
    else
      out[pos] = static_cast<int>(std::llround(y[pos])) % 2;
  }
  for (const TailSpec& ts : inst.tail) {
    switch (ts.kind) {
      case TailSpec::Kind::RPoly:
        out[pos] = binary_phase_label(y[pos]);
        break;
      case TailSpec::Kind::XProd: {
        double v = setting == Setting::Qubit ? canon_phase(y[pos] + k * M_PI / 2.0)
                                             : y[pos];
        out[pos] = binary_phase_label(v);
        break;
      }
      case TailSpec::Kind::Raw:
        throw ValidationError("raw tail outcomes have no cross-setting labels");
    }
    ++pos;
  }
  return out;
}

OutcomeDistribution relabel_distribution(const HsmtInstance& inst, Setting setting,
                                         const OutcomeDistribution& dist) {
  std::map<std::vector<int>, double> acc;
  for (const auto& row : dist.rows) {
    auto labels = labels_for_instance(inst, setting, row.y);
    acc[labels] += row.p;
  }
  OutcomeDistribution out;
  for (const auto& [labels, p] : acc) {
    Outcome o;
    for (int l : labels) o.y.push_back(double(l));
    o.p = p;
    out.rows.push_back(std::move(o));
  }
  return out;
}

}  // namespace hsmt
