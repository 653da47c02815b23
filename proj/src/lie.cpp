#include "hsmt/lie.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "hsmt/hyperedge.hpp"
#include "hsmt/rng.hpp"

namespace hsmt {

std::string LieGenerator::str() const {
  if (kind == Kind::Momentum) return "p" + std::to_string(index + 1);
  if (mask == 0) return "I";
  std::string s;
  for (int v = 0; v < 32; ++v)
    if (mask >> v & 1) s += "q" + std::to_string(v + 1);
  return s;
}

BracketTerm bracket(const LieGenerator& a, const LieGenerator& b) {
  using Kind = LieGenerator::Kind;
  if (a.kind == b.kind) {
    // [p,p] = 0 and q-monomials commute.
    return BracketTerm{Rational(0), LieGenerator::identity()};
  }
  if (a.kind == Kind::QMonomial) {
    BracketTerm t = bracket(b, a);
    t.coeff = -t.coeff;
    return t;
  }
  // a momentum, b q-monomial.
  uint32_t bit = uint32_t{1} << a.index;
  if (!(b.mask & bit)) return BracketTerm{Rational(0), LieGenerator::identity()};
  return BracketTerm{Rational(1, 2), LieGenerator::q_monomial(b.mask & ~bit)};
}

int LieClosure::index_of(const LieGenerator& g) const {
  auto it = std::lower_bound(basis.begin(), basis.end(), g);
  if (it == basis.end() || !(*it == g)) return -1;
  return static_cast<int>(it - basis.begin());
}

LieClosure lie_closure(int n, int k) {
  if (n < 1 || k < 1 || k > n) throw ValidationError("need 1 <= k <= n");
  std::set<LieGenerator> basis;
  for (int i = 0; i < n; ++i) basis.insert(LieGenerator::momentum(i));
  for (const Hyperedge& e : colex_subsets(n, k)) {
    uint32_t m = 0;
    for (int v : e) m |= uint32_t{1} << v;
    basis.insert(LieGenerator::q_monomial(m));
  }

  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<LieGenerator> snapshot(basis.begin(), basis.end());
    for (size_t i = 0; i < snapshot.size(); ++i) {
      for (size_t j = i + 1; j < snapshot.size(); ++j) {
        BracketTerm t = bracket(snapshot[i], snapshot[j]);
        if (t.is_zero()) continue;
        if (basis.insert(t.gen).second) grew = true;
      }
    }
  }
  LieClosure out;
  out.basis.assign(basis.begin(), basis.end());
  return out;
}

uint64_t closure_dimension_formula(int n, int k) {
  uint64_t dim = n;
  for (int j = 0; j <= k; ++j) dim += binom(n, j);
  return dim;
}

StructureConstants structure_constants(const LieClosure& closure) {
  StructureConstants sc;
  const int dim = closure.dim();
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      if (a == b) continue;
      BracketTerm t = bracket(closure.basis[a], closure.basis[b]);
      if (t.is_zero()) continue;
      int c = closure.index_of(t.gen);
      if (c < 0) throw ValidationError("basis is not closed under the bracket");
      sc[{a, b}] = {c, t.coeff};
    }
  }
  return sc;
}

namespace {

bool jacobi_for_triple(const LieClosure& cl, int a, int b, int c) {
  // sum over cyclic permutations of [[a,b],c]; each inner bracket yields a
  // single term, so the outer sum is three terms collected exactly.
  std::map<LieGenerator, Rational> acc;
  auto add = [&](int x, int y, int z) {
    BracketTerm inner = bracket(cl.basis[x], cl.basis[y]);
    if (inner.is_zero()) return;
    BracketTerm outer = bracket(inner.gen, cl.basis[z]);
    if (outer.is_zero()) return;
    Rational coeff = inner.coeff * outer.coeff;
    auto [it, inserted] = acc.try_emplace(outer.gen, Rational(0));
    it->second = it->second + coeff;
  };
  add(a, b, c);
  add(b, c, a);
  add(c, a, b);
  for (const auto& [gen, coeff] : acc) {
    (void)gen;
    if (!coeff.is_zero()) return false;
  }
  return true;
}

}  // namespace

bool jacobi_holds(const LieClosure& cl) {
  const int dim = cl.dim();
  for (int a = 0; a < dim; ++a)
    for (int b = a + 1; b < dim; ++b)
      for (int c = b + 1; c < dim; ++c)
        if (!jacobi_for_triple(cl, a, b, c)) return false;
  return true;
}

bool jacobi_holds_sampled(const LieClosure& cl, size_t samples, uint64_t seed) {
  SplitRng rng(seed);
  const int dim = cl.dim();
  for (size_t s = 0; s < samples; ++s) {
    int a = rng.next_u64() % dim;
    int b = rng.next_u64() % dim;
    int c = rng.next_u64() % dim;
    if (!jacobi_for_triple(cl, a, b, c)) return false;
  }
  return true;
}

std::string structure_constants_to_json(const LieClosure& closure,
                                        const StructureConstants& sc) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json basis = nlohmann::ordered_json::array();
  for (const auto& g : closure.basis) basis.push_back(g.str());
  j["dim"] = closure.dim();
  j["basis"] = basis;
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const auto& [ab, cv] : sc) {
    nlohmann::ordered_json e;
    e["a"] = ab.first;
    e["b"] = ab.second;
    e["c"] = cv.first;
    e["num"] = cv.second.num;
    e["den"] = cv.second.den;
    entries.push_back(e);
  }
  j["entries"] = entries;
  return j.dump();
}

}  // namespace hsmt
