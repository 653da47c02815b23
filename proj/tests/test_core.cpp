#include <gtest/gtest.h>

#include "hsmt/hypergraph.hpp"
#include "hsmt/poly.hpp"
#include "hsmt/rng.hpp"
#include "hsmt/token.hpp"

using namespace hsmt;

TEST(Hyperedge, SortsAndRejectsDuplicates) {
  Hyperedge e{2, 0};
  EXPECT_EQ(e.vertices(), (std::vector<int>{0, 2}));
  EXPECT_THROW(Hyperedge({1, 1}), ValidationError);
  EXPECT_EQ(e.str(), "{1,3}");
}

TEST(Hyperedge, ColexOrder) {
  auto subs = colex_subsets(4, 2);
  ASSERT_EQ(subs.size(), 6u);
  EXPECT_EQ(subs[0], (Hyperedge{0, 1}));
  EXPECT_EQ(subs[1], (Hyperedge{0, 2}));
  EXPECT_EQ(subs[2], (Hyperedge{1, 2}));
  EXPECT_EQ(subs[3], (Hyperedge{0, 3}));
  EXPECT_EQ(subs[5], (Hyperedge{2, 3}));
  EXPECT_EQ(colex_subsets(5, 3).size(), binom(5, 3));
}

TEST(Canonicalize, PrunesZeroWeights) {
  WeightedHypergraph g(3, 2);
  g.set_weight(Hyperedge{0, 1}, 0.0);
  EXPECT_EQ(canonicalize(g).entry_count(), 0u);
}

TEST(Canonicalize, KeyOrdering) {
  WeightedHypergraph g(3, 2);
  g.set_weight(Hyperedge{1, 0}, 1.0);
  auto c = canonicalize(g);
  EXPECT_DOUBLE_EQ(c.weight(Hyperedge{0, 1}), 1.0);
}

TEST(Canonicalize, Idempotent) {
  WeightedHypergraph g(3, 2);
  g.set_weight(Hyperedge{0, 1}, 1.0);
  g.set_weight(Hyperedge{0}, 0.5);
  auto once = canonicalize(g);
  auto twice = canonicalize(once);
  EXPECT_EQ(once, twice);
}

TEST(Canonicalize, RejectsWideEdges) {
  WeightedHypergraph g(4, 2);
  EXPECT_THROW(g.set_weight(Hyperedge{0, 1, 2}, 1.0), ValidationError);
}

// Property: canonical form is idempotent and independent of insertion order.
TEST(Canonicalize, PropertyRandomized) {
  SplitRng rng(20240817);
  for (int trial = 0; trial < 10000; ++trial) {
    int n = 2 + rng.next_u64() % 5;
    int k = 1 + rng.next_u64() % n;
    auto edges = colex_subsets(n, k);
    std::vector<std::pair<Hyperedge, double>> entries;
    size_t count = rng.next_u64() % 6;
    for (size_t i = 0; i < count; ++i) {
      const auto& e = edges[rng.next_u64() % edges.size()];
      // exactly-representable increments keep accumulation order-exact
      double w = 0.25 * (double(int64_t(rng.next_u64() % 9)) - 4.0);
      entries.push_back({e, w});
    }
    WeightedHypergraph fwd(n, k), rev(n, k);
    for (const auto& [e, w] : entries) fwd.add_weight(e, w);
    for (auto it = entries.rbegin(); it != entries.rend(); ++it)
      rev.add_weight(it->first, it->second);
    auto cf = canonicalize(fwd);
    EXPECT_EQ(cf, canonicalize(canonicalize(fwd)));
    EXPECT_EQ(cf, canonicalize(rev));
    for (const auto& [e, w] : cf.weights()) {
      (void)e;
      EXPECT_NE(w, 0.0);
    }
  }
}

TEST(PolyEval, SpecifiedValues) {
  // 1 - n1 - n2 at (0,0) -> 1
  MultilinearPoly r;
  r.constant = 1;
  r.add_term(Hyperedge{0}, -1);
  r.add_term(Hyperedge{1}, -1);
  EXPECT_EQ(poly_eval(r, {0, 0}), 1);
  EXPECT_EQ(poly_eval(r, {1, 1}), -1);

  MultilinearPoly one;
  one.constant = 1;
  EXPECT_EQ(poly_eval(one, {0, 1, 0}), 1);

  // 1 - 2 n1 at (1) -> -1
  MultilinearPoly r1;
  r1.constant = 1;
  r1.add_term(Hyperedge{0}, -2);
  EXPECT_EQ(poly_eval(r1, {1}), -1);
}

// Oracle: direct term-by-term evaluation over an independent representation.
namespace {
int64_t eval_oracle(const std::vector<std::pair<std::vector<int>, int64_t>>& terms,
                    int64_t constant, const std::vector<int>& bits) {
  int64_t acc = constant;
  for (const auto& [vars, c] : terms) {
    int64_t prod = 1;
    for (int v : vars) prod *= bits[v];
    acc += c * prod;
  }
  return acc;
}
}  // namespace

TEST(PolyEval, MatchesTermByTermOracle) {
  SplitRng rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    int n = 1 + rng.next_u64() % 6;
    MultilinearPoly p;
    p.constant = int64_t(rng.next_u64() % 11) - 5;
    std::vector<std::pair<std::vector<int>, int64_t>> raw_terms;
    size_t terms = rng.next_u64() % 5;
    for (size_t t = 0; t < terms; ++t) {
      std::vector<int> vars;
      for (int v = 0; v < n; ++v)
        if (rng.next_u64() % 2) vars.push_back(v);
      if (vars.empty()) continue;
      int64_t c = int64_t(rng.next_u64() % 9) - 4;
      raw_terms.push_back({vars, c});
      p.add_term(Hyperedge(vars), c);
    }
    std::vector<int> bits(n);
    for (int v = 0; v < n; ++v) bits[v] = rng.next_u64() % 2;
    EXPECT_EQ(poly_eval(p, bits), eval_oracle(raw_terms, p.constant, bits));
  }
}

TEST(PolySubstitutions, FlipAndShift) {
  MultilinearPoly p;
  p.add_term(Hyperedge{0, 1}, 1);
  auto flipped = p.flip_var(0);  // (1-n0) n1 = n1 - n0 n1
  EXPECT_EQ(flipped.terms.at(Hyperedge{1}), 1);
  EXPECT_EQ(flipped.terms.at(Hyperedge{0, 1}), -1);
  auto shifted = p.shift_var(0);  // (q0+1) q1 = q0 q1 + q1
  EXPECT_EQ(shifted.terms.at(Hyperedge{1}), 1);
  EXPECT_EQ(shifted.terms.at(Hyperedge{0, 1}), 1);
}

TEST(TokenJson, SchemaAndRoundTrip) {
  Token t = Token::measurement(Hyperedge{0, 2}, {0.5, -1.25}, {{Hyperedge{0}, 0.75}});
  t.gamma = 0.0;
  auto j = token_to_json(t);
  EXPECT_TRUE(j["alpha"].is_null());
  EXPECT_EQ(j["beta"], nlohmann::ordered_json::array({1, 3}));
  EXPECT_EQ(j["theta"]["1"], 0.75);
  Token back = token_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back, t);
}

TEST(TokenJson, SequenceRoundTripByteIdentical) {
  TokenSequence seq;
  seq.push_back(Token::gate(Hyperedge{0, 1}, -M_PI));
  seq.push_back(Token::measurement(Hyperedge{1}, {-2.0}));
  seq.push_back(Token::recap());
  std::string s1 = tokens_to_json_string(seq);
  std::string s2 = tokens_to_json_string(tokens_from_json_string(s1));
  EXPECT_EQ(s1, s2);
}

TEST(SplitRng, DeterministicAndSplittable) {
  SplitRng a(42), b(42);
  EXPECT_EQ(a.next_u64(), b.next_u64());
  SplitRng c1 = a.child(7), c2 = b.child(7);
  EXPECT_EQ(c1.next_u64(), c2.next_u64());
  SplitRng d1 = a.child(8);
  EXPECT_NE(c1.next_u64(), d1.next_u64());
}

TEST(CanonPhase, BranchCut) {
  EXPECT_DOUBLE_EQ(canon_phase(M_PI), M_PI);
  EXPECT_DOUBLE_EQ(canon_phase(-M_PI), M_PI);
  EXPECT_DOUBLE_EQ(canon_phase(3 * M_PI), M_PI);
  EXPECT_NEAR(canon_phase(2 * M_PI + 0.25), 0.25, 1e-12);
  EXPECT_NEAR(phase_dist(M_PI - 1e-12, -M_PI + 1e-12), 2e-12, 1e-15);
}
