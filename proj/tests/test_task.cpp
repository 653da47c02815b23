#include <gtest/gtest.h>

#include "hsmt/dense_engine.hpp"
#include "hsmt/hypergraph_engine.hpp"
#include "hsmt/task.hpp"

using namespace hsmt;

TEST(BubbleWrap, AnchorValues) {
  EXPECT_DOUBLE_EQ(bubble_wrap(3 * M_PI / 4), 1.0);
  EXPECT_DOUBLE_EQ(bubble_wrap(7 * M_PI / 4), 0.0);
  EXPECT_DOUBLE_EQ(bubble_wrap(0.0), 0.0);
  EXPECT_DOUBLE_EQ(bubble_wrap(M_PI / 2), 1.0);
  EXPECT_DOUBLE_EQ(bubble_wrap(M_PI), 1.0);
  EXPECT_DOUBLE_EQ(bubble_wrap(3 * M_PI / 2), 0.0);
  EXPECT_THROW(bubble_wrap(std::nan("")), ValidationError);
}

TEST(BubbleWrap, PeriodicSmoothBounded) {
  SplitRng rng(11);
  for (int i = 0; i < 10000; ++i) {
    double x = (rng.next_double() - 0.5) * 50.0;
    double t = bubble_wrap(x);
    EXPECT_GE(t, 0.0);
    EXPECT_LE(t, 1.0);
    EXPECT_NEAR(bubble_wrap(x + 2 * M_PI), t, 1e-12);
  }
}

namespace {

HsmtInstance small_instance(uint64_t seed, int n = 3, int k = 2, int tail = 1) {
  SplitRng rng(seed);
  GenOptions opts;
  long long ell = static_cast<long long>(binom(n, k)) + 3LL * n - k + tail;
  return generate_instance(n, k, ell, rng, opts);
}

}  // namespace

TEST(BuildSequence, BlockStructure) {
  HsmtInstance inst = small_instance(4);
  TokenSequence seq = build_sequence(inst, Setting::Qubit);
  const int n = inst.n;
  const size_t c = binom(inst.n, inst.k);
  ASSERT_EQ(seq.size(), size_t(inst.ell));
  for (int i = 0; i < n; ++i) {
    EXPECT_FALSE(seq[i].alpha.has_value());
    ASSERT_TRUE(seq[i].beta.has_value());
    EXPECT_EQ((*seq[i].beta)[0], i);
    EXPECT_DOUBLE_EQ(seq[i].phi[0], -2.0 * inst.upsilon[i]);
  }
  auto edges = colex_subsets(inst.n, inst.k);
  for (size_t e = 0; e < c; ++e) {
    const Token& t = seq[n + e];
    ASSERT_TRUE(t.alpha.has_value());
    EXPECT_EQ(*t.alpha, edges[e]);
    EXPECT_DOUBLE_EQ(t.gamma, -inst.gamma[e]);
    EXPECT_FALSE(t.beta.has_value());
  }
  for (int i = 0; i < n; ++i) EXPECT_TRUE(seq[n + c + i].is_recap());
  for (size_t i = 0; i < inst.b.size(); ++i) {
    const Token& t = seq[2 * n + c + i];
    ASSERT_TRUE(t.beta.has_value());
    EXPECT_EQ((*t.beta)[0], inst.b[i]);
    EXPECT_DOUBLE_EQ(t.theta.at(*t.beta), 1.0);
  }
}

TEST(BuildSequence, MinimalLengthArithmetic) {
  // n=2, k=2: 2 preps + 1 gate + 2 recaps + 0 single-site tokens.
  SplitRng rng(5);
  GenOptions opts;
  HsmtInstance inst = generate_instance(2, 2, 5, rng, opts);
  EXPECT_EQ(inst.min_ell(), 5);
  TokenSequence seq = build_sequence(inst, Setting::Qubit);
  EXPECT_EQ(seq.size(), 5u);
  SplitRng rng2(6);
  EXPECT_THROW(generate_instance(2, 2, 4, rng2, opts), ValidationError);
}

TEST(BuildSequence, BubbleTiesUpsilonToGateNorm) {
  SplitRng rng(7);
  GenOptions opts;  // bubble mode
  HsmtInstance inst = generate_instance(3, 2, 11, rng, opts);
  double norm2 = 0;
  for (double g : inst.gamma) norm2 += g * g;
  for (double u : inst.upsilon) EXPECT_DOUBLE_EQ(u, bubble_wrap(norm2));
}

TEST(BuildSequence, QumodeMarkerTokens) {
  HsmtInstance inst = small_instance(9, 4, 2, 0);
  TokenSequence seq = build_sequence(inst, Setting::Qumode);
  const size_t z0 = 2 * inst.n + binom(inst.n, inst.k);
  for (size_t i = 0; i < inst.b.size(); ++i) {
    const Token& t = seq[z0 + i];
    EXPECT_DOUBLE_EQ(t.theta.at(*t.beta), 0.0);
  }
}

TEST(InstanceJson, RoundTripByteIdentical) {
  HsmtInstance inst = small_instance(12, 4, 2, 3);
  inst.tail[1] = TailSpec::rpoly();
  inst.tail[2] = TailSpec::xprod();
  std::string s1 = inst.to_json();
  HsmtInstance back = HsmtInstance::from_json(s1);
  EXPECT_EQ(back, inst);
  EXPECT_EQ(back.to_json(), s1);
  // and the rendered sequences agree byte for byte through token JSON
  std::string t1 = tokens_to_json_string(build_sequence(inst, Setting::Qubit));
  std::string t2 = tokens_to_json_string(build_sequence(back, Setting::Qubit));
  EXPECT_EQ(t1, t2);
}

TEST(ValidateTranslation, AcceptsEngineTrajectories) {
  HsmtInstance inst = small_instance(21);
  TokenSequence tokens = build_sequence(inst, Setting::Qubit);
  HypergraphEngine eng(inst.n, inst.k);
  SplitRng rng(100);
  for (int t = 0; t < 20; ++t) {
    auto rec = eng.run_sequence_sample(tokens, rng.child(t));
    EXPECT_TRUE(validate_translation(inst, rec));
  }
}

TEST(ValidateTranslation, RejectsRecapMismatchAndCorruption) {
  HsmtInstance inst = small_instance(22);
  TokenSequence tokens = build_sequence(inst, Setting::Qubit);
  HypergraphEngine eng(inst.n, inst.k);
  auto rec = eng.run_sequence_sample(tokens, SplitRng(4));
  const size_t c = binom(inst.n, inst.k);

  // recap block not repeating the preparation block
  auto bad = rec;
  bad[inst.n + c] = bad[inst.n + c] + 1.0;
  EXPECT_FALSE(validate_translation(inst, bad));

  // gate block must be all zeros
  auto bad2 = rec;
  bad2[inst.n] = 0.5;
  EXPECT_FALSE(validate_translation(inst, bad2));

  // every single-token off-support corruption is rejected
  for (size_t i = 0; i < rec.size(); ++i) {
    auto mut = rec;
    mut[i] += 0.1;
    EXPECT_FALSE(validate_translation(inst, mut)) << "position " << i;
  }

  // length mismatch is an error, not a false
  auto truncated = rec;
  truncated.pop_back();
  EXPECT_THROW(validate_translation(inst, truncated), ValidationError);
}

TEST(ValidateTranslation, RejectsImpossibleParityOutcome) {
  // all-zero preparation, then the remaining pair measured as the parity
  // observable: the -1 outcome has probability zero.
  SplitRng rng(31);
  GenOptions opts;
  opts.upsilon_mode = "zero";
  opts.anti_tail = true;
  HsmtInstance inst = generate_instance(2, 2, 7, rng, opts);
  for (auto& g : inst.gamma) g = 0.0;
  TokenSequence tokens = build_sequence(inst, Setting::Qubit);
  auto dist = DenseEngine(2).run_sequence_enumerate(tokens);
  // find a valid record and flip its parity outcome to pi
  auto rec = dist.rows[0].y;
  const size_t parity_pos = 5;  // prep(2), gate(1), recap(2), then the parity slot
  ASSERT_EQ(rec.size(), 7u);
  ASSERT_NEAR(rec[parity_pos], 0.0, 1e-12);
  rec[parity_pos] = M_PI;
  EXPECT_FALSE(validate_translation(inst, rec, EngineKind::Dense));
}

TEST(ContextualTriple, TwoQubitSpecialization) {
  ContextualTriple tri = build_contextual_triple(2, 2);
  EXPECT_EQ(tri.suffix.size(), 2u);  // n - k + 2
  // prefix lengths: n preps + C(n,k) gates
  for (const auto& p : tri.prefixes) EXPECT_EQ(p.size(), 3u);
  // the shared suffix is the parity observable then the X-product
  const Token& parity = tri.suffix[0];
  EXPECT_EQ(parity.theta.size(), 2u);
  EXPECT_DOUBLE_EQ(parity.theta.at(Hyperedge{0}), M_PI);
  EXPECT_DOUBLE_EQ(parity.theta.at(Hyperedge{1}), M_PI);
  const Token& xprod = tri.suffix[1];
  EXPECT_TRUE(xprod.theta.empty());
  EXPECT_DOUBLE_EQ(xprod.phi[0], M_PI / 2);
}

TEST(ContextualTriple, SuffixLengthAndErrors) {
  ContextualTriple tri = build_contextual_triple(3, 2);
  EXPECT_EQ(tri.suffix.size(), 3u);  // n - k + 2 = 3
  EXPECT_THROW(build_contextual_triple(3, 1), ValidationError);
}

TEST(PhaseStructure, BuildSequenceValidates) {
  HsmtInstance inst = small_instance(41, 4, 2, 2);
  TokenSequence seq = build_sequence(inst, Setting::Qubit);
  const size_t tau1 = 2 * inst.n + binom(inst.n, inst.k);
  const size_t tau2 = tau1 + (inst.n - inst.k);
  EXPECT_TRUE(validate_phase_structure(seq, tau1, tau2));
  // strict alignment rejects the preparation block's nonzero kappa
  EXPECT_FALSE(validate_phase_structure(seq, tau1, tau2, PrepAlignment::Strict));
  // an instance with all-zero upsilon is strict-valid
  SplitRng rng(50);
  GenOptions opts;
  opts.upsilon_mode = "zero";
  HsmtInstance flat = generate_instance(4, 2, 16, rng, opts);
  TokenSequence fseq = build_sequence(flat, Setting::Qubit);
  EXPECT_TRUE(validate_phase_structure(fseq, tau1, tau2, PrepAlignment::Strict));
}

TEST(PhaseStructure, RejectsLateGatesAndMissingTargets) {
  HsmtInstance inst = small_instance(42, 4, 2, 2);
  TokenSequence seq = build_sequence(inst, Setting::Qubit);
  const size_t tau1 = 2 * inst.n + binom(inst.n, inst.k);
  const size_t tau2 = tau1 + (inst.n - inst.k);
  // nonzero gamma after tau2
  TokenSequence bad = seq;
  bad.push_back(Token::gate(Hyperedge{0, 1}, 0.3));
  EXPECT_FALSE(validate_phase_structure(bad, tau1, tau2));
  // duplicated single-site target
  TokenSequence dup = seq;
  dup[tau1 + 1] = dup[tau1];
  EXPECT_FALSE(validate_phase_structure(dup, tau1, tau2));
}
