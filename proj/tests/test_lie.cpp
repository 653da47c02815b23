#include <gtest/gtest.h>

#include "hsmt/classical_cell.hpp"
#include "hsmt/lie.hpp"
#include "hsmt/rng.hpp"

using namespace hsmt;

TEST(LieClosure, HeisenbergCase) {
  LieClosure cl = lie_closure(1, 1);
  EXPECT_EQ(cl.dim(), 3);  // p, q, identity
  EXPECT_GE(cl.index_of(LieGenerator::momentum(0)), 0);
  EXPECT_GE(cl.index_of(LieGenerator::q_monomial(1)), 0);
  EXPECT_GE(cl.index_of(LieGenerator::identity()), 0);
}

TEST(LieClosure, TwoModePairCase) {
  LieClosure cl = lie_closure(2, 2);
  EXPECT_EQ(cl.dim(), 6);  // p1, p2, q1, q2, q1 q2, identity
  EXPECT_GE(cl.index_of(LieGenerator::q_monomial(0b11)), 0);
  EXPECT_GE(cl.index_of(LieGenerator::q_monomial(0b01)), 0);
}

TEST(LieClosure, DimensionFormulaSweep) {
  for (int n = 1; n <= 10; ++n) {
    for (int k = 1; k <= std::min(n, 4); ++k) {
      LieClosure cl = lie_closure(n, k);
      EXPECT_EQ(uint64_t(cl.dim()), closure_dimension_formula(n, k))
          << "n=" << n << " k=" << k;
    }
  }
  EXPECT_EQ(closure_dimension_formula(6, 2), 28u);  // 6 + 1 + 6 + 15
}

TEST(StructureConstants, KnownEntries) {
  LieClosure cl = lie_closure(2, 2);
  StructureConstants sc = structure_constants(cl);
  int p1 = cl.index_of(LieGenerator::momentum(0));
  int q1q2 = cl.index_of(LieGenerator::q_monomial(0b11));
  int q2 = cl.index_of(LieGenerator::q_monomial(0b10));
  auto it = sc.find({p1, q1q2});
  ASSERT_NE(it, sc.end());
  EXPECT_EQ(it->second.first, q2);
  EXPECT_EQ(it->second.second, Rational(1, 2));
  // commuting pairs carry no entry
  int q1 = cl.index_of(LieGenerator::q_monomial(0b01));
  int p2 = cl.index_of(LieGenerator::momentum(1));
  EXPECT_EQ(sc.count({q1, q2}), 0u);
  EXPECT_EQ(sc.count({p1, p2}), 0u);
}

TEST(StructureConstants, Antisymmetry) {
  LieClosure cl = lie_closure(3, 2);
  StructureConstants sc = structure_constants(cl);
  for (const auto& [ab, cv] : sc) {
    auto it = sc.find({ab.second, ab.first});
    ASSERT_NE(it, sc.end());
    EXPECT_EQ(it->second.first, cv.first);
    EXPECT_EQ(it->second.second, -cv.second);
  }
}

TEST(Jacobi, ExactOnSmallClosures) {
  for (auto [n, k] : std::vector<std::pair<int, int>>{{1, 1}, {2, 2}, {3, 2}, {4, 2}}) {
    LieClosure cl = lie_closure(n, k);
    if (cl.dim() <= 30) {
      EXPECT_TRUE(jacobi_holds(cl)) << "n=" << n << " k=" << k;
    }
  }
}

TEST(Jacobi, SampledOnLargerClosures) {
  LieClosure cl = lie_closure(8, 3);
  EXPECT_TRUE(jacobi_holds_sampled(cl, 100000, 7));
}

TEST(ClassicalCell, TrivialTokenIsIdentity) {
  ClassicalLatent lat = ClassicalLatent::zeros(3);
  lat.q = {0.3, -0.7, 1.1};
  lat.p = {0.2, 0.0, -0.5};
  Token t = Token::measurement(Hyperedge{0, 1}, {0.0, 0.0});
  auto step = classical_unit_cell(lat, t);
  EXPECT_EQ(step.y, 0.0);
  EXPECT_EQ(step.latent.q, lat.q);
  EXPECT_EQ(step.latent.p, lat.p);
}

TEST(ClassicalCell, GateOnlyMomentumKick) {
  ClassicalLatent lat = ClassicalLatent::zeros(3);
  lat.q = {2.0, 3.0, 5.0};
  lat.p = {0.1, 0.2, 0.3};
  Token t = Token::gate(Hyperedge{0, 2}, 0.5);
  auto step = classical_unit_cell(lat, t);
  EXPECT_DOUBLE_EQ(step.latent.p[0], 0.1 - 0.5 * 5.0);
  EXPECT_DOUBLE_EQ(step.latent.p[2], 0.3 - 0.5 * 2.0);
  EXPECT_DOUBLE_EQ(step.latent.p[1], 0.2);
  EXPECT_EQ(step.latent.q, lat.q);
  EXPECT_EQ(step.y, 0.0);
}

namespace {

// Independent oracle: RK4 integration of the three Hamiltonian stages with
// finite-difference gradients of plain energy functions.
struct Phase {
  std::vector<double> q, p;
  double q0 = 0.0, p0 = 1.0;
};

template <typename H>
void rk4_flow(Phase& s, H ham, double t_total, double dt) {
  const double eps = 1e-6;
  auto grad = [&](const Phase& x) {
    // returns (dq/dt, dp/dt, dq0/dt) = (dH/dp, -dH/dq, dH/dp0)
    Phase gx = x;
    std::vector<double> dq(x.q.size()), dp(x.q.size());
    for (size_t i = 0; i < x.q.size(); ++i) {
      Phase a = x, b = x;
      a.p[i] += eps;
      b.p[i] -= eps;
      dq[i] = (ham(a) - ham(b)) / (2 * eps);
      a = x;
      b = x;
      a.q[i] += eps;
      b.q[i] -= eps;
      dp[i] = -(ham(a) - ham(b)) / (2 * eps);
    }
    Phase a = x, b = x;
    a.p0 += eps;
    b.p0 -= eps;
    double dq0 = (ham(a) - ham(b)) / (2 * eps);
    gx.q = dq;
    gx.p = dp;
    gx.q0 = dq0;
    gx.p0 = 0.0;  // no q0 dependence in any stage Hamiltonian
    return gx;
  };
  auto axpy = [](Phase x, const Phase& g, double h) {
    for (size_t i = 0; i < x.q.size(); ++i) {
      x.q[i] += h * g.q[i];
      x.p[i] += h * g.p[i];
    }
    x.q0 += h * g.q0;
    x.p0 += h * g.p0;
    return x;
  };
  int steps = int(std::round(t_total / dt));
  for (int s_i = 0; s_i < steps; ++s_i) {
    Phase k1 = grad(s);
    Phase k2 = grad(axpy(s, k1, dt / 2));
    Phase k3 = grad(axpy(s, k2, dt / 2));
    Phase k4 = grad(axpy(s, k3, dt));
    for (size_t i = 0; i < s.q.size(); ++i) {
      s.q[i] += dt / 6 * (k1.q[i] + 2 * k2.q[i] + 2 * k3.q[i] + k4.q[i]);
      s.p[i] += dt / 6 * (k1.p[i] + 2 * k2.p[i] + 2 * k3.p[i] + k4.p[i]);
    }
    s.q0 += dt / 6 * (k1.q0 + 2 * k2.q0 + 2 * k3.q0 + k4.q0);
  }
}

Phase integrate_token(const ClassicalLatent& lat, const Token& tok, double dt) {
  Phase s;
  s.q = lat.q;
  s.p = lat.p;
  s.q0 = 0.0;
  s.p0 = 1.0;
  auto prod = [](const Phase& x, const Hyperedge& vars) {
    double m = 1.0;
    for (int v : vars) m *= x.q[v];
    return m;
  };
  if (tok.alpha) {
    auto h_gate = [&](const Phase& x) { return tok.gamma * prod(x, *tok.alpha); };
    rk4_flow(s, h_gate, 1.0, dt);
  }
  auto h_diag = [&](const Phase& x) {
    double acc = 0;
    for (const auto& [w, th] : tok.theta) acc += th * prod(x, w);
    return acc * x.p0;
  };
  rk4_flow(s, h_diag, 1.0, dt);
  if (tok.beta) {
    auto h_shift = [&](const Phase& x) {
      double acc = 0;
      for (size_t j = 0; j < tok.beta->size(); ++j)
        acc += tok.phi[j] * x.p[(*tok.beta)[j]];
      return acc * x.p0;
    };
    rk4_flow(s, h_shift, 1.0, dt);
  }
  return s;
}

Token random_token(SplitRng& rng, int n, int k) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.next_u64() % (i + 1)]);
  Hyperedge alpha(std::vector<int>(perm.begin(), perm.begin() + k));
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.next_u64() % (i + 1)]);
  Hyperedge beta(std::vector<int>(perm.begin(), perm.begin() + k));
  Token t;
  t.alpha = alpha;
  t.gamma = rng.next_double() * 2 - 1;
  t.beta = beta;
  for (int i = 0; i < k; ++i) t.phi.push_back(rng.next_double() * 2 - 1);
  for (const auto& w : all_subsets(beta))
    if (!w.empty() && rng.next_u64() % 2) t.theta[w] = rng.next_double() * 2 - 1;
  return t;
}

}  // namespace

TEST(ClassicalCell, MatchesIntegratorOracle) {
  SplitRng rng(20240821);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 2 + rng.next_u64() % 3;
    int k = 2 + rng.next_u64() % 2;
    if (k > n) k = n;
    ClassicalLatent lat = ClassicalLatent::zeros(n);
    for (int i = 0; i < n; ++i) {
      lat.q[i] = rng.next_double() * 2 - 1;
      lat.p[i] = rng.next_double() * 2 - 1;
    }
    Token tok = random_token(rng, n, k);
    auto step = classical_unit_cell(lat, tok);
    Phase ref = integrate_token(lat, tok, 1e-4);
    double max_dev = std::abs(step.y - ref.q0);
    for (int i = 0; i < n; ++i) {
      max_dev = std::max(max_dev, std::abs(step.latent.q[i] - ref.q[i]));
      max_dev = std::max(max_dev, std::abs(step.latent.p[i] - ref.p[i]));
    }
    EXPECT_LT(max_dev, 1e-6) << "trial " << trial;
  }
}

// The latent update must be polynomial of degree <= k-1 along any line:
// the k-th finite difference of each coordinate vanishes.
TEST(ClassicalCell, LatentUpdateDegreeProbe) {
  SplitRng rng(20240822);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 3;
    int k = 2 + int(rng.next_u64() % 2);
    Token tok = random_token(rng, n, k);
    ClassicalLatent base = ClassicalLatent::zeros(n);
    ClassicalLatent dir = ClassicalLatent::zeros(n);
    for (int i = 0; i < n; ++i) {
      base.q[i] = rng.next_double() * 2 - 1;
      base.p[i] = rng.next_double() * 2 - 1;
      dir.q[i] = rng.next_double() * 2 - 1;
      dir.p[i] = rng.next_double() * 2 - 1;
    }
    auto eval = [&](double s) {
      ClassicalLatent lat = base;
      for (int i = 0; i < n; ++i) {
        lat.q[i] += s * dir.q[i];
        lat.p[i] += s * dir.p[i];
      }
      return classical_unit_cell(lat, tok).latent;
    };
    // k-th forward difference at unit spacing
    const int order = k;
    std::vector<ClassicalLatent> samples;
    for (int j = 0; j <= order; ++j) samples.push_back(eval(double(j)));
    for (int i = 0; i < n; ++i) {
      double dq = 0, dp = 0;
      for (int j = 0; j <= order; ++j) {
        double c = ((order - j) % 2 ? -1.0 : 1.0) * double(binom(order, j));
        dq += c * samples[j].q[i];
        dp += c * samples[j].p[i];
      }
      EXPECT_NEAR(dq, 0.0, 1e-8);
      EXPECT_NEAR(dp, 0.0, 1e-8);
    }
  }
}
