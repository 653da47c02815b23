#include "hsmt/unitary_meas.hpp"

#include <algorithm>
#include <numeric>

namespace hsmt {

namespace {

// Groups sorted values into runs separated by gaps larger than tol.
std::vector<std::vector<int>> group_sorted(const std::vector<double>& vals,
                                           const std::vector<int>& order, double tol) {
  std::vector<std::vector<int>> groups;
  for (int idx : order) {
    if (groups.empty() || vals[idx] - vals[groups.back().back()] > tol)
      groups.push_back({idx});
    else
      groups.back().push_back(idx);
  }
  return groups;
}

}  // namespace

UnitarySpectrum phase_clusters(const Eigen::MatrixXcd& u, double tol) {
  const int m = static_cast<int>(u.rows());
  if (u.cols() != m) throw ValidationError("matrix not square");
  Eigen::MatrixXcd uhu = u.adjoint() * u;
  double unit_err = (uhu - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff();
  if (unit_err > 1e-10) throw ValidationError("operator is not unitary");

  // A unitary splits into commuting Hermitian parts C + iS. Diagonalize C
  // with an orthonormal basis, then split each C-eigenspace by S; the joint
  // basis is orthonormal even when eigenphases are degenerate or close.
  Eigen::MatrixXcd c = (u + u.adjoint()) / 2.0;
  Eigen::MatrixXcd s = (u - u.adjoint()) / (2.0 * cplx{0, 1});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> cs(c);
  if (cs.info() != Eigen::Success) throw ValidationError("eigensolver failed");

  std::vector<double> cvals(m);
  for (int i = 0; i < m; ++i) cvals[i] = cs.eigenvalues()(i);
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  auto cgroups = group_sorted(cvals, order, 1e-10);

  Eigen::MatrixXcd basis(m, m);
  std::vector<double> phases(m);
  int col = 0;
  for (const auto& g : cgroups) {
    const int gs = static_cast<int>(g.size());
    Eigen::MatrixXcd q(m, gs);
    for (int j = 0; j < gs; ++j) q.col(j) = cs.eigenvectors().col(g[j]);
    Eigen::MatrixXcd s_sub = q.adjoint() * s * q;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ss(s_sub);
    if (ss.info() != Eigen::Success) throw ValidationError("eigensolver failed");
    Eigen::MatrixXcd q2 = q * ss.eigenvectors();
    for (int j = 0; j < gs; ++j) {
      cplx lambda = q2.col(j).dot(u * q2.col(j));  // Rayleigh quotient
      basis.col(col) = q2.col(j);
      phases[col] = canon_phase(std::atan2(lambda.imag(), lambda.real()));
      ++col;
    }
  }

  // Circular clustering of the phases at the measurement tolerance.
  std::vector<int> porder(m);
  std::iota(porder.begin(), porder.end(), 0);
  std::sort(porder.begin(), porder.end(),
            [&](int a, int b) { return phases[a] < phases[b]; });
  std::vector<double> pv = phases;
  auto pgroups = group_sorted(pv, porder, tol);
  // Merge across the -pi/pi cut.
  if (pgroups.size() > 1) {
    double lo = phases[pgroups.front().front()];
    double hi = phases[pgroups.back().back()];
    if ((lo + 2 * M_PI) - hi < tol) {
      for (int idx : pgroups.front()) pgroups.back().push_back(idx);
      pgroups.erase(pgroups.begin());
    }
  }

  UnitarySpectrum out;
  out.dim = m;
  for (const auto& g : pgroups) {
    PhaseCluster pc;
    pc.basis.resize(m, static_cast<int>(g.size()));
    // Representative phase: circular mean of the members.
    cplx mean{0, 0};
    for (size_t j = 0; j < g.size(); ++j) {
      pc.basis.col(static_cast<int>(j)) = basis.col(g[j]);
      mean += std::polar(1.0, phases[g[j]]);
    }
    pc.phase = canon_phase(std::atan2(mean.imag(), mean.real()));
    out.clusters.push_back(std::move(pc));
  }
  std::sort(out.clusters.begin(), out.clusters.end(),
            [](const PhaseCluster& a, const PhaseCluster& b) { return a.phase < b.phase; });

  // Resolution of the identity.
  Eigen::MatrixXcd resolve = Eigen::MatrixXcd::Zero(m, m);
  for (const auto& pc : out.clusters) resolve += pc.basis * pc.basis.adjoint();
  double res_err = (resolve - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff();
  if (res_err > kCompletenessTol)
    throw ValidationError("cluster projectors do not resolve the identity");
  return out;
}

namespace {

// Expands each index into (outer bits, target sub-index) and applies fn to
// every sub-block of 2^t amplitudes.
template <typename Fn>
void for_each_block(const DenseState& state, const std::vector<int>& targets, Fn fn) {
  const int t = static_cast<int>(targets.size());
  const size_t sub_dim = size_t{1} << t;
  uint64_t tmask = 0;
  for (int q : targets) tmask |= uint64_t{1} << q;
  const size_t outer_count = state.dim() >> t;
  std::vector<size_t> idx(sub_dim);
  for (size_t outer = 0; outer < outer_count; ++outer) {
    // Scatter outer bits into the non-target positions.
    uint64_t base = 0;
    uint64_t rem = outer;
    for (int q = 0; q < state.n; ++q) {
      if (tmask >> q & 1) continue;
      base |= (rem & 1) << q;
      rem >>= 1;
    }
    for (size_t s = 0; s < sub_dim; ++s) {
      uint64_t full = base;
      for (int b = 0; b < t; ++b)
        if (s >> b & 1) full |= uint64_t{1} << targets[b];
      idx[s] = full;
    }
    fn(idx);
  }
}

}  // namespace

std::vector<double> cluster_probabilities(const DenseState& state,
                                          const std::vector<int>& targets,
                                          const UnitarySpectrum& spec) {
  if (spec.dim != (1 << targets.size()))
    throw ValidationError("spectrum dimension mismatch");
  std::vector<double> probs(spec.clusters.size(), 0.0);
  const size_t sub_dim = spec.dim;
  Eigen::VectorXcd block(sub_dim);
  for_each_block(state, targets, [&](const std::vector<size_t>& idx) {
    for (size_t s = 0; s < sub_dim; ++s) block(s) = state.amps[idx[s]];
    for (size_t c = 0; c < spec.clusters.size(); ++c) {
      Eigen::VectorXcd proj = spec.clusters[c].basis.adjoint() * block;
      probs[c] += proj.squaredNorm();
    }
  });
  double total = 0;
  for (double p : probs) total += p;
  if (std::abs(total - 1.0) > kCompletenessTol)
    throw ValidationError("cluster probabilities do not sum to one");
  return probs;
}

void project_cluster(DenseState& state, const std::vector<int>& targets,
                     const PhaseCluster& cluster, double prob) {
  if (prob <= 0) throw ValidationError("projection onto zero-probability cluster");
  const size_t sub_dim = size_t{1} << targets.size();
  Eigen::VectorXcd block(sub_dim);
  for_each_block(state, targets, [&](const std::vector<size_t>& idx) {
    for (size_t s = 0; s < sub_dim; ++s) block(s) = state.amps[idx[s]];
    Eigen::VectorXcd out = cluster.basis * (cluster.basis.adjoint() * block);
    for (size_t s = 0; s < sub_dim; ++s) state.amps[idx[s]] = out(s);
  });
  kern::scale(state.amps.data(), state.amps.size(), 1.0 / std::sqrt(prob));
}

}  // namespace hsmt
