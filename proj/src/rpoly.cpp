#include "hsmt/rpoly.hpp"

#include <functional>

namespace hsmt {

namespace {

// Folds s_i = X_i * exp(i*pi*e*P_i) into an accumulated (prod X) *
// exp(i*pi*e*P) form. Moving exp(i*pi*e*P) past X_i substitutes the
// variable: occupations flip (n -> 1-n), positions shift (q -> q+1).
MultilinearPoly fold_product(const Hyperedge& edge,
                             const std::function<MultilinearPoly(int)>& vertex_poly,
                             bool flip) {
  MultilinearPoly acc;
  bool first = true;
  for (int i : edge) {
    MultilinearPoly p = vertex_poly(i);
    if (first) {
      acc = std::move(p);
      first = false;
      continue;
    }
    acc = flip ? acc.flip_var(i) : acc.shift_var(i);
    acc = acc + p;
  }
  return acc;
}

}  // namespace

MultilinearPoly compute_r_qubit(const Hyperedge& edge) {
  if (edge.empty()) throw ValidationError("empty edge");
  // s_i = X_i * exp(i*pi*e*(n_{edge minus i} - 2*n_edge)).
  auto vertex_poly = [&](int i) {
    MultilinearPoly p;
    p.add_term(edge.without(i), 1);
    p.add_term(edge, -2);
    return p;
  };
  MultilinearPoly r = fold_product(edge, vertex_poly, /*flip=*/true);
  if (r.constant != 1) throw ValidationError("stabilizer polynomial constant term != 1");
  // Hermiticity check: commuting the X factor out the other side must give
  // exactly the negated polynomial.
  MultilinearPoly l = r;
  for (int i : edge) l = l.flip_var(i);
  if (!(l == -r)) throw ValidationError("stabilizer polynomial fails L == -R");
  return r;
}

MultilinearPoly compute_r_qumode(const Hyperedge& edge) {
  if (edge.empty()) throw ValidationError("empty edge");
  // s_i = X_i * exp(i*pi*e*q_{edge minus i}).
  auto vertex_poly = [&](int i) {
    MultilinearPoly p;
    p.add_term(edge.without(i), 1);
    return p;
  };
  MultilinearPoly r = fold_product(edge, vertex_poly, /*flip=*/false);
  if (r.constant != 1) throw ValidationError("stabilizer polynomial constant term != 1");
  return r;
}

Eigen::VectorXd poly_diagonal_qubit(const MultilinearPoly& p, int n) {
  const size_t dim = size_t{1} << n;
  Eigen::VectorXd diag(dim);
  std::vector<int> bits(n);
  for (size_t z = 0; z < dim; ++z) {
    for (int q = 0; q < n; ++q) bits[q] = z >> q & 1;
    diag(z) = double(poly_eval(p, bits));
  }
  return diag;
}

Eigen::MatrixXcd x_product_dense(const Hyperedge& edge, int n) {
  const size_t dim = size_t{1} << n;
  uint64_t mask = 0;
  for (int q : edge) mask |= uint64_t{1} << q;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (size_t col = 0; col < dim; ++col) m(col ^ mask, col) = 1.0;
  return m;
}

Eigen::MatrixXcd edge_stabilizer_dense(const Hyperedge& edge, double e, int n) {
  const size_t dim = size_t{1} << n;
  uint64_t mask = 0;
  for (int q : edge) mask |= uint64_t{1} << q;
  Eigen::VectorXcd u(dim);
  for (size_t z = 0; z < dim; ++z)
    u(z) = (z & mask) == mask ? std::polar(1.0, M_PI * e) : cplx{1, 0};
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (size_t col = 0; col < dim; ++col)
    out(col ^ mask, col) = u(col ^ mask) * std::conj(u(col));
  return out;
}

}  // namespace hsmt
