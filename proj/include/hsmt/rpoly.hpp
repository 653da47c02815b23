#pragma once

#include <Eigen/Dense>

#include "hsmt/poly.hpp"

namespace hsmt {

// The edge stabilizer of a single-edge hypergraph state factors as
// (prod_{i in edge} X_i) * exp(i*pi*e*R) with R an integer-coefficient
// multilinear polynomial of constant term 1. These extract R symbolically
// by commuting each X_i through the diagonal gate.

// Qubit variant: R is a polynomial in the occupation numbers n_i = (I-Z_i)/2.
MultilinearPoly compute_r_qubit(const Hyperedge& edge);

// Qumode variant: R is a polynomial in the positions q_i.
MultilinearPoly compute_r_qumode(const Hyperedge& edge);

// Dense n-qubit diagonal of a multilinear polynomial in the occupations.
Eigen::VectorXd poly_diagonal_qubit(const MultilinearPoly& p, int n);

// Dense operator prod_{i in edge} X_i on n qubits.
Eigen::MatrixXcd x_product_dense(const Hyperedge& edge, int n);

// Direct-conjugation oracle: U_edge(e) (prod X_i) U_edge(e)^dagger with
// U_edge(e) = exp(i*pi*e*prod n_i), as a dense matrix.
Eigen::MatrixXcd edge_stabilizer_dense(const Hyperedge& edge, double e, int n);

}  // namespace hsmt
