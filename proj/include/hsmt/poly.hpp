#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "hsmt/hyperedge.hpp"

namespace hsmt {

// Integer-coefficient multilinear polynomial in per-vertex occupation
// variables. Each variable appears at most once per term; the constant term
// is kept separately from the map of nonempty monomials.
struct MultilinearPoly {
  std::map<Hyperedge, int64_t> terms;  // nonempty vertex subsets only
  int64_t constant = 0;

  void add_term(const Hyperedge& vars, int64_t coeff) {
    if (coeff == 0) return;
    if (vars.empty()) {
      constant += coeff;
      return;
    }
    auto [it, inserted] = terms.try_emplace(vars, 0);
    it->second += coeff;
    if (it->second == 0) terms.erase(it);
  }

  MultilinearPoly operator+(const MultilinearPoly& other) const {
    MultilinearPoly out = *this;
    out.constant += other.constant;
    for (const auto& [vars, c] : other.terms) out.add_term(vars, c);
    return out;
  }

  MultilinearPoly operator-() const {
    MultilinearPoly out;
    out.constant = -constant;
    for (const auto& [vars, c] : terms) out.terms[vars] = -c;
    return out;
  }

  // Substitutes x_v -> 1 - x_v.
  MultilinearPoly flip_var(int v) const {
    MultilinearPoly out;
    out.constant = constant;
    for (const auto& [vars, c] : terms) {
      if (!vars.contains(v)) {
        out.add_term(vars, c);
      } else {
        out.add_term(vars.without(v), c);
        out.add_term(vars, -c);
      }
    }
    return out;
  }

  // Substitutes x_v -> x_v + 1.
  MultilinearPoly shift_var(int v) const {
    MultilinearPoly out;
    out.constant = constant;
    for (const auto& [vars, c] : terms) {
      out.add_term(vars, c);
      if (vars.contains(v)) out.add_term(vars.without(v), c);
    }
    return out;
  }

  int degree() const {
    size_t d = 0;
    for (const auto& [vars, c] : terms) {
      (void)c;
      d = std::max(d, vars.size());
    }
    return static_cast<int>(d);
  }

  bool operator==(const MultilinearPoly&) const = default;
};

// Evaluates at a 0/1 assignment indexed by vertex.
inline int64_t poly_eval(const MultilinearPoly& p, const std::vector<int>& bits) {
  int64_t acc = p.constant;
  for (const auto& [vars, c] : p.terms) {
    int64_t prod = 1;
    for (int v : vars) {
      if (v < 0 || v >= static_cast<int>(bits.size()))
        throw ValidationError("assignment shorter than polynomial support");
      prod *= bits[v];
    }
    acc += c * prod;
  }
  return acc;
}

// Evaluation at general integer points (used for qumode residues).
inline int64_t poly_eval_int(const MultilinearPoly& p, const std::vector<int64_t>& x) {
  int64_t acc = p.constant;
  for (const auto& [vars, c] : p.terms) {
    int64_t prod = 1;
    for (int v : vars) prod *= x.at(v);
    acc += c * prod;
  }
  return acc;
}

}  // namespace hsmt
