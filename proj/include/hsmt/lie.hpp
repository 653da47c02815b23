#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "hsmt/common.hpp"

namespace hsmt {

// Exact rational with normalized sign and gcd-reduced terms. Structure
// constants of the closed algebra are half-integers, but nested Jacobi
// products need exact arithmetic.
struct Rational {
  int64_t num = 0;
  int64_t den = 1;

  Rational() = default;
  Rational(int64_t n) : num(n), den(1) {}
  Rational(int64_t n, int64_t d) : num(n), den(d) { reduce(); }

  void reduce() {
    if (den == 0) throw ValidationError("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    int64_t g = std::gcd(std::abs(num), den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }

  Rational operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
  }
  Rational operator*(const Rational& o) const {
    return Rational(num * o.num, den * o.den);
  }
  Rational operator-() const { return Rational(-num, den); }
  bool is_zero() const { return num == 0; }
  bool operator==(const Rational&) const = default;
};

// Skew-Hermitian basis elements i*p_j and i*q_S (S a vertex subset; the
// empty monomial is the identity).
struct LieGenerator {
  enum class Kind : uint8_t { Momentum, QMonomial };
  Kind kind = Kind::QMonomial;
  int index = 0;       // momentum mode
  uint32_t mask = 0;   // q-monomial support

  static LieGenerator momentum(int i) {
    return LieGenerator{Kind::Momentum, i, 0};
  }
  static LieGenerator q_monomial(uint32_t m) {
    return LieGenerator{Kind::QMonomial, 0, m};
  }
  static LieGenerator identity() { return q_monomial(0); }

  bool operator==(const LieGenerator&) const = default;
  auto operator<=>(const LieGenerator&) const = default;
  std::string str() const;
};

// Single-term commutator value: coeff * basis_element (every bracket of two
// basis elements is proportional to one basis element here).
struct BracketTerm {
  Rational coeff;
  LieGenerator gen;
  bool is_zero() const { return coeff.is_zero(); }
};

// [a, b] in the i*Hermitian basis: [i*p_j, i*q_S] = (1/2) i*q_{S minus j}
// when j is in S; q-monomials and momenta commute among themselves.
BracketTerm bracket(const LieGenerator& a, const LieGenerator& b);

struct LieClosure {
  std::vector<LieGenerator> basis;  // sorted
  int dim() const { return static_cast<int>(basis.size()); }
  int index_of(const LieGenerator& g) const;
};

// Repeatedly commutes pairs starting from {p_i} and the degree-k
// q-monomials until closed. The closure dimension is
// n + sum_{j=0..k} C(n,j).
LieClosure lie_closure(int n, int k);

uint64_t closure_dimension_formula(int n, int k);

// Sparse antisymmetric tensor c[a][b] -> (c_index, coefficient).
using StructureConstants = std::map<std::pair<int, int>, std::pair<int, Rational>>;
StructureConstants structure_constants(const LieClosure& closure);

// Exact Jacobi check over all (or sampled) basis triples.
bool jacobi_holds(const LieClosure& closure);
bool jacobi_holds_sampled(const LieClosure& closure, size_t samples, uint64_t seed);

std::string structure_constants_to_json(const LieClosure& closure,
                                        const StructureConstants& sc);

}  // namespace hsmt
