#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hsmt/hyperedge.hpp"

namespace hsmt {

// One input token: an optional gate edge (alpha, gamma) followed by an
// optional measurement spec (beta, phi, theta). A token with neither alpha
// nor beta is a recap query: the model must repeat an earlier output.
//
// gamma and the kappa entries are in radians; hypergraph weights in units of
// pi are derived at the engine boundary (weight = -gamma/pi).
struct Token {
  std::optional<Hyperedge> alpha;
  std::optional<Hyperedge> beta;
  double gamma = 0.0;
  std::vector<double> phi;              // length |beta|
  std::map<Hyperedge, double> theta;    // keys are subsets of beta

  bool is_recap() const { return !alpha && !beta; }

  void validate(int n) const {
    if (alpha) {
      if (alpha->empty()) throw ValidationError("empty alpha edge");
      alpha->check_range(n);
    }
    if (beta) {
      if (beta->empty()) throw ValidationError("empty beta edge");
      beta->check_range(n);
      if (phi.size() != beta->size())
        throw ValidationError("phi length != |beta|");
      for (const auto& [w, t] : theta) {
        (void)t;
        if (!w.subset_of(*beta)) throw ValidationError("theta key not a subset of beta");
      }
    } else {
      if (!phi.empty() || !theta.empty())
        throw ValidationError("kappa content without beta");
    }
  }

  static Token gate(Hyperedge edge, double gamma_rad) {
    Token t;
    t.alpha = std::move(edge);
    t.gamma = gamma_rad;
    return t;
  }

  static Token measurement(Hyperedge targets, std::vector<double> phi_,
                           std::map<Hyperedge, double> theta_ = {}) {
    Token t;
    t.beta = std::move(targets);
    t.phi = std::move(phi_);
    t.theta = std::move(theta_);
    return t;
  }

  static Token recap() { return Token{}; }

  bool operator==(const Token&) const = default;
};

using TokenSequence = std::vector<Token>;

// --- JSON (1-based vertices externally) -----------------------------------

nlohmann::ordered_json edge_to_json(const Hyperedge& e);
Hyperedge edge_from_json(const nlohmann::json& j);
std::string subset_key(const Hyperedge& e);      // "1,3" style, sorted 1-based
Hyperedge subset_from_key(const std::string& s);

nlohmann::ordered_json token_to_json(const Token& t);
Token token_from_json(const nlohmann::json& j);

std::string tokens_to_json_string(const TokenSequence& ts);
TokenSequence tokens_from_json_string(const std::string& s);

}  // namespace hsmt
