#include <sstream>

#include "hsmt/token.hpp"

namespace hsmt {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json edge_to_json(const Hyperedge& e) {
  ordered_json arr = ordered_json::array();
  for (int v : e) arr.push_back(v + 1);
  return arr;
}

Hyperedge edge_from_json(const json& j) {
  std::vector<int> vs;
  for (const auto& x : j) {
    int v = x.get<int>();
    if (v < 1) throw ValidationError("vertices are 1-based in JSON");
    vs.push_back(v - 1);
  }
  return Hyperedge(std::move(vs));
}

std::string subset_key(const Hyperedge& e) {
  std::string s;
  for (size_t i = 0; i < e.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(e[i] + 1);
  }
  return s;
}

Hyperedge subset_from_key(const std::string& s) {
  std::vector<int> vs;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    int v = std::stoi(part);
    if (v < 1) throw ValidationError("vertices are 1-based in JSON");
    vs.push_back(v - 1);
  }
  return Hyperedge(std::move(vs));
}

ordered_json token_to_json(const Token& t) {
  ordered_json j;
  j["alpha"] = t.alpha ? edge_to_json(*t.alpha) : ordered_json(nullptr);
  j["beta"] = t.beta ? edge_to_json(*t.beta) : ordered_json(nullptr);
  j["gamma"] = t.gamma;
  ordered_json phi = ordered_json::array();
  for (double p : t.phi) phi.push_back(p);
  j["phi"] = phi;
  ordered_json theta = ordered_json::object();
  for (const auto& [w, v] : t.theta) theta[subset_key(w)] = v;
  j["theta"] = theta;
  return j;
}

Token token_from_json(const json& j) {
  Token t;
  if (j.contains("alpha") && !j["alpha"].is_null()) t.alpha = edge_from_json(j["alpha"]);
  if (j.contains("beta") && !j["beta"].is_null()) t.beta = edge_from_json(j["beta"]);
  t.gamma = j.value("gamma", 0.0);
  if (j.contains("phi"))
    for (const auto& x : j["phi"]) t.phi.push_back(x.get<double>());
  if (j.contains("theta"))
    for (auto it = j["theta"].begin(); it != j["theta"].end(); ++it)
      t.theta[subset_from_key(it.key())] = it.value().get<double>();
  return t;
}

std::string tokens_to_json_string(const TokenSequence& ts) {
  ordered_json arr = ordered_json::array();
  for (const Token& t : ts) arr.push_back(token_to_json(t));
  return arr.dump();
}

TokenSequence tokens_from_json_string(const std::string& s) {
  json arr = json::parse(s);
  TokenSequence out;
  for (const auto& j : arr) out.push_back(token_from_json(j));
  return out;
}

}  // namespace hsmt
