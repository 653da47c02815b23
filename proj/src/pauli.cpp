#include "hsmt/pauli.hpp"

#include <nlohmann/json.hpp>

namespace hsmt {

Eigen::MatrixXcd PauliString::dense() const {
  const size_t dim = size_t{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  // X^x Z^z maps |col> to (-1)^{z.col} |col ^ x>.
  for (size_t col = 0; col < dim; ++col) {
    size_t row = col ^ x;
    double sign = __builtin_popcountll(z & col) % 2 ? -1.0 : 1.0;
    m(row, col) = sign * scalar_phase();
  }
  return m;
}

std::string PauliString::str() const {
  static const char* phase_names[4] = {"+", "+i", "-", "-i"};
  std::string s = phase_names[phase_pow & 3];
  bool any = false;
  for (int q = 0; q < n; ++q) {
    bool bx = x >> q & 1, bz = z >> q & 1;
    if (!bx && !bz) continue;
    any = true;
    s += bx && bz ? "XZ" : bx ? "X" : "Z";
    s += std::to_string(q + 1);
  }
  if (!any) s += "I";
  return s;
}

MagicSquare MagicSquare::standard_two_qubit() {
  const int n = 2;
  auto X1 = PauliString::px(n, 0), X2 = PauliString::px(n, 1);
  auto Z1 = PauliString::pz(n, 0), Z2 = PauliString::pz(n, 1);
  MagicSquare sq;
  sq.entries[0] = {X1, X2, X1 * X2};
  sq.entries[1] = {X1 * Z2, Z1 * X2, (X1 * Z1 * X2 * Z2).negated()};
  sq.entries[2] = {Z2, Z1, Z1 * Z2};
  return sq;
}

namespace {

LineReport check_line(const std::array<const PauliString*, 3>& ops) {
  LineReport r;
  r.commuting = ops[0]->commutes_with(*ops[1]) && ops[0]->commutes_with(*ops[2]) &&
                ops[1]->commutes_with(*ops[2]);
  r.product = *ops[0] * *ops[1] * *ops[2];
  return r;
}

}  // namespace

MagicSquareReport verify_magic_square(const MagicSquare& sq) {
  MagicSquareReport rep;
  for (int i = 0; i < 3; ++i) {
    rep.rows[i] =
        check_line({&sq.entries[i][0], &sq.entries[i][1], &sq.entries[i][2]});
    rep.cols[i] =
        check_line({&sq.entries[0][i], &sq.entries[1][i], &sq.entries[2][i]});
  }
  return rep;
}

bool MagicSquareReport::all_commuting() const {
  for (const auto& r : rows)
    if (!r.commuting) return false;
  for (const auto& c : cols)
    if (!c.commuting) return false;
  return true;
}

bool MagicSquareReport::has_standard_parity() const {
  return rows[0].product.is_identity() && rows[1].product.is_identity() &&
         rows[2].product.is_identity() && cols[0].product.is_identity() &&
         cols[1].product.is_identity() && cols[2].product.is_minus_identity();
}

std::string report_to_json(const MagicSquareReport& r) {
  nlohmann::ordered_json j;
  auto line = [](const LineReport& lr) {
    nlohmann::ordered_json o;
    o["commuting"] = lr.commuting;
    o["product"] = lr.product.str();
    return o;
  };
  j["rows"] = {line(r.rows[0]), line(r.rows[1]), line(r.rows[2])};
  j["cols"] = {line(r.cols[0]), line(r.cols[1]), line(r.cols[2])};
  j["all_commuting"] = r.all_commuting();
  j["standard_parity"] = r.has_standard_parity();
  return j.dump();
}

}  // namespace hsmt
