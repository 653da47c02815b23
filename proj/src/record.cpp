#include "hsmt/record.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace hsmt {

std::string format_probability(double p) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", p);
  return buf;
}

void OutcomeDistribution::normalize_order(double tol) {
  std::sort(rows.begin(), rows.end(), [](const Outcome& a, const Outcome& b) {
    return std::lexicographical_compare(a.y.begin(), a.y.end(), b.y.begin(), b.y.end());
  });
  std::vector<Outcome> merged;
  for (auto& r : rows) {
    if (!merged.empty() && merged.back().y.size() == r.y.size()) {
      bool same = true;
      for (size_t i = 0; i < r.y.size() && same; ++i)
        if (phase_dist(merged.back().y[i], r.y[i]) > tol) same = false;
      if (same) {
        merged.back().p += r.p;
        continue;
      }
    }
    merged.push_back(std::move(r));
  }
  rows = std::move(merged);
}

std::string distribution_to_jsonl(const OutcomeDistribution& d) {
  std::string out;
  for (const auto& r : d.rows) {
    out += "{\"y\":[";
    for (size_t i = 0; i < r.y.size(); ++i) {
      if (i) out += ",";
      out += format_probability(r.y[i]);
    }
    out += "],\"p\":" + format_probability(r.p) + "}\n";
  }
  return out;
}

std::vector<std::vector<std::vector<int>>> cluster_positions(
    const std::vector<const OutcomeDistribution*>& dists, double tol) {
  size_t len = 0;
  for (const auto* d : dists)
    for (const auto& r : d->rows) len = std::max(len, r.y.size());

  // Cluster centers per position, built from the union across distributions.
  std::vector<std::vector<double>> centers(len);
  for (size_t pos = 0; pos < len; ++pos) {
    std::vector<double> vals;
    for (const auto* d : dists)
      for (const auto& r : d->rows)
        if (pos < r.y.size()) vals.push_back(r.y[pos]);
    std::sort(vals.begin(), vals.end());
    auto& cs = centers[pos];
    for (double v : vals)
      if (cs.empty() || v - cs.back() > tol) cs.push_back(v);
    // Circular merge at the branch cut: values near pi map to the first
    // cluster if it sits near -pi.
    if (cs.size() > 1 && (cs.front() + 2 * M_PI) - cs.back() <= tol) cs.pop_back();
  }

  auto assign = [&](size_t pos, double v) {
    const auto& cs = centers[pos];
    int best = 0;
    double bd = phase_dist(v, cs[0]);
    for (size_t i = 1; i < cs.size(); ++i) {
      double dd = phase_dist(v, cs[i]);
      if (dd < bd) {
        bd = dd;
        best = static_cast<int>(i);
      }
    }
    return best;
  };

  std::vector<std::vector<std::vector<int>>> out(dists.size());
  for (size_t di = 0; di < dists.size(); ++di) {
    for (const auto& r : dists[di]->rows) {
      std::vector<int> ids(r.y.size());
      for (size_t pos = 0; pos < r.y.size(); ++pos) ids[pos] = assign(pos, r.y[pos]);
      out[di].push_back(std::move(ids));
    }
  }
  return out;
}

double total_variation(const OutcomeDistribution& a, const OutcomeDistribution& b, double tol) {
  auto ids = cluster_positions({&a, &b}, tol);
  std::map<std::vector<int>, double> pa, pb;
  for (size_t i = 0; i < a.rows.size(); ++i) pa[ids[0][i]] += a.rows[i].p;
  for (size_t i = 0; i < b.rows.size(); ++i) pb[ids[1][i]] += b.rows[i].p;
  double tv = 0;
  for (const auto& [y, p] : pa) {
    auto it = pb.find(y);
    tv += std::abs(p - (it == pb.end() ? 0.0 : it->second));
  }
  for (const auto& [y, p] : pb)
    if (!pa.count(y)) tv += p;
  return tv / 2.0;
}

}  // namespace hsmt
