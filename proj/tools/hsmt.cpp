// Command-line front end: instance generation, simulation, verification,
// and memory benchmarking. All outputs are JSON or JSONL on stdout or a
// file; exit codes: 0 success, 1 internal error, 2 validation failure,
// 3 infeasible enumeration, 4 I/O failure.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hsmt/antidistinguish.hpp"
#include "hsmt/dense_engine.hpp"
#include "hsmt/hypergraph_engine.hpp"
#include "hsmt/lie.hpp"
#include "hsmt/pauli.hpp"
#include "hsmt/qumode_engine.hpp"
#include "hsmt/task.hpp"

namespace {

using namespace hsmt;

int log_level() {
  const char* env = std::getenv("HSMT_LOG");
  if (!env) return 0;
  std::string v = env;
  if (v == "debug") return 2;
  if (v == "info") return 1;
  return 0;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[hsmt] " << msg << "\n";
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    if (!std::cout) throw std::ios_base::failure("write to stdout failed");
    return;
  }
  std::ofstream f(path);
  f << content;
  if (!f) throw std::ios_base::failure("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::ios_base::failure("cannot open: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string trajectory_jsonl(const MeasurementRecord& rec) {
  std::string out = "{\"y\":[";
  for (size_t i = 0; i < rec.size(); ++i) {
    if (i) out += ",";
    out += format_probability(rec[i]);
  }
  out += "]}\n";
  return out;
}

struct RunArgs {
  std::string instance_path;
  std::string engine = "dense";
  std::string out_path;
  std::string ckz = "ones";
  bool enumerate = false;
  uint64_t seed = 0;
  int samples = 1;
  int denominator = 1;
  int jobs = 1;
  size_t max_rows = size_t{1} << 22;
};

int cmd_run(const RunArgs& a) {
  HsmtInstance inst = HsmtInstance::from_json(read_file(a.instance_path));
  Setting setting = a.engine == "qumode" ? Setting::Qumode : Setting::Qubit;
  TokenSequence tokens = build_sequence(inst, setting);
  CkzConvention conv =
      a.ckz == "zeros" ? CkzConvention::ZerosProjector : CkzConvention::OnesProjector;
  log_info("running " + a.engine + " on " + std::to_string(tokens.size()) + " tokens");

  if (a.enumerate) {
    OutcomeDistribution dist;
    if (a.engine == "dense") {
      dist = DenseEngine(inst.n, conv).run_sequence_enumerate(tokens, a.max_rows);
    } else if (a.engine == "hypergraph") {
      dist = HypergraphEngine(inst.n, inst.k).run_sequence_enumerate(tokens, a.max_rows);
    } else if (a.engine == "qumode") {
      dist = QumodeEngine(inst.n, inst.k, a.denominator)
                 .run_sequence_enumerate(tokens, a.max_rows);
    } else {
      throw ValidationError("unknown engine: " + a.engine);
    }
    write_output(a.out_path, distribution_to_jsonl(dist));
    return 0;
  }

  SplitRng root(a.seed);
  std::vector<MeasurementRecord> records(a.samples);
  auto run_one = [&](int t) {
    SplitRng rng = root.child(t);
    if (a.engine == "dense")
      records[t] = DenseEngine(inst.n, conv).run_sequence_sample(tokens, rng);
    else if (a.engine == "hypergraph")
      records[t] = HypergraphEngine(inst.n, inst.k).run_sequence_sample(tokens, rng);
    else if (a.engine == "qumode")
      records[t] =
          QumodeEngine(inst.n, inst.k, a.denominator).run_sequence_sample(tokens, rng);
    else
      throw ValidationError("unknown engine: " + a.engine);
  };
  if (a.jobs <= 1 || a.samples <= 1) {
    for (int t = 0; t < a.samples; ++t) run_one(t);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    std::mutex mu;
    std::exception_ptr first_error;
    for (int w = 0; w < a.jobs; ++w)
      pool.emplace_back([&] {
        for (int t = next++; t < a.samples; t = next++) {
          {
            std::lock_guard<std::mutex> lock(mu);
            if (first_error) return;
          }
          try {
            run_one(t);
          } catch (...) {
            std::lock_guard<std::mutex> lock(mu);
            if (!first_error) first_error = std::current_exception();
            return;
          }
        }
      });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  std::string out;
  for (const auto& rec : records) out += trajectory_jsonl(rec);
  write_output(a.out_path, out);
  return 0;
}

int cmd_verify_magic_square(const std::string& out_path) {
  MagicSquareReport rep = verify_magic_square(MagicSquare::standard_two_qubit());
  write_output(out_path, report_to_json(rep) + "\n");
  return rep.all_commuting() && rep.has_standard_parity() ? 0 : 2;
}

int cmd_antidistinguish(int n, int k, uint64_t seed, const std::string& engine,
                        const std::string& out_path) {
  SplitRng rng(seed);
  WeightedHypergraph psi1(n, k), psi2(n, k);
  auto edges = colex_subsets(n, k);
  for (const auto& e : edges) {
    double w = double(int64_t(rng.next_u64() % 5)) - 2.0;
    psi1.set_weight(e, w);
    psi2.set_weight(e, w);
  }
  const Hyperedge& target = edges[rng.next_u64() % edges.size()];
  psi2.add_weight(target, 1.0);

  TokenSequence suffix = build_antidistinguishing_sequence(psi1, psi2, Setting::Qubit);
  std::array<TokenSequence, 3> prefixes = {prep_gate_prefix(psi1, 1.0),
                                           prep_gate_prefix(psi2, 1.0),
                                           reference_prefix(n, k)};
  EngineKind ek = engine == "hypergraph" ? EngineKind::Hypergraph : EngineKind::Dense;
  Certificate cert = check_antidistinguishability(prefixes, suffix, n, k, ek);
  write_output(out_path, cert.to_json() + "\n");
  return cert.pass ? 0 : 2;
}

int cmd_lie_dim(int n, int k, bool dump, const std::string& out_path) {
  LieClosure cl = lie_closure(n, k);
  uint64_t formula = closure_dimension_formula(n, k);
  nlohmann::ordered_json j;
  j["n"] = n;
  j["k"] = k;
  j["dim"] = cl.dim();
  j["formula"] = formula;
  j["match"] = uint64_t(cl.dim()) == formula;
  std::string out = j.dump() + "\n";
  if (dump) out += structure_constants_to_json(cl, structure_constants(cl)) + "\n";
  write_output(out_path, out);
  return uint64_t(cl.dim()) == formula ? 0 : 2;
}

int cmd_bench_memory(int k, const std::vector<int>& ns, uint64_t seed,
                     const std::string& out_path) {
  std::string out;
  std::vector<double> log_n, log_peak;
  bool within_bound = true;
  for (int n : ns) {
    HsmtInstance inst;
    inst.n = n;
    inst.k = k;
    inst.ell = static_cast<long long>(binom(n, k)) + 3LL * n - k;
    inst.upsilon.assign(n, 1.0);
    for (size_t i = 0; i < binom(n, k); ++i)
      inst.gamma.push_back(M_PI * double(1 + i % 2));
    for (int q = 0; q < n - k; ++q) inst.b.push_back(q);
    TokenSequence tokens = build_sequence(inst, Setting::Qubit);

    HgRunStats stats;
    HypergraphEngine(n, k).run_sequence_sample(tokens, SplitRng(seed), &stats);
    uint64_t bound = 0;
    for (int j = 1; j <= k; ++j) bound += binom(n, j);
    within_bound = within_bound && stats.peak_entries <= bound;
    nlohmann::ordered_json row;
    row["n"] = n;
    row["k"] = k;
    row["peak_entries"] = stats.peak_entries;
    row["bound"] = bound;
    out += row.dump() + "\n";
    log_n.push_back(std::log(double(n)));
    log_peak.push_back(std::log(double(stats.peak_entries)));
  }
  // Least-squares slope of log(peak) against log(n).
  double mx = 0, my = 0;
  for (size_t i = 0; i < log_n.size(); ++i) {
    mx += log_n[i];
    my += log_peak[i];
  }
  mx /= log_n.size();
  my /= log_n.size();
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < log_n.size(); ++i) {
    sxx += (log_n[i] - mx) * (log_n[i] - mx);
    sxy += (log_n[i] - mx) * (log_peak[i] - my);
  }
  double slope = sxy / sxx;
  nlohmann::ordered_json summary;
  summary["slope"] = slope;
  summary["within_bound"] = within_bound;
  summary["slope_ok"] = std::abs(slope - double(k)) <= 0.1;
  out += summary.dump() + "\n";
  write_output(out_path, out);
  return within_bound && std::abs(slope - double(k)) <= 0.1 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypergraph stabilizer measurement translation toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a task instance");
  int g_n = 4, g_k = 2;
  long long g_ell = -1;
  uint64_t g_seed = 0;
  GenOptions g_opts;
  int g_tail = 1;
  std::string g_out;
  gen->add_option("--n", g_n, "qubit/mode count");
  gen->add_option("--k", g_k, "maximal edge cardinality");
  gen->add_option("--ell", g_ell, "sequence length (default: minimum plus tail)");
  gen->add_option("--seed", g_seed, "rng seed");
  gen->add_option("--tail", g_tail, "tail measurement count");
  gen->add_option("--upsilon-mode", g_opts.upsilon_mode, "bubble|zero|one|random");
  gen->add_flag("--anti-tail", g_opts.anti_tail, "emit the antidistinguishing parity+X-product suffix");
  gen->add_flag("--lattice", g_opts.lattice, "lattice-compatible angles (qumode-ready)");
  gen->add_option("--denominator", g_opts.denominator, "weight denominator d");
  gen->add_option("-o,--out", g_out, "output file (default stdout)");

  // run
  auto* run = app.add_subcommand("run", "simulate an instance");
  RunArgs r;
  run->add_option("--instance", r.instance_path, "instance JSON path")->required();
  run->add_option("--engine", r.engine, "dense|hypergraph|qumode");
  run->add_flag("--enumerate", r.enumerate, "exact distribution instead of sampling");
  run->add_option("--seed", r.seed, "rng seed");
  run->add_option("--samples", r.samples, "trajectory count");
  run->add_option("--denominator", r.denominator, "qumode weight denominator");
  run->add_option("--ckz-convention", r.ckz, "ones|zeros (dense engine only)");
  run->add_option("--jobs", r.jobs, "parallel trajectory workers");
  run->add_option("--max-rows", r.max_rows, "enumeration row budget");
  run->add_option("-o,--out", r.out_path, "output file (default stdout)");

  // verify-magic-square
  auto* vms = app.add_subcommand("verify-magic-square",
                                 "check the two-qubit magic square parities");
  std::string v_out;
  vms->add_option("-o,--out", v_out, "output file (default stdout)");

  // antidistinguish
  auto* anti = app.add_subcommand("antidistinguish",
                                  "build and certify an antidistinguishing sequence");
  int a_n = 3, a_k = 2;
  uint64_t a_seed = 0;
  std::string a_engine = "dense", a_out;
  anti->add_option("--n", a_n, "qubit count");
  anti->add_option("--k", a_k, "edge cardinality");
  anti->add_option("--seed", a_seed, "rng seed");
  anti->add_option("--engine", a_engine, "dense|hypergraph");
  anti->add_option("-o,--out", a_out, "output file (default stdout)");

  // lie-dim
  auto* lie = app.add_subcommand("lie-dim", "closure dimension of the generator set");
  int l_n = 4, l_k = 2;
  bool l_dump = false;
  std::string l_out;
  lie->add_option("--n", l_n, "mode count");
  lie->add_option("--k", l_k, "maximal monomial degree");
  lie->add_flag("--dump-structure", l_dump, "emit the sparse structure tensor");
  lie->add_option("-o,--out", l_out, "output file (default stdout)");

  // bench-memory
  auto* bench = app.add_subcommand("bench-memory", "peak weight-map entries vs n");
  int b_k = 2;
  std::vector<int> b_ns = {8, 16, 32, 64};
  uint64_t b_seed = 0;
  std::string b_out;
  bench->add_option("--k", b_k, "edge cardinality");
  bench->add_option("--n-values", b_ns, "sweep sizes")->delimiter(',');
  bench->add_option("--seed", b_seed, "rng seed");
  bench->add_option("-o,--out", b_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      SplitRng rng(g_seed);
      long long min_ell = static_cast<long long>(hsmt::binom(g_n, g_k)) + 3LL * g_n - g_k;
      long long ell = g_ell < 0 ? min_ell + g_tail : g_ell;
      HsmtInstance inst = generate_instance(g_n, g_k, ell, rng, g_opts);
      write_output(g_out, inst.to_json() + "\n");
      return 0;
    }
    if (run->parsed()) return cmd_run(r);
    if (vms->parsed()) return cmd_verify_magic_square(v_out);
    if (anti->parsed()) return cmd_antidistinguish(a_n, a_k, a_seed, a_engine, a_out);
    if (lie->parsed()) return cmd_lie_dim(l_n, l_k, l_dump, l_out);
    if (bench->parsed()) return cmd_bench_memory(b_k, b_ns, b_seed, b_out);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
