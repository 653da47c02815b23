// End-to-end checks of the command-line tool. The binary path arrives as
// argv[1] from ctest.

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hsmt/record.hpp"

namespace {

hsmt::OutcomeDistribution parse_jsonl(const std::string& text) {
  hsmt::OutcomeDistribution d;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    hsmt::Outcome o;
    for (const auto& v : j["y"]) o.y.push_back(v.get<double>());
    o.p = j["p"].get<double>();
    d.rows.push_back(std::move(o));
  }
  return d;
}

std::string g_binary;

struct CmdResult {
  int exit_code = -1;
  std::string out;
};

CmdResult run_cmd(const std::string& args) {
  std::string out_path = std::string(::testing::TempDir()) + "cli_out.txt";
  std::string cmd = g_binary + " " + args + " > " + out_path + " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  CmdResult r;
  r.exit_code = WEXITSTATUS(rc);
  std::ifstream f(out_path);
  std::stringstream ss;
  ss << f.rdbuf();
  r.out = ss.str();
  return r;
}

std::string temp_path(const std::string& name) {
  return std::string(::testing::TempDir()) + name;
}

}  // namespace

TEST(Cli, MagicSquareVerifies) {
  auto r = run_cmd("verify-magic-square");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("\"standard_parity\":true"), std::string::npos);
}

TEST(Cli, GenRunDeterminism) {
  std::string inst = temp_path("inst.json");
  ASSERT_EQ(run_cmd("gen --n 4 --k 2 --seed 11 --tail 1 -o " + inst).exit_code, 0);
  auto a = run_cmd("run --instance " + inst + " --engine hypergraph --seed 5 --samples 8");
  auto b = run_cmd("run --instance " + inst + " --engine hypergraph --seed 5 --samples 8");
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  auto c = run_cmd("run --instance " + inst + " --engine hypergraph --seed 6 --samples 8");
  EXPECT_NE(a.out, c.out);
  // worker count must not change the bytes
  auto d = run_cmd("run --instance " + inst +
                   " --engine hypergraph --seed 5 --samples 8 --jobs 2");
  EXPECT_EQ(a.out, d.out);
}

TEST(Cli, EnginesAgreeOnEnumeration) {
  std::string inst = temp_path("inst2.json");
  ASSERT_EQ(run_cmd("gen --n 5 --k 2 --seed 3 --tail 1 -o " + inst).exit_code, 0);
  auto dense = run_cmd("run --instance " + inst + " --engine dense --enumerate");
  auto hyper = run_cmd("run --instance " + inst + " --engine hypergraph --enumerate");
  ASSERT_EQ(dense.exit_code, 0);
  ASSERT_EQ(hyper.exit_code, 0);
  EXPECT_LT(hsmt::total_variation(parse_jsonl(dense.out), parse_jsonl(hyper.out)), 1e-9);
}

TEST(Cli, ExitCodesAreDistinct) {
  // validation failure: ell below the grammar minimum
  EXPECT_EQ(run_cmd("gen --n 4 --k 2 --ell 3").exit_code, 2);
  // infeasible enumeration: row budget exhausted
  std::string inst = temp_path("inst3.json");
  ASSERT_EQ(run_cmd("gen --n 5 --k 2 --seed 3 --tail 1 -o " + inst).exit_code, 0);
  EXPECT_EQ(
      run_cmd("run --instance " + inst + " --engine dense --enumerate --max-rows 4")
          .exit_code,
      3);
  // missing file: io error
  EXPECT_EQ(run_cmd("run --instance /nonexistent.json").exit_code, 4);
}

TEST(Cli, AntidistinguishCertifies) {
  auto r = run_cmd("antidistinguish --n 4 --k 2 --seed 9");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("\"pass\":true"), std::string::npos);
  EXPECT_NE(r.out.find("\"max_triple_product\":0.0"), std::string::npos);
}

TEST(Cli, LieDimMatchesFormula) {
  auto r = run_cmd("lie-dim --n 6 --k 2");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("\"dim\":28"), std::string::npos);
  EXPECT_NE(r.out.find("\"match\":true"), std::string::npos);
}

TEST(Cli, BenchMemorySmallSweep) {
  auto r = run_cmd("bench-memory --k 2 --n-values 8,16,32 --seed 1");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("\"within_bound\":true"), std::string::npos);
  EXPECT_NE(r.out.find("\"slope_ok\":true"), std::string::npos);
}

TEST(Cli, SeventeenDigitProbabilities) {
  std::string inst = temp_path("inst4.json");
  ASSERT_EQ(run_cmd("gen --n 2 --k 2 --seed 2 --tail 1 -o " + inst).exit_code, 0);
  auto r = run_cmd("run --instance " + inst + " --engine dense --enumerate");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("e-"), std::string::npos);
  EXPECT_NE(r.out.find("\"p\":"), std::string::npos);
  // mantissa of 17 significant digits: d.dddddddddddddddd
  size_t pos = r.out.find("\"p\":");
  std::string digits = r.out.substr(pos + 4, 18);
  EXPECT_EQ(digits[1], '.');
}

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <path-to-hsmt-binary>\n");
    return 1;
  }
  g_binary = argv[1];
  return RUN_ALL_TESTS();
}
