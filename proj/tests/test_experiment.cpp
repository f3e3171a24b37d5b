#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "zarank/experiment.hpp"

using namespace zarank;
using namespace zarank::experiment;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("zarank_test_" + name);
  fs::remove_all(dir);
  return dir;
}

struct Captured {
  int code;
  std::string out, err;
};

Captured run_captured(const ExperimentConfig& cfg) {
  std::ostringstream out, err;
  const int code = run(cfg, {out, err});
  return {code, out.str(), err.str()};
}

ExperimentConfig construct_cfg(const fs::path& out) {
  ExperimentConfig c;
  c.mode = Mode::Construct;
  c.s = {2};
  c.t = 4;
  c.q = {5};
  c.m = {"10"};
  c.out = out.string();
  return c;
}

int shell(const std::string& args) {
  const std::string cmd = std::string(ZARANK_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, RoundTrip) {
  ExperimentConfig c;
  c.mode = Mode::Count;
  c.seed = 99;
  c.jobs = 3;
  c.r = 3;
  c.s = {2, 1, 2};
  c.t = 7;
  c.q = {5, 7};
  c.m = {"q", "4"};
  c.graph = "g.zng";
  c.c1 = "1/2";
  c.c2 = "3";
  c.query = {"2,2;2,2"};
  EXPECT_EQ(parse_config(to_text(c)), c);
  EXPECT_EQ(to_text(parse_config(to_text(c))), to_text(c));
  EXPECT_EQ(parse_config(to_text(ExperimentConfig{})), ExperimentConfig{});
}

TEST(Config, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_config(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("mode=construct\n\nbogus=1\n"), 3u);
  EXPECT_EQ(line_of("seed=1\nseed=2\n"), 2u);
  EXPECT_EQ(line_of("# c\nt=x\n"), 2u);
  EXPECT_EQ(line_of("mode=fly\n"), 1u);
  EXPECT_EQ(line_of("c1=1/0\n"), 1u);
  EXPECT_EQ(line_of("no equals sign\n"), 1u);
  EXPECT_EQ(line_of("s=2\ns=3  # list keys repeat\n"), 0u);
}

TEST(Config, ParseQuery) {
  auto q = parse_query("2,2,2;1,1,2");
  EXPECT_EQ(q.parts, (std::vector<std::uint32_t>{2, 2, 2}));
  EXPECT_EQ(q.pattern, (std::vector<std::uint32_t>{1, 1, 2}));
  EXPECT_THROW(parse_query("2,2"), UsageError);
  EXPECT_THROW(parse_query("2,2;2"), UsageError);
}

TEST(Run, ConstructPasses) {
  const auto dir = scratch("construct");
  auto res = run_captured(construct_cfg(dir));
  EXPECT_EQ(res.code, kPass) << res.err;
  EXPECT_NE(res.out.find("edges=50"), std::string::npos);
  EXPECT_NE(res.out.find("verdict=pass"), std::string::npos);
  const auto cert = nlohmann::json::parse(slurp(dir / "certificate.json"));
  EXPECT_EQ(cert["verdict"], "pass");
  // the emitted graph re-parses and re-verifies to the same verdict
  const auto graph = read_graph(slurp(dir / "graph.zng"));
  EXPECT_EQ(graph.edge_count(), 50u);
  EXPECT_TRUE(construct::verify_freeness(graph, std::vector<std::uint32_t>{2}, 4).pass);
  fs::remove_all(dir);
}

TEST(Run, ConstructIsDeterministic) {
  const auto a = scratch("det_a"), b = scratch("det_b");
  ASSERT_EQ(run_captured(construct_cfg(a)).code, kPass);
  ASSERT_EQ(run_captured(construct_cfg(b)).code, kPass);
  for (const char* f : {"graph.zng", "family.json", "certificate.json"}) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Run, OracleLedger) {
  const auto dir = scratch("oracle");
  ExperimentConfig c;
  c.mode = Mode::Oracle;
  c.query = {"2,2;2,2"};
  c.out = dir.string();
  auto res = run_captured(c);
  ASSERT_EQ(res.code, kPass) << res.err;
  std::ifstream ledger(dir / "oracle.tsv");
  std::string header, row;
  std::getline(ledger, header);
  std::getline(ledger, row);
  EXPECT_EQ(row.substr(0, row.find('\t', row.find('\t') + 1)), "z(2,2;2,2)\t3");
  EXPECT_EQ(read_graph(slurp(dir / "witness_2,2_2,2.zng")).edge_count(), 3u);
  fs::remove_all(dir);
}

TEST(Run, VerifyPlantedViolation) {
  const auto dir = scratch("verify");
  ExperimentConfig c;
  c.mode = Mode::Verify;
  c.graph = std::string(ZARANK_SAMPLES_DIR) + "/k22_planted.zng";
  c.s = {2};
  c.t = 2;
  c.out = dir.string();
  auto res = run_captured(c);
  EXPECT_EQ(res.code, kVerdictFail);
  EXPECT_NE(res.out.find("violating_pattern=[1,3]"), std::string::npos) << res.out;
  const auto cert = nlohmann::json::parse(slurp(dir / "certificate.json"));
  EXPECT_EQ(cert["first_violation"]["pattern"], nlohmann::json::parse("[[1,3]]"));
  fs::remove_all(dir);
}

TEST(Run, CountReport) {
  const auto dir = scratch("count");
  ExperimentConfig c;
  c.mode = Mode::Count;
  c.graph = std::string(ZARANK_SAMPLES_DIR) + "/c6.zng";
  c.s = {2, 2};
  c.c1 = "1/2";
  c.c2 = "1/10";
  c.out = dir.string();
  auto res = run_captured(c);
  EXPECT_EQ(res.code, kPass) << res.err;
  const auto rep = nlohmann::json::parse(slurp(dir / "count_report.json"));
  EXPECT_EQ(rep["t_b"], "0");
  EXPECT_EQ(rep["t_a"], "3");
  EXPECT_TRUE(rep["supersaturation"].is_object());
  fs::remove_all(dir);
}

TEST(Run, SweepMarksInfeasibleRow) {
  const auto dir = scratch("sweep");
  ExperimentConfig c;
  c.mode = Mode::Sweep;
  c.s = {2};
  c.t = 2;
  c.q = {2, 3, 5};
  c.m = {"5"};
  c.retries = 8;
  c.restarts = 2;
  c.out = dir.string();
  auto res = run_captured(c);
  EXPECT_EQ(res.code, kVerdictFail);
  std::istringstream table(slurp(dir / "sweep.tsv"));
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(table, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_NE(rows[1].find("failed"), std::string::npos);
  EXPECT_NE(rows[2].find("\tpass\tok"), std::string::npos);
  EXPECT_NE(rows[3].find("\tpass\tok"), std::string::npos);
  for (const auto& r : rows) EXPECT_EQ(std::count(r.begin(), r.end(), '\t'), 8);
  fs::remove_all(dir);
}

TEST(Run, SweepRatiosAreOne) {
  const auto dir = scratch("sweep_ratio");
  ExperimentConfig c;
  c.mode = Mode::Sweep;
  c.s = {2};
  c.t = 4;
  c.q = {5, 7, 9, 11};
  c.m = {"q"};
  c.out = dir.string();
  auto res = run_captured(c);
  EXPECT_EQ(res.code, kPass) << res.err;
  std::istringstream table(slurp(dir / "sweep.tsv"));
  std::string line;
  std::getline(table, line);
  int rows = 0;
  while (std::getline(table, line)) {
    ++rows;
    EXPECT_NE(line.find("\t1.000000\t"), std::string::npos) << line;
  }
  EXPECT_EQ(rows, 4);
  fs::remove_all(dir);
}

TEST(Run, EmptySweep) {
  const auto dir = scratch("sweep_empty");
  ExperimentConfig c;
  c.mode = Mode::Sweep;
  c.out = dir.string();
  auto res = run_captured(c);
  EXPECT_EQ(res.code, kPass);
  EXPECT_EQ(slurp(dir / "sweep.tsv"), "q\tm\tn\tedges\tbound\tratio\tmax_common_neighborhood\tverdict\tstatus\n");
  fs::remove_all(dir);
}

TEST(Run, ErrorsMapToExitCodes) {
  const auto dir = scratch("errors");
  auto c = construct_cfg(dir);
  c.t = 1;  // t < s
  auto res = run_captured(c);
  EXPECT_EQ(res.code, kUsage);
  EXPECT_EQ(res.err.rfind("FAIL reason=usage detail=", 0), 0u) << res.err;
  EXPECT_TRUE(fs::exists(dir / "failure.json"));

  c = construct_cfg(dir);
  c.budget = 10;
  EXPECT_EQ(run_captured(c).code, kBudget);

  c = construct_cfg(dir);
  c.r = 3;
  EXPECT_EQ(run_captured(c).code, kUsage);

  ExperimentConfig o;
  o.mode = Mode::Oracle;
  o.query = {"6,6;2,2"};
  o.out = dir.string();
  EXPECT_EQ(run_captured(o).code, kBudget);
  fs::remove_all(dir);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  const std::string out = " --out " + dir.string();
  EXPECT_EQ(shell("construct --s 2 --t 4 --q 5 --m 10 --seed 1" + out), 0);
  EXPECT_EQ(shell("verify --graph " + std::string(ZARANK_SAMPLES_DIR) + "/k22_planted.zng --s 2 --t 2" + out), 1);
  EXPECT_EQ(shell("oracle --query '2,2;2,2'" + out), 0);
  EXPECT_EQ(shell("oracle --m 2,2 --s 2,2" + out), 0);
  EXPECT_EQ(shell("sweep --s 2 --t 4 --m q --q 5,7" + out), 0);
  EXPECT_EQ(shell("construct --s 2 --t 4 --q 6 --m 10" + out), 2);
  EXPECT_EQ(shell("construct --bogus" + out), 2);
  EXPECT_EQ(shell("" + out), 2);
  EXPECT_EQ(shell("oracle --query '6,6;2,2'" + out), 3);
  fs::remove_all(dir);
}

TEST(Cli, ConfigFileWithOverride) {
  const auto dir = scratch("cli_conf");
  fs::create_directories(dir);
  {
    std::ofstream conf(dir / "c.conf");
    conf << "mode=construct\ns=2\nt=4\nq=5\nm=10\n";
  }
  EXPECT_EQ(shell("construct --config " + (dir / "c.conf").string() + " --out " + (dir / "a").string()), 0);
  EXPECT_EQ(shell("construct --config " + (dir / "c.conf").string() + " --t 1 --out " + (dir / "b").string()), 2);
  fs::remove_all(dir);
}
