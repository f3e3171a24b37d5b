// zarank: construct, verify, count, oracle, sweep and table subcommands.
//
// Exit codes: 0 pass, 1 verdict fail, 2 usage, 3 budget.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zarank/experiment.hpp"

namespace {

using zarank::experiment::ExperimentConfig;
using zarank::experiment::Mode;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed, budget, t, edge_cap;
  std::optional<unsigned> jobs;
  std::optional<std::uint32_t> r, retries, restarts;
  std::optional<std::string> out, graph, c1, c2;
  std::vector<std::uint32_t> s;
  std::vector<std::uint64_t> q;
  std::vector<std::string> m, query;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "key=value config file; flags override it");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--jobs", f.jobs, "worker threads");
  cmd->add_option("--budget", f.budget, "enumeration cap");
}

void add_construction(CLI::App* cmd, Flags& f) {
  cmd->add_option("--s", f.s, "left pattern sizes s_1..s_{r-1}")->delimiter(',');
  cmd->add_option("--t", f.t, "forbidden last-part size");
  cmd->add_option("--m", f.m, "left part sizes m_1..m_{r-1} (or 'q')")->delimiter(',');
  cmd->add_option("--r", f.r, "uniformity (checked against the other parameters)");
  cmd->add_option("--retries", f.retries, "resamples per position");
  cmd->add_option("--restarts", f.restarts, "full restarts");
}

ExperimentConfig merge(Mode mode, const Flags& f) {
  ExperimentConfig cfg = f.config.empty() ? ExperimentConfig{} : zarank::experiment::load_config(f.config);
  cfg.mode = mode;
  if (f.seed) cfg.seed = *f.seed;
  if (f.budget) cfg.budget = *f.budget;
  if (f.jobs) cfg.jobs = *f.jobs;
  if (f.out) cfg.out = *f.out;
  if (f.t) cfg.t = *f.t;
  if (f.r) cfg.r = *f.r;
  if (f.edge_cap) cfg.edge_cap = *f.edge_cap;
  if (f.retries) cfg.retries = *f.retries;
  if (f.restarts) cfg.restarts = *f.restarts;
  if (f.graph) cfg.graph = *f.graph;
  if (f.c1) cfg.c1 = *f.c1;
  if (f.c2) cfg.c2 = *f.c2;
  if (!f.s.empty()) cfg.s = f.s;
  if (!f.q.empty()) cfg.q = f.q;
  if (!f.m.empty()) {
    cfg.m.clear();
    for (const auto& v : f.m) zarank::experiment::set_key(cfg, "m", v);
  }
  if (!f.query.empty()) cfg.query = f.query;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zarankiewicz construction, verification and counting toolkit"};
  app.require_subcommand(1);
  Flags f;

  auto* construct = app.add_subcommand("construct", "build a random algebraic construction and certify it");
  add_common(construct, f);
  add_construction(construct, f);
  construct->add_option("--q", f.q, "field order (prime power)");

  auto* sweep = app.add_subcommand("sweep", "run the construction for each listed q");
  add_common(sweep, f);
  add_construction(sweep, f);
  sweep->add_option("--q", f.q, "field orders")->delimiter(',');

  auto* verify = app.add_subcommand("verify", "exhaustively check a zng graph for ordered K_{s_1..s_{r-1},t}");
  add_common(verify, f);
  verify->add_option("--graph", f.graph, "input zng file");
  verify->add_option("--s", f.s, "pattern sizes s_1..s_{r-1}")->delimiter(',');
  verify->add_option("--t", f.t, "forbidden last-part size");
  verify->add_option("--r", f.r, "expected uniformity");

  auto* count = app.add_subcommand("count", "exact ordered copy counts and the Jensen lower bound");
  add_common(count, f);
  count->add_option("--graph", f.graph, "input zng file");
  count->add_option("--s", f.s, "pattern sizes s_1..s_r")->delimiter(',');
  count->add_option("--c1", f.c1, "edge threshold probe (rational)");
  count->add_option("--c2", f.c2, "copy count probe (rational)");
  count->add_option("--r", f.r, "expected uniformity");

  auto* oracle = app.add_subcommand("oracle", "exact Zarankiewicz number by branch and bound");
  add_common(oracle, f);
  oracle->add_option("--m", f.m, "part sizes m_1..m_r")->delimiter(',');
  oracle->add_option("--s", f.s, "pattern sizes s_1..s_r")->delimiter(',');
  oracle->add_option("--query", f.query, "'m_1,..,m_r;s_1,..,s_r' (repeatable)");
  oracle->add_option("--edge-cap", f.edge_cap, "maximum number of potential edges");

  auto* table = app.add_subcommand("table", "exact values against m_1..m_{r-1} m_r^{1-1/s_1..s_{r-1}}");
  add_common(table, f);
  table->add_option("--query", f.query, "'m_1,..,m_r;s_1,..,s_r' (repeatable)");
  table->add_option("--edge-cap", f.edge_cap, "maximum number of potential edges");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return zarank::experiment::kUsage;
  }

  const std::pair<CLI::App*, Mode> modes[] = {{construct, Mode::Construct}, {sweep, Mode::Sweep},
                                               {verify, Mode::Verify},       {count, Mode::Count},
                                               {oracle, Mode::Oracle},       {table, Mode::Table}};
  for (const auto& [cmd, mode] : modes) {
    if (!cmd->parsed()) continue;
    ExperimentConfig cfg;
    try {
      cfg = merge(mode, f);
    } catch (const zarank::Error& e) {
      std::cerr << "FAIL reason=usage detail=" << nlohmann::json(std::string(e.what())).dump() << '\n';
      return zarank::experiment::kUsage;
    }
    return zarank::experiment::run(cfg);
  }
  return zarank::experiment::kUsage;
}
