#pragma once

// Experiment configuration and the mode runners behind the command line tool.
//
// Config files are flat "key=value" lines; list-valued keys repeat. Every run
// is determined by (config, seed). Module seeds are derived from the master
// seed with derive_seed(master, role), so modes never share a stream.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "zarank/common.hpp"
#include "zarank/construct.hpp"
#include "zarank/count.hpp"
#include "zarank/hypergraph.hpp"
#include "zarank/oracle.hpp"

namespace zarank::experiment {

enum ExitCode : int { kPass = 0, kVerdictFail = 1, kUsage = 2, kBudget = 3 };

enum class Mode { Construct, Verify, Count, Oracle, Sweep, Table };

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::Construct: return "construct";
    case Mode::Verify: return "verify";
    case Mode::Count: return "count";
    case Mode::Oracle: return "oracle";
    case Mode::Sweep: return "sweep";
    case Mode::Table: return "table";
  }
  return "?";
}

inline Mode parse_mode(const std::string& s) {
  for (Mode m : {Mode::Construct, Mode::Verify, Mode::Count, Mode::Oracle, Mode::Sweep, Mode::Table})
    if (to_string(m) == s) return m;
  throw UsageError("unknown mode '" + s + "'");
}

struct ExperimentConfig {
  Mode mode = Mode::Construct;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::uint64_t budget = kDefaultEnumerationBudget;
  std::uint32_t retries = 64;   // per position
  std::uint32_t restarts = 16;  // full restarts
  std::uint64_t edge_cap = oracle::kDefaultEdgeCap;
  std::string out = "out";

  std::optional<std::uint32_t> r;
  std::vector<std::uint32_t> s;
  std::optional<std::uint64_t> t;
  std::vector<std::uint64_t> q;
  std::vector<std::string> m;  // integers, or "q" for "same as the field order"
  std::string graph;
  std::optional<std::string> c1, c2;  // rationals, kept as written
  std::vector<std::string> query;     // "m_1,..,m_r;s_1,..,s_r"

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

namespace detail {

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  if (v.empty() || v.size() > 19 || v.find_first_not_of("0123456789") != std::string::npos)
    throw UsageError(key + ": expected a non-negative integer, got '" + v + "'");
  return std::stoull(v);
}

inline std::vector<std::uint32_t> parse_u32_list(const std::string& key, const std::string& v) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(v);
  for (std::string tok; std::getline(ss, tok, ',');) {
    const auto x = parse_u64(key, tok);
    if (x > 0xffffffffULL) throw UsageError(key + ": value too large");
    out.push_back(static_cast<std::uint32_t>(x));
  }
  return out;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace detail

/// Applies one key=value assignment. List keys append.
inline void set_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  using detail::parse_u64;
  if (key == "mode") cfg.mode = parse_mode(value);
  else if (key == "seed") cfg.seed = parse_u64(key, value);
  else if (key == "jobs") cfg.jobs = static_cast<unsigned>(parse_u64(key, value));
  else if (key == "budget") cfg.budget = parse_u64(key, value);
  else if (key == "retries") cfg.retries = static_cast<std::uint32_t>(parse_u64(key, value));
  else if (key == "restarts") cfg.restarts = static_cast<std::uint32_t>(parse_u64(key, value));
  else if (key == "edge_cap") cfg.edge_cap = parse_u64(key, value);
  else if (key == "out") cfg.out = value;
  else if (key == "r") cfg.r = static_cast<std::uint32_t>(parse_u64(key, value));
  else if (key == "s") cfg.s.push_back(static_cast<std::uint32_t>(parse_u64(key, value)));
  else if (key == "t") cfg.t = parse_u64(key, value);
  else if (key == "q") cfg.q.push_back(parse_u64(key, value));
  else if (key == "m") {
    if (value != "q") (void)parse_u64(key, value);
    cfg.m.push_back(value);
  } else if (key == "graph") cfg.graph = value;
  else if (key == "c1" || key == "c2") {
    (void)parse_rational(value);
    (key == "c1" ? cfg.c1 : cfg.c2) = value;
  }
  else if (key == "query") cfg.query.push_back(value);
  else throw UsageError("unknown config key '" + key + "'");
}

inline ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  static const std::vector<std::string> kScalar = {"mode", "seed", "jobs", "budget", "retries", "restarts", "edge_cap",
                                                   "out",  "r",    "t",    "graph",  "c1",      "c2"};
  std::map<std::string, std::size_t> seen;
  while (std::getline(is, line)) {
    ++line_no;
    line = detail::trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key=value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (std::find(kScalar.begin(), kScalar.end(), key) != kScalar.end() && seen.count(key))
      throw ParseError(line_no, "key '" + key + "' repeated (first on line " + std::to_string(seen[key]) + ")");
    seen.emplace(key, line_no);
    try {
      set_key(cfg, key, value);
    } catch (const ParseError&) {
      throw;
    } catch (const UsageError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return cfg;
}

inline ExperimentConfig parse_config(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  return parse_config(in);
}

/// Canonical text form; parse_config(to_text(c)) == c.
inline std::string to_text(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "mode=" << to_string(c.mode) << '\n'
     << "seed=" << c.seed << '\n'
     << "jobs=" << c.jobs << '\n'
     << "budget=" << c.budget << '\n'
     << "retries=" << c.retries << '\n'
     << "restarts=" << c.restarts << '\n'
     << "edge_cap=" << c.edge_cap << '\n'
     << "out=" << c.out << '\n';
  if (c.r) os << "r=" << *c.r << '\n';
  for (auto v : c.s) os << "s=" << v << '\n';
  if (c.t) os << "t=" << *c.t << '\n';
  for (auto v : c.q) os << "q=" << v << '\n';
  for (const auto& v : c.m) os << "m=" << v << '\n';
  if (!c.graph.empty()) os << "graph=" << c.graph << '\n';
  if (c.c1) os << "c1=" << *c.c1 << '\n';
  if (c.c2) os << "c2=" << *c.c2 << '\n';
  for (const auto& v : c.query) os << "query=" << v << '\n';
  return os.str();
}

inline oracle::ZQuery parse_query(const std::string& text) {
  const auto semi = text.find(';');
  if (semi == std::string::npos) throw UsageError("query '" + text + "': expected 'm_1,...,m_r;s_1,...,s_r'");
  oracle::ZQuery q{detail::parse_u32_list("query", text.substr(0, semi)),
                   detail::parse_u32_list("query", text.substr(semi + 1))};
  oracle::validate(q);
  return q;
}

// ---------------------------------------------------------------------------

struct Streams {
  std::ostream& out = std::cout;
  std::ostream& err = std::cerr;
};

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("cannot write " + path.string());
  f << content;
}

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline RPartiteHypergraph load_graph(const std::string& path) {
  if (path.empty()) throw UsageError("no input graph given (graph=...)");
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read graph file " + path);
  try {
    return read_graph(in);
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

inline std::vector<std::uint32_t> resolve_m(const ExperimentConfig& cfg, std::uint64_t q) {
  std::vector<std::uint32_t> out;
  for (const auto& tok : cfg.m) out.push_back(static_cast<std::uint32_t>(tok == "q" ? q : std::stoull(tok)));
  return out;
}

inline void check_r(const ExperimentConfig& cfg, std::size_t expected) {
  if (cfg.r && *cfg.r != expected)
    throw UsageError("r=" + std::to_string(*cfg.r) + " disagrees with the other parameters (expected " +
                     std::to_string(expected) + ")");
}

inline construct::SelectionOptions selection_options(const ExperimentConfig& cfg) {
  construct::SelectionOptions opt;
  opt.position_retries = cfg.retries;
  opt.restarts = cfg.restarts;
  opt.budget = cfg.budget;
  opt.jobs = cfg.jobs;
  return opt;
}

inline construct::ConstructionParams construction_params(const ExperimentConfig& cfg, std::uint64_t q) {
  if (cfg.s.empty()) throw UsageError("construction needs s (one value per left part)");
  if (!cfg.t) throw UsageError("construction needs t");
  check_r(cfg, cfg.s.size() + 1);
  auto m_list = resolve_m(cfg, q);
  if (m_list.size() != cfg.s.size())
    throw UsageError("construction needs " + std::to_string(cfg.s.size()) + " part sizes m, got " +
                     std::to_string(m_list.size()));
  return construct::derive_params(cfg.s, *cfg.t, q, m_list);
}

/// prod m_i * n^{1-1/s}
inline double construction_bound(const construct::ConstructionParams& p) {
  oracle::ZQuery zq{p.m_list, p.s_list};
  zq.parts.push_back(static_cast<std::uint32_t>(p.n));
  zq.pattern.push_back(static_cast<std::uint32_t>(p.t));
  return oracle::bound_expression(zq);
}

inline std::string join(const std::vector<std::uint32_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace detail

inline int run_construct(const ExperimentConfig& cfg, Streams io) {
  if (cfg.q.size() != 1) throw UsageError("construct needs exactly one q");
  const auto params = detail::construction_params(cfg, cfg.q.front());
  for (const auto& w : params.warnings) io.err << "warning: " << w << '\n';
  const std::uint64_t seed = derive_seed(cfg.seed, "construct");
  const std::filesystem::path out(cfg.out);
  auto built = construct::build(params, seed, detail::selection_options(cfg));
  detail::write_file(out / "graph.zng", write_graph(built.graph));
  detail::write_file(out / "family.json", detail::dump(construct::to_json(built.family)));
  detail::write_file(out / "certificate.json", detail::dump(construct::to_json(built.certificate)));
  io.out << "edges=" << built.graph.edge_count() << " n=" << params.n << " d=" << params.d
         << " ell=" << params.ell.str() << " max_common_neighborhood=" << built.certificate.max_size
         << " mean_resamples=" << oracle::format_fixed(built.family.stats.mean_resamples(), 3)
         << " verdict=" << (built.certificate.pass ? "pass" : "fail") << '\n';
  return built.certificate.pass ? kPass : kVerdictFail;
}

inline int run_verify(const ExperimentConfig& cfg, Streams io) {
  const auto graph = detail::load_graph(cfg.graph);
  if (!cfg.t) throw UsageError("verify needs t");
  detail::check_r(cfg, graph.rank());
  construct::SelectionOptions opt = detail::selection_options(cfg);
  auto cert = construct::verify_freeness(graph, cfg.s, *cfg.t, opt);
  detail::write_file(std::filesystem::path(cfg.out) / "certificate.json", detail::dump(construct::to_json(cert)));
  io.out << "patterns=" << cert.pattern_count << " max_common_neighborhood=" << cert.max_size
         << " verdict=" << (cert.pass ? "pass" : "fail");
  if (cert.first_violation)
    io.out << " violating_pattern=[" << zarank::to_string(cert.first_violation->pattern)
           << "] common_neighborhood=" << cert.first_violation->size;
  io.out << '\n';
  return cert.pass ? kPass : kVerdictFail;
}

inline int run_count(const ExperimentConfig& cfg, Streams io) {
  const auto graph = detail::load_graph(cfg.graph);
  detail::check_r(cfg, graph.rank());
  count::CountOptions opt{cfg.budget, cfg.jobs};
  auto rep = count::make_report(graph, cfg.s, opt);
  if (cfg.c1 || cfg.c2) {
    if (!cfg.c1 || !cfg.c2) throw UsageError("supersaturation probes need both c1 and c2");
    rep.supersaturation =
        count::supersaturation_check(graph, cfg.s, parse_rational(*cfg.c1), parse_rational(*cfg.c2), opt);
  }
  detail::write_file(std::filesystem::path(cfg.out) / "count_report.json", detail::dump(count::to_json(rep)));
  io.out << "t_b=" << rep.t_b.str() << " t_a=" << rep.t_a.str() << " jensen_bound=" << zarank::to_string(rep.jensen_bound)
         << " bound_holds=" << (rep.bound_holds ? "true" : "false");
  if (rep.supersaturation)
    io.out << " premise=" << (rep.supersaturation->premise_holds ? "true" : "false")
           << " conclusion=" << (rep.supersaturation->conclusion_holds ? "true" : "false");
  io.out << '\n';
  return rep.bound_holds ? kPass : kVerdictFail;
}

inline int run_oracle(const ExperimentConfig& cfg, Streams io) {
  std::vector<oracle::ZQuery> queries;
  for (const auto& q : cfg.query) queries.push_back(parse_query(q));
  if (!cfg.m.empty() || !cfg.s.empty()) {
    oracle::ZQuery zq;
    for (const auto& tok : cfg.m) zq.parts.push_back(static_cast<std::uint32_t>(detail::parse_u64("m", tok)));
    zq.pattern = cfg.s;
    oracle::validate(zq);
    queries.push_back(zq);
  }
  if (queries.empty()) throw UsageError("oracle needs a query (m and s, or query=...)");
  const std::filesystem::path out(cfg.out);
  std::filesystem::create_directories(out);
  for (const auto& zq : queries) {
    detail::check_r(cfg, zq.parts.size());
    const auto res = oracle::exact_z(zq, {cfg.edge_cap, oracle::kDefaultNodeBudget});
    const std::string witness_name = "witness_" + detail::join(zq.parts) + "_" + detail::join(zq.pattern) + ".zng";
    detail::write_file(out / witness_name, write_graph(res.witness));
    oracle::append_ledger((out / "oracle.tsv").string(), zq, res, witness_name);
    io.out << oracle::to_string(zq) << "=" << res.z << " nodes=" << res.nodes << '\n';
  }
  return kPass;
}

inline int run_table(const ExperimentConfig& cfg, Streams io) {
  std::vector<oracle::BoundQuery> queries;
  for (const auto& q : cfg.query) queries.push_back({parse_query(q), std::nullopt});
  const auto rows = oracle::bound_table(queries, {cfg.edge_cap, oracle::kDefaultNodeBudget});
  const auto tsv = oracle::bound_table_tsv(rows);
  detail::write_file(std::filesystem::path(cfg.out) / "table.tsv", tsv);
  io.out << tsv;
  return kPass;
}

/// One construction per q. A failing row is recorded and the sweep goes on.
inline int run_sweep(const ExperimentConfig& cfg, Streams io) {
  const std::filesystem::path out(cfg.out);
  std::filesystem::create_directories(out);
  std::string table = "q\tm\tn\tedges\tbound\tratio\tmax_common_neighborhood\tverdict\tstatus\n";
  std::string timing = "q\tseconds\n";
  bool all_pass = true;
  const std::uint64_t seed = derive_seed(cfg.seed, "construct");
  for (auto q : cfg.q) {
    const auto start = std::chrono::steady_clock::now();
    // q m n edges bound ratio max verdict status
    std::vector<std::string> cols(9, "-");
    cols[0] = std::to_string(q);
    cols[7] = "fail";
    try {
      const auto params = detail::construction_params(cfg, q);
      cols[1] = detail::join(params.m_list);
      cols[2] = std::to_string(params.n);
      auto built = construct::build(params, seed, detail::selection_options(cfg));
      const auto dir = out / "sweep" / ("q" + std::to_string(q));
      detail::write_file(dir / "graph.zng", write_graph(built.graph));
      detail::write_file(dir / "family.json", detail::dump(construct::to_json(built.family)));
      detail::write_file(dir / "certificate.json", detail::dump(construct::to_json(built.certificate)));
      const double bound = detail::construction_bound(params);
      cols[3] = std::to_string(built.graph.edge_count());
      cols[4] = oracle::format_fixed(bound);
      cols[5] = oracle::format_fixed(static_cast<double>(built.graph.edge_count()) / bound);
      cols[6] = std::to_string(built.certificate.max_size);
      cols[7] = built.certificate.pass ? "pass" : "fail";
      cols[8] = "ok";
    } catch (const construct::ConstructionFailure& e) {
      cols[8] = "failed: construction retry budget exhausted";
      io.err << "q=" << q << ": " << e.what() << '\n';
    } catch (const BudgetError& e) {
      cols[8] = std::string("failed: budget: ") + e.what();
    } catch (const UsageError& e) {
      cols[8] = std::string("failed: invalid: ") + e.what();
    }
    all_pass = all_pass && cols[7] == "pass";
    for (std::size_t i = 0; i < cols.size(); ++i) table += (i ? "\t" : "") + cols[i];
    table += "\n";
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    timing += std::to_string(q) + "\t" + oracle::format_fixed(secs, 3) + "\n";
  }
  detail::write_file(out / "sweep.tsv", table);
  detail::write_file(out / "sweep_timing.log", timing);
  io.out << table;
  return all_pass ? kPass : kVerdictFail;
}

/// Runs one experiment. Failures are reported on stderr as a single
/// "FAIL reason=<kind> detail=<text>" line and mirrored to <out>/failure.json.
inline int run(const ExperimentConfig& cfg, Streams io = {}) {
  auto report = [&](const std::string& reason, const std::string& detail, int code) {
    io.err << "FAIL reason=" << reason << " detail=" << nlohmann::json(detail).dump() << '\n';
    try {
      detail::write_file(std::filesystem::path(cfg.out) / "failure.json",
                         detail::dump({{"mode", to_string(cfg.mode)}, {"reason", reason}, {"detail", detail},
                                       {"exit_code", code}}));
    } catch (...) {
    }
    return code;
  };
  try {
    if (cfg.jobs == 0) throw UsageError("jobs must be positive");
    if (cfg.budget == 0) throw UsageError("budget must be positive");
    switch (cfg.mode) {
      case Mode::Construct: return run_construct(cfg, io);
      case Mode::Verify: return run_verify(cfg, io);
      case Mode::Count: return run_count(cfg, io);
      case Mode::Oracle: return run_oracle(cfg, io);
      case Mode::Sweep: return run_sweep(cfg, io);
      case Mode::Table: return run_table(cfg, io);
    }
    return kUsage;
  } catch (const construct::ConstructionFailure& e) {
    return report("construction_failed", e.what(), kVerdictFail);
  } catch (const BudgetError& e) {
    return report("budget", e.what(), kBudget);
  } catch (const UsageError& e) {
    return report("usage", e.what(), kUsage);
  } catch (const Error& e) {
    return report("error", e.what(), kVerdictFail);
  } catch (const std::filesystem::filesystem_error& e) {
    return report("io", e.what(), kUsage);
  }
}

}  // namespace zarank::experiment
