#pragma once

// Random algebraic construction of K_{s_1,...,s_{r-1},t}-free r-partite
// r-graphs.
//
// With s = s_1 ... s_{r-1}, each tuple (u_1, ..., u_{r-1}) of left-part
// vertices carries a polynomial f of degree <= d in s-1 variables over GF(q),
// and is joined to the points (x, f(x)) of GF(q)^s, the last part. A set of
// tuples has common neighbourhood equal to the set of x where all their
// polynomials agree, so the graph is free exactly when every pattern of
// s_1 x ... x s_{r-1} tuples has fewer than t agreement points.
//
// Polynomials are chosen one tuple at a time (lexicographic tuple order) and
// a draw is kept only if every pattern it completes stays below t; a full
// exhaustive freeness check then runs on the finished graph regardless.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "zarank/common.hpp"
#include "zarank/gf.hpp"
#include "zarank/hypergraph.hpp"
#include "zarank/mpoly.hpp"
#include "zarank/patterns.hpp"

namespace zarank::construct {

struct ConstructionParams {
  std::uint32_t r = 2;
  std::vector<std::uint32_t> s_list;  // s_1..s_{r-1}
  std::uint64_t t = 0;
  std::uint64_t q = 0;
  std::vector<std::uint32_t> m_list;  // requested left part sizes

  // derived
  std::uint64_t s = 0;
  std::uint32_t d = 0;
  BigInt ell = 0;  // tuple capacity floor(q^{(d+1)/(s-1)} / 2d)
  std::uint64_t n = 0;  // q^s, size of the last part
  std::vector<std::string> warnings;

  std::uint64_t tuple_count() const {
    std::uint64_t c = 1;
    for (auto m : m_list) c = checked_mul(c, m, "tuple count");
    return c;
  }
  std::uint64_t domain_size() const { return checked_pow(q, s - 1, "evaluation domain"); }
};

inline constexpr std::uint64_t kMaxLastPart = std::uint64_t{1} << 31;

/// d = ceil(t^{1/(s-1)}) - 1 and ell = floor(floor((q^{d+1})^{1/(s-1)}) / 2d),
/// all in exact integer arithmetic. Over-capacity tuple counts produce a
/// warning, not an error: the freeness check decides.
inline ConstructionParams derive_params(std::vector<std::uint32_t> s_list, std::uint64_t t, std::uint64_t q,
                                        std::vector<std::uint32_t> m_list = {}) {
  if (s_list.empty()) throw UsageError("derive_params: need at least one left part size s_i");
  for (auto si : s_list)
    if (si < 1) throw UsageError("derive_params: every s_i must be >= 1");
  ConstructionParams p;
  p.r = static_cast<std::uint32_t>(s_list.size() + 1);
  p.s = 1;
  for (auto si : s_list) p.s = checked_mul(p.s, si, "s");
  p.s_list = std::move(s_list);
  p.t = t;
  p.q = q;
  p.m_list = std::move(m_list);
  if (p.s < 2) throw UsageError("derive_params: s = prod s_i must be >= 2");
  if (t < p.s)
    throw UsageError("derive_params: hypothesis s <= t violated (s=" + std::to_string(p.s) + ", t=" + std::to_string(t) +
                     ")");
  (void)gf::make_field_of_order(q);  // validates q

  const auto k = static_cast<unsigned>(p.s - 1);
  const BigInt c = integer_root_ceil(BigInt(t), k);
  p.d = (c - 1).convert_to<std::uint32_t>();
  if (p.d < 1 || boost::multiprecision::pow(BigInt(p.d), k) >= t)
    throw ArithmeticError("derive_params: inconsistent degree d=" + std::to_string(p.d));
  const BigInt root = integer_root_floor(boost::multiprecision::pow(BigInt(q), p.d + 1), k);
  p.ell = root / (2 * BigInt(p.d));
  p.n = checked_pow(q, p.s, "last part size");

  if (!p.m_list.empty()) {
    if (p.m_list.size() != p.s_list.size())
      throw UsageError("derive_params: m_list has " + std::to_string(p.m_list.size()) + " entries, expected " +
                       std::to_string(p.s_list.size()));
    for (auto m : p.m_list)
      if (m < 1) throw UsageError("derive_params: part sizes must be >= 1");
    const BigInt tuples = p.tuple_count();
    if (tuples > p.ell) {
      p.warnings.push_back("tuple count " + tuples.str() + " exceeds capacity ell=" + p.ell.str() +
                           "; freeness rests on the exhaustive check alone");
    } else {
      const BigInt balanced = integer_root_floor(p.ell, p.r - 1);
      bool all_smaller = true;
      for (auto m : p.m_list) all_smaller = all_smaller && BigInt(m) < balanced;
      if (all_smaller)
        p.warnings.push_back("balanced split would allow parts of size " + balanced.str() + " (ell=" + p.ell.str() +
                             ")");
    }
    // Reported only: prod m_i <= n^{t^{1/(s-1)} / (s(s-1))}.
    const double sd = static_cast<double>(p.s);
    const double exponent = std::pow(static_cast<double>(t), 1.0 / (sd - 1.0)) / (sd * (sd - 1.0));
    const double range = std::pow(static_cast<double>(p.n), exponent);
    if (static_cast<double>(p.tuple_count()) > range)
      p.warnings.push_back("tuple count exceeds n^{t^{1/(s-1)}/(s(s-1))} = " + std::to_string(range));
  }
  return p;
}

inline nlohmann::json to_json(const ConstructionParams& p) {
  return {{"r", p.r},     {"s_list", p.s_list}, {"t", p.t},         {"q", p.q},
          {"m_list", p.m_list}, {"s", p.s},     {"d", p.d},         {"ell", p.ell.str()},
          {"n", p.n},     {"warnings", p.warnings}};
}

struct SelectionOptions {
  std::uint32_t position_retries = 64;
  std::uint32_t restarts = 16;
  std::uint64_t budget = kDefaultEnumerationBudget;
  unsigned jobs = 1;
  std::uint64_t table_threshold = 4096;  // certificate keeps the full table up to this many patterns
};

struct SelectionStats {
  std::vector<std::uint32_t> resamples;  // rejected draws per position
  std::uint32_t restarts_used = 0;
  std::uint64_t attempt_seed = 0;

  double mean_resamples() const {
    if (resamples.empty()) return 0.0;
    double sum = 0;
    for (auto r : resamples) sum += r;
    return sum / static_cast<double>(resamples.size());
  }
};

struct PolyFamily {
  gf::FieldSpec field;
  mpoly::BasisPtr basis;
  std::vector<std::uint32_t> m_list;
  std::vector<mpoly::MultiPoly> polys;  // lexicographic tuple order
  SelectionStats stats;
};

/// Tuple of left-part vertices at a given lexicographic position.
inline std::vector<std::uint32_t> tuple_at(std::uint64_t pos, std::span<const std::uint32_t> m_list) {
  std::vector<std::uint32_t> tup(m_list.size());
  for (std::size_t i = m_list.size(); i-- > 0;) {
    tup[i] = static_cast<std::uint32_t>(pos % m_list[i]);
    pos /= m_list[i];
  }
  return tup;
}

inline std::uint64_t position_of(std::span<const std::uint32_t> tuple, std::span<const std::uint32_t> m_list) {
  std::uint64_t pos = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) pos = pos * m_list[i] + tuple[i];
  return pos;
}

/// Calls fn(pattern) for every pattern whose lexicographically largest tuple
/// is `tuple`: in part i the subset is tuple[i] plus s_i - 1 smaller indices.
/// The pattern buffer is reused between calls.
template <typename Fn>
void for_each_completed_pattern(std::span<const std::uint32_t> tuple, std::span<const std::uint32_t> s_list, Fn&& fn) {
  std::vector<std::vector<Subset>> per_part;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    auto subs = all_subsets(tuple[i], s_list[i] - 1);
    for (auto& sub : subs) sub.push_back(tuple[i]);
    if (subs.empty()) return;
    per_part.push_back(std::move(subs));
  }
  Pattern cur(per_part.size());
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == per_part.size()) {
      fn(std::as_const(cur));
      return;
    }
    for (const auto& sub : per_part[i]) {
      cur[i] = sub;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
}

inline std::vector<Pattern> completed_patterns(std::span<const std::uint32_t> tuple,
                                               std::span<const std::uint32_t> s_list) {
  std::vector<Pattern> out;
  for_each_completed_pattern(tuple, s_list, [&](const Pattern& p) { out.push_back(p); });
  return out;
}

class ConstructionFailure : public Error {
 public:
  ConstructionFailure(const std::string& what, std::vector<std::uint32_t> position, Pattern violating,
                      PolyFamily best_attempt)
      : Error(what),
        position_(std::move(position)),
        violating_(std::move(violating)),
        best_attempt_(std::move(best_attempt)) {}

  const std::vector<std::uint32_t>& position() const noexcept { return position_; }
  const Pattern& violating_pattern() const noexcept { return violating_; }
  const PolyFamily& best_attempt() const noexcept { return best_attempt_; }

 private:
  std::vector<std::uint32_t> position_;
  Pattern violating_;
  PolyFamily best_attempt_;
};

namespace detail {

inline void check_buildable(const ConstructionParams& params, const SelectionOptions& opt) {
  if (params.m_list.size() != params.s_list.size())
    throw UsageError("construction needs one part size per s_i (got " + std::to_string(params.m_list.size()) + ")");
  if (params.n > kMaxLastPart) throw BudgetError("last part q^s = " + std::to_string(params.n) + " is too large");
  if (params.tuple_count() > opt.budget)
    throw BudgetError("tuple count " + std::to_string(params.tuple_count()) + " exceeds budget " +
                      std::to_string(opt.budget));
  if (params.domain_size() > opt.budget)
    throw BudgetError("evaluation domain q^{s-1} = " + std::to_string(params.domain_size()) + " exceeds budget " +
                      std::to_string(opt.budget));
}

/// Number of domain points where every listed table agrees.
inline std::uint64_t agreement_count(const std::vector<const std::vector<gf::Code>*>& tables) {
  const auto& first = *tables.front();
  std::uint64_t count = 0;
  for (std::size_t x = 0; x < first.size(); ++x) {
    bool all = true;
    for (std::size_t j = 1; j < tables.size() && all; ++j) all = (*tables[j])[x] == first[x];
    count += all;
  }
  return count;
}

}  // namespace detail

/// Sequential accept/resample selection. Attempt 0 draws from `seed`;
/// restart i draws from derive_seed(seed, "restart/<i>").
inline PolyFamily sequential_select(const ConstructionParams& params, std::uint64_t seed,
                                    const SelectionOptions& opt = {}) {
  detail::check_buildable(params, opt);
  const gf::FieldSpec spec = gf::make_field_of_order(params.q);
  const gf::Field field(spec);
  const auto basis = mpoly::monomial_basis(static_cast<std::uint32_t>(params.s - 1), params.d);
  const std::uint64_t positions = params.tuple_count();

  std::uint64_t pattern_total = 0;
  for (std::uint64_t pos = 0; pos < positions; ++pos) {
    BigInt c = 1;
    const auto tup = tuple_at(pos, params.m_list);
    for (std::size_t i = 0; i < tup.size(); ++i) c *= binomial(tup[i], params.s_list[i] - 1);
    if (c > opt.budget) throw BudgetError("pattern enumeration exceeds budget " + std::to_string(opt.budget));
    pattern_total += c.convert_to<std::uint64_t>();
    if (pattern_total > opt.budget)
      throw BudgetError("pattern enumeration exceeds budget " + std::to_string(opt.budget));
  }

  PolyFamily best;
  std::vector<std::uint32_t> fail_position;
  Pattern fail_pattern;

  for (std::uint32_t attempt = 0; attempt < std::max(1u, opt.restarts); ++attempt) {
    const std::uint64_t attempt_seed = attempt == 0 ? seed : derive_seed(seed, "restart/" + std::to_string(attempt));
    Rng rng(attempt_seed);
    PolyFamily fam{spec, basis, params.m_list, {}, {}};
    fam.stats.restarts_used = attempt;
    fam.stats.attempt_seed = attempt_seed;
    std::vector<std::vector<gf::Code>> tables;
    bool failed = false;

    // members[k * s ...]: positions of the tuples of the k-th completed pattern
    std::vector<std::uint64_t> members;
    std::vector<const std::vector<gf::Code>*> views;
    for (std::uint64_t pos = 0; pos < positions && !failed; ++pos) {
      const auto tup = tuple_at(pos, params.m_list);
      members.clear();
      for_each_completed_pattern(tup, params.s_list, [&](const Pattern& pat) {
        for_each_transversal(pat, [&](std::span<const std::uint32_t> member) {
          members.push_back(position_of(member, params.m_list));
        });
      });
      const std::size_t stride = params.s;
      bool accepted = false;
      std::size_t last_violation = 0;
      for (std::uint32_t draw = 0; draw <= opt.position_retries; ++draw) {
        auto cand = mpoly::random_poly(basis, spec, rng);
        auto table = mpoly::evaluate_all(cand, field, opt.budget);
        bool ok = true;
        for (std::size_t k = 0; k < members.size(); k += stride) {
          views.clear();
          for (std::size_t j = k; j < k + stride; ++j)
            views.push_back(members[j] == pos ? &table : &tables[members[j]]);
          if (detail::agreement_count(views) >= params.t) {
            ok = false;
            last_violation = k / stride;
            break;
          }
        }
        if (ok) {
          fam.polys.push_back(std::move(cand));
          tables.push_back(std::move(table));
          fam.stats.resamples.push_back(draw);
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        failed = true;
        fail_position = tup;
        fail_pattern = completed_patterns(tup, params.s_list).at(last_violation);
      }
    }
    if (!failed) return fam;
    if (fam.polys.size() >= best.polys.size()) best = std::move(fam);
  }
  std::string where;
  for (std::size_t i = 0; i < fail_position.size(); ++i) where += (i ? "," : "") + std::to_string(fail_position[i]);
  throw ConstructionFailure("retry budget exhausted at position (" + where + "), violating pattern [" +
                                to_string(fail_pattern) + "]; q may be too small for these parameters",
                            fail_position, fail_pattern, std::move(best));
}

/// The r-graph of polynomial graphs. Last-part vertex of the point (x, y) is
/// index(x) * q + code(y), i.e. lexicographic order on GF(q)^s.
inline RPartiteHypergraph graph_of(const PolyFamily& fam, const ConstructionParams& params) {
  const gf::Field field(fam.field);
  std::vector<std::uint32_t> parts = params.m_list;
  parts.push_back(static_cast<std::uint32_t>(params.n));
  std::vector<Edge> edges;
  edges.reserve(fam.polys.size() * params.domain_size());
  for (std::uint64_t pos = 0; pos < fam.polys.size(); ++pos) {
    const auto tup = tuple_at(pos, params.m_list);
    const auto values = mpoly::evaluate_all(fam.polys[pos], field);
    for (std::uint64_t x = 0; x < values.size(); ++x) {
      Edge e = tup;
      e.push_back(static_cast<std::uint32_t>(x * params.q + values[x]));
      edges.push_back(std::move(e));
    }
  }
  return RPartiteHypergraph(std::move(parts), std::move(edges));
}

struct PatternRecord {
  Pattern pattern;
  std::uint64_t size = 0;
};

struct FreenessCertificate {
  std::vector<std::uint32_t> s_list;
  std::uint64_t t = 0;
  std::optional<ConstructionParams> params;
  std::optional<std::uint64_t> seed;
  std::uint64_t pattern_count = 0;
  std::uint64_t max_size = 0;
  std::optional<PatternRecord> argmax;           // first pattern attaining max_size
  std::optional<PatternRecord> first_violation;  // first pattern with size >= t
  std::uint64_t violations = 0;
  std::vector<PatternRecord> table;
  bool table_elided = false;
  bool pass = false;
};

/// Exhaustive check over every choice of s_i-subsets of the first r-1 parts.
/// Works on any graph; it never looks at how the graph was built.
inline FreenessCertificate verify_freeness(const RPartiteHypergraph& h, std::span<const std::uint32_t> s_list,
                                           std::uint64_t t, const SelectionOptions& opt = {}) {
  if (h.rank() < 2) throw UsageError("verify_freeness: need at least two parts");
  if (s_list.size() + 1 != h.rank())
    throw UsageError("verify_freeness: need " + std::to_string(h.rank() - 1) + " subset sizes, got " +
                     std::to_string(s_list.size()));
  const std::span<const std::uint32_t> left(h.part_sizes().data(), h.rank() - 1);
  const PatternSpace space(left, s_list, opt.budget);

  FreenessCertificate cert;
  cert.s_list.assign(s_list.begin(), s_list.end());
  cert.t = t;
  cert.pattern_count = space.size();
  const bool keep_table = space.size() <= opt.table_threshold;
  cert.table_elided = !keep_table;

  struct Chunk {
    std::uint64_t max_size = 0;
    std::optional<PatternRecord> argmax, first_violation;
    std::uint64_t violations = 0;
    std::vector<PatternRecord> table;
  };
  std::vector<Chunk> chunks(chunk_count(space.size(), opt.jobs));
  parallel_chunks(space.size(), opt.jobs, [&](std::size_t c, std::uint64_t begin, std::uint64_t end) {
    Chunk& out = chunks[c];
    Pattern pat;
    Bitset acc;
    for (std::uint64_t i = begin; i < end; ++i) {
      space.at(i, pat);
      common_neighborhood(h, pat, acc);
      const std::uint64_t size = acc.count();
      if (!out.argmax || size > out.max_size) {
        out.max_size = size;
        out.argmax = PatternRecord{pat, size};
      }
      if (size >= t) {
        ++out.violations;
        if (!out.first_violation) out.first_violation = PatternRecord{pat, size};
      }
      if (keep_table) out.table.push_back({pat, size});
    }
  });
  for (auto& ch : chunks) {
    if (ch.argmax && (!cert.argmax || ch.max_size > cert.max_size)) {
      cert.max_size = ch.max_size;
      cert.argmax = ch.argmax;
    }
    if (!cert.first_violation) cert.first_violation = ch.first_violation;
    cert.violations += ch.violations;
    for (auto& rec : ch.table) cert.table.push_back(std::move(rec));
  }
  cert.pass = cert.violations == 0;
  return cert;
}

inline FreenessCertificate verify_freeness(const RPartiteHypergraph& h, const ConstructionParams& params,
                                           const SelectionOptions& opt = {}) {
  auto cert = verify_freeness(h, params.s_list, params.t, opt);
  cert.params = params;
  return cert;
}

/// Largest agreement set over all full patterns of the family, computed from
/// the polynomials by exhaustive evaluation (independent of the graph).
inline std::uint64_t family_max_agreement(const PolyFamily& fam, const ConstructionParams& params,
                                          const SelectionOptions& opt = {}) {
  const gf::Field field(fam.field);
  const PatternSpace space(params.m_list, params.s_list, opt.budget);
  std::uint64_t best = 0;
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    std::vector<mpoly::MultiPoly> members;
    for_each_transversal(space.at(i), [&](std::span<const std::uint32_t> tup) {
      members.push_back(fam.polys.at(position_of(tup, params.m_list)));
    });
    best = std::max<std::uint64_t>(best, mpoly::agreement_indices(members, field, opt.budget).size());
  }
  return best;
}

struct BuildResult {
  RPartiteHypergraph graph;
  PolyFamily family;
  FreenessCertificate certificate;
};

inline BuildResult build(const ConstructionParams& params, std::uint64_t seed, const SelectionOptions& opt = {}) {
  PolyFamily fam = sequential_select(params, seed, opt);
  RPartiteHypergraph graph = graph_of(fam, params);
  FreenessCertificate cert = verify_freeness(graph, params, opt);
  cert.seed = seed;
  return {std::move(graph), std::move(fam), std::move(cert)};
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json to_json(const Pattern& p) { return nlohmann::json(p); }

inline nlohmann::json to_json(const PatternRecord& rec) { return {{"pattern", rec.pattern}, {"size", rec.size}}; }

inline nlohmann::json to_json(const FreenessCertificate& c) {
  nlohmann::json j;
  j["s_list"] = c.s_list;
  j["t"] = c.t;
  if (c.params) j["params"] = to_json(*c.params);
  if (c.seed) j["seed"] = *c.seed;
  j["pattern_count"] = c.pattern_count;
  j["max_common_neighborhood"] = c.max_size;
  j["argmax"] = c.argmax ? to_json(*c.argmax) : nlohmann::json(nullptr);
  j["violations"] = c.violations;
  j["first_violation"] = c.first_violation ? to_json(*c.first_violation) : nlohmann::json(nullptr);
  j["table_elided"] = c.table_elided;
  nlohmann::json table = nlohmann::json::array();
  for (const auto& rec : c.table) table.push_back(to_json(rec));
  j["table"] = table;
  j["verdict"] = c.pass ? "pass" : "fail";
  return j;
}

inline nlohmann::json to_json(const PolyFamily& fam) {
  nlohmann::json polys = nlohmann::json::array();
  for (std::uint64_t pos = 0; pos < fam.polys.size(); ++pos) {
    auto pj = mpoly::to_json(fam.polys[pos]);
    pj["tuple"] = tuple_at(pos, fam.m_list);
    polys.push_back(pj);
  }
  return {{"field", {{"p", fam.field.p}, {"k", fam.field.k}, {"modulus", fam.field.modulus}}},
          {"m_list", fam.m_list},
          {"polys", polys},
          {"resamples", fam.stats.resamples},
          {"restarts_used", fam.stats.restarts_used},
          {"attempt_seed", fam.stats.attempt_seed}};
}

}  // namespace zarank::construct
