#pragma once

// Exact Zarankiewicz numbers z(m_1,...,m_r; s_1,...,s_r) for tiny parameters.
//
// Depth-first branch and bound over the potential edges in lexicographic
// order, include-branch first. Two prunes:
//   * bound:     current + undecided <= best  -> cut
//   * symmetry:  rows of the first part (the incidence vector of each
//                first-part vertex) must be lexicographically non-increasing
// Adding an edge is allowed only if no ordered copy through that edge appears,
// which keeps every node of the tree pattern-free.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "zarank/common.hpp"
#include "zarank/hypergraph.hpp"

namespace zarank::oracle {

inline constexpr std::uint64_t kDefaultEdgeCap = 30;
inline constexpr std::uint64_t kDefaultNodeBudget = std::uint64_t{1} << 32;

struct ZQuery {
  std::vector<std::uint32_t> parts;    // m_1..m_r
  std::vector<std::uint32_t> pattern;  // s_1..s_r
};

struct ZResult {
  std::uint64_t z = 0;
  RPartiteHypergraph witness;
  std::uint64_t nodes = 0;
};

struct SearchOptions {
  std::uint64_t edge_cap = kDefaultEdgeCap;
  std::uint64_t node_budget = kDefaultNodeBudget;
};

inline std::string to_string(const ZQuery& q) {
  std::string s = "z(";
  for (std::size_t i = 0; i < q.parts.size(); ++i) s += (i ? "," : "") + std::to_string(q.parts[i]);
  s += ";";
  for (std::size_t i = 0; i < q.pattern.size(); ++i) s += (i ? "," : "") + std::to_string(q.pattern[i]);
  return s + ")";
}

inline void validate(const ZQuery& q) {
  if (q.parts.size() < 2) throw UsageError(to_string(q) + ": need at least two parts");
  if (q.parts.size() != q.pattern.size()) throw UsageError(to_string(q) + ": part and pattern lists differ in length");
  for (auto m : q.parts)
    if (m < 1) throw UsageError(to_string(q) + ": part sizes must be >= 1");
  for (auto s : q.pattern)
    if (s < 1) throw UsageError(to_string(q) + ": pattern sizes must be >= 1");
}

namespace detail {

class Search {
 public:
  Search(const ZQuery& q, const SearchOptions& opt) : q_(q), opt_(opt) {
    r_ = q.parts.size();
    total_ = 1;
    for (auto m : q.parts) total_ *= m;
    row_len_ = total_ / q.parts[0];
    prefixes_ = total_ / q.parts.back();
    masks_.assign(prefixes_, 0);
    included_.assign(total_, 0);
    for (std::uint64_t idx = 0; idx < total_; ++idx) {
      Edge e(r_);
      std::uint64_t x = idx;
      for (std::size_t i = r_; i-- > 0;) {
        e[i] = static_cast<std::uint32_t>(x % q.parts[i]);
        x /= q.parts[i];
      }
      edges_.push_back(std::move(e));
    }
    for (std::size_t i = 0; i + 1 < r_; ++i) {
      std::vector<std::vector<std::vector<std::uint32_t>>> per_vertex(q.parts[i]);
      for (std::uint32_t v = 0; v < q.parts[i]; ++v) {
        for (auto sub : all_subsets(q.parts[i] - 1, q.pattern[i] - 1)) {
          for (auto& x : sub)
            if (x >= v) ++x;
          sub.push_back(v);
          std::sort(sub.begin(), sub.end());
          per_vertex[v].push_back(std::move(sub));
        }
      }
      completions_.push_back(std::move(per_vertex));
    }
  }

  ZResult run() {
    dfs(0, 0, false);
    ZResult res;
    res.z = static_cast<std::uint64_t>(best_);
    std::vector<Edge> edges;
    for (std::uint64_t idx = 0; idx < total_; ++idx)
      if (best_set_[idx]) edges.push_back(edges_[idx]);
    res.witness = RPartiteHypergraph(q_.parts, std::move(edges));
    res.nodes = nodes_;
    return res;
  }

 private:
  std::uint64_t prefix_of(std::uint64_t idx) const { return idx / q_.parts.back(); }

  /// True if adding edge idx would close an ordered copy through it.
  bool closes_pattern(std::uint64_t idx) const {
    const Edge& e = edges_[idx];
    const std::uint32_t v_last = e.back();
    const std::uint64_t bit = std::uint64_t{1} << v_last;
    std::vector<std::size_t> choice(r_ - 1, 0);
    std::vector<const std::vector<std::uint32_t>*> subsets(r_ - 1);
    for (std::size_t i = 0; i + 1 < r_; ++i)
      if (completions_[i][e[i]].empty()) return false;
    for (;;) {
      for (std::size_t i = 0; i + 1 < r_; ++i) subsets[i] = &completions_[i][e[i]][choice[i]];
      // AND the last-part masks over all transversals of the chosen subsets
      std::uint64_t acc = ~std::uint64_t{0};
      std::vector<std::size_t> digit(r_ - 1, 0);
      for (bool more = true; more && acc;) {
        std::uint64_t prefix = 0;
        for (std::size_t i = 0; i + 1 < r_; ++i) prefix = prefix * q_.parts[i] + (*subsets[i])[digit[i]];
        std::uint64_t m = masks_[prefix];
        if (prefix == prefix_of(idx)) m |= bit;
        acc &= m;
        more = false;
        for (std::size_t i = r_ - 1; i-- > 0;) {
          if (++digit[i] < subsets[i]->size()) {
            more = true;
            break;
          }
          digit[i] = 0;
        }
      }
      if ((acc & bit) && static_cast<std::uint64_t>(std::popcount(acc)) >= q_.pattern.back()) return true;
      std::size_t i = r_ - 1;
      bool advanced = false;
      while (i-- > 0) {
        if (++choice[i] < completions_[i][e[i]].size()) {
          advanced = true;
          break;
        }
        choice[i] = 0;
      }
      if (!advanced) return false;
    }
  }

  // `tight`: the row being filled equals the previous row so far.
  void dfs(std::uint64_t idx, std::int64_t count, bool tight) {
    if (++nodes_ > opt_.node_budget)
      throw BudgetError("oracle search exceeded node budget " + std::to_string(opt_.node_budget));
    if (count + static_cast<std::int64_t>(total_ - idx) <= best_) return;
    if (idx == total_) {
      best_ = count;
      best_set_ = included_;
      return;
    }
    const std::uint64_t row = idx / row_len_;
    const std::uint64_t col = idx % row_len_;
    if (col == 0) tight = row > 0;
    const bool prev_has = row > 0 && included_[idx - row_len_];

    if ((!tight || prev_has) && !closes_pattern(idx)) {
      included_[idx] = 1;
      masks_[prefix_of(idx)] |= std::uint64_t{1} << edges_[idx].back();
      dfs(idx + 1, count + 1, tight);
      masks_[prefix_of(idx)] &= ~(std::uint64_t{1} << edges_[idx].back());
      included_[idx] = 0;
    }
    dfs(idx + 1, count, tight && !prev_has);
  }

  const ZQuery& q_;
  SearchOptions opt_;
  std::size_t r_ = 0;
  std::uint64_t total_ = 0, row_len_ = 0, prefixes_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint64_t> masks_;
  std::vector<char> included_, best_set_;
  // completions_[i][v]: all s_i-subsets of part i containing v
  std::vector<std::vector<std::vector<std::vector<std::uint32_t>>>> completions_;
  std::int64_t best_ = -1;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Exact z with a witness (the first optimum in canonical form) and the
/// number of search nodes visited.
inline ZResult exact_z(const ZQuery& query, const SearchOptions& opt = {}) {
  validate(query);
  std::uint64_t total = 1;
  for (auto m : query.parts) total = checked_mul(total, m, "potential edges");
  if (total > opt.edge_cap)
    throw BudgetError(to_string(query) + ": " + std::to_string(total) + " potential edges exceed cap " +
                      std::to_string(opt.edge_cap));
  if (query.parts.back() > 64) throw BudgetError(to_string(query) + ": last part larger than 64");
  for (std::size_t i = 0; i < query.parts.size(); ++i) {
    if (query.pattern[i] > query.parts[i]) {
      // no copy can fit: the complete graph is extremal
      return {total, complete_graph(query.parts), 1};
    }
  }
  return detail::Search(query, opt).run();
}

// ---------------------------------------------------------------------------

/// m_1 ... m_{r-1} * m_r^{1 - 1/(s_1 ... s_{r-1})}
inline double bound_expression(const ZQuery& q) {
  double left = 1.0;
  double sigma = 1.0;
  for (std::size_t i = 0; i + 1 < q.parts.size(); ++i) {
    left *= q.parts[i];
    sigma *= q.pattern[i];
  }
  return left * std::pow(static_cast<double>(q.parts.back()), 1.0 - 1.0 / sigma);
}

struct BoundQuery {
  ZQuery query;
  std::optional<std::uint64_t> witness_edges;  // construction edge count, used instead of a search
};

struct BoundRow {
  ZQuery query;
  std::uint64_t value = 0;
  std::string source;  // "exact" or "construction"
  double bound = 0.0;
  double ratio = 0.0;
};

inline std::vector<BoundRow> bound_table(const std::vector<BoundQuery>& queries, const SearchOptions& opt = {}) {
  std::vector<BoundRow> rows;
  for (const auto& bq : queries) {
    BoundRow row;
    row.query = bq.query;
    if (bq.witness_edges) {
      validate(bq.query);
      row.value = *bq.witness_edges;
      row.source = "construction";
    } else {
      row.value = exact_z(bq.query, opt).z;
      row.source = "exact";
    }
    row.bound = bound_expression(bq.query);
    row.ratio = row.bound > 0 ? static_cast<double>(row.value) / row.bound : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string format_fixed(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

inline std::string bound_table_tsv(const std::vector<BoundRow>& rows) {
  std::string out = "query\tvalue\tsource\tbound\tratio\n";
  for (const auto& r : rows)
    out += to_string(r.query) + "\t" + std::to_string(r.value) + "\t" + r.source + "\t" + format_fixed(r.bound) + "\t" +
           format_fixed(r.ratio) + "\n";
  return out;
}

/// Appends "query<TAB>z<TAB>nodes<TAB>witness" to the ledger, writing a
/// header first when the file is new or empty.
inline void append_ledger(const std::string& path, const ZQuery& q, const ZResult& res,
                          const std::string& witness_path) {
  bool fresh = true;
  {
    std::ifstream in(path);
    fresh = !in || in.peek() == std::ifstream::traits_type::eof();
  }
  std::ofstream out(path, std::ios::app);
  if (!out) throw UsageError("cannot open ledger " + path);
  if (fresh) out << "query\tz\tnodes\twitness\n";
  out << to_string(q) << '\t' << res.z << '\t' << res.nodes << '\t' << witness_path << '\n';
}

}  // namespace zarank::oracle
