#pragma once

// r-partite r-graphs, degree/link queries, and the "zng" text format.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "zarank/common.hpp"

namespace zarank {

using Edge = std::vector<std::uint32_t>;
using Bitset = boost::dynamic_bitset<std::uint64_t>;

/// Immutable r-partite r-graph. Edges are kept sorted and unique, and every
/// (r-1)-prefix indexes a bitset of its neighbours in the last part.
class RPartiteHypergraph {
 public:
  static constexpr std::uint64_t kPrefixCap = 1u << 24;

  RPartiteHypergraph() = default;

  RPartiteHypergraph(std::vector<std::uint32_t> part_sizes, std::vector<Edge> edges)
      : part_sizes_(std::move(part_sizes)), edges_(std::move(edges)) {
    if (part_sizes_.empty()) throw UsageError("hypergraph needs at least one part");
    for (const auto& e : edges_) check_edge(e);
    std::sort(edges_.begin(), edges_.end());
    auto dup = std::adjacent_find(edges_.begin(), edges_.end());
    if (dup != edges_.end()) throw UsageError("duplicate edge " + edge_string(*dup));
    build_index();
  }

  std::size_t rank() const noexcept { return part_sizes_.size(); }
  const std::vector<std::uint32_t>& part_sizes() const noexcept { return part_sizes_; }
  std::uint32_t part_size(std::size_t part) const { return part_sizes_.at(part); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  bool has_edge(std::span<const std::uint32_t> e) const {
    if (e.size() != rank()) return false;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] >= part_sizes_[i]) return false;
    return neighbors_[prefix_index(e.first(rank() - 1))].test(e.back());
  }

  /// Mixed-radix index of a tuple over parts 0..r-2 (first coordinate most significant).
  std::uint64_t prefix_index(std::span<const std::uint32_t> prefix) const {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < prefix.size(); ++i) idx = idx * part_sizes_[i] + prefix[i];
    return idx;
  }

  std::uint64_t prefix_count() const noexcept { return neighbors_.size(); }

  /// Last-part vertices adjacent to the given (r-1)-tuple.
  const Bitset& last_part_neighbors(std::uint64_t prefix) const { return neighbors_.at(prefix); }

  std::uint64_t degree(std::size_t part, std::uint32_t vertex) const {
    if (part >= rank()) throw UsageError("degree: part " + std::to_string(part) + " out of range");
    if (vertex >= part_sizes_[part])
      throw UsageError("degree: vertex " + std::to_string(vertex) + " out of range for part " + std::to_string(part));
    return degrees_[part][vertex];
  }

  friend bool operator==(const RPartiteHypergraph& a, const RPartiteHypergraph& b) {
    return a.part_sizes_ == b.part_sizes_ && a.edges_ == b.edges_;
  }

 private:
  static std::string edge_string(const Edge& e) {
    std::string s = "(";
    for (std::size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + std::to_string(e[i]);
    return s + ")";
  }

  void check_edge(const Edge& e) const {
    if (e.size() != rank())
      throw UsageError("edge " + edge_string(e) + " has " + std::to_string(e.size()) + " vertices, expected " +
                       std::to_string(rank()));
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] >= part_sizes_[i])
        throw UsageError("edge " + edge_string(e) + ": index out of range in part " + std::to_string(i));
  }

  void build_index() {
    std::uint64_t prefixes = 1;
    for (std::size_t i = 0; i + 1 < rank(); ++i) {
      prefixes = checked_mul(prefixes, part_sizes_[i], "prefix index");
      if (prefixes > kPrefixCap) throw BudgetError("hypergraph prefix index exceeds cap");
    }
    neighbors_.assign(prefixes, Bitset(part_sizes_.back()));
    degrees_.resize(rank());
    for (std::size_t i = 0; i < rank(); ++i) degrees_[i].assign(part_sizes_[i], 0);
    for (const auto& e : edges_) {
      neighbors_[prefix_index(std::span(e).first(rank() - 1))].set(e.back());
      for (std::size_t i = 0; i < rank(); ++i) ++degrees_[i][e[i]];
    }
  }

  std::vector<std::uint32_t> part_sizes_;
  std::vector<Edge> edges_;
  std::vector<Bitset> neighbors_;
  std::vector<std::vector<std::uint64_t>> degrees_;
};

using LinkHypergraph = RPartiteHypergraph;

inline RPartiteHypergraph complete_graph(std::vector<std::uint32_t> part_sizes) {
  std::vector<Edge> edges;
  std::uint64_t total = 1;
  for (auto m : part_sizes) total = checked_mul(total, m, "complete graph");
  Edge cur(part_sizes.size(), 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t x = idx;
    for (std::size_t i = part_sizes.size(); i-- > 0;) {
      cur[i] = static_cast<std::uint32_t>(x % part_sizes[i]);
      x /= part_sizes[i];
    }
    edges.push_back(cur);
  }
  return RPartiteHypergraph(std::move(part_sizes), std::move(edges));
}

/// The (r-1)-graph {h \ {v} : v in h} for a vertex v of the last part.
inline LinkHypergraph link(const RPartiteHypergraph& h, std::uint32_t vertex) {
  if (h.rank() < 2) throw UsageError("link: hypergraph must have at least two parts");
  if (vertex >= h.part_sizes().back())
    throw UsageError("link: vertex " + std::to_string(vertex) + " out of range for the last part");
  std::vector<std::uint32_t> parts(h.part_sizes().begin(), h.part_sizes().end() - 1);
  std::vector<Edge> edges;
  for (const auto& e : h.edges())
    if (e.back() == vertex) edges.emplace_back(e.begin(), e.end() - 1);
  return LinkHypergraph(std::move(parts), std::move(edges));
}

struct PruneResult {
  RPartiteHypergraph graph;
  std::uint64_t removed_edges = 0;
  std::vector<std::uint32_t> removed_vertices;  // last-part vertices, kept as isolated
};

/// Drops every edge at a last-part vertex whose degree is below threshold.
/// Vertex numbering is unchanged.
inline PruneResult prune_low_degree(const RPartiteHypergraph& h, const Rational& threshold) {
  PruneResult out;
  const std::size_t last = h.rank() - 1;
  std::vector<char> drop(h.part_sizes().back(), 0);
  for (std::uint32_t v = 0; v < h.part_sizes().back(); ++v) {
    if (Rational(h.degree(last, v)) < threshold) {
      drop[v] = 1;
      out.removed_vertices.push_back(v);
    }
  }
  std::vector<Edge> kept;
  for (const auto& e : h.edges()) {
    if (drop[e.back()])
      ++out.removed_edges;
    else
      kept.push_back(e);
  }
  out.graph = RPartiteHypergraph(h.part_sizes(), std::move(kept));
  return out;
}

// ---------------------------------------------------------------------------
// zng text format:
//   zng <r> <m_1> ... <m_r>
//   <v_1> ... <v_r>          one edge per line, zero-based, i-th index in part i
// '#' starts a comment; blank lines are ignored.

inline void write_graph(std::ostream& os, const RPartiteHypergraph& h) {
  os << "zng " << h.rank();
  for (auto m : h.part_sizes()) os << ' ' << m;
  os << '\n';
  for (const auto& e : h.edges()) {
    for (std::size_t i = 0; i < e.size(); ++i) os << (i ? " " : "") << e[i];
    os << '\n';
  }
}

inline std::string write_graph(const RPartiteHypergraph& h) {
  std::ostringstream os;
  write_graph(os, h);
  return os.str();
}

namespace detail {

inline std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream ss(line.substr(0, line.find('#')));
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

inline std::uint32_t parse_index(const std::string& tok, std::size_t line_no) {
  if (tok.empty() || tok.size() > 9 || !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw ParseError(line_no, "expected a non-negative integer, got '" + tok + "'");
  return static_cast<std::uint32_t>(std::stoul(tok));
}

}  // namespace detail

inline RPartiteHypergraph read_graph(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::uint32_t> parts;
  bool have_header = false;
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_lines;
  while (std::getline(is, line)) {
    ++line_no;
    const auto toks = detail::tokens_of(line);
    if (toks.empty()) continue;
    if (!have_header) {
      if (toks[0] != "zng") throw ParseError(line_no, "missing 'zng' header");
      if (toks.size() < 2) throw ParseError(line_no, "header lacks the part count");
      const auto r = detail::parse_index(toks[1], line_no);
      if (r < 1) throw ParseError(line_no, "part count must be >= 1");
      if (toks.size() != r + 2)
        throw ParseError(line_no, "header declares " + std::to_string(r) + " parts but lists " +
                                      std::to_string(toks.size() - 2) + " sizes");
      for (std::size_t i = 2; i < toks.size(); ++i) parts.push_back(detail::parse_index(toks[i], line_no));
      have_header = true;
      continue;
    }
    if (toks.size() != parts.size())
      throw ParseError(line_no, "edge has " + std::to_string(toks.size()) + " entries, expected " +
                                    std::to_string(parts.size()));
    Edge e;
    for (std::size_t i = 0; i < toks.size(); ++i) {
      const auto v = detail::parse_index(toks[i], line_no);
      if (v >= parts[i])
        throw ParseError(line_no, "index " + std::to_string(v) + " out of range for part " + std::to_string(i + 1) +
                                      " of size " + std::to_string(parts[i]));
      e.push_back(v);
    }
    edges.push_back(std::move(e));
    edge_lines.push_back(line_no);
  }
  if (!have_header) throw ParseError(line_no, "empty input, missing 'zng' header");
  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return edges[a] < edges[b]; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (edges[order[i]] == edges[order[i - 1]])
      throw ParseError(edge_lines[order[i]], "duplicate edge (first seen on line " +
                                                 std::to_string(edge_lines[order[i - 1]]) + ")");
  return RPartiteHypergraph(std::move(parts), std::move(edges));
}

inline RPartiteHypergraph read_graph(const std::string& text) {
  std::istringstream is(text);
  return read_graph(is);
}

}  // namespace zarank
