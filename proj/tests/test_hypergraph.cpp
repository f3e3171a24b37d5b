#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "zarank/hypergraph.hpp"

using namespace zarank;

TEST(Hypergraph, RejectsBadEdges) {
  EXPECT_THROW(RPartiteHypergraph({2, 2}, {{0, 2}}), UsageError);
  EXPECT_THROW(RPartiteHypergraph({2, 2}, {{0}}), UsageError);
  EXPECT_THROW(RPartiteHypergraph({2, 2}, {{0, 1}, {0, 1}}), UsageError);
  EXPECT_THROW(RPartiteHypergraph({}, {}), UsageError);
}

TEST(Degree, EmptyAndComplete) {
  RPartiteHypergraph empty({3, 4}, {});
  for (std::size_t part = 0; part < 2; ++part)
    for (std::uint32_t v = 0; v < empty.part_size(part); ++v) EXPECT_EQ(empty.degree(part, v), 0u);
  auto k222 = complete_graph({2, 2, 2});
  EXPECT_EQ(k222.edge_count(), 8u);
  for (std::size_t part = 0; part < 3; ++part)
    for (std::uint32_t v = 0; v < 2; ++v) EXPECT_EQ(k222.degree(part, v), 4u);
  EXPECT_THROW(k222.degree(3, 0), UsageError);
  EXPECT_THROW(k222.degree(0, 2), UsageError);
}

TEST(Link, Examples) {
  RPartiteHypergraph h({2, 2, 3}, {{0, 0, 0}, {0, 1, 0}, {1, 1, 2}});
  EXPECT_EQ(link(h, 1).edge_count(), 0u);
  EXPECT_EQ(link(h, 0).edges(), (std::vector<Edge>{{0, 0}, {0, 1}}));
  EXPECT_EQ(link(complete_graph({2, 3, 2}), 1), complete_graph({2, 3}));
  EXPECT_THROW(link(h, 3), UsageError);
}

TEST(Link, HandshakeProperties) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint32_t> parts = {1 + static_cast<std::uint32_t>(rng() % 4), 1 + static_cast<std::uint32_t>(rng() % 4),
                                        1 + static_cast<std::uint32_t>(rng() % 5)};
    auto h = naive::random_graph(parts, rng() % 5, 4, rng);
    std::uint64_t degree_sum = 0, link_sum = 0;
    for (std::uint32_t v = 0; v < parts.back(); ++v) {
      degree_sum += h.degree(2, v);
      link_sum += link(h, v).edge_count();
      EXPECT_EQ(link(h, v).edge_count(), h.degree(2, v));
    }
    EXPECT_EQ(degree_sum, h.edge_count());
    EXPECT_EQ(link_sum, h.edge_count());
  }
}

TEST(Prune, Examples) {
  // last-part degrees (1, 5, 5)
  std::vector<Edge> edges = {{0, 0}};
  for (std::uint32_t u = 0; u < 5; ++u) {
    edges.push_back({u, 1});
    edges.push_back({u, 2});
  }
  RPartiteHypergraph h({5, 3}, edges);
  auto r = prune_low_degree(h, Rational(2));
  EXPECT_EQ(r.removed_edges, 1u);
  EXPECT_EQ(r.removed_vertices, (std::vector<std::uint32_t>{0}));
  EXPECT_EQ(r.graph.part_sizes(), h.part_sizes());  // vertices stay, isolated
  EXPECT_EQ(r.graph.degree(1, 0), 0u);

  EXPECT_EQ(prune_low_degree(h, Rational(0)).graph, h);
  EXPECT_EQ(prune_low_degree(h, Rational(6)).graph.edge_count(), 0u);
  // exact boundary: degree 5 is not below 5, but is below 11/2
  EXPECT_EQ(prune_low_degree(h, Rational(5)).removed_edges, 1u);
  EXPECT_EQ(prune_low_degree(h, Rational(11, 2)).removed_edges, 11u);
}

TEST(Prune, RemovedEdgesBoundedByPartTimesThreshold) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto h = naive::random_graph({4, 5, 6}, rng() % 4, 4, rng);
    Rational thr(static_cast<long long>(rng() % 25), 1 + static_cast<long long>(rng() % 3));
    auto r = prune_low_degree(h, thr);
    EXPECT_LE(Rational(r.removed_edges), Rational(h.part_sizes().back()) * thr);
    EXPECT_EQ(r.graph.edge_count() + r.removed_edges, h.edge_count());
  }
}

TEST(ZngFormat, CompleteK222) {
  std::string text = "# complete 3-partite\nzng 3 2 2 2\n";
  for (int i = 0; i < 8; ++i) text += std::to_string(i >> 2 & 1) + " " + std::to_string(i >> 1 & 1) + " " + std::to_string(i & 1) + "\n";
  EXPECT_EQ(read_graph(text), complete_graph({2, 2, 2}));
}

TEST(ZngFormat, RoundTripAndCanonicalOrder) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    auto h = naive::random_graph({3, 2, 4}, 1, 2, rng);
    const auto text = write_graph(h);
    EXPECT_EQ(read_graph(text), h);
    EXPECT_EQ(write_graph(read_graph(text)), text);
  }
  // unsorted input is canonicalized on write
  EXPECT_EQ(write_graph(read_graph("zng 2 2 2\n1 1\n0 1  # trailing comment\n\n")), "zng 2 2 2\n0 1\n1 1\n");
}

TEST(ZngFormat, ParseErrorsNameTheLine) {
  auto line_of = [](const std::string& text) {
    try {
      read_graph(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  EXPECT_EQ(line_of("zng 2 2 2\n0 1\n1 0\n0 1\n"), 4u);  // duplicate
  EXPECT_EQ(line_of("zng 2 2 2\n0 2\n"), 2u);            // out of range
  EXPECT_EQ(line_of("zng 2 2\n"), 1u);                    // header size mismatch
  EXPECT_EQ(line_of("graph 2 2 2\n"), 1u);
  EXPECT_EQ(line_of("zng 2 2 2\n0 1 1\n"), 2u);
  EXPECT_EQ(line_of("zng 2 2 2\n0 x\n"), 2u);
  EXPECT_EQ(line_of(""), 0u + 0u);  // empty input: line 0
  EXPECT_THROW(read_graph(""), ParseError);
}
