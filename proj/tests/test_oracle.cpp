#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "zarank/count.hpp"
#include "zarank/oracle.hpp"

using namespace zarank;
using namespace zarank::oracle;

namespace {

using S = std::vector<std::uint32_t>;

void check_against_raw(const S& parts, const S& pattern) {
  SCOPED_TRACE(to_string(ZQuery{parts, pattern}));
  const auto raw = naive::raw_exhaustive_z(parts, pattern);
  const auto res = exact_z({parts, pattern});
  EXPECT_EQ(res.z, raw);
  EXPECT_EQ(res.witness.edge_count(), res.z);
  EXPECT_EQ(naive::naive_count_ordered(res.witness, pattern), 0u);
}

}  // namespace

TEST(ExactZ, Examples) {
  // Values frozen from raw exhaustion over every edge subset.
  EXPECT_EQ(naive::raw_exhaustive_z({2, 2}, {2, 2}), 3u);
  EXPECT_EQ(naive::raw_exhaustive_z({3, 3}, {2, 2}), 6u);
  EXPECT_EQ(naive::raw_exhaustive_z({2, 2, 2}, {1, 1, 2}), 4u);

  EXPECT_EQ(exact_z({{2, 2}, {2, 2}}).z, 3u);
  EXPECT_EQ(exact_z({{3, 3}, {2, 2}}).z, 6u);
  EXPECT_EQ(exact_z({{2, 2, 2}, {1, 1, 2}}).z, 4u);
}

TEST(ExactZ, AgreesWithRawExhaustion) {
  check_against_raw({4, 4}, {2, 2});
  check_against_raw({3, 4}, {2, 2});
  check_against_raw({3, 5}, {2, 3});
  check_against_raw({2, 2, 3}, {1, 2, 2});
  check_against_raw({2, 2, 2}, {2, 2, 2});
  check_against_raw({2, 3, 2}, {2, 1, 2});
  check_against_raw({2, 2, 2, 2}, {1, 1, 2, 2});
}

TEST(ExactZ, KnownSquareValues) {
  EXPECT_EQ(exact_z({{4, 4}, {2, 2}}).z, 9u);
  EXPECT_EQ(exact_z({{5, 5}, {2, 2}}).z, 12u);
}

TEST(ExactZ, TrivialCeilings) {
  // a pattern larger than a part cannot occur
  EXPECT_EQ(exact_z({{2, 3}, {3, 2}}).z, 6u);
  // s_r = 1 with s_i = 1 elsewhere forbids every edge
  EXPECT_EQ(exact_z({{3, 3}, {1, 1}}).z, 0u);
  // forbidding a single last-part neighbour per vertex of part 1
  EXPECT_EQ(exact_z({{3, 4}, {1, 2}}).z, 3u);
}

TEST(ExactZ, MonotoneInPartsAndPattern) {
  const auto a = exact_z({{3, 3}, {2, 2}}).z;
  EXPECT_LE(a, exact_z({{3, 4}, {2, 2}}).z);
  EXPECT_LE(a, exact_z({{4, 3}, {2, 2}}).z);
  EXPECT_LE(a, exact_z({{3, 3}, {2, 3}}).z);
  EXPECT_LE(a, exact_z({{3, 3}, {3, 2}}).z);
}

TEST(ExactZ, SymmetricForBipartite) {
  EXPECT_EQ(exact_z({{3, 4}, {2, 2}}).z, exact_z({{4, 3}, {2, 2}}).z);
  EXPECT_EQ(exact_z({{3, 5}, {2, 3}}).z, exact_z({{5, 3}, {3, 2}}).z);
}

TEST(ExactZ, Caps) {
  EXPECT_THROW(exact_z({{6, 6}, {2, 2}}), BudgetError);
  EXPECT_EQ(exact_z({{6, 6}, {2, 2}}, {36, kDefaultNodeBudget}).z, 16u);
  EXPECT_THROW(exact_z({{3, 3}, {2, 2}}, {30, 5}), BudgetError);
  EXPECT_THROW(exact_z({{3}, {2}}), UsageError);
  EXPECT_THROW(exact_z({{3, 3}, {2}}), UsageError);
  EXPECT_THROW(exact_z({{3, 0}, {2, 2}}), UsageError);
}

TEST(BoundTable, Examples) {
  auto rows = bound_table({{{{3, 3}, {2, 2}}, std::nullopt},
                           {{{2, 2}, {2, 2}}, std::nullopt},
                           {{{10, 25}, {2, 2}}, std::uint64_t{50}}});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].value, 6u);
  EXPECT_NEAR(rows[0].bound, 3 * std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(rows[0].ratio, 6 / (3 * std::sqrt(3.0)), 1e-12);
  EXPECT_EQ(format_fixed(rows[0].ratio, 2), "1.15");
  EXPECT_EQ(format_fixed(rows[1].ratio, 2), "1.06");
  EXPECT_EQ(rows[2].source, "construction");
  EXPECT_EQ(rows[2].ratio, 1.0);
  const auto tsv = bound_table_tsv(rows);
  EXPECT_EQ(tsv.substr(0, tsv.find('\n')), "query\tvalue\tsource\tbound\tratio");
}

TEST(Ledger, AppendsWithSingleHeader) {
  const auto path = std::filesystem::temp_directory_path() / "zarank_test_ledger.tsv";
  std::filesystem::remove(path);
  const ZQuery q{{2, 2}, {2, 2}};
  const auto res = exact_z(q);
  append_ledger(path.string(), q, res, "w.zng");
  append_ledger(path.string(), q, res, "w.zng");
  std::ifstream in(path);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "query\tz\tnodes\twitness");
  EXPECT_EQ(lines[1].substr(0, 12), "z(2,2;2,2)\t3");
  std::filesystem::remove(path);
}
