#pragma once

// Enumeration of "patterns": one s_i-subset from each of the first r-1
// parts. A pattern's common neighbourhood is the set of last-part vertices
// adjacent to every transversal tuple of the chosen subsets.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zarank/common.hpp"
#include "zarank/hypergraph.hpp"

namespace zarank {

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 26;

using Subset = std::vector<std::uint32_t>;
using Pattern = std::vector<Subset>;

inline std::string to_string(const Pattern& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    s += i ? " | " : "";
    for (std::size_t j = 0; j < p[i].size(); ++j) s += (j ? "," : "") + std::to_string(p[i][j]);
  }
  return s;
}

class PatternSpace {
 public:
  /// Patterns over the given parts. Size 0 when some s_i exceeds its part.
  PatternSpace(std::span<const std::uint32_t> part_sizes, std::span<const std::uint32_t> subset_sizes,
               std::uint64_t budget = kDefaultEnumerationBudget) {
    if (part_sizes.size() != subset_sizes.size()) throw UsageError("pattern space: size lists differ in length");
    BigInt total = 1;
    for (std::size_t i = 0; i < part_sizes.size(); ++i) total *= binomial(part_sizes[i], subset_sizes[i]);
    if (total > budget)
      throw BudgetError("enumeration of " + total.str() + " patterns exceeds budget " + std::to_string(budget));
    size_ = total.convert_to<std::uint64_t>();
    if (size_ == 0) return;
    for (std::size_t i = 0; i < part_sizes.size(); ++i) choices_.push_back(all_subsets(part_sizes[i], subset_sizes[i]));
  }

  std::uint64_t size() const noexcept { return size_; }

  /// index-th pattern; the first part varies slowest.
  Pattern at(std::uint64_t index) const {
    Pattern p;
    at(index, p);
    return p;
  }

  /// Same, reusing the storage of `out`.
  void at(std::uint64_t index, Pattern& out) const {
    out.resize(choices_.size());
    for (std::size_t i = choices_.size(); i-- > 0;) {
      out[i] = choices_[i][index % choices_[i].size()];
      index /= choices_[i].size();
    }
  }

 private:
  std::uint64_t size_ = 0;
  std::vector<std::vector<Subset>> choices_;
};

/// Calls fn(tuple) for every tuple of S_1 x ... x S_k, first coordinate slowest.
/// The tuple is passed as a span that is only valid during the call.
template <typename Fn>
void for_each_transversal(const Pattern& pattern, Fn&& fn) {
  constexpr std::size_t kInline = 16;
  const std::size_t k = pattern.size();
  if (k == 0) return;
  for (const auto& s : pattern)
    if (s.empty()) return;
  std::array<std::uint32_t, kInline> tuple_buf{};
  std::array<std::size_t, kInline> digit_buf{};
  std::vector<std::uint32_t> tuple_heap;
  std::vector<std::size_t> digit_heap;
  std::uint32_t* tuple = tuple_buf.data();
  std::size_t* digit = digit_buf.data();
  if (k > kInline) {
    tuple_heap.assign(k, 0);
    digit_heap.assign(k, 0);
    tuple = tuple_heap.data();
    digit = digit_heap.data();
  }
  for (std::size_t i = 0; i < k; ++i) tuple[i] = pattern[i][0];
  for (;;) {
    fn(std::span<const std::uint32_t>(tuple, k));
    std::size_t i = k;
    for (;;) {
      if (i == 0) return;
      --i;
      if (++digit[i] < pattern[i].size()) {
        tuple[i] = pattern[i][digit[i]];
        break;
      }
      digit[i] = 0;
      tuple[i] = pattern[i][0];
    }
  }
}

/// Last-part vertices adjacent to every transversal tuple of the pattern.
/// `acc` is resized to the last part and overwritten.
inline void common_neighborhood(const RPartiteHypergraph& h, const Pattern& pattern, Bitset& acc) {
  acc.resize(h.part_sizes().back());
  acc.set();
  for_each_transversal(pattern, [&](std::span<const std::uint32_t> tuple) {
    acc &= h.last_part_neighbors(h.prefix_index(tuple));
  });
}

inline Bitset common_neighborhood(const RPartiteHypergraph& h, const Pattern& pattern) {
  Bitset acc;
  common_neighborhood(h, pattern, acc);
  return acc;
}

}  // namespace zarank
