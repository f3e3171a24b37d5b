#pragma once

// Exact counts of ordered K_{s_1,...,s_r} and the constant-free Jensen chain
// that lower-bounds them.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "zarank/common.hpp"
#include "zarank/hypergraph.hpp"
#include "zarank/patterns.hpp"

namespace zarank::count {

/// Generalized binomial: 0 for x < s-1, else x(x-1)...(x-s+1)/s!.
/// Convex and nondecreasing on x >= 0.
inline Rational gen_binom(const Rational& x, std::uint32_t s) {
  if (s < 1) throw UsageError("gen_binom: s must be >= 1");
  if (x < Rational(s - 1)) return 0;
  Rational num = 1;
  BigInt fact = 1;
  for (std::uint32_t i = 0; i < s; ++i) {
    num *= x - Rational(i);
    fact *= i + 1;
  }
  return num / Rational(fact);
}

inline Rational pow(const Rational& x, std::uint64_t e) {
  const BigInt n = boost::multiprecision::pow(BigInt(numerator(x)), static_cast<unsigned>(e));
  const BigInt d = boost::multiprecision::pow(BigInt(denominator(x)), static_cast<unsigned>(e));
  return Rational(n, d);
}

struct CountOptions {
  std::uint64_t budget = kDefaultEnumerationBudget;
  unsigned jobs = 1;
};

/// t_b: ordered K_{s_1..s_r} copies; t_a: ordered K_{s_1..s_{r-1},1} copies.
struct OrderedCounts {
  BigInt t_b = 0;
  BigInt t_a = 0;
};

inline void check_pattern_sizes(const RPartiteHypergraph& h, std::span<const std::uint32_t> s_list) {
  if (h.rank() < 2) throw UsageError("counting needs at least two parts");
  if (s_list.size() != h.rank())
    throw UsageError("need " + std::to_string(h.rank()) + " pattern sizes, got " + std::to_string(s_list.size()));
  for (auto s : s_list)
    if (s < 1) throw UsageError("pattern sizes must be >= 1");
}

/// Sum over (S_1..S_{r-1}) of f(S) and of C(f(S), s_r), where f(S) is the
/// size of the common neighbourhood in the last part.
inline OrderedCounts count_chain(const RPartiteHypergraph& h, std::span<const std::uint32_t> s_list,
                                 const CountOptions& opt = {}) {
  check_pattern_sizes(h, s_list);
  const std::span<const std::uint32_t> left_parts(h.part_sizes().data(), h.rank() - 1);
  const PatternSpace space(left_parts, s_list.first(h.rank() - 1), opt.budget);
  const std::uint32_t s_last = s_list.back();

  std::vector<OrderedCounts> partial(chunk_count(space.size(), opt.jobs));
  parallel_chunks(space.size(), opt.jobs, [&](std::size_t c, std::uint64_t begin, std::uint64_t end) {
    std::vector<std::uint64_t> by_size(h.part_sizes().back() + 1, 0);
    Pattern pat;
    Bitset acc;
    for (std::uint64_t i = begin; i < end; ++i) {
      space.at(i, pat);
      common_neighborhood(h, pat, acc);
      ++by_size[acc.count()];
    }
    for (std::uint64_t f = 0; f < by_size.size(); ++f) {
      if (!by_size[f]) continue;
      partial[c].t_a += BigInt(f) * by_size[f];
      partial[c].t_b += binomial(f, s_last) * by_size[f];
    }
  });
  OrderedCounts out;
  for (const auto& p : partial) {
    out.t_a += p.t_a;
    out.t_b += p.t_b;
  }
  return out;
}

inline BigInt count_ordered(const RPartiteHypergraph& h, std::span<const std::uint32_t> s_list,
                            const CountOptions& opt = {}) {
  return count_chain(h, s_list, opt).t_b;
}

namespace detail {

inline BigInt left_binomial_product(const RPartiteHypergraph& h, std::span<const std::uint32_t> s_list) {
  BigInt prod = 1;
  for (std::size_t i = 0; i + 1 < h.rank(); ++i) prod *= binomial(h.part_size(i), s_list[i]);
  return prod;
}

}  // namespace detail

/// Constant-free lower bound on count_ordered via Jensen's inequality.
///   r = 2:  C(m_1,s_1) * C( m_2 C(e/m_2, s_1) / C(m_1,s_1), s_2 )
///   r > 2:  P * C( sum_v LB(link(v)) / P, s_r ),  P = prod_{i<r} C(m_i, s_i)
/// There is no low-degree pruning step: the sum runs over every last-part
/// vertex with its exact link bound.
inline Rational jensen_lower_bound(const RPartiteHypergraph& h, std::span<const std::uint32_t> s_list) {
  check_pattern_sizes(h, s_list);
  const BigInt left = detail::left_binomial_product(h, s_list);
  if (left == 0) return 0;
  Rational t_a_bound;
  if (h.rank() == 2) {
    const std::uint32_t m2 = h.part_size(1);
    if (m2 == 0) return 0;
    const Rational avg_degree(BigInt(h.edge_count()), BigInt(m2));
    t_a_bound = Rational(m2) * gen_binom(avg_degree, s_list[0]);
  } else {
    const auto inner = s_list.first(h.rank() - 1);
    for (std::uint32_t v = 0; v < h.part_sizes().back(); ++v) t_a_bound += jensen_lower_bound(link(h, v), inner);
  }
  return Rational(left) * gen_binom(t_a_bound / Rational(left), s_list.back());
}

struct SupersaturationReport {
  BigInt edges = 0;
  Rational density = 0;  // |E| / prod m_i
  Rational edge_threshold_factor = 0;  // c_1 * prod_{i<r} m_i; threshold is this times m_r^{1-1/sigma}
  std::uint64_t sigma = 1;  // s_1 ... s_{r-1}
  bool premise_holds = false;
  bool vacuous = true;  // premise false, so nothing is claimed
  bool last_part_is_min = false;
  BigInt count = 0;
  Rational target = 0;  // c_2 * prod C(m_i,s_i) * p^{prod s_i}
  bool conclusion_holds = false;
  std::optional<Rational> ratio;  // count / (prod C(m_i,s_i) p^{prod s_i}), absent when that is 0
};

/// Measures both sides of the supersaturation statement with user-supplied
/// probe constants. The premise |E| >= c_1 M m_r^{1-1/sigma} is decided
/// exactly via (|E| / (c_1 M))^sigma >= m_r^{sigma-1}.
inline SupersaturationReport supersaturation_check(const RPartiteHypergraph& h, std::span<const std::uint32_t> s_list,
                                                   const Rational& c1, const Rational& c2,
                                                   const CountOptions& opt = {}) {
  check_pattern_sizes(h, s_list);
  if (c1 <= 0 || c2 <= 0) throw UsageError("probe constants must be positive");
  SupersaturationReport rep;
  rep.edges = h.edge_count();
  BigInt all = 1, left = 1;
  std::uint64_t s_all = 1;
  for (std::size_t i = 0; i < h.rank(); ++i) {
    all *= h.part_size(i);
    s_all = checked_mul(s_all, s_list[i], "pattern size product");
    if (i + 1 < h.rank()) {
      left *= h.part_size(i);
      rep.sigma = checked_mul(rep.sigma, s_list[i], "pattern size product");
    }
  }
  const std::uint32_t m_r = h.part_sizes().back();
  rep.last_part_is_min = true;
  for (auto m : h.part_sizes()) rep.last_part_is_min = rep.last_part_is_min && m_r <= m;
  rep.density = all == 0 ? Rational(0) : Rational(rep.edges, all);

  rep.edge_threshold_factor = c1 * Rational(left);
  if (rep.edge_threshold_factor == 0) {
    rep.premise_holds = true;
  } else {
    const Rational a = Rational(rep.edges) / rep.edge_threshold_factor;
    rep.premise_holds = pow(a, rep.sigma) >= pow(Rational(m_r), rep.sigma - 1);
  }
  rep.vacuous = !rep.premise_holds;

  rep.count = count_ordered(h, s_list, opt);
  BigInt binoms = 1;
  for (std::size_t i = 0; i < h.rank(); ++i) binoms *= binomial(h.part_size(i), s_list[i]);
  const Rational base = Rational(binoms) * pow(rep.density, s_all);
  rep.target = c2 * base;
  rep.conclusion_holds = Rational(rep.count) >= rep.target;
  if (base != 0) rep.ratio = Rational(rep.count) / base;
  return rep;
}

struct CountReport {
  std::vector<std::uint32_t> s_list;
  std::vector<std::uint32_t> part_sizes;
  BigInt edges = 0;
  BigInt t_b = 0;
  BigInt t_a = 0;
  Rational jensen_bound = 0;
  Rational density = 0;
  bool bound_holds = false;  // t_b >= jensen_bound
  std::optional<SupersaturationReport> supersaturation;
};

inline CountReport make_report(const RPartiteHypergraph& h, std::span<const std::uint32_t> s_list,
                               const CountOptions& opt = {}) {
  CountReport rep;
  rep.s_list.assign(s_list.begin(), s_list.end());
  rep.part_sizes = h.part_sizes();
  rep.edges = h.edge_count();
  const auto counts = count_chain(h, s_list, opt);
  rep.t_b = counts.t_b;
  rep.t_a = counts.t_a;
  rep.jensen_bound = jensen_lower_bound(h, s_list);
  BigInt all = 1;
  for (auto m : h.part_sizes()) all *= m;
  rep.density = all == 0 ? Rational(0) : Rational(rep.edges, all);
  rep.bound_holds = Rational(rep.t_b) >= rep.jensen_bound;
  return rep;
}

inline nlohmann::json to_json(const SupersaturationReport& s) {
  return {{"edges", s.edges.str()},
          {"density", to_string(s.density)},
          {"sigma", s.sigma},
          {"edge_threshold_factor", to_string(s.edge_threshold_factor)},
          {"premise_holds", s.premise_holds},
          {"vacuous", s.vacuous},
          {"last_part_is_min", s.last_part_is_min},
          {"count", s.count.str()},
          {"target", to_string(s.target)},
          {"conclusion_holds", s.conclusion_holds},
          {"ratio", s.ratio ? nlohmann::json(to_string(*s.ratio)) : nlohmann::json(nullptr)},
          {"ratio_decimal", s.ratio ? nlohmann::json(to_double(*s.ratio)) : nlohmann::json(nullptr)}};
}

inline nlohmann::json to_json(const CountReport& r) {
  nlohmann::json j = {{"s_list", r.s_list},
                      {"part_sizes", r.part_sizes},
                      {"edges", r.edges.str()},
                      {"t_b", r.t_b.str()},
                      {"t_a", r.t_a.str()},
                      {"jensen_bound", to_string(r.jensen_bound)},
                      {"density", to_string(r.density)},
                      {"bound_holds", r.bound_holds}};
  if (r.supersaturation) j["supersaturation"] = to_json(*r.supersaturation);
  return j;
}

}  // namespace zarank::count
