#pragma once

// Dense multivariate polynomials of total degree <= d over GF(q).

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "zarank/common.hpp"
#include "zarank/gf.hpp"

namespace zarank::mpoly {

inline constexpr std::uint64_t kDefaultBasisCap = 1u << 20;
inline constexpr std::uint64_t kDefaultDomainCap = 1u << 24;

using Exponents = std::vector<std::uint32_t>;
using Point = std::vector<gf::FieldElement>;

/// All exponent tuples of total degree <= max_degree, graded lexicographic:
/// by total degree, then lexicographically descending within a degree
/// (1, x1, x2, x1^2, x1 x2, x2^2, ...).
struct MonomialBasis {
  std::uint32_t num_vars = 0;
  std::uint32_t max_degree = 0;
  std::vector<Exponents> exponents;

  std::size_t size() const noexcept { return exponents.size(); }
};

using BasisPtr = std::shared_ptr<const MonomialBasis>;

namespace detail {

inline void exact_degree_tuples(std::uint32_t vars_left, std::uint32_t degree_left, Exponents& cur,
                                std::vector<Exponents>& out) {
  if (vars_left == 0) {
    if (degree_left == 0) out.push_back(cur);
    return;
  }
  if (vars_left == 1) {
    cur.push_back(degree_left);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (std::uint32_t a = degree_left + 1; a-- > 0;) {
    cur.push_back(a);
    exact_degree_tuples(vars_left - 1, degree_left - a, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

inline BasisPtr monomial_basis(std::uint32_t num_vars, std::uint32_t d, std::uint64_t cap = kDefaultBasisCap) {
  const BigInt size = binomial(std::uint64_t{num_vars} + d, d);
  if (size > cap)
    throw BudgetError("monomial basis C(" + std::to_string(num_vars + d) + "," + std::to_string(d) + ") = " +
                      size.str() + " exceeds cap " + std::to_string(cap));
  auto basis = std::make_shared<MonomialBasis>();
  basis->num_vars = num_vars;
  basis->max_degree = d;
  basis->exponents.reserve(size.convert_to<std::size_t>());
  Exponents cur;
  for (std::uint32_t deg = 0; deg <= d; ++deg) {
    detail::exact_degree_tuples(num_vars, deg, cur, basis->exponents);
    // With no variables only the constant monomial exists.
    if (num_vars == 0) break;
  }
  return basis;
}

struct MultiPoly {
  BasisPtr basis;
  std::vector<gf::FieldElement> coeffs;  // one per basis monomial
};

inline bool same_basis(const MonomialBasis& a, const MonomialBasis& b) {
  return a.num_vars == b.num_vars && a.max_degree == b.max_degree;
}

inline MultiPoly zero_poly(BasisPtr basis, const gf::FieldSpec& spec) {
  const std::size_t n = basis->size();
  return {std::move(basis), std::vector<gf::FieldElement>(n, gf::zero(spec))};
}

/// Each coefficient uniform over GF(q), drawn in basis order.
inline MultiPoly random_poly(BasisPtr basis, const gf::FieldSpec& spec, Rng& rng) {
  MultiPoly f{std::move(basis), {}};
  f.coeffs.reserve(f.basis->size());
  for (std::size_t i = 0; i < f.basis->size(); ++i)
    f.coeffs.push_back(gf::element_of(static_cast<gf::Code>(uniform_below(rng, spec.q)), spec));
  return f;
}

inline void require_same_basis(const MultiPoly& f, const MultiPoly& g) {
  if (!same_basis(*f.basis, *g.basis)) throw UsageError("polynomials live in different monomial bases");
}

inline MultiPoly add_poly(const MultiPoly& f, const MultiPoly& g, const gf::FieldSpec& spec) {
  require_same_basis(f, g);
  MultiPoly r = f;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] = gf::add(f.coeffs[i], g.coeffs[i], spec);
  return r;
}

inline MultiPoly sub_poly(const MultiPoly& f, const MultiPoly& g, const gf::FieldSpec& spec) {
  require_same_basis(f, g);
  MultiPoly r = f;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] = gf::sub(f.coeffs[i], g.coeffs[i], spec);
  return r;
}

inline bool is_zero(const MultiPoly& f, const gf::FieldSpec& spec) {
  const auto z = gf::zero(spec);
  for (const auto& c : f.coeffs)
    if (c != z) return false;
  return true;
}

/// Reference evaluation with coefficient-level field arithmetic.
inline gf::FieldElement evaluate(const MultiPoly& f, std::span<const gf::FieldElement> point, const gf::FieldSpec& spec) {
  if (point.size() != f.basis->num_vars)
    throw UsageError("evaluate: point has " + std::to_string(point.size()) + " coordinates, polynomial has " +
                     std::to_string(f.basis->num_vars) + " variables");
  gf::FieldElement acc = gf::zero(spec);
  for (std::size_t m = 0; m < f.basis->size(); ++m) {
    gf::FieldElement term = f.coeffs[m];
    const auto& exps = f.basis->exponents[m];
    for (std::size_t i = 0; i < exps.size(); ++i) term = gf::mul(term, gf::pow(point[i], exps[i], spec), spec);
    acc = gf::add(acc, term, spec);
  }
  return acc;
}

inline std::uint64_t domain_size(std::uint32_t num_vars, const gf::FieldSpec& spec, std::uint64_t cap) {
  std::uint64_t n = 1;
  for (std::uint32_t i = 0; i < num_vars; ++i) {
    n = checked_mul(n, spec.q, "evaluation domain");
    if (n > cap)
      throw BudgetError("evaluation domain " + std::to_string(spec.q) + "^" + std::to_string(num_vars) +
                        " exceeds cap " + std::to_string(cap));
  }
  return n;
}

/// Coordinates (as codes) of the index-th point of GF(q)^num_vars in
/// lexicographic order; the first coordinate is most significant.
inline std::vector<gf::Code> domain_codes(std::uint64_t index, std::uint32_t num_vars, std::uint32_t q) {
  std::vector<gf::Code> c(num_vars);
  for (std::uint32_t i = num_vars; i-- > 0;) {
    c[i] = static_cast<gf::Code>(index % q);
    index /= q;
  }
  return c;
}

inline Point domain_point(std::uint64_t index, std::uint32_t num_vars, const gf::FieldSpec& spec) {
  Point p;
  for (auto c : domain_codes(index, num_vars, spec.q)) p.push_back(gf::element_of(c, spec));
  return p;
}

/// Values of f at every point of the domain, in lexicographic point order.
inline std::vector<gf::Code> evaluate_all(const MultiPoly& f, const gf::Field& field,
                                          std::uint64_t cap = kDefaultDomainCap) {
  const std::uint32_t v = f.basis->num_vars;
  const std::uint32_t d = f.basis->max_degree;
  const std::uint64_t n = domain_size(v, field.spec(), cap);
  std::vector<gf::Code> coeff(f.coeffs.size());
  for (std::size_t i = 0; i < coeff.size(); ++i) coeff[i] = gf::code_of(f.coeffs[i], field.spec());

  std::vector<gf::Code> out(n);
  std::vector<gf::Code> powers(std::size_t{v} * (d + 1));
  for (std::uint64_t idx = 0; idx < n; ++idx) {
    const auto x = domain_codes(idx, v, field.order());
    for (std::uint32_t i = 0; i < v; ++i) {
      gf::Code acc = field.one();
      for (std::uint32_t e = 0; e <= d; ++e) {
        powers[std::size_t{i} * (d + 1) + e] = acc;
        acc = field.mul(acc, x[i]);
      }
    }
    gf::Code sum = field.zero();
    for (std::size_t m = 0; m < coeff.size(); ++m) {
      if (coeff[m] == field.zero()) continue;
      gf::Code term = coeff[m];
      const auto& exps = f.basis->exponents[m];
      for (std::uint32_t i = 0; i < v; ++i)
        if (exps[i]) term = field.mul(term, powers[std::size_t{i} * (d + 1) + exps[i]]);
      sum = field.add(sum, term);
    }
    out[idx] = sum;
  }
  return out;
}

/// Indices of the domain points where every polynomial in fs takes the same value.
inline std::vector<std::uint64_t> agreement_indices(std::span<const MultiPoly> fs, const gf::Field& field,
                                                    std::uint64_t cap = kDefaultDomainCap) {
  if (fs.empty()) throw UsageError("agreement_set: empty polynomial list");
  for (const auto& f : fs) require_same_basis(fs.front(), f);
  const std::uint64_t n = domain_size(fs.front().basis->num_vars, field.spec(), cap);
  const auto first = evaluate_all(fs.front(), field, cap);
  std::vector<char> agree(n, 1);
  for (std::size_t j = 1; j < fs.size(); ++j) {
    const auto vals = evaluate_all(fs[j], field, cap);
    for (std::uint64_t i = 0; i < n; ++i) agree[i] = agree[i] && vals[i] == first[i];
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < n; ++i)
    if (agree[i]) out.push_back(i);
  return out;
}

/// Points x of GF(q)^num_vars where all of fs agree, by exhaustive evaluation.
inline std::vector<Point> agreement_set(std::span<const MultiPoly> fs, const gf::FieldSpec& spec,
                                        std::uint64_t cap = kDefaultDomainCap) {
  const gf::Field field(spec);
  std::vector<Point> out;
  for (auto idx : agreement_indices(fs, field, cap)) out.push_back(domain_point(idx, fs.front().basis->num_vars, spec));
  return out;
}

// Serialization: {"basis": [num_vars, d], "coeffs": [[c_0, ..., c_{k-1}], ...]}

inline nlohmann::json to_json(const MultiPoly& f) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : f.coeffs) coeffs.push_back(c.coeffs);
  return {{"basis", {f.basis->num_vars, f.basis->max_degree}}, {"coeffs", coeffs}};
}

inline MultiPoly from_json(const nlohmann::json& j, const gf::FieldSpec& spec) {
  try {
    auto basis = monomial_basis(j.at("basis").at(0).get<std::uint32_t>(), j.at("basis").at(1).get<std::uint32_t>());
    MultiPoly f{basis, {}};
    for (const auto& c : j.at("coeffs")) {
      gf::FieldElement e{c.get<std::vector<std::uint32_t>>()};
      gf::require_member(e, spec);
      f.coeffs.push_back(std::move(e));
    }
    if (f.coeffs.size() != basis->size()) throw UsageError("polynomial coefficient count does not match basis");
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed polynomial: ") + e.what());
  }
}

}  // namespace zarank::mpoly
