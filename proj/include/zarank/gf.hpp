#pragma once

// Exact arithmetic in GF(p^k), polynomial basis over GF(p).
//
// An element is stored as its coefficient vector (c_0, ..., c_{k-1}) with c_0
// the constant term. Elements are ordered lexicographically on that vector,
// and an element's position in this order is its *code*; codes are what the
// fast table-driven `Field` works with and what fixes vertex numbering in the
// construction.

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "zarank/common.hpp"

namespace zarank::gf {

inline constexpr std::uint64_t kDefaultMaxOrder = 1u << 16;

struct FieldSpec {
  std::uint32_t p = 2;
  std::uint32_t k = 1;
  // Monic irreducible modulus, low degree first, length k+1. Empty when k == 1.
  std::vector<std::uint32_t> modulus;
  std::uint32_t q = 2;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

struct FieldElement {
  std::vector<std::uint32_t> coeffs;

  friend bool operator==(const FieldElement&, const FieldElement&) = default;
  friend auto operator<=>(const FieldElement&, const FieldElement&) = default;
};

using Code = std::uint32_t;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace detail {

using Poly = std::vector<std::uint32_t>;  // coefficients over GF(p), low degree first

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint32_t inv_mod_p(std::uint32_t a, std::uint32_t p) {
  std::uint64_t r = 1, b = a % p;
  for (std::uint32_t e = p - 2; e > 0; e >>= 1) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
  }
  return static_cast<std::uint32_t>(r);
}

/// a mod b over GF(p); b must be non-zero.
inline Poly poly_mod(Poly a, Poly b, std::uint32_t p) {
  trim(a);
  trim(b);
  const std::uint64_t lead_inv = inv_mod_p(b.back(), p);
  while (a.size() >= b.size()) {
    const std::uint64_t c = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i)
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - c * b[i] % p) % p);
    trim(a);
  }
  return a;
}

/// Exhaustive check: no monic factor of degree 1..deg/2.
inline bool is_irreducible(const Poly& f, std::uint32_t p) {
  const std::size_t deg = f.size() - 1;
  for (std::size_t g_deg = 1; g_deg <= deg / 2; ++g_deg) {
    std::uint64_t count = checked_pow(p, g_deg, "irreducibility scan");
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Poly g(g_deg + 1);
      std::uint64_t x = idx;
      for (std::size_t i = 0; i < g_deg; ++i) {
        g[i] = static_cast<std::uint32_t>(x % p);
        x /= p;
      }
      g[g_deg] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Field of order p^k. For k > 1 the modulus is the lexicographically smallest
/// (on the low-degree-first coefficient list) monic irreducible of degree k.
inline FieldSpec make_field(std::uint32_t p, std::uint32_t k, std::uint64_t max_order = kDefaultMaxOrder) {
  if (!is_prime(p)) throw UsageError("make_field: " + std::to_string(p) + " is not prime");
  if (k < 1) throw UsageError("make_field: extension degree must be >= 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    q = checked_mul(q, p, "make_field");
    if (q > max_order)
      throw BudgetError("make_field: order " + std::to_string(p) + "^" + std::to_string(k) +
                        " exceeds cap " + std::to_string(max_order));
  }
  FieldSpec spec;
  spec.p = p;
  spec.k = k;
  spec.q = static_cast<std::uint32_t>(q);
  if (k == 1) return spec;
  // Candidates c_0..c_{k-1} enumerated with c_0 as the most significant digit.
  for (std::uint64_t idx = 0; idx < q; ++idx) {
    detail::Poly f(k + 1);
    std::uint64_t x = idx;
    for (std::uint32_t i = k; i-- > 0;) {
      f[i] = static_cast<std::uint32_t>(x % p);
      x /= p;
    }
    f[k] = 1;
    if (detail::is_irreducible(f, p)) {
      spec.modulus = f;
      return spec;
    }
  }
  throw ArithmeticError("make_field: no irreducible polynomial found");  // unreachable
}

/// Splits q into (p, k) with q = p^k, or throws UsageError.
inline FieldSpec make_field_of_order(std::uint64_t q, std::uint64_t max_order = kDefaultMaxOrder) {
  if (q < 2) throw UsageError("field order must be >= 2");
  std::uint64_t p = 2;
  while (p * p <= q && q % p != 0) ++p;
  if (q % p != 0) p = q;
  std::uint64_t rest = q;
  std::uint32_t k = 0;
  while (rest % p == 0) {
    rest /= p;
    ++k;
  }
  if (rest != 1) throw UsageError("field order " + std::to_string(q) + " is not a prime power");
  if (q > max_order) throw BudgetError("field order " + std::to_string(q) + " exceeds cap " + std::to_string(max_order));
  return make_field(static_cast<std::uint32_t>(p), k, max_order);
}

inline FieldElement zero(const FieldSpec& spec) { return {std::vector<std::uint32_t>(spec.k, 0)}; }

inline FieldElement one(const FieldSpec& spec) {
  FieldElement e = zero(spec);
  e.coeffs[0] = 1;
  return e;
}

inline bool belongs(const FieldElement& a, const FieldSpec& spec) {
  if (a.coeffs.size() != spec.k) return false;
  for (auto c : a.coeffs)
    if (c >= spec.p) return false;
  return true;
}

inline void require_member(const FieldElement& a, const FieldSpec& spec) {
  if (!belongs(a, spec)) throw UsageError("field element does not belong to GF(" + std::to_string(spec.q) + ")");
}

inline FieldElement add(const FieldElement& a, const FieldElement& b, const FieldSpec& spec) {
  require_member(a, spec);
  require_member(b, spec);
  FieldElement r = a;
  for (std::uint32_t i = 0; i < spec.k; ++i) r.coeffs[i] = (a.coeffs[i] + b.coeffs[i]) % spec.p;
  return r;
}

inline FieldElement neg(const FieldElement& a, const FieldSpec& spec) {
  require_member(a, spec);
  FieldElement r = a;
  for (auto& c : r.coeffs) c = (spec.p - c) % spec.p;
  return r;
}

inline FieldElement sub(const FieldElement& a, const FieldElement& b, const FieldSpec& spec) {
  return add(a, neg(b, spec), spec);
}

inline FieldElement mul(const FieldElement& a, const FieldElement& b, const FieldSpec& spec) {
  require_member(a, spec);
  require_member(b, spec);
  const std::uint64_t p = spec.p;
  const std::uint32_t k = spec.k;
  if (k == 1) return {{static_cast<std::uint32_t>(std::uint64_t{a.coeffs[0]} * b.coeffs[0] % p)}};
  std::vector<std::uint64_t> prod(2 * k - 1, 0);
  for (std::uint32_t i = 0; i < k; ++i)
    for (std::uint32_t j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{a.coeffs[i]} * b.coeffs[j]) % p;
  // x^k = -(m_0 + ... + m_{k-1} x^{k-1})
  for (std::size_t deg = prod.size() - 1; deg >= k; --deg) {
    const std::uint64_t c = prod[deg];
    prod[deg] = 0;
    if (c == 0) continue;
    for (std::uint32_t j = 0; j < k; ++j)
      prod[deg - k + j] = (prod[deg - k + j] + (p - c) * spec.modulus[j]) % p;
  }
  FieldElement r;
  r.coeffs.resize(k);
  for (std::uint32_t i = 0; i < k; ++i) r.coeffs[i] = static_cast<std::uint32_t>(prod[i]);
  return r;
}

inline FieldElement pow(FieldElement base, std::uint64_t e, const FieldSpec& spec) {
  FieldElement r = one(spec);
  while (e > 0) {
    if (e & 1) r = mul(r, base, spec);
    base = mul(base, base, spec);
    e >>= 1;
  }
  return r;
}

/// a^{q-2}; throws ArithmeticError on zero.
inline FieldElement inv(const FieldElement& a, const FieldSpec& spec) {
  require_member(a, spec);
  if (a == zero(spec)) throw ArithmeticError("division by zero in GF(" + std::to_string(spec.q) + ")");
  return pow(a, spec.q - 2, spec);
}

inline Code code_of(const FieldElement& a, const FieldSpec& spec) {
  require_member(a, spec);
  Code c = 0;
  for (std::uint32_t i = 0; i < spec.k; ++i) c = c * spec.p + a.coeffs[i];
  return c;
}

inline FieldElement element_of(Code code, const FieldSpec& spec) {
  if (code >= spec.q) throw UsageError("element code out of range");
  FieldElement e = zero(spec);
  for (std::uint32_t i = spec.k; i-- > 0;) {
    e.coeffs[i] = code % spec.p;
    code /= spec.p;
  }
  return e;
}

/// All q elements in lexicographic coefficient order; the first is zero.
inline std::vector<FieldElement> enumerate_elements(const FieldSpec& spec) {
  std::vector<FieldElement> out;
  out.reserve(spec.q);
  for (Code c = 0; c < spec.q; ++c) out.push_back(element_of(c, spec));
  return out;
}

inline std::string to_string(const FieldElement& a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a.coeffs[i]);
  }
  return s + ")";
}

/// Code-level arithmetic for hot loops. Tables are built from the
/// coefficient-level operations above when q is small enough; larger fields
/// fall back to those operations directly.
class Field {
 public:
  static constexpr std::uint32_t kTableCap = 1024;

  explicit Field(FieldSpec spec) : spec_(std::move(spec)) {
    zero_ = 0;
    one_ = code_of(gf::one(spec_), spec_);
    if (spec_.q <= kTableCap) {
      const std::size_t q = spec_.q;
      add_.resize(q * q);
      mul_.resize(q * q);
      neg_.resize(q);
      inv_.assign(q, 0);
      const auto elems = enumerate_elements(spec_);
      for (std::size_t a = 0; a < q; ++a) {
        neg_[a] = code_of(gf::neg(elems[a], spec_), spec_);
        if (a != 0) inv_[a] = code_of(gf::inv(elems[a], spec_), spec_);
        for (std::size_t b = 0; b < q; ++b) {
          add_[a * q + b] = code_of(gf::add(elems[a], elems[b], spec_), spec_);
          mul_[a * q + b] = code_of(gf::mul(elems[a], elems[b], spec_), spec_);
        }
      }
    }
  }

  const FieldSpec& spec() const noexcept { return spec_; }
  std::uint32_t order() const noexcept { return spec_.q; }
  Code zero() const noexcept { return zero_; }
  Code one() const noexcept { return one_; }
  bool tabled() const noexcept { return !add_.empty(); }

  Code add(Code a, Code b) const {
    if (tabled()) return add_[std::size_t{a} * spec_.q + b];
    return code_of(gf::add(element_of(a, spec_), element_of(b, spec_), spec_), spec_);
  }
  Code mul(Code a, Code b) const {
    if (tabled()) return mul_[std::size_t{a} * spec_.q + b];
    return code_of(gf::mul(element_of(a, spec_), element_of(b, spec_), spec_), spec_);
  }
  Code neg(Code a) const {
    if (tabled()) return neg_[a];
    return code_of(gf::neg(element_of(a, spec_), spec_), spec_);
  }
  Code sub(Code a, Code b) const { return add(a, neg(b)); }
  Code inv(Code a) const {
    if (a == zero_) throw ArithmeticError("division by zero in GF(" + std::to_string(spec_.q) + ")");
    if (tabled()) return inv_[a];
    return code_of(gf::inv(element_of(a, spec_), spec_), spec_);
  }
  Code pow(Code base, std::uint64_t e) const {
    Code r = one_;
    while (e > 0) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }

 private:
  FieldSpec spec_;
  Code zero_ = 0;
  Code one_ = 0;
  std::vector<Code> add_, mul_, neg_, inv_;
};

}  // namespace zarank::gf
