#include <gtest/gtest.h>

#include <set>

#include "zarank/gf.hpp"

using namespace zarank;
using namespace zarank::gf;

namespace {

FieldElement el(std::vector<std::uint32_t> c) { return FieldElement{std::move(c)}; }

// All prime powers up to 64.
std::vector<std::pair<std::uint32_t, std::uint32_t>> small_fields() {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t p = 2; p <= 64; ++p) {
    if (!is_prime(p)) continue;
    std::uint32_t q = p;
    for (std::uint32_t k = 1; q <= 64; ++k, q *= p) out.emplace_back(p, k);
  }
  return out;
}

}  // namespace

TEST(GfMakeField, PrimeFieldHasNoModulus) {
  auto f = make_field(5, 1);
  EXPECT_EQ(f.q, 5u);
  EXPECT_TRUE(f.modulus.empty());
}

TEST(GfMakeField, Gf9ModulusMatchesExhaustiveScan) {
  // Oracle: a monic quadratic over GF(3) is irreducible iff it has no root.
  // Scan c_0 first (low-degree-first lexicographic order).
  std::vector<std::uint32_t> expected;
  for (std::uint32_t c0 = 0; c0 < 3 && expected.empty(); ++c0)
    for (std::uint32_t c1 = 0; c1 < 3 && expected.empty(); ++c1) {
      bool has_root = false;
      for (std::uint32_t x = 0; x < 3; ++x) has_root |= (x * x + c1 * x + c0) % 3 == 0;
      if (!has_root) expected = {c0, c1, 1};
    }
  ASSERT_EQ(expected, (std::vector<std::uint32_t>{1, 0, 1}));  // x^2 + 1
  auto f = make_field(3, 2);
  EXPECT_EQ(f.q, 9u);
  EXPECT_EQ(f.modulus, expected);
}

TEST(GfMakeField, RejectsNonPrimeAndOversize) {
  EXPECT_THROW(make_field(4, 1), UsageError);
  EXPECT_THROW(make_field(1, 1), UsageError);
  EXPECT_THROW(make_field(2, 0), UsageError);
  EXPECT_THROW(make_field(2, 17), BudgetError);
  EXPECT_NO_THROW(make_field(2, 17, 1u << 17));
}

TEST(GfMakeField, OrderDecomposition) {
  EXPECT_EQ(make_field_of_order(9).p, 3u);
  EXPECT_EQ(make_field_of_order(9).k, 2u);
  EXPECT_EQ(make_field_of_order(13).k, 1u);
  EXPECT_EQ(make_field_of_order(64).k, 6u);
  EXPECT_THROW(make_field_of_order(12), UsageError);
  EXPECT_THROW(make_field_of_order(1), UsageError);
}

TEST(GfArith, Examples) {
  auto f2 = make_field(2, 1);
  EXPECT_EQ(add(el({1}), el({1}), f2), el({0}));
  auto f5 = make_field(5, 1);
  EXPECT_EQ(inv(el({2}), f5), el({3}));
  auto f9 = make_field(3, 2);
  // x * x = x^2 = -1 mod (x^2 + 1)
  EXPECT_EQ(mul(el({0, 1}), el({0, 1}), f9), el({2, 0}));
}

TEST(GfArith, InverseOfZeroThrows) {
  auto f9 = make_field(3, 2);
  EXPECT_THROW(inv(zero(f9), f9), ArithmeticError);
  Field field(f9);
  EXPECT_THROW(field.inv(field.zero()), ArithmeticError);
}

TEST(GfArith, RejectsForeignElements) {
  auto f5 = make_field(5, 1);
  EXPECT_THROW(add(el({5}), el({1}), f5), UsageError);
  EXPECT_THROW(add(el({1, 0}), el({1}), f5), UsageError);
}

TEST(GfEnumerate, OrderAndSize) {
  auto f2 = make_field(2, 1);
  EXPECT_EQ(enumerate_elements(f2), (std::vector<FieldElement>{el({0}), el({1})}));
  auto f5 = make_field(5, 1);
  auto e5 = enumerate_elements(f5);
  ASSERT_EQ(e5.size(), 5u);
  for (std::uint32_t i = 0; i < 5; ++i) EXPECT_EQ(e5[i], el({i}));
  auto f9 = make_field(3, 2);
  auto e9 = enumerate_elements(f9);
  EXPECT_EQ(e9.size(), 9u);
  EXPECT_EQ(std::set<FieldElement>(e9.begin(), e9.end()).size(), 9u);
  EXPECT_EQ(e9.front(), zero(f9));
  EXPECT_TRUE(std::is_sorted(e9.begin(), e9.end()));
}

// Exhaustive axioms for every q <= 64, through the coefficient-level
// operations, plus agreement of the table-driven Field with them.
TEST(GfAxioms, ExhaustiveUpTo64) {
  for (auto [p, k] : small_fields()) {
    SCOPED_TRACE("GF(" + std::to_string(p) + "^" + std::to_string(k) + ")");
    const auto spec = make_field(p, k);
    const Field field(spec);
    const auto elems = enumerate_elements(spec);
    const auto z = zero(spec);
    const auto o = one(spec);
    ASSERT_EQ(elems.size(), spec.q);
    for (Code a = 0; a < spec.q; ++a) {
      const auto& x = elems[a];
      ASSERT_EQ(add(x, z, spec), x);
      ASSERT_EQ(mul(x, o, spec), x);
      ASSERT_EQ(add(x, neg(x, spec), spec), z);
      ASSERT_EQ(pow(x, spec.q, spec), x);  // Frobenius
      if (x != z) {
        ASSERT_EQ(mul(x, inv(x, spec), spec), o);
      }
      ASSERT_EQ(field.neg(a), code_of(neg(x, spec), spec));
      for (Code b = 0; b < spec.q; ++b) {
        const auto& y = elems[b];
        const auto xy = mul(x, y, spec);
        const auto xpy = add(x, y, spec);
        ASSERT_EQ(xpy, add(y, x, spec));
        ASSERT_EQ(xy, mul(y, x, spec));
        ASSERT_EQ(field.add(a, b), code_of(xpy, spec));
        ASSERT_EQ(field.mul(a, b), code_of(xy, spec));
        if (x != z && y != z) {
          ASSERT_NE(xy, z);
        }
      }
    }
    // Triples are checked on the table-driven field (verified equal above).
    for (Code a = 0; a < spec.q; ++a)
      for (Code b = 0; b < spec.q; ++b)
        for (Code c = 0; c < spec.q; ++c) {
          ASSERT_EQ(field.add(field.add(a, b), c), field.add(a, field.add(b, c)));
          ASSERT_EQ(field.mul(field.mul(a, b), c), field.mul(a, field.mul(b, c)));
          ASSERT_EQ(field.mul(a, field.add(b, c)), field.add(field.mul(a, b), field.mul(a, c)));
        }
  }
}

TEST(GfField, UntabledFieldAgreesWithCoefficientArithmetic) {
  const auto spec = make_field(2, 11);  // 2048 > table cap
  const Field field(spec);
  EXPECT_FALSE(field.tabled());
  for (Code a : {1u, 7u, 1000u, 2047u}) {
    EXPECT_EQ(field.mul(a, field.inv(a)), field.one());
    EXPECT_EQ(field.pow(a, spec.q), a);
  }
}

TEST(GfField, CodesRoundTrip) {
  const auto spec = make_field(3, 3);
  for (Code c = 0; c < spec.q; ++c) EXPECT_EQ(code_of(element_of(c, spec), spec), c);
  EXPECT_THROW(element_of(spec.q, spec), UsageError);
}
