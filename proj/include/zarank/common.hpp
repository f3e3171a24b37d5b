#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace zarank {

// Expression templates off: `auto x = a * b` must hold a value, not a view.
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
                                  boost::multiprecision::et_off>;

// Errors. Each family maps onto one CLI exit code (see experiment.hpp).

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument, malformed configuration, or violated precondition.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text; carries the 1-based line number.
class ParseError : public UsageError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : UsageError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A size, enumeration, or search cap was exceeded.
class BudgetError : public Error {
 public:
  using Error::Error;
};

class ArithmeticError : public Error {
 public:
  using Error::Error;
};

inline std::string to_string(const Rational& x) {
  if (denominator(x) == 1) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

/// Parses "a", "-a" or "a/b" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    if (s.empty()) throw UsageError("bad rational '" + std::string(text) + "'");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw UsageError("bad rational '" + std::string(text) + "'");
    for (std::size_t j = i; j < s.size(); ++j)
      if (s[j] < '0' || s[j] > '9') throw UsageError("bad rational '" + std::string(text) + "'");
    return BigInt(std::string(s));
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw UsageError("zero denominator in '" + std::string(text) + "'");
  return Rational(parse_int(text.substr(0, slash)), den);
}

inline double to_double(const Rational& x) { return x.convert_to<double>(); }

/// a * b, or BudgetError when the product leaves uint64.
inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, std::string_view what) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    throw BudgetError(std::string(what) + ": size overflows 64 bits");
  return a * b;
}

inline std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp, std::string_view what) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) r = checked_mul(r, base, what);
  return r;
}

/// Exact binomial coefficient C(n, k); 0 when k > n.
inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

/// Largest x with x^k <= value.
inline BigInt integer_root_floor(const BigInt& value, unsigned k) {
  if (k == 0) throw UsageError("integer_root_floor: zero root index");
  if (value < 0) throw UsageError("integer_root_floor: negative radicand");
  if (value < 2 || k == 1) return value;
  BigInt lo = 0;
  BigInt hi = 1;
  while (boost::multiprecision::pow(hi, k) <= value) hi *= 2;
  // invariant: lo^k <= value < hi^k
  while (hi - lo > 1) {
    BigInt mid = (lo + hi) / 2;
    if (boost::multiprecision::pow(mid, k) <= value)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

/// Smallest x with x^k >= value.
inline BigInt integer_root_ceil(const BigInt& value, unsigned k) {
  BigInt r = integer_root_floor(value, k);
  if (boost::multiprecision::pow(r, k) < value) ++r;
  return r;
}

// ---------------------------------------------------------------------------
// Seeded randomness. std::mt19937_64 is fully specified by the standard, and
// uniform_below avoids std::uniform_int_distribution (implementation-defined),
// so streams are identical across standard libraries.

using Rng = std::mt19937_64;

inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  if (n == 0) throw UsageError("uniform_below: empty range");
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    std::uint64_t x = rng();
    if (x >= threshold) return x % n;
  }
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Sub-seed for a named role: splitmix64(master XOR fnv1a64(label)).
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(master ^ h);
}

// ---------------------------------------------------------------------------

/// All k-subsets of {0,...,n-1} in lexicographic order.
inline std::vector<std::vector<std::uint32_t>> all_subsets(std::uint32_t n, std::uint32_t k) {
  std::vector<std::vector<std::uint32_t>> out;
  if (k > n) return out;
  std::vector<std::uint32_t> cur(k);
  for (std::uint32_t i = 0; i < k; ++i) cur[i] = i;
  for (;;) {
    out.push_back(cur);
    std::int64_t i = static_cast<std::int64_t>(k) - 1;
    while (i >= 0 && cur[i] == n - k + static_cast<std::uint32_t>(i)) --i;
    if (i < 0) break;
    ++cur[i];
    for (std::uint32_t j = static_cast<std::uint32_t>(i) + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

/// Splits [0, total) into at most `jobs` contiguous chunks and runs
/// fn(chunk_index, begin, end) on each, one thread per chunk. Results are
/// meant to be written into per-chunk slots and merged in chunk order.
template <typename Fn>
std::size_t parallel_chunks(std::uint64_t total, unsigned jobs, Fn&& fn) {
  jobs = std::max(1u, jobs);
  const std::uint64_t chunks = std::max<std::uint64_t>(1, std::min<std::uint64_t>(jobs, total));
  const std::uint64_t step = (total + chunks - 1) / chunks;
  if (chunks == 1) {
    fn(std::size_t{0}, std::uint64_t{0}, total);
    return 1;
  }
  std::vector<std::exception_ptr> errors(chunks);
  {
    std::vector<std::jthread> workers;
    workers.reserve(chunks);
    for (std::uint64_t c = 0; c < chunks; ++c) {
      const std::uint64_t begin = std::min(total, c * step);
      const std::uint64_t end = std::min(total, begin + step);
      workers.emplace_back([&fn, &errors, c, begin, end] {
        try {
          fn(static_cast<std::size_t>(c), begin, end);
        } catch (...) {
          errors[c] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return static_cast<std::size_t>(chunks);
}

/// Upper bound on chunk count used by parallel_chunks, for sizing result slots.
inline std::size_t chunk_count(std::uint64_t total, unsigned jobs) {
  return static_cast<std::size_t>(
      std::max<std::uint64_t>(1, std::min<std::uint64_t>(std::max(1u, jobs), total)));
}

}  // namespace zarank
