#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace scanlab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Malformed input text or violated operation precondition.
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Step budget exhausted.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Enumeration too large for the configured cap.
struct Refused : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Internal consistency check failed. Maps to exit code 3 in the CLI.
struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InvariantViolation(msg);
}

// ---------------------------------------------------------------------------
// Counter-based randomness. A stream is identified by (seed, index) so that
// parallel trials produce the same numbers regardless of scheduling.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : state_(derive_seed(seed, stream)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [lo, hi], unbiased (rejection on the top partial block).
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    if (lo > hi) throw SpecError("uniform: empty range");
    std::uint64_t span = hi - lo;
    if (span == max()) return (*this)();
    std::uint64_t range = span + 1;
    std::uint64_t threshold = (0 - range) % range;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x < threshold);
    return lo + x % range;
  }

  bool coin() { return ((*this)() >> 63) != 0; }

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Saturating arithmetic for bound formulas that can get astronomically large.

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > std::numeric_limits<std::uint64_t>::max() / b) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s < a ? std::numeric_limits<std::uint64_t>::max() : s;
}

inline std::uint64_t sat_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    r = sat_mul(r, base);
    if (r == std::numeric_limits<std::uint64_t>::max()) break;
  }
  return r;
}

inline std::string to_string(const Rational& q) {
  return q.str();
}

inline double to_double(const Rational& q) {
  return static_cast<double>(q);
}

inline std::size_t ceil_log2(std::uint64_t x) {
  std::size_t r = 0;
  while ((std::uint64_t{1} << r) < x && r < 64) ++r;
  return r;
}

inline bool is_power_of_two(std::uint64_t x) {
  return x != 0 && (x & (x - 1)) == 0;
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace scanlab
