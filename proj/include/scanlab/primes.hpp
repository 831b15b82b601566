#pragma once

#include "scanlab/common.hpp"

#include <cstdint>

namespace scanlab {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t r = 1;
  base %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
    e >>= 1;
  }
  return r;
}

// Deterministic Miller-Rabin for all 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// m^3 * n * ceil(log2(m^3 * n)), clamped to at least 2.
inline BigInt compute_k_exact(std::uint64_t m, std::uint64_t n) {
  if (m < 1 || n < 1) return 2;
  BigInt base = BigInt(m) * m * m * n;
  std::size_t lg = 0;
  while (BigInt(1) << lg < base) ++lg;
  BigInt k = base * lg;
  return k < 2 ? BigInt(2) : k;
}

inline std::uint64_t compute_k(std::uint64_t m, std::uint64_t n) {
  BigInt k = compute_k_exact(m, n);
  if (k > BigInt(std::uint64_t{1} << 60)) throw Refused("k exceeds 2^60");
  return static_cast<std::uint64_t>(k);
}

// Uniform prime <= k by rejection sampling.
inline std::uint64_t sample_prime_leq(std::uint64_t k, Rng& rng, std::uint64_t max_tries = 1'000'000) {
  if (k < 2) throw SpecError("no prime <= " + std::to_string(k));
  for (std::uint64_t i = 0; i < max_tries; ++i) {
    std::uint64_t x = rng.uniform(2, k);
    if (is_prime(x)) return x;
  }
  throw SpecError("prime sampling retry cap reached");
}

inline std::uint64_t smallest_prime_in(std::uint64_t lo, std::uint64_t hi) {
  for (std::uint64_t p = lo + 1; p <= hi && p > lo; ++p)
    if (is_prime(p)) return p;
  throw SpecError("no prime in interval");
}

}  // namespace scanlab
