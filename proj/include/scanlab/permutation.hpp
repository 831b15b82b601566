#pragma once

#include "scanlab/common.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace scanlab {

// (pi(1), ..., pi(m)) with values in 1..m.
using Permutation = std::vector<std::size_t>;

inline void validate_permutation(const Permutation& p) {
  std::vector<bool> seen(p.size() + 1, false);
  for (auto x : p) {
    if (x < 1 || x > p.size() || seen[x]) throw SpecError("not a permutation");
    seen[x] = true;
  }
}

inline Permutation identity_permutation(std::size_t m) {
  Permutation p(m);
  for (std::size_t i = 0; i < m; ++i) p[i] = i + 1;
  return p;
}

namespace detail {

inline std::size_t longest_increasing(const std::vector<long long>& a) {
  std::vector<long long> tails;
  for (auto x : a) {
    auto it = std::lower_bound(tails.begin(), tails.end(), x);
    if (it == tails.end()) tails.push_back(x);
    else *it = x;
  }
  return tails.size();
}

}  // namespace detail

// Longest ascending or descending subsequence, O(m log m).
inline std::size_t sortedness(const Permutation& p) {
  validate_permutation(p);
  std::vector<long long> up(p.begin(), p.end()), down;
  for (auto x : p) down.push_back(-static_cast<long long>(x));
  return std::max(detail::longest_increasing(up), detail::longest_increasing(down));
}

inline bool is_monotone(const std::vector<std::size_t>& seq) {
  bool asc = true, desc = true;
  for (std::size_t i = 1; i < seq.size(); ++i) {
    asc = asc && seq[i - 1] < seq[i];
    desc = desc && seq[i - 1] > seq[i];
  }
  return asc || desc;
}

inline std::size_t sortedness_bruteforce(const Permutation& p) {
  if (p.size() > 12) throw Refused("brute-force sortedness limited to m <= 12");
  const std::size_t m = p.size();
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<std::size_t> sub;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (1u << i)) sub.push_back(p[i]);
    if (is_monotone(sub)) best = std::max(best, sub.size());
  }
  return best;
}

// 1..m ordered by the reversed log2(m)-bit binary representation of i-1.
inline Permutation bit_reversal_perm(std::size_t m) {
  if (m < 2 || !is_power_of_two(m)) throw SpecError("bit reversal needs a power of two >= 2");
  std::size_t bits = ceil_log2(m);
  auto rev = [&](std::size_t x) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b)
      if (x & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    return r;
  };
  Permutation p(m);
  for (std::size_t i = 1; i <= m; ++i) p[rev(i - 1)] = i;
  return p;
}

// Fewest parts covering the sequence where each part, read in sequence order,
// is ascending or descending. Exhaustive over all subsets (exact), |seq| <= 8.
inline std::size_t min_monotone_cover(const std::vector<std::size_t>& seq) {
  const std::size_t n = seq.size();
  if (n > 8) throw Refused("monotone cover search limited to length 8");
  if (n == 0) return 0;
  const std::uint32_t full = (1u << n) - 1;
  std::vector<bool> mono(full + 1, false);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    std::vector<std::size_t> sub;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) sub.push_back(seq[i]);
    mono[mask] = is_monotone(sub);
  }
  std::vector<std::size_t> best(full + 1, n + 1);
  best[0] = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    // Fix the lowest element to avoid counting each partition many times.
    std::uint32_t low = mask & (~mask + 1);
    for (std::uint32_t sub = mask; sub; sub = (sub - 1) & mask) {
      if (!(sub & low) || !mono[sub]) continue;
      best[mask] = std::min(best[mask], best[mask ^ sub] + 1);
    }
  }
  return best[full];
}

}  // namespace scanlab
