#pragma once

#include "scanlab/instance.hpp"
#include "scanlab/permutation.hpp"

namespace scanlab {

// Splits each m^3-bit value into blocks of log2(m) bits (zero-padded on the
// left) and tags every block with its origin, giving m' = mu*m items of width
// 5*log2(m) per half.
inline Instance short_reduction_f(const Instance& x) {
  const std::size_t m = x.m;
  if (m < 2 || !is_power_of_two(m)) throw SpecError("reduction needs m a power of two, m >= 2");
  const std::size_t n = m * m * m;
  if (x.uniform_width != n) throw SpecError("reduction needs values of width m^3");
  const std::size_t lg = exact_log2(m);
  const std::size_t mu = (n + lg - 1) / lg;
  const std::size_t pad = mu * lg - n;
  const auto phi = bit_reversal_perm(m);

  auto blocks = [&](std::size_t tag, const std::string& value, std::vector<std::string>& out) {
    const std::string padded = std::string(pad, '0') + value;
    for (std::size_t j = 1; j <= mu; ++j) out.push_back(bin(tag - 1, lg) + bin(j - 1, 3 * lg) + padded.substr((j - 1) * lg, lg));
  };
  std::vector<std::string> w, wp;
  for (std::size_t i = 1; i <= m; ++i) blocks(phi[i - 1], x.v[i - 1], w);
  for (std::size_t i = 1; i <= m; ++i) blocks(i, x.vprime[i - 1], wp);
  return make_instance(std::move(w), std::move(wp));
}

}  // namespace scanlab
