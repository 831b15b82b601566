#pragma once

#include "scanlab/common.hpp"
#include "scanlab/permutation.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace scanlab {

struct Instance {
  std::size_t m = 0;
  std::vector<std::string> v;
  std::vector<std::string> vprime;
  std::optional<std::size_t> uniform_width;

  bool operator==(const Instance&) const = default;

  std::vector<std::string> values() const {
    std::vector<std::string> all = v;
    all.insert(all.end(), vprime.begin(), vprime.end());
    return all;
  }
};

inline std::optional<std::size_t> common_width(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::optional<std::size_t> w;
  for (const auto* list : {&a, &b})
    for (const auto& s : *list) {
      if (!w) w = s.size();
      else if (*w != s.size()) return std::nullopt;
    }
  return w;
}

inline Instance make_instance(std::vector<std::string> v, std::vector<std::string> vprime) {
  if (v.size() != vprime.size()) throw SpecError("unbalanced halves");
  for (const auto* list : {&v, &vprime})
    for (const auto& s : *list)
      if (s.find_first_not_of("01") != std::string::npos) throw SpecError("values must be bit strings");
  Instance x;
  x.m = v.size();
  x.uniform_width = common_width(v, vprime);
  x.v = std::move(v);
  x.vprime = std::move(vprime);
  return x;
}

inline std::string encode(const Instance& x) {
  std::string out;
  for (const auto& s : x.v) out += s + '#';
  for (const auto& s : x.vprime) out += s + '#';
  return out;
}

// v1#v2#...#vk# with a tolerated trailing newline.
inline std::vector<std::string> parse_value_list(std::string text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  std::vector<std::string> values;
  std::string cur;
  for (char ch : text) {
    if (ch == '0' || ch == '1') cur += ch;
    else if (ch == '#') values.push_back(std::move(cur)), cur.clear();
    else throw SpecError(std::string("illegal character in instance: '") + ch + "'");
  }
  if (!cur.empty() || text.empty() || text.back() != '#') throw SpecError("missing trailing #");
  return values;
}

inline std::string encode_value_list(const std::vector<std::string>& values) {
  std::string out;
  for (const auto& s : values) out += s + '#';
  return out;
}

inline Instance parse_instance(const std::string& text) {
  auto values = parse_value_list(text);
  if (values.size() % 2 != 0) throw SpecError("unbalanced halves");
  const std::size_t m = values.size() / 2;
  std::vector<std::string> v(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(m));
  std::vector<std::string> vp(values.begin() + static_cast<std::ptrdiff_t>(m), values.end());
  return make_instance(std::move(v), std::move(vp));
}

// ---------------------------------------------------------------------------
// Intervals over [0, 2^n). Values are MSB-first bit strings.

struct Interval {
  BigInt lo, hi;  // [lo, hi)
  bool contains(const BigInt& x) const { return lo <= x && x < hi; }
};

struct IntervalFamily {
  std::size_t m = 0, n = 0;
  std::vector<Interval> intervals;
};

inline BigInt bits_value(const std::string& s) {
  BigInt x = 0;
  for (char c : s) x = (x << 1) | (c == '1' ? 1 : 0);
  return x;
}

inline std::string bin(std::uint64_t x, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t i = 0; i < width && i < 64; ++i)
    if ((x >> i) & 1) s[width - 1 - i] = '1';
  return s;
}

inline std::size_t exact_log2(std::size_t m) {
  if (!is_power_of_two(m)) throw SpecError("m must be a power of two");
  std::size_t lg = 0;
  while ((std::size_t{1} << lg) < m) ++lg;
  return lg;
}

inline IntervalFamily intervals(std::size_t m, std::size_t n) {
  std::size_t lg = exact_log2(m);
  if (lg > n) throw SpecError("m does not divide 2^n");
  IntervalFamily f{m, n, {}};
  BigInt len = BigInt(1) << (n - lg);
  for (std::size_t j = 0; j < m; ++j) f.intervals.push_back({len * j, len * (j + 1)});
  return f;
}

// Interval index (1-based) of an n-bit value under m intervals.
inline std::size_t interval_of(const std::string& s, std::size_t m) {
  std::size_t lg = exact_log2(m);
  if (s.size() < lg) throw SpecError("value shorter than log m");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < lg; ++i) idx = idx * 2 + (s[i] == '1');
  return idx + 1;
}

inline std::string random_bits(Rng& rng, std::size_t n) {
  std::string s(n, '0');
  for (auto& c : s) c = rng.coin() ? '1' : '0';
  return s;
}

// Uniform n-bit value in I_j (1-based).
inline std::string random_in_interval(Rng& rng, std::size_t m, std::size_t n, std::size_t j) {
  std::size_t lg = exact_log2(m);
  return bin(j - 1, lg) + random_bits(rng, n - lg);
}

enum class InstanceKind { yes, no, equal, distinct };

inline InstanceKind parse_kind(const std::string& s) {
  if (s == "yes") return InstanceKind::yes;
  if (s == "no") return InstanceKind::no;
  if (s == "equal") return InstanceKind::equal;
  if (s == "distinct") return InstanceKind::distinct;
  throw SpecError("unknown kind: " + s);
}

// CHECK-phi instance with phi the bit-reversal permutation and n = m^3.
inline Instance gen_check_phi(std::size_t m, InstanceKind kind, std::uint64_t seed) {
  if (m < 2) throw SpecError("check-phi needs m >= 2");
  if (kind != InstanceKind::yes && kind != InstanceKind::no) throw SpecError("check-phi kind is yes or no");
  const std::size_t n = m * m * m;
  const auto phi = bit_reversal_perm(m);
  Rng rng(seed, 0x636865636bULL);
  std::vector<std::string> v(m), vp(m);
  for (std::size_t i = 1; i <= m; ++i) vp[i - 1] = random_in_interval(rng, m, n, i);
  for (std::size_t i = 1; i <= m; ++i) v[i - 1] = vp[phi[i - 1] - 1];
  if (kind == InstanceKind::no) {
    std::size_t i = rng.uniform(1, m);
    std::string w;
    do w = random_in_interval(rng, m, n, phi[i - 1]);
    while (w == v[i - 1]);
    v[i - 1] = w;
  }
  return make_instance(std::move(v), std::move(vp));
}

inline Instance gen_random_mset_instance(std::size_t m, std::size_t n, InstanceKind kind, std::uint64_t seed) {
  if (m < 1 || n < 1) throw SpecError("m and n must be at least 1");
  if (kind != InstanceKind::equal && kind != InstanceKind::distinct) throw SpecError("mset kind is equal or distinct");
  Rng rng(seed, 0x6d736574ULL);
  std::vector<std::string> v(m);
  for (auto& s : v) s = random_bits(rng, n);
  std::vector<std::string> vp = v;
  for (std::size_t i = m; i > 1; --i) std::swap(vp[i - 1], vp[rng.uniform(0, i - 1)]);
  if (kind == InstanceKind::distinct) {
    std::size_t k = rng.uniform(0, m - 1);
    std::string w;
    do w = random_bits(rng, n);
    while (w == vp[k]);
    vp[k] = w;
    auto a = v, b = vp;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    require(a != b, "distinct instance came out multiset-equal");
  }
  return make_instance(std::move(v), std::move(vp));
}

}  // namespace scanlab
