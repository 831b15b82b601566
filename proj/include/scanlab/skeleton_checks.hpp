#pragma once

#include "scanlab/skeleton.hpp"

#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace scanlab {

// ---------------------------------------------------------------------------
// Majority choice sequence

template <class C>
struct MajorityChoice {
  std::vector<C> choices;
  std::size_t covered = 0;  // inputs accepted under `choices`
  std::size_t total = 0;
};

// Exhaustive search for c in C^ell accepting at least half of `inputs`.
// Every input must be accepted by at least half of C^ell.
template <class S, class C>
MajorityChoice<C> find_majority_choice(const NlmSpec<S, C>& spec, const std::vector<std::vector<std::string>>& inputs,
                                       std::size_t ell, std::uint64_t cap = std::uint64_t{1} << 16) {
  const std::uint64_t total = sat_pow(spec.choices.size(), ell);
  if (total > cap || sat_mul(total, inputs.size()) > (cap << 4)) throw Refused("majority search exceeds cap");
  std::vector<std::size_t> hits(total, 0);
  for (const auto& v : inputs) {
    std::uint64_t idx = 0, acc = 0;
    for_each_choice_sequence(spec, v, ell, cap, [&](const std::vector<C>&, const NlmRunTrace<S, C>& run) {
      if (run.accepted) ++hits[idx], ++acc;
      ++idx;
    });
    if (2 * acc < total) throw SpecError("input accepted with probability below 1/2");
  }
  MajorityChoice<C> best;
  best.total = inputs.size();
  const std::size_t b = spec.choices.size();
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    if (2 * hits[idx] < inputs.size()) continue;
    // Sequences are enumerated with the last position varying fastest.
    best.choices.assign(ell, spec.choices[0]);
    std::uint64_t rest = idx;
    for (std::size_t i = ell; i-- > 0; rest /= b) best.choices[i] = spec.choices[rest % b];
    best.covered = hits[idx];
    return best;
  }
  throw InvariantViolation("no choice sequence accepts half of the inputs");
}

// ---------------------------------------------------------------------------
// Composition check

struct CompositionVerdict {
  enum class Status { pass, fail, not_applicable };
  Status status = Status::not_applicable;
  std::string detail;

  static CompositionVerdict make(Status s, std::string d) { return {s, std::move(d)}; }
};

inline const char* to_string(CompositionVerdict::Status s) {
  switch (s) {
    case CompositionVerdict::Status::pass: return "pass";
    case CompositionVerdict::Status::fail: return "fail";
    case CompositionVerdict::Status::not_applicable: return "not_applicable";
  }
  return "?";
}

inline bool distinct_values(const std::vector<std::string>& v) {
  return std::set<std::string>(v.begin(), v.end()).size() == v.size();
}

// v and w may differ only at positions i and i2 (1-based). The two mixed
// inputs take position i from one and i2 from the other.
template <class S, class C>
CompositionVerdict composition_check(const NlmSpec<S, C>& spec, const std::vector<std::string>& v,
                                     const std::vector<std::string>& w, const std::vector<C>& c, std::size_t i,
                                     std::size_t i2, std::uint64_t budget) {
  using St = CompositionVerdict::Status;
  auto na = [](std::string d) { return CompositionVerdict::make(St::not_applicable, std::move(d)); };
  if (v.size() != spec.m || w.size() != spec.m) return na("input arity");
  if (i < 1 || i > spec.m || i2 < 1 || i2 > spec.m || i == i2) return na("positions out of range");
  if (v == w) return CompositionVerdict::make(St::pass, "identical inputs");
  for (std::size_t k = 1; k <= spec.m; ++k)
    if (k != i && k != i2 && v[k - 1] != w[k - 1]) return na("inputs differ outside the two positions");
  if (!distinct_values(v) || !distinct_values(w)) return na("inputs not distinct-valued");

  auto rv = run_with_choices(spec, v, c, budget);
  auto rw = run_with_choices(spec, w, c, budget);
  auto zeta = skel_of_run(spec, rv, v);
  if (!(skel_of_run(spec, rw, w) == zeta)) return na("skeletons differ");
  if (compared(zeta, i, i2)) return na("positions compared");
  if (rv.accepted != rw.accepted) return na("runs disagree");

  std::vector<std::string> u = v, u2 = w;
  u[i2 - 1] = w[i2 - 1];
  u2[i2 - 1] = v[i2 - 1];
  if (!distinct_values(u) || !distinct_values(u2)) return na("mixed inputs not distinct-valued");
  for (const auto* x : {&u, &u2}) {
    auto run = run_with_choices(spec, *x, c, budget);
    auto z = skel_of_run(spec, run, *x);
    if (!(z == zeta)) return CompositionVerdict::make(St::fail, "mixed input changes the skeleton:\n" + z.canonical());
    if (run.accepted != rv.accepted) return CompositionVerdict::make(St::fail, "mixed input changes the verdict");
  }
  return CompositionVerdict::make(St::pass, "");
}

// ---------------------------------------------------------------------------
// Skeleton counting

template <class S, class C>
std::size_t count_distinct_skeletons(const NlmSpec<S, C>& spec, const std::vector<std::vector<std::string>>& inputs,
                                     std::size_t ell, std::uint64_t cap = std::uint64_t{1} << 20) {
  if (sat_mul(sat_pow(spec.choices.size(), ell), inputs.size()) > cap) throw Refused("skeleton enumeration exceeds cap");
  std::set<std::string> seen;
  for (const auto& v : inputs)
    for_each_choice_sequence(spec, v, ell, cap, [&](const std::vector<C>&, const NlmRunTrace<S, C>& run) {
      seen.insert(skel_of_run(spec, run, v).canonical());
    });
  return seen.size();
}

// log2 of (m+k+3)^(12 m (t+1)^(2r+2) + 24 (t+1)^r).
inline double skeleton_count_log2_bound(std::uint64_t m, std::uint64_t k, std::uint64_t t, std::uint64_t r) {
  double tt = static_cast<double>(t + 1);
  double e = 12.0 * static_cast<double>(m) * std::pow(tt, 2.0 * r + 2) + 24.0 * std::pow(tt, static_cast<double>(r));
  return e * std::log2(static_cast<double>(m + k + 3));
}

// t^(2r) * sortedness(phi).
inline std::uint64_t compared_pairs_bound(std::uint64_t t, std::uint64_t r, const Permutation& phi) {
  return sat_mul(sat_pow(t, 2 * r), sortedness(phi));
}

// ---------------------------------------------------------------------------
// Merge property: sequences occurring in a configuration split into few
// monotone parts.

struct MergeSample {
  std::vector<std::size_t> seq;
  std::size_t cover = 0;
  std::uint64_t bound = 0;
};

// Draws sequences of distinct positions (length <= 8) that occur in g by
// walking one list left to right and shuffling positions within each cell.
template <class S, class C>
std::vector<MergeSample> sample_merge_sequences(const NlmSpec<S, C>& spec, const NlmConfiguration<S, C>& g,
                                                const std::vector<std::string>& v, std::uint64_t r, Rng& rng,
                                                std::size_t samples) {
  auto lists = cell_positions(spec, g, v);
  std::vector<MergeSample> out;
  const std::uint64_t bound = sat_pow(spec.t, r);
  for (std::size_t s = 0; s < samples; ++s) {
    const auto& cells = lists[rng.uniform(0, lists.size() - 1)];
    std::vector<std::size_t> walk;
    std::set<std::size_t> used;
    for (const auto& cell : cells) {
      std::vector<std::size_t> ps(cell.begin(), cell.end());
      for (std::size_t a = ps.size(); a > 1; --a) std::swap(ps[a - 1], ps[rng.uniform(0, a - 1)]);
      for (auto p : ps)
        if (!used.count(p) && rng.uniform(0, 3) != 0) walk.push_back(p), used.insert(p);
    }
    if (walk.size() > 8) {
      // Keep a random order-preserving subset of 8.
      std::vector<std::size_t> keep(walk.size());
      std::iota(keep.begin(), keep.end(), 0);
      for (std::size_t a = keep.size(); a > 1; --a) std::swap(keep[a - 1], keep[rng.uniform(0, a - 1)]);
      keep.resize(8);
      std::sort(keep.begin(), keep.end());
      std::vector<std::size_t> sub;
      for (auto k : keep) sub.push_back(walk[k]);
      walk = std::move(sub);
    }
    if (!occurs_in_lists(lists, walk)) throw InvariantViolation("sampled sequence does not occur");
    out.push_back({walk, min_monotone_cover(walk), bound});
  }
  return out;
}

}  // namespace scanlab
