#pragma once

#include "scanlab/fingerprint.hpp"
#include "scanlab/instance.hpp"
#include "scanlab/permutation.hpp"
#include "scanlab/tape_sort.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace scanlab {

enum class Problem { set, multiset, checksort, check_phi };

inline Problem parse_problem(const std::string& s) {
  if (s == "set") return Problem::set;
  if (s == "multiset") return Problem::multiset;
  if (s == "checksort") return Problem::checksort;
  if (s == "check-phi") return Problem::check_phi;
  throw SpecError("unknown problem: " + s);
}

namespace detail {

inline SortResult sort_any_width(const std::vector<std::string>& values) {
  if (values.empty()) return {};
  return tape_merge_sort(values, [](const std::string& a, const std::string& b) { return a < b; });
}

// One forward pass over two sorted streams.
inline ResourceReport comparison_scan(std::size_t items, bool accepted) {
  ResourceReport r;
  r.reversals = {0, 0};
  r.steps = items + 1;
  r.internal_space = 1;
  r.accepted = accepted;
  return r;
}

inline void check_well_formed(const Instance& x) {
  if (x.v.size() != x.m || x.vprime.size() != x.m) throw SpecError("malformed instance");
}

}  // namespace detail

inline Verdict decide_checksort(const Instance& x) {
  detail::check_well_formed(x);
  auto s = detail::sort_any_width(x.v);
  Verdict out;
  out.accepted = s.sorted == x.vprime;
  out.report = compose(s.report, detail::comparison_scan(x.m, out.accepted));
  return out;
}

inline std::vector<std::string> dedup_sorted(std::vector<std::string> v) {
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline Verdict decide_setequality(const Instance& x) {
  detail::check_well_formed(x);
  auto a = detail::sort_any_width(x.v), b = detail::sort_any_width(x.vprime);
  Verdict out;
  out.accepted = dedup_sorted(a.sorted) == dedup_sorted(b.sorted);
  out.report = compose(compose(a.report, b.report), detail::comparison_scan(x.m, out.accepted));
  return out;
}

inline Verdict decide_msetequality_det(const Instance& x) {
  detail::check_well_formed(x);
  auto a = detail::sort_any_width(x.v), b = detail::sort_any_width(x.vprime);
  Verdict out;
  out.accepted = a.sorted == b.sorted;
  out.report = compose(compose(a.report, b.report), detail::comparison_scan(x.m, out.accepted));
  return out;
}

// Definition-level evaluation, used as a test oracle.
inline bool brute_force_decide(Problem problem, const Instance& x) {
  detail::check_well_formed(x);
  switch (problem) {
    case Problem::set:
      return std::set<std::string>(x.v.begin(), x.v.end()) == std::set<std::string>(x.vprime.begin(), x.vprime.end());
    case Problem::multiset: {
      std::map<std::string, long> count;
      for (const auto& s : x.v) ++count[s];
      for (const auto& s : x.vprime) --count[s];
      return std::all_of(count.begin(), count.end(), [](const auto& kv) { return kv.second == 0; });
    }
    case Problem::checksort: {
      auto s = x.v;
      std::sort(s.begin(), s.end());
      return s == x.vprime;
    }
    case Problem::check_phi: {
      auto phi = bit_reversal_perm(x.m);
      for (std::size_t i = 0; i < x.m; ++i)
        if (x.v[i] != x.vprime[phi[i] - 1]) return false;
      return true;
    }
  }
  return false;
}

// Verifies a guessed permutation pi. For sets, pi is only checked for arity
// and the halves are compared by containment both ways.
inline bool nst_certificate_check(const Instance& x, const Permutation& pi, Problem problem) {
  detail::check_well_formed(x);
  if (pi.size() != x.m) throw SpecError("permutation arity does not match m");
  validate_permutation(pi);
  auto positional = [&] {
    for (std::size_t i = 0; i < x.m; ++i)
      if (x.v[i] != x.vprime[pi[i] - 1]) return false;
    return true;
  };
  switch (problem) {
    case Problem::multiset: return positional();
    case Problem::checksort: return positional() && std::is_sorted(x.vprime.begin(), x.vprime.end());
    case Problem::set: return brute_force_decide(Problem::set, x);
    case Problem::check_phi: break;
  }
  throw SpecError("certificate check supports multiset, set and checksort");
}

}  // namespace scanlab
