#pragma once

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace scanlab {

struct ResourceReport {
  std::vector<std::uint64_t> reversals;  // one entry per external tape
  std::uint64_t scans = 1;
  std::uint64_t internal_space = 0;
  std::uint64_t external_space = 0;
  std::uint64_t steps = 1;
  std::uint64_t external_writes = 0;
  bool accepted = false;

  void recompute_scans() {
    scans = 1 + std::accumulate(reversals.begin(), reversals.end(), std::uint64_t{0});
  }
};

// Sequential composition of two phases. The turn-around between phases is
// charged as one extra reversal on tape 1, so scans(a;b) = scans(a) + scans(b).
inline ResourceReport compose(const ResourceReport& a, const ResourceReport& b) {
  ResourceReport r;
  r.reversals.resize(std::max(a.reversals.size(), b.reversals.size()), 0);
  for (std::size_t i = 0; i < a.reversals.size(); ++i) r.reversals[i] += a.reversals[i];
  for (std::size_t i = 0; i < b.reversals.size(); ++i) r.reversals[i] += b.reversals[i];
  if (r.reversals.empty()) r.reversals.push_back(0);
  r.reversals[0] += 1;
  r.recompute_scans();
  r.internal_space = std::max(a.internal_space, b.internal_space);
  r.external_space = std::max(a.external_space, b.external_space);
  r.steps = a.steps + b.steps;
  r.external_writes = a.external_writes + b.external_writes;
  r.accepted = b.accepted;
  return r;
}

inline nlohmann::json to_json(const ResourceReport& r) {
  nlohmann::json j;
  j["reversals"] = r.reversals;
  j["scans"] = r.scans;
  j["internal_space"] = r.internal_space;
  j["external_space"] = r.external_space;
  j["steps"] = r.steps;
  j["external_writes"] = r.external_writes;
  j["accepted"] = r.accepted;
  return j;
}

}  // namespace scanlab
