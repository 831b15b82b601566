#pragma once

#include "scanlab/nlm_table.hpp"

#include <memory>
#include <string>
#include <vector>

namespace scanlab {

// Pseudo-random list machines for property trials. A state "s<step>.<phase>.<dirs>"
// carries a step counter (so every run halts after `steps` transitions) and the
// current head directions (so reversal frequency can be controlled). The
// transition depends on the state, the choice, the kinds of the cells under
// the heads and the relative order of the smallest input value in each cell.
struct RandomNlmParams {
  std::size_t t = 2;
  std::size_t m = 4;
  std::size_t steps = 8;
  std::size_t phases = 3;
  std::size_t choices = 2;
  unsigned turn_per_16 = 3;  // chance of reversing a list's direction, out of 16
  std::uint64_t seed = 0;
};

namespace detail {

inline long min_input_value(const TableCell& c) {
  using K = Cell<std::string, std::string>::Kind;
  if (c->kind == K::input) return std::stol(c->value);
  long best = -1;
  for (const auto& r : c->reads) {
    long v = min_input_value(r);
    if (v >= 0 && (best < 0 || v < best)) best = v;
  }
  return best;
}

struct RandomState {
  std::size_t step = 0, phase = 0;
  std::vector<int> dirs;
};

inline std::string encode_random_state(const RandomState& s) {
  std::string d;
  for (int x : s.dirs) d.push_back(x > 0 ? '+' : '-');
  return "s" + std::to_string(s.step) + "." + std::to_string(s.phase) + "." + d;
}

inline RandomState decode_random_state(const std::string& a) {
  RandomState s;
  auto p1 = a.find('.'), p2 = a.rfind('.');
  s.step = std::stoul(a.substr(1, p1 - 1));
  s.phase = std::stoul(a.substr(p1 + 1, p2 - p1 - 1));
  for (char ch : a.substr(p2 + 1)) s.dirs.push_back(ch == '+' ? 1 : -1);
  return s;
}

}  // namespace detail

inline TableNlm make_random_nlm(const RandomNlmParams& prm) {
  TableNlm spec;
  spec.t = prm.t;
  spec.m = prm.m;
  for (std::size_t i = 1; i <= prm.choices; ++i) spec.choices.push_back("c" + std::to_string(i));
  detail::RandomState s0{0, 0, std::vector<int>(prm.t, 1)};
  spec.initial = detail::encode_random_state(s0);
  spec.state_count = prm.steps * prm.phases * (std::uint64_t{1} << prm.t) + 2;
  spec.is_final = [](const std::string& a) { return a == "acc" || a == "rej"; };
  spec.is_accepting = [](const std::string& a) { return a == "acc"; };
  spec.state_name = [](const std::string& a) { return a; };
  spec.choice_name = [](const std::string& c) { return c; };
  spec.alpha = [prm](const std::string& a, const std::vector<TableCell>& cells, const std::string& c) {
    using K = Cell<std::string, std::string>::Kind;
    auto st = detail::decode_random_state(a);
    std::uint64_t h = derive_seed(prm.seed, st.step * 131 + st.phase);
    h = splitmix64(h ^ std::hash<std::string>{}(c));
    for (std::size_t i = 0; i < cells.size(); ++i) {
      h = splitmix64(h ^ (static_cast<std::uint64_t>(cells[i]->kind == K::written ? 2 : cells[i]->kind == K::input) << (2 * i)));
      for (std::size_t j = i + 1; j < cells.size(); ++j) {
        long x = detail::min_input_value(cells[i]), y = detail::min_input_value(cells[j]);
        h = splitmix64(h ^ (std::uint64_t{3} + (x < y) + 2 * (x == y)) * (i * 7 + j + 1));
      }
    }
    NlmTransition<std::string, std::string> tr;
    if (st.step + 1 >= prm.steps) {
      tr.next = (h & 1) ? "acc" : "rej";
      for (int d : st.dirs) tr.moves.push_back({d, false});
      return tr;
    }
    detail::RandomState nx;
    nx.step = st.step + 1;
    nx.phase = h % prm.phases;
    for (std::size_t i = 0; i < prm.t; ++i) {
      std::uint64_t hi = splitmix64(h + i);
      int d = st.dirs[i];
      if ((hi & 15) < prm.turn_per_16) d = -d;
      bool mv = ((hi >> 4) & 3) != 0;
      tr.moves.push_back({d, mv});
      nx.dirs.push_back(d);
    }
    tr.next = detail::encode_random_state(nx);
    return tr;
  };
  return spec;
}

}  // namespace scanlab
