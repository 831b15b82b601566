#pragma once

#include "scanlab/nlm.hpp"
#include "scanlab/permutation.hpp"

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace scanlab {

struct IndexToken {
  enum class Kind { open, close, position, wildcard, state };
  Kind kind = Kind::open;
  std::size_t position = 0;
  std::string state;

  bool operator==(const IndexToken&) const = default;
  auto operator<=>(const IndexToken&) const = default;
};

using IndexString = std::vector<IndexToken>;

inline std::string render_index_string(const IndexString& s) {
  std::string out;
  for (const auto& tok : s) {
    switch (tok.kind) {
      case IndexToken::Kind::open: out += '<'; break;
      case IndexToken::Kind::close: out += '>'; break;
      case IndexToken::Kind::position: out += std::to_string(tok.position); break;
      case IndexToken::Kind::wildcard: out += '?'; break;
      case IndexToken::Kind::state: out += tok.state; break;
    }
  }
  return out;
}

// value -> position (1-based); rejects repeated values.
inline std::map<std::string, std::size_t> position_map(const std::vector<std::string>& v) {
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!pos.emplace(v[i], i + 1).second) throw SpecError("skeleton requires distinct inputs");
  return pos;
}

inline IndexString ind_tokens(const std::vector<Token>& tokens, const std::map<std::string, std::size_t>& pos) {
  IndexString out;
  for (const auto& tok : tokens) {
    IndexToken it;
    switch (tok.kind) {
      case TokenKind::open: it.kind = IndexToken::Kind::open; break;
      case TokenKind::close: it.kind = IndexToken::Kind::close; break;
      case TokenKind::choice: it.kind = IndexToken::Kind::wildcard; break;
      case TokenKind::state: it.kind = IndexToken::Kind::state, it.state = tok.text; break;
      case TokenKind::input: {
        auto f = pos.find(tok.text);
        if (f == pos.end()) throw SpecError("cell holds a value that is not part of the input");
        it.kind = IndexToken::Kind::position;
        it.position = f->second;
        break;
      }
    }
    out.push_back(std::move(it));
  }
  return out;
}

template <class S, class C>
IndexString ind(const NlmSpec<S, C>& spec, const CellPtr<S, C>& cell, const std::vector<std::string>& v) {
  return ind_tokens(cell_tokens(spec, cell), position_map(v));
}

inline std::set<std::size_t> positions_in(const IndexString& s) {
  std::set<std::size_t> out;
  for (const auto& tok : s)
    if (tok.kind == IndexToken::Kind::position) out.insert(tok.position);
  return out;
}

struct SkeletonEntry {
  std::string state;
  std::vector<int> dirs;
  std::vector<IndexString> ind;

  bool operator==(const SkeletonEntry&) const = default;

  std::set<std::size_t> positions() const {
    std::set<std::size_t> out;
    for (const auto& s : ind)
      for (auto p : positions_in(s)) out.insert(p);
    return out;
  }
};

struct Skeleton {
  std::vector<std::optional<SkeletonEntry>> s;
  std::vector<std::vector<int>> moves;

  bool operator==(const Skeleton&) const = default;

  // One entry per line; "?" for wildcard entries; moves on "m" lines.
  std::string canonical() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!s[i]) {
        os << "?\n";
      } else {
        os << s[i]->state << " |";
        for (int d : s[i]->dirs) os << ' ' << (d > 0 ? "+1" : "-1");
        os << " |";
        for (const auto& x : s[i]->ind) os << ' ' << render_index_string(x);
        os << '\n';
      }
      if (i < moves.size()) {
        os << "m";
        for (int mv : moves[i]) os << ' ' << mv;
        os << '\n';
      }
    }
    return os.str();
  }
};

template <class S, class C>
SkeletonEntry skel_of_configuration(const NlmSpec<S, C>& spec, const NlmConfiguration<S, C>& g,
                                    const std::map<std::string, std::size_t>& pos) {
  SkeletonEntry e;
  e.state = spec.state_name(g.state);
  e.dirs = g.dirs;
  for (const auto& cell : g.local_cells()) e.ind.push_back(ind_tokens(cell_tokens(spec, cell), pos));
  return e;
}

template <class S, class C>
Skeleton skel_of_run(const NlmSpec<S, C>& spec, const NlmRunTrace<S, C>& run, const std::vector<std::string>& v) {
  auto pos = position_map(v);
  Skeleton z;
  z.moves = run.moves;
  z.s.push_back(skel_of_configuration(spec, run.configs[0], pos));
  for (std::size_t i = 0; i + 1 < run.configs.size(); ++i) {
    bool still = std::all_of(run.moves[i].begin(), run.moves[i].end(), [](int x) { return x == 0; });
    if (still) z.s.push_back(std::nullopt);
    else z.s.push_back(skel_of_configuration(spec, run.configs[i + 1], pos));
  }
  return z;
}

inline bool compared(const Skeleton& z, std::size_t i, std::size_t j) {
  for (const auto& e : z.s) {
    if (!e) continue;
    auto p = e->positions();
    if (p.count(i) && p.count(j)) return true;
  }
  return false;
}

// |{i : positions i and m+phi(i) are compared}|.
inline std::size_t count_compared_pairs(const Skeleton& z, const Permutation& phi, std::size_t m) {
  if (phi.size() != m) throw SpecError("permutation size does not match m");
  std::vector<std::set<std::size_t>> sets;
  for (const auto& e : z.s)
    if (e) sets.push_back(e->positions());
  std::size_t count = 0;
  for (std::size_t i = 1; i <= m; ++i) {
    std::size_t j = m + phi[i - 1];
    for (const auto& p : sets)
      if (p.count(i) && p.count(j)) {
        ++count;
        break;
      }
  }
  return count;
}

// Positions occurring in each cell of each list.
template <class S, class C>
std::vector<std::vector<std::set<std::size_t>>> cell_positions(const NlmSpec<S, C>& spec,
                                                               const NlmConfiguration<S, C>& g,
                                                               const std::vector<std::string>& v) {
  auto pos = position_map(v);
  std::vector<std::vector<std::set<std::size_t>>> out;
  for (const auto& list : g.lists) {
    out.emplace_back();
    for (const auto& cell : list) out.back().push_back(positions_in(ind_tokens(cell_tokens(spec, cell), pos)));
  }
  return out;
}

inline bool occurs_in_lists(const std::vector<std::vector<std::set<std::size_t>>>& lists,
                            const std::vector<std::size_t>& seq) {
  if (seq.empty()) return true;
  for (const auto& cells : lists) {
    // Greedy earliest match is optimal for non-strict cell order.
    std::size_t j = 0, mu = 0;
    while (mu < seq.size() && j < cells.size()) {
      if (cells[j].count(seq[mu])) ++mu;
      else ++j;
    }
    if (mu == seq.size()) return true;
  }
  return false;
}

template <class S, class C>
bool occurs(const NlmSpec<S, C>& spec, const NlmConfiguration<S, C>& g, const std::vector<std::string>& v,
            const std::vector<std::size_t>& seq) {
  return occurs_in_lists(cell_positions(spec, g, v), seq);
}

}  // namespace scanlab
