#pragma once

#include "scanlab/common.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace scanlab {

struct Movement {
  int direction = 1;  // +1 or -1
  bool move = false;

  bool operator==(const Movement&) const = default;
};

// Cell strings are immutable trees: <v>, <>, or a<y1>...<yt><c>.
template <class S, class C>
struct Cell {
  enum class Kind { input, empty, written };

  Kind kind = Kind::empty;
  std::string value;  // input cells
  S state{};          // written cells
  std::vector<std::shared_ptr<const Cell>> reads;
  C choice{};
  std::size_t size = 2;  // token count
};

template <class S, class C>
using CellPtr = std::shared_ptr<const Cell<S, C>>;

template <class S, class C>
CellPtr<S, C> make_input_cell(std::string v) {
  auto c = std::make_shared<Cell<S, C>>();
  c->kind = Cell<S, C>::Kind::input;
  c->value = std::move(v);
  c->size = 3;
  return c;
}

template <class S, class C>
CellPtr<S, C> make_empty_cell() {
  auto c = std::make_shared<Cell<S, C>>();
  c->kind = Cell<S, C>::Kind::empty;
  c->size = 2;
  return c;
}

template <class S, class C>
CellPtr<S, C> make_written_cell(S state, std::vector<CellPtr<S, C>> reads, C choice) {
  auto c = std::make_shared<Cell<S, C>>();
  c->kind = Cell<S, C>::Kind::written;
  c->state = std::move(state);
  std::size_t size = 1 + 3;
  for (const auto& r : reads) size += 2 + r->size;
  c->reads = std::move(reads);
  c->choice = std::move(choice);
  c->size = size;
  return c;
}

enum class TokenKind { open, close, input, choice, state };

struct Token {
  TokenKind kind;
  std::string text;

  bool operator==(const Token&) const = default;
};

template <class S, class C>
struct NlmTransition {
  S next{};
  std::vector<Movement> moves;
  std::optional<C> recorded;  // choice token to write; defaults to the choice passed in
  std::size_t consumed = 0;   // stream elements used, for lazily represented choice sets
};

template <class S, class C>
struct NlmSpec {
  using State = S;
  using Choice = C;
  using CellP = CellPtr<S, C>;
  using Alpha = std::function<NlmTransition<S, C>(const S&, const std::vector<CellP>&, const C&)>;
  using Distribution = std::function<std::vector<std::pair<Rational, C>>(const S&, const std::vector<CellP>&)>;

  std::size_t t = 1;
  std::size_t m = 1;
  S initial{};
  std::function<bool(const S&)> is_final;
  std::function<bool(const S&)> is_accepting;
  Alpha alpha;
  std::vector<C> choices;     // explicit choice set; empty when choices are streamed
  Distribution distribution;  // optional; uniform over `choices` otherwise
  std::function<std::string(const S&)> state_name;
  std::function<std::string(const C&)> choice_name;
  std::optional<std::uint64_t> state_count;         // |A| when known
  std::optional<std::uint64_t> declared_reversals;  // r when the machine claims a bound

  bool deterministic() const { return choices.size() == 1; }

  std::uint64_t default_budget() const {
    if (state_count && declared_reversals) {
      std::uint64_t k = *state_count;
      return sat_add(k, sat_mul(sat_mul(k, sat_pow(t + 1, *declared_reversals + 1)), m)) + 1;
    }
    return 1'000'000;
  }
};

template <class S, class C>
void cell_tokens(const NlmSpec<S, C>& spec, const CellPtr<S, C>& cell, std::vector<Token>& out) {
  using K = typename Cell<S, C>::Kind;
  switch (cell->kind) {
    case K::input:
      out.push_back({TokenKind::open, "<"});
      out.push_back({TokenKind::input, cell->value});
      out.push_back({TokenKind::close, ">"});
      break;
    case K::empty:
      out.push_back({TokenKind::open, "<"});
      out.push_back({TokenKind::close, ">"});
      break;
    case K::written:
      out.push_back({TokenKind::state, spec.state_name(cell->state)});
      for (const auto& r : cell->reads) {
        out.push_back({TokenKind::open, "<"});
        cell_tokens(spec, r, out);
        out.push_back({TokenKind::close, ">"});
      }
      out.push_back({TokenKind::open, "<"});
      out.push_back({TokenKind::choice, spec.choice_name(cell->choice)});
      out.push_back({TokenKind::close, ">"});
      break;
  }
}

template <class S, class C>
std::vector<Token> cell_tokens(const NlmSpec<S, C>& spec, const CellPtr<S, C>& cell) {
  std::vector<Token> out;
  cell_tokens(spec, cell, out);
  return out;
}

template <class S, class C>
std::string render_cell(const NlmSpec<S, C>& spec, const CellPtr<S, C>& cell) {
  std::string s;
  for (const auto& tok : cell_tokens(spec, cell)) s += tok.text;
  return s;
}

template <class S, class C>
struct NlmConfiguration {
  S state{};
  std::vector<std::size_t> heads;  // 1-based
  std::vector<int> dirs;
  std::vector<std::vector<CellPtr<S, C>>> lists;

  std::vector<CellPtr<S, C>> local_cells() const {
    std::vector<CellPtr<S, C>> out;
    for (std::size_t i = 0; i < lists.size(); ++i) out.push_back(lists[i][heads[i] - 1]);
    return out;
  }

  std::size_t total_list_length() const {
    std::size_t n = 0;
    for (const auto& l : lists) n += l.size();
    return n;
  }

  std::size_t max_cell_size() const {
    std::size_t n = 0;
    for (const auto& l : lists)
      for (const auto& c : l) n = std::max(n, c->size);
    return n;
  }
};

template <class S, class C>
NlmConfiguration<S, C> initial_configuration(const NlmSpec<S, C>& spec, const std::vector<std::string>& v) {
  if (v.size() != spec.m)
    throw SpecError("input arity " + std::to_string(v.size()) + " does not match m=" + std::to_string(spec.m));
  if (spec.m == 0) throw SpecError("m=0: list 1 would have no cells");
  NlmConfiguration<S, C> g;
  g.state = spec.initial;
  g.heads.assign(spec.t, 1);
  g.dirs.assign(spec.t, 1);
  g.lists.resize(spec.t);
  for (const auto& x : v) g.lists[0].push_back(make_input_cell<S, C>(x));
  for (std::size_t i = 1; i < spec.t; ++i) g.lists[i].push_back(make_empty_cell<S, C>());
  return g;
}

template <class S, class C>
struct NlmStep {
  NlmConfiguration<S, C> next;
  std::vector<int> moves;  // per list: 0 same cell, +1 / -1 moved to the right / left neighbour
  C recorded{};
  std::size_t consumed = 0;
};

template <class S, class C>
NlmStep<S, C> c_successor(const NlmSpec<S, C>& spec, const NlmConfiguration<S, C>& g, const C& c) {
  if (spec.is_final(g.state)) throw SpecError("no successor of a final configuration");
  auto cells = g.local_cells();
  NlmTransition<S, C> tr = spec.alpha(g.state, cells, c);
  if (tr.moves.size() != spec.t) throw SpecError("transition oracle returned wrong number of movements");

  NlmStep<S, C> out;
  out.recorded = tr.recorded ? *tr.recorded : c;
  out.consumed = tr.consumed;
  out.moves.assign(spec.t, 0);
  auto& n = out.next;
  n = g;
  n.state = tr.next;

  // Clamp at list ends.
  std::vector<Movement> e(spec.t);
  bool any_f = false;
  std::vector<bool> f(spec.t);
  for (std::size_t i = 0; i < spec.t; ++i) {
    Movement mv = tr.moves[i];
    if (mv.direction != 1 && mv.direction != -1) throw SpecError("head direction must be +1 or -1");
    if (mv.move && mv.direction == -1 && g.heads[i] == 1) mv.move = false;
    if (mv.move && mv.direction == 1 && g.heads[i] == g.lists[i].size()) mv.move = false;
    e[i] = mv;
    f[i] = mv.move || mv.direction != g.dirs[i];
    any_f = any_f || f[i];
  }
  if (!any_f) return out;

  auto y = make_written_cell<S, C>(g.state, cells, out.recorded);
  for (std::size_t i = 0; i < spec.t; ++i) {
    auto& list = n.lists[i];
    std::size_t p = g.heads[i];
    if (e[i].move) {
      list[p - 1] = y;
    } else if (g.dirs[i] == 1) {
      list.insert(list.begin() + static_cast<long>(p - 1), y);
    } else {
      list.insert(list.begin() + static_cast<long>(p), y);
    }
    if (e[i].direction == 1 && e[i].move) n.heads[i] = p + 1;
    else if (e[i].direction == -1 && e[i].move) n.heads[i] = p - 1;
    else if (e[i].direction == 1) n.heads[i] = p + 1;
    else n.heads[i] = p;
    n.dirs[i] = e[i].direction;
    // The head stays on its old cell only when it neither moved nor turned.
    bool same_cell = !e[i].move && e[i].direction == g.dirs[i];
    out.moves[i] = same_cell ? 0 : e[i].direction;
  }
  return out;
}

template <class S, class C>
struct NlmRunTrace {
  std::vector<NlmConfiguration<S, C>> configs;
  std::vector<C> choices_used;
  std::vector<std::vector<int>> moves;
  std::vector<std::size_t> consumed;
  bool accepted = false;

  std::size_t length() const { return configs.size(); }

  std::vector<std::uint64_t> reversals() const {
    std::vector<std::uint64_t> rev(configs.empty() ? 0 : configs[0].dirs.size(), 0);
    for (std::size_t i = 1; i < configs.size(); ++i)
      for (std::size_t j = 0; j < rev.size(); ++j) rev[j] += configs[i].dirs[j] != configs[i - 1].dirs[j];
    return rev;
  }

  std::uint64_t scans() const {
    std::uint64_t s = 1;
    for (auto r : reversals()) s += r;
    return s;
  }

  std::size_t max_total_list_length() const {
    std::size_t n = 0;
    for (const auto& g : configs) n = std::max(n, g.total_list_length());
    return n;
  }

  std::size_t max_cell_size() const {
    std::size_t n = 0;
    for (const auto& g : configs) n = std::max(n, g.max_cell_size());
    return n;
  }
};

struct NlmBoundReport {
  std::uint64_t r = 1;
  std::uint64_t measured_scans = 1;
  std::uint64_t k = 1;
  std::uint64_t max_list_length = 0, list_bound = 0;
  std::uint64_t max_cell_size = 0, cell_bound = 0;
  std::uint64_t length = 0, length_bound = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

template <class S, class C>
std::uint64_t distinct_states(const NlmSpec<S, C>& spec, const NlmRunTrace<S, C>& run) {
  std::set<std::string> seen;
  for (const auto& g : run.configs) seen.insert(spec.state_name(g.state));
  return seen.size();
}

// List-length, cell-size and run-length bounds for a run with reversal budget r.
// When |A| is not known (lazily evaluated machines), k is the number of
// distinct states the run visits: a no-movement stretch cannot repeat a state
// in a machine whose runs are all finite.
template <class S, class C>
NlmBoundReport check_structural_bounds(const NlmRunTrace<S, C>& run, const NlmSpec<S, C>& spec, std::uint64_t r) {
  NlmBoundReport b;
  b.r = r;
  b.measured_scans = run.scans();
  b.k = spec.state_count ? *spec.state_count : distinct_states(spec, run);
  const std::uint64_t t = spec.t, m = spec.m;
  b.max_list_length = run.max_total_list_length();
  b.list_bound = sat_mul(sat_pow(t + 1, r), m);
  b.max_cell_size = run.max_cell_size();
  b.cell_bound = sat_mul(11, sat_pow(std::max<std::uint64_t>(t, 2), r));
  b.length = run.length();
  b.length_bound = sat_add(b.k, sat_mul(sat_mul(b.k, sat_pow(t + 1, r + 1)), m));
  if (b.measured_scans > r)
    b.violations.push_back("run uses " + std::to_string(b.measured_scans) + " scans, budget " + std::to_string(r));
  if (b.max_list_length > b.list_bound)
    b.violations.push_back("total list length " + std::to_string(b.max_list_length) + " > " + std::to_string(b.list_bound));
  if (b.max_cell_size > b.cell_bound)
    b.violations.push_back("cell size " + std::to_string(b.max_cell_size) + " > " + std::to_string(b.cell_bound));
  if (b.length > b.length_bound)
    b.violations.push_back("run length " + std::to_string(b.length) + " > " + std::to_string(b.length_bound));
  return b;
}

// Always-on check applied to every completed run.
template <class S, class C>
void assert_structural_bounds(const NlmRunTrace<S, C>& run, const NlmSpec<S, C>& spec) {
  auto b = check_structural_bounds(run, spec, run.scans());
  if (!b.ok()) throw InvariantViolation("structural bound violated: " + b.violations.front());
}

// Feed interface: next() yields the choice for the coming step; consumed(n)
// reports how many stream elements the step used.
template <class C>
struct VectorFeed {
  const std::vector<C>& choices;
  std::size_t pos = 0;

  C next() {
    if (pos >= choices.size()) throw SpecError("choice sequence shorter than the run");
    return choices[pos++];
  }
  void consumed(std::size_t) {}
};

template <class S, class C, class Feed>
NlmRunTrace<S, C> run_with_feed(const NlmSpec<S, C>& spec, const std::vector<std::string>& v, Feed& feed,
                                std::uint64_t budget) {
  NlmRunTrace<S, C> run;
  run.configs.push_back(initial_configuration(spec, v));
  while (!spec.is_final(run.configs.back().state)) {
    if (run.configs.size() >= budget) throw BudgetExceeded("not (r,t)-bounded within budget");
    C c = feed.next();
    auto step = c_successor(spec, run.configs.back(), c);
    feed.consumed(step.consumed);
    run.choices_used.push_back(step.recorded);
    run.moves.push_back(step.moves);
    run.consumed.push_back(step.consumed);
    run.configs.push_back(std::move(step.next));
  }
  run.accepted = spec.is_accepting(run.configs.back().state);
  assert_structural_bounds(run, spec);
  return run;
}

template <class S, class C>
NlmRunTrace<S, C> run_with_choices(const NlmSpec<S, C>& spec, const std::vector<std::string>& v,
                                   const std::vector<C>& choices, std::uint64_t budget) {
  VectorFeed<C> feed{choices};
  return run_with_feed(spec, v, feed, budget);
}

template <class S, class C>
NlmRunTrace<S, C> run_with_choices(const NlmSpec<S, C>& spec, const std::vector<std::string>& v,
                                   const std::vector<C>& choices) {
  return run_with_choices(spec, v, choices, spec.default_budget());
}

// ---------------------------------------------------------------------------
// Exact acceptance probability

template <class S, class C>
std::vector<std::pair<Rational, C>> step_distribution(const NlmSpec<S, C>& spec, const NlmConfiguration<S, C>& g) {
  if (spec.distribution) return spec.distribution(g.state, g.local_cells());
  if (spec.choices.empty()) throw SpecError("machine has neither a choice set nor a step distribution");
  std::vector<std::pair<Rational, C>> out;
  Rational w(1, static_cast<long long>(spec.choices.size()));
  for (const auto& c : spec.choices) out.emplace_back(w, c);
  return out;
}

namespace detail {

template <class S, class C, class Visit>
void enumerate_runs_rec(const NlmSpec<S, C>& spec, NlmRunTrace<S, C>& path, const Rational& weight,
                        std::uint64_t budget, Visit& visit) {
  // Copy: the recursion grows path.configs.
  const NlmConfiguration<S, C> g = path.configs.back();
  if (spec.is_final(g.state)) {
    path.accepted = spec.is_accepting(g.state);
    assert_structural_bounds(path, spec);
    visit(path, weight);
    return;
  }
  if (path.configs.size() >= budget) throw BudgetExceeded("not (r,t)-bounded within budget");
  for (const auto& [w, c] : step_distribution(spec, g)) {
    auto step = c_successor(spec, g, c);
    path.choices_used.push_back(step.recorded);
    path.moves.push_back(step.moves);
    path.consumed.push_back(step.consumed);
    path.configs.push_back(std::move(step.next));
    enumerate_runs_rec(spec, path, weight * w, budget, visit);
    path.configs.pop_back();
    path.consumed.pop_back();
    path.moves.pop_back();
    path.choices_used.pop_back();
  }
}

}  // namespace detail

// Calls visit(run, probability) once per branch of the per-step recursion.
template <class S, class C, class Visit>
void enumerate_runs(const NlmSpec<S, C>& spec, const std::vector<std::string>& v, std::uint64_t budget, Visit&& visit) {
  NlmRunTrace<S, C> path;
  path.configs.push_back(initial_configuration(spec, v));
  detail::enumerate_runs_rec(spec, path, Rational(1), budget, visit);
}

template <class S, class C>
Rational accept_probability_recursive(const NlmSpec<S, C>& spec, const std::vector<std::string>& v,
                                      std::uint64_t budget) {
  Rational p = 0;
  enumerate_runs(spec, v, budget, [&](const NlmRunTrace<S, C>& run, const Rational& w) {
    if (run.accepted) p += w;
  });
  return p;
}

// Calls visit(c, run) for every c in C^ell, in lexicographic order.
template <class S, class C, class Visit>
void for_each_choice_sequence(const NlmSpec<S, C>& spec, const std::vector<std::string>& v, std::size_t ell,
                              std::uint64_t cap, Visit&& visit) {
  const std::uint64_t b = spec.choices.size();
  if (b == 0) throw SpecError("choice enumeration needs an explicit choice set");
  std::uint64_t total = sat_pow(b, ell);
  if (total > cap) throw Refused("choice enumeration exceeds cap");
  std::vector<std::size_t> idx(ell, 0);
  std::vector<C> seq(ell, spec.choices[0]);
  for (std::uint64_t n = 0; n < total; ++n) {
    for (std::size_t i = 0; i < ell; ++i) seq[i] = spec.choices[idx[i]];
    NlmRunTrace<S, C> run;
    try {
      run = run_with_choices(spec, v, seq, ell + 1);
    } catch (const BudgetExceeded&) {
      throw SpecError("length bound " + std::to_string(ell) + " is smaller than a run");
    }
    visit(seq, run);
    for (std::size_t i = ell; i-- > 0;) {
      if (++idx[i] < b) break;
      idx[i] = 0;
    }
  }
}

template <class S, class C>
Rational accept_probability(const NlmSpec<S, C>& spec, const std::vector<std::string>& v, std::size_t ell,
                            std::uint64_t cap = std::uint64_t{1} << 20) {
  BigInt accepted = 0;
  for_each_choice_sequence(spec, v, ell, cap, [&](const std::vector<C>&, const NlmRunTrace<S, C>& run) {
    if (run.accepted) ++accepted;
  });
  return Rational(accepted, BigInt(sat_pow(spec.choices.size(), ell)));
}

// Longest run over all branches; useful to pick ell for enumeration.
template <class S, class C>
std::size_t max_run_length(const NlmSpec<S, C>& spec, const std::vector<std::string>& v, std::uint64_t budget) {
  std::size_t best = 0;
  enumerate_runs(spec, v, budget, [&](const NlmRunTrace<S, C>& run, const Rational&) {
    best = std::max(best, run.length());
  });
  return best;
}

}  // namespace scanlab
