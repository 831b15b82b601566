#pragma once

#include "scanlab/common.hpp"
#include "scanlab/resources.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace scanlab {

enum class Move : int { L = -1, N = 0, R = 1 };

inline char move_char(Move m) {
  return m == Move::L ? 'L' : (m == Move::R ? 'R' : 'N');
}

struct TmTransition {
  int from = 0;
  std::vector<char> read;
  int to = 0;
  std::vector<char> write;
  std::vector<Move> moves;
  int line = 0;
};

struct TmSpec {
  std::size_t t = 1;  // external tapes
  std::size_t u = 0;  // internal tapes
  std::vector<std::string> states;
  std::map<std::string, int> state_ids;
  std::set<char> alphabet;
  char blank = '_';
  int start = 0;
  std::vector<bool> final;
  std::vector<bool> accepting;
  std::vector<TmTransition> transitions;
  std::vector<std::vector<std::size_t>> by_state;  // transition indices per state, file order
  std::optional<std::pair<std::uint64_t, std::uint64_t>> declared_bounds;  // (r, s)

  std::size_t tapes() const { return t + u; }
  bool is_final(int q) const { return final.at(static_cast<std::size_t>(q)); }
  bool is_accepting(int q) const { return accepting.at(static_cast<std::size_t>(q)); }

  int state_id(const std::string& name) const {
    auto it = state_ids.find(name);
    if (it == state_ids.end()) throw SpecError("unknown state: " + name);
    return it->second;
  }

  // Largest number of transitions sharing a (state, read tuple) pair.
  std::size_t max_branching() const {
    std::map<std::pair<int, std::vector<char>>, std::size_t> groups;
    std::size_t b = 1;
    for (const auto& tr : transitions) b = std::max(b, ++groups[{tr.from, tr.read}]);
    return b;
  }

  // |C_T| = lcm(1..b).
  std::uint64_t choice_alphabet_size() const {
    std::uint64_t l = 1;
    for (std::uint64_t i = 2; i <= max_branching(); ++i) l = std::lcm(l, i);
    return l;
  }
};

namespace detail {

inline int intern_state(TmSpec& spec, const std::string& name, bool declared_only, int line) {
  auto it = spec.state_ids.find(name);
  if (it != spec.state_ids.end()) return it->second;
  if (declared_only) throw SpecError("line " + std::to_string(line) + ": unknown state '" + name + "'");
  int id = static_cast<int>(spec.states.size());
  spec.states.push_back(name);
  spec.state_ids[name] = id;
  return id;
}

inline char parse_symbol(const std::string& tok, int line) {
  if (tok.size() != 1) throw SpecError("line " + std::to_string(line) + ": symbol must be one character: '" + tok + "'");
  unsigned char c = static_cast<unsigned char>(tok[0]);
  if (c < 0x21 || c > 0x7e) throw SpecError("line " + std::to_string(line) + ": unprintable symbol");
  return tok[0];
}

}  // namespace detail

// Line-oriented machine description. A line whose first non-blank character
// is '#' is a comment; '#' elsewhere is an ordinary tape symbol.
inline TmSpec parse_tm_spec(const std::string& text) {
  TmSpec spec;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool have_tapes = false, have_start = false, declared_states = false, declared_alphabet = false;
  std::string start_name;
  std::vector<std::string> final_names, accept_names;
  struct Pending {
    std::vector<std::string> tok;
    int line;
  };
  std::vector<Pending> pending;

  while (std::getline(in, raw)) {
    ++line_no;
    auto tok = split_ws(raw);
    if (tok.empty() || tok[0][0] == '#') continue;
    const std::string& head = tok[0];
    auto expect_args = [&](std::size_t k) {
      if (tok.size() < k + 1) throw SpecError("line " + std::to_string(line_no) + ": '" + head + "' needs arguments");
    };
    if (head == "tapes") {
      expect_args(2);
      if (tok.size() != 3) throw SpecError("line " + std::to_string(line_no) + ": tapes takes two numbers");
      spec.t = std::stoul(tok[1]);
      spec.u = std::stoul(tok[2]);
      if (spec.t < 1) throw SpecError("line " + std::to_string(line_no) + ": need at least one external tape");
      have_tapes = true;
    } else if (head == "start") {
      expect_args(1);
      start_name = tok[1];
      have_start = true;
    } else if (head == "final") {
      final_names.insert(final_names.end(), tok.begin() + 1, tok.end());
    } else if (head == "accept") {
      accept_names.insert(accept_names.end(), tok.begin() + 1, tok.end());
    } else if (head == "blank") {
      expect_args(1);
      spec.blank = detail::parse_symbol(tok[1], line_no);
    } else if (head == "states") {
      declared_states = true;
      for (std::size_t i = 1; i < tok.size(); ++i) detail::intern_state(spec, tok[i], false, line_no);
    } else if (head == "alphabet") {
      declared_alphabet = true;
      for (std::size_t i = 1; i < tok.size(); ++i) spec.alphabet.insert(detail::parse_symbol(tok[i], line_no));
    } else if (head == "bounds") {
      expect_args(2);
      spec.declared_bounds = std::make_pair(std::stoull(tok[1]), std::stoull(tok[2]));
    } else {
      pending.push_back({tok, line_no});
    }
  }
  if (!have_tapes) throw SpecError("missing 'tapes' header");
  if (!have_start) throw SpecError("missing 'start' header");
  spec.alphabet.insert(spec.blank);
  spec.alphabet.insert('#');

  spec.start = detail::intern_state(spec, start_name, declared_states, 0);
  std::vector<int> finals, accepts;
  for (const auto& n : final_names) finals.push_back(detail::intern_state(spec, n, declared_states, 0));
  for (const auto& n : accept_names) accepts.push_back(detail::intern_state(spec, n, declared_states, 0));

  const std::size_t k = spec.tapes();
  for (const auto& p : pending) {
    const auto& tok = p.tok;
    if (tok.size() != 3 * k + 3 || tok[k + 1] != "->")
      throw SpecError("line " + std::to_string(p.line) + ": syntax error in transition (expected q a1..a" +
                      std::to_string(k) + " -> q' b1..b" + std::to_string(k) + " M1..M" + std::to_string(k) + ")");
    TmTransition tr;
    tr.line = p.line;
    tr.from = detail::intern_state(spec, tok[0], declared_states, p.line);
    for (std::size_t i = 0; i < k; ++i) tr.read.push_back(detail::parse_symbol(tok[1 + i], p.line));
    tr.to = detail::intern_state(spec, tok[k + 2], declared_states, p.line);
    for (std::size_t i = 0; i < k; ++i) tr.write.push_back(detail::parse_symbol(tok[k + 3 + i], p.line));
    for (std::size_t i = 0; i < k; ++i) {
      const std::string& m = tok[2 * k + 3 + i];
      if (m == "L") tr.moves.push_back(Move::L);
      else if (m == "N") tr.moves.push_back(Move::N);
      else if (m == "R") tr.moves.push_back(Move::R);
      else throw SpecError("line " + std::to_string(p.line) + ": bad move '" + m + "'");
    }
    for (char c : tr.read) {
      if (declared_alphabet && !spec.alphabet.count(c))
        throw SpecError("line " + std::to_string(p.line) + ": unknown symbol '" + std::string(1, c) + "'");
      spec.alphabet.insert(c);
    }
    for (char c : tr.write) {
      if (declared_alphabet && !spec.alphabet.count(c))
        throw SpecError("line " + std::to_string(p.line) + ": unknown symbol '" + std::string(1, c) + "'");
      spec.alphabet.insert(c);
    }
    spec.transitions.push_back(std::move(tr));
  }

  spec.final.assign(spec.states.size(), false);
  spec.accepting.assign(spec.states.size(), false);
  for (int q : finals) spec.final[static_cast<std::size_t>(q)] = true;
  for (int q : accepts) {
    if (!spec.final[static_cast<std::size_t>(q)])
      throw SpecError("accepting state '" + spec.states[static_cast<std::size_t>(q)] + "' is not final");
    spec.accepting[static_cast<std::size_t>(q)] = true;
  }
  spec.by_state.assign(spec.states.size(), {});
  for (std::size_t i = 0; i < spec.transitions.size(); ++i) {
    const auto& tr = spec.transitions[i];
    if (spec.final[static_cast<std::size_t>(tr.from)])
      throw SpecError("line " + std::to_string(tr.line) + ": transition from final state '" +
                      spec.states[static_cast<std::size_t>(tr.from)] + "'");
    spec.by_state[static_cast<std::size_t>(tr.from)].push_back(i);
  }
  return spec;
}

inline bool validate_normalized(const TmSpec& spec) {
  for (const auto& tr : spec.transitions) {
    std::size_t moving = 0;
    for (Move m : tr.moves) moving += (m != Move::N);
    if (moving > 1) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

struct TmConfiguration {
  int state = 0;
  std::vector<std::size_t> heads;   // 1-based
  std::vector<std::string> tapes;   // trailing blanks trimmed

  bool operator==(const TmConfiguration&) const = default;
};

struct TmConfigurationHash {
  std::size_t operator()(const TmConfiguration& c) const {
    std::size_t h = std::hash<int>{}(c.state);
    for (auto p : c.heads) h = h * 1000003u ^ std::hash<std::size_t>{}(p);
    for (const auto& s : c.tapes) h = h * 1000003u ^ std::hash<std::string>{}(s);
    return h;
  }
};

inline char symbol_at(const TmSpec& spec, const TmConfiguration& c, std::size_t tape) {
  std::size_t p = c.heads[tape];
  const auto& s = c.tapes[tape];
  return p <= s.size() ? s[p - 1] : spec.blank;
}

inline void trim_blanks(std::string& s, char blank) {
  while (!s.empty() && s.back() == blank) s.pop_back();
}

inline TmConfiguration initial_configuration(const TmSpec& spec, const std::string& input) {
  for (char c : input)
    if (!spec.alphabet.count(c)) throw SpecError("input symbol '" + std::string(1, c) + "' not in alphabet");
  TmConfiguration c;
  c.state = spec.start;
  c.heads.assign(spec.tapes(), 1);
  c.tapes.assign(spec.tapes(), "");
  c.tapes[0] = input;
  trim_blanks(c.tapes[0], spec.blank);
  return c;
}

// Applies one transition; returns nullopt when a head would fall off cell 1.
inline std::optional<TmConfiguration> apply_transition(const TmSpec& spec, const TmConfiguration& c,
                                                       const TmTransition& tr) {
  TmConfiguration next = c;
  next.state = tr.to;
  for (std::size_t i = 0; i < spec.tapes(); ++i) {
    if (tr.moves[i] == Move::L && c.heads[i] == 1) return std::nullopt;
    auto& tape = next.tapes[i];
    std::size_t p = c.heads[i];
    if (tr.write[i] != spec.blank || p <= tape.size()) {
      if (tape.size() < p) tape.resize(p, spec.blank);
      tape[p - 1] = tr.write[i];
      trim_blanks(tape, spec.blank);
    }
    next.heads[i] = static_cast<std::size_t>(static_cast<long long>(p) + static_cast<int>(tr.moves[i]));
  }
  return next;
}

inline bool transition_matches(const TmSpec& spec, const TmConfiguration& c, const TmTransition& tr) {
  for (std::size_t i = 0; i < spec.tapes(); ++i)
    if (symbol_at(spec, c, i) != tr.read[i]) return false;
  return true;
}

// Next_T(γ) in transition-list order.
inline std::vector<TmConfiguration> next_configurations(const TmSpec& spec, const TmConfiguration& c) {
  if (spec.is_final(c.state)) throw SpecError("no successors of final configuration");
  std::vector<TmConfiguration> out;
  for (std::size_t idx : spec.by_state[static_cast<std::size_t>(c.state)]) {
    const auto& tr = spec.transitions[idx];
    if (!transition_matches(spec, c, tr)) continue;
    if (auto n = apply_transition(spec, c, tr)) out.push_back(std::move(*n));
  }
  return out;
}

// Successor number ((c-1) mod |Next|) + 1.
inline TmConfiguration step_with_choice(const TmSpec& spec, const TmConfiguration& c, std::uint64_t choice) {
  auto next = next_configurations(spec, c);
  if (next.empty()) throw SpecError("invalid machine: run not finite (stuck in state '" +
                                    spec.states[static_cast<std::size_t>(c.state)] + "')");
  if (choice < 1) throw SpecError("choices are numbered from 1");
  return std::move(next[(choice - 1) % next.size()]);
}

struct TmRunTrace {
  std::vector<TmConfiguration> configs;
  std::vector<std::uint64_t> choices_used;
  bool accepted = false;
};

inline std::uint64_t default_tm_budget(const TmSpec& spec, std::size_t input_length) {
  constexpr std::uint64_t practical_ceiling = 10'000'000;
  constexpr std::uint64_t exponent_factor = 8;
  if (!spec.declared_bounds) return 1'000'000;
  auto [r, s] = *spec.declared_bounds;
  std::uint64_t e = exponent_factor * r * (spec.t + s);
  std::uint64_t b = e >= 63 ? practical_ceiling : sat_mul(std::max<std::uint64_t>(input_length, 1), std::uint64_t{1} << e);
  return std::min(b, practical_ceiling);
}

// Runs until the first final configuration. `chooser` supplies c_1, c_2, ...
// and may throw when it runs out. Budget bounds the number of configurations.
template <class Chooser>
TmRunTrace run_driven(const TmSpec& spec, const std::string& input, Chooser&& chooser, std::uint64_t budget) {
  TmRunTrace run;
  run.configs.push_back(initial_configuration(spec, input));
  while (!spec.is_final(run.configs.back().state)) {
    if (run.configs.size() >= budget) throw BudgetExceeded("watchdog: run exceeds budget");
    std::uint64_t c = chooser(run.choices_used.size());
    run.choices_used.push_back(c);
    run.configs.push_back(step_with_choice(spec, run.configs.back(), c));
  }
  run.accepted = spec.is_accepting(run.configs.back().state);
  return run;
}

inline TmRunTrace run_with_choices(const TmSpec& spec, const std::string& input,
                                   const std::vector<std::uint64_t>& choices, std::uint64_t budget) {
  return run_driven(
      spec, input,
      [&](std::size_t i) -> std::uint64_t {
        if (i >= choices.size()) throw SpecError("choice sequence shorter than the run");
        return choices[i];
      },
      budget);
}

inline ResourceReport meter(const TmSpec& spec, const TmRunTrace& run) {
  if (run.configs.empty()) throw SpecError("meter: empty run");
  ResourceReport r;
  const std::size_t k = spec.tapes();
  std::vector<int> last_dir(k, 0);
  std::vector<std::uint64_t> rev(k, 0), reach(k, 1);
  for (std::size_t i = 0; i < run.configs.size(); ++i) {
    const auto& c = run.configs[i];
    for (std::size_t j = 0; j < k; ++j) {
      reach[j] = std::max<std::uint64_t>(reach[j], c.heads[j]);
      if (i == 0) continue;
      long long d = static_cast<long long>(c.heads[j]) - static_cast<long long>(run.configs[i - 1].heads[j]);
      if (d == 0) continue;
      int dir = d > 0 ? 1 : -1;
      if (last_dir[j] != 0 && last_dir[j] != dir) ++rev[j];
      last_dir[j] = dir;
    }
  }
  r.reversals.assign(rev.begin(), rev.begin() + static_cast<long>(spec.t));
  r.recompute_scans();
  for (std::size_t j = 0; j < spec.t; ++j) r.external_space += reach[j];
  for (std::size_t j = spec.t; j < k; ++j) r.internal_space += reach[j];
  r.steps = run.configs.size();
  r.accepted = run.accepted;
  return r;
}

// ---------------------------------------------------------------------------
// Acceptance probability

namespace detail {

struct ProbEntry {
  Rational p;
  std::uint64_t height;  // longest run length from here, in configurations
};

inline ProbEntry exact_dfs(const TmSpec& spec, const TmConfiguration& c,
                           std::unordered_map<TmConfiguration, ProbEntry, TmConfigurationHash>& memo,
                           std::unordered_map<TmConfiguration, bool, TmConfigurationHash>& on_stack,
                           std::uint64_t depth, std::uint64_t budget) {
  if (depth > budget) throw BudgetExceeded("watchdog: run exceeds budget");
  if (spec.is_final(c.state)) return {spec.is_accepting(c.state) ? Rational(1) : Rational(0), 1};
  if (auto it = memo.find(c); it != memo.end()) {
    if (depth + it->second.height - 1 > budget) throw BudgetExceeded("watchdog: run exceeds budget");
    return it->second;
  }
  if (on_stack.count(c)) throw SpecError("invalid machine: run not finite (configuration repeats)");
  auto next = next_configurations(spec, c);
  if (next.empty()) throw SpecError("invalid machine: run not finite (stuck)");
  on_stack[c] = true;
  ProbEntry e{0, 0};
  for (const auto& n : next) {
    auto sub = exact_dfs(spec, n, memo, on_stack, depth + 1, budget);
    e.p += sub.p;
    e.height = std::max(e.height, sub.height + 1);
  }
  e.p /= static_cast<long long>(next.size());
  on_stack.erase(c);
  memo.emplace(c, e);
  return e;
}

}  // namespace detail

struct ExactResult {
  Rational probability;
  std::uint64_t max_run_length = 0;
};

inline ExactResult exact_accept_probability_ex(const TmSpec& spec, const std::string& input, std::uint64_t budget) {
  std::unordered_map<TmConfiguration, detail::ProbEntry, TmConfigurationHash> memo;
  std::unordered_map<TmConfiguration, bool, TmConfigurationHash> on_stack;
  auto e = detail::exact_dfs(spec, initial_configuration(spec, input), memo, on_stack, 1, budget);
  return {e.p, e.height};
}

inline Rational exact_accept_probability(const TmSpec& spec, const std::string& input, std::uint64_t budget) {
  return exact_accept_probability_ex(spec, input, budget).probability;
}

// |{c in C_T^ell : rho_T(w,c) accepts}| / |C_T|^ell by literal enumeration.
inline Rational choice_enumeration_probability(const TmSpec& spec, const std::string& input, std::size_t ell,
                                               std::uint64_t cap = std::uint64_t{1} << 22) {
  const std::uint64_t b = spec.choice_alphabet_size();
  std::uint64_t total = sat_pow(b, ell);
  if (total > cap) throw Refused("choice enumeration of " + std::to_string(b) + "^" + std::to_string(ell) +
                                 " sequences exceeds cap");
  std::vector<std::uint64_t> c(ell, 1);
  std::uint64_t accepted = 0;
  for (std::uint64_t n = 0; n < total; ++n) {
    TmRunTrace run;
    try {
      run = run_with_choices(spec, input, c, ell + 1);
    } catch (const BudgetExceeded&) {
      throw SpecError("length bound " + std::to_string(ell) + " is smaller than a run");
    }
    accepted += run.accepted;
    for (std::size_t i = 0; i < ell; ++i) {
      if (++c[i] <= b) break;
      c[i] = 1;
    }
  }
  return Rational(BigInt(accepted), BigInt(total));
}

struct McEstimate {
  double estimate = 0;
  double half_width = 0;
  std::uint64_t accepted = 0;
  std::uint64_t trials = 0;
};

inline McEstimate mc_accept_probability(const TmSpec& spec, const std::string& input, std::uint64_t trials,
                                        std::uint64_t seed, std::uint64_t budget) {
  if (trials < 1) throw SpecError("trials must be >= 1");
  const std::uint64_t b = spec.choice_alphabet_size();
  McEstimate est;
  est.trials = trials;
  for (std::uint64_t i = 0; i < trials; ++i) {
    Rng rng(seed, i);
    auto run = run_driven(spec, input, [&](std::size_t) { return rng.uniform(1, b); }, budget);
    est.accepted += run.accepted;
  }
  double p = static_cast<double>(est.accepted) / static_cast<double>(trials);
  est.estimate = p;
  est.half_width = 1.96 * std::sqrt(p * (1 - p) / static_cast<double>(trials));
  return est;
}

inline std::string render_configuration(const TmSpec& spec, const TmConfiguration& c) {
  std::ostringstream os;
  os << spec.states[static_cast<std::size_t>(c.state)];
  for (std::size_t i = 0; i < spec.tapes(); ++i) os << " | " << c.tapes[i] << " @" << c.heads[i];
  return os.str();
}

}  // namespace scanlab
