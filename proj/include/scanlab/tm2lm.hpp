#pragma once

#include "scanlab/nlm.hpp"
#include "scanlab/tm.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace scanlab {

// List machine derived from a Turing machine. Each list models one external
// tape as a sequence of blocks; a state carries the TM state, the internal
// tapes and, per external tape, the boundaries of the block around the head.

constexpr char kWildcard = '\x01';

struct ExternalHead {
  std::optional<std::size_t> left;  // nullopt: block bounds come from the cell under the head
  std::size_t act = 1;
  std::optional<std::size_t> right;
  int dir = 1;
  std::optional<char> patch;  // symbol at `act` written since the cell was recorded

  bool operator==(const ExternalHead&) const = default;
};

struct LmStateRecord {
  int q = 0;
  std::vector<std::size_t> internal_heads;
  std::vector<std::string> internal_tapes;
  std::vector<ExternalHead> ext;

  bool operator==(const LmStateRecord&) const = default;
};

using LmChoice = std::vector<std::uint32_t>;  // consumed prefix of the TM choice stream
using LmSpec = NlmSpec<LmStateRecord, LmChoice>;
using LmCell = CellPtr<LmStateRecord, LmChoice>;
using LmRun = NlmRunTrace<LmStateRecord, LmChoice>;

// Tape inscription known on [left, right]; wildcards elsewhere. Empty when left > right.
struct BlockContent {
  std::string w;
  std::size_t left = 2, right = 1;

  bool empty() const { return left > right; }
  static BlockContent none() { return {}; }
};

class DerivedMachine {
 public:
  DerivedMachine(TmSpec tm, std::size_t m, std::size_t n, std::size_t tape_length)
      : tm_(std::move(tm)), m_(m), n_(n), len_(tape_length) {
    if (!validate_normalized(tm_)) throw SpecError("machine is not normalized (several heads move in one step)");
    if (!tm_.alphabet.count(tm_.blank) || !tm_.alphabet.count('#')) throw SpecError("alphabet lacks blank or '#'");
    if (m_ < 1) throw SpecError("m must be >= 1");
    if (len_ < m_ * (n_ + 1)) throw SpecError("tape length below input length");
  }

  const TmSpec& tm() const { return tm_; }
  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  std::size_t tape_length() const { return len_; }
  std::uint64_t step_budget = 1'000'000;  // TM steps inside one list-machine step

  LmStateRecord initial_state() const {
    LmStateRecord a;
    a.q = tm_.start;
    a.internal_heads.assign(tm_.u, 1);
    a.internal_tapes.assign(tm_.u, "");
    for (std::size_t j = 0; j < tm_.t; ++j) {
      ExternalHead h;
      h.left = 1;
      h.act = 1;
      h.right = (j == 0 && m_ > 1) ? n_ + 1 : len_;
      a.ext.push_back(h);
    }
    return a;
  }

  std::string render_state(const LmStateRecord& a) const {
    std::ostringstream os;
    os << tm_.states[static_cast<std::size_t>(a.q)];
    for (std::size_t i = 0; i < a.internal_tapes.size(); ++i) os << '|' << a.internal_tapes[i] << '@' << a.internal_heads[i];
    for (const auto& h : a.ext) {
      os << "|(";
      if (h.left) os << *h.left;
      else os << "nil";
      os << ',' << h.act << ',';
      if (h.right) os << *h.right;
      else os << "nil";
      os << ',' << (h.dir > 0 ? '+' : '-');
      if (h.patch) os << ',' << *h.patch;
      os << ')';
    }
    return os.str();
  }

  // Block content of an input cell holding item mu (1-based).
  BlockContent input_block(std::size_t mu, const std::string& v) const {
    if (mu < 1 || mu > m_) throw InvariantViolation("input item index out of range");
    BlockContent b;
    b.left = (mu - 1) * (n_ + 1) + 1;
    b.right = mu == m_ ? len_ : mu * (n_ + 1);
    b.w.assign(len_, kWildcard);
    for (std::size_t i = 0; i < v.size(); ++i) b.w[b.left - 1 + i] = v[i];
    b.w[b.left - 1 + v.size()] = '#';
    for (std::size_t p = b.left + v.size() + 1; p <= b.right; ++p) b.w[p - 1] = tm_.blank;
    return b;
  }

  BlockContent blank_block() const {
    BlockContent b;
    b.left = 1;
    b.right = len_;
    b.w.assign(len_, tm_.blank);
    return b;
  }

  // Per-tape block contents of a written cell, decoded by replaying its step.
  std::shared_ptr<const std::vector<BlockContent>> tapeconf(const LmCell& cell) const {
    using K = Cell<LmStateRecord, LmChoice>::Kind;
    if (cell->kind != K::written) throw SpecError("foreign cell content: only written cells decode to all tapes");
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(cell.get());
      if (it != cache_.end()) return it->second.second;
    }
    auto out = execute(cell->state, cell->reads, cell->choice);
    auto blocks = std::make_shared<const std::vector<BlockContent>>(std::move(out.blocks));
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(cell.get(), std::make_pair(cell, blocks));
    return blocks;
  }

  std::size_t cache_size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.size();
  }

  struct StepResult {
    LmStateRecord next;
    std::vector<Movement> moves;
    std::size_t consumed = 0;
    std::vector<BlockContent> blocks;  // content recorded by the written cell, per tape
  };

  // The transition: reconstruct the TM configuration, run it with the choice
  // stream until a head leaves its block, turns, or the machine halts.
  StepResult execute(const LmStateRecord& a, const std::vector<LmCell>& cells, const LmChoice& c) const {
    auto rec = reconstruct(a, cells);
    if (rec.skip) return skip_step(a, rec);
    TmConfiguration g = rec.g;
    std::size_t k = 0;
    while (true) {
      if (tm_.is_final(g.state)) return finish(a, rec, g, std::nullopt, k);
      if (k >= step_budget) throw BudgetExceeded("watchdog: run exceeds budget");
      check_no_wildcard(g);
      if (k >= c.size()) throw SpecError("choice stream exhausted");
      TmConfiguration nx = step_with_choice(tm_, g, c[k]);
      ++k;
      if (auto ev = classify(a, rec, g, nx)) return finish(a, rec, nx, ev, k);
      g = std::move(nx);
    }
  }

  // Branches of one step with their probabilities; each branch is labelled
  // by its representative choice prefix (successor indices).
  std::vector<std::pair<Rational, LmChoice>> distribution(const LmStateRecord& a, const std::vector<LmCell>& cells) const {
    auto rec = reconstruct(a, cells);
    std::vector<std::pair<Rational, LmChoice>> out;
    if (rec.skip) {
      out.emplace_back(Rational(1), LmChoice{});
      return out;
    }
    LmChoice prefix;
    branch(a, rec, rec.g, Rational(1), prefix, out);
    return out;
  }

 private:
  struct Event {
    std::size_t tape;
    bool crossed;  // true: left the block; false: turned inside it
  };

  struct Recon {
    bool skip = false;
    std::vector<bool> empty;
    TmConfiguration g;
    std::vector<std::size_t> hl, hr;
  };

  void check_no_wildcard(const TmConfiguration& g) const {
    for (std::size_t j = 0; j < tm_.t; ++j)
      if (symbol_at(tm_, g, j) == kWildcard)
        throw InvariantViolation("simulated head reads outside its known block on tape " + std::to_string(j + 1));
  }

  Recon reconstruct(const LmStateRecord& a, const std::vector<LmCell>& cells) const {
    using K = Cell<LmStateRecord, LmChoice>::Kind;
    const std::size_t t = tm_.t;
    if (cells.size() != t || a.ext.size() != t) throw InvariantViolation("arity mismatch in derived machine");
    Recon r;
    r.empty.assign(t, false);
    r.hl.assign(t, 0);
    r.hr.assign(t, 0);
    std::vector<BlockContent> blocks(t);
    for (std::size_t j = 0; j < t; ++j) {
      const auto& h = a.ext[j];
      const auto& cell = cells[j];
      BlockContent b;
      if (cell->kind == K::written) b = (*tapeconf(cell))[j];
      else if (cell->kind == K::input) {
        if (j != 0) throw InvariantViolation("foreign cell content: input cell outside list 1");
        if (cell->value.size() != n_) throw SpecError("input item has wrong width");
        b = input_block(std::min(m_, (h.act - 1) / (n_ + 1) + 1), cell->value);
      } else {
        if (j == 0) throw InvariantViolation("foreign cell content: empty cell in list 1");
        b = blank_block();
      }
      if (b.empty()) {
        if (h.left) throw InvariantViolation("head block lies on an empty cell");
        r.empty[j] = true;
        r.skip = true;
        continue;
      }
      std::size_t lo, hi;
      if (h.left) {
        lo = *h.left;
        hi = *h.right;
        bool far_ok = h.dir > 0 ? b.right == hi : b.left == lo;
        if (!far_ok || lo < b.left || hi > b.right) throw InvariantViolation("block does not match the cell under the head");
      } else {
        lo = h.dir > 0 ? h.act : b.left;
        hi = h.dir > 0 ? b.right : h.act;
      }
      if (h.act < lo || h.act > hi || lo < b.left || hi > b.right)
        throw InvariantViolation("head position outside its block on tape " + std::to_string(j + 1));
      r.hl[j] = lo;
      r.hr[j] = hi;
      blocks[j] = std::move(b);
    }
    if (r.skip) return r;

    r.g.state = a.q;
    for (std::size_t j = 0; j < t; ++j) {
      std::string w(len_, kWildcard);
      for (std::size_t p = r.hl[j]; p <= r.hr[j]; ++p) w[p - 1] = blocks[j].w[p - 1];
      if (a.ext[j].patch) w[a.ext[j].act - 1] = *a.ext[j].patch;
      trim_blanks(w, tm_.blank);
      r.g.heads.push_back(a.ext[j].act);
      r.g.tapes.push_back(std::move(w));
    }
    for (std::size_t i = 0; i < tm_.u; ++i) {
      r.g.heads.push_back(a.internal_heads[i]);
      r.g.tapes.push_back(a.internal_tapes[i]);
    }
    return r;
  }

  StepResult skip_step(const LmStateRecord& a, const Recon& rec) const {
    StepResult out;
    out.next = a;
    for (std::size_t j = 0; j < tm_.t; ++j) out.moves.push_back({a.ext[j].dir, static_cast<bool>(rec.empty[j])});
    out.blocks.assign(tm_.t, BlockContent::none());
    return out;
  }

  // Crossing takes precedence over turning; the machine is normalized, so at
  // most one external head moves per transition.
  std::optional<Event> classify(const LmStateRecord& a, const Recon& rec, const TmConfiguration& prev,
                                const TmConfiguration& nx) const {
    for (std::size_t j = 0; j < tm_.t; ++j) {
      if (nx.heads[j] == prev.heads[j]) continue;
      int d = nx.heads[j] > prev.heads[j] ? 1 : -1;
      if (nx.heads[j] < rec.hl[j] || nx.heads[j] > rec.hr[j]) return Event{j, true};
      if (d != a.ext[j].dir) return Event{j, false};
    }
    return std::nullopt;
  }

  BlockContent cut(const TmConfiguration& g, std::size_t j, std::size_t lo, std::size_t hi) const {
    if (lo > hi) return BlockContent::none();
    BlockContent b;
    b.left = lo;
    b.right = hi;
    b.w.assign(len_, kWildcard);
    for (std::size_t p = lo; p <= hi; ++p) {
      char s = p <= g.tapes[j].size() ? g.tapes[j][p - 1] : tm_.blank;
      if (s == kWildcard) throw InvariantViolation("recorded block contains unknown cells");
      b.w[p - 1] = s;
    }
    return b;
  }

  StepResult finish(const LmStateRecord& a, const Recon& rec, const TmConfiguration& g, std::optional<Event> ev,
                    std::size_t consumed) const {
    StepResult out;
    out.consumed = consumed;
    out.next.q = g.state;
    for (std::size_t i = 0; i < tm_.u; ++i) {
      out.next.internal_heads.push_back(g.heads[tm_.t + i]);
      out.next.internal_tapes.push_back(g.tapes[tm_.t + i]);
    }
    for (std::size_t j = 0; j < tm_.t; ++j) {
      const std::size_t hl = rec.hl[j], hr = rec.hr[j], p = g.heads[j];
      const int dir = a.ext[j].dir;
      ExternalHead h;
      h.act = p;
      if (ev && ev->tape == j && ev->crossed) {
        if (p > len_) throw BudgetExceeded("simulated head passes the tape length cap");
        h.dir = p == hr + 1 ? 1 : -1;
        out.moves.push_back({h.dir, true});
        out.blocks.push_back(cut(g, j, hl, hr));
      } else if (ev && ev->tape == j) {
        h.dir = -dir;
        if (dir > 0) {
          h.left = hl;
          h.right = p + 1;
          out.blocks.push_back(cut(g, j, hl, p + 1));
        } else {
          h.left = p - 1;
          h.right = hr;
          out.blocks.push_back(cut(g, j, p - 1, hr));
        }
        out.moves.push_back({h.dir, false});
      } else {
        h.dir = dir;
        if (dir > 0) {
          h.left = p;
          h.right = hr;
          out.blocks.push_back(cut(g, j, hl, p - 1));
        } else {
          h.left = hl;
          h.right = p;
          out.blocks.push_back(cut(g, j, p + 1, hr));
        }
        h.patch = symbol_at(tm_, g, j);
        out.moves.push_back({h.dir, false});
      }
      out.next.ext.push_back(h);
    }
    return out;
  }

  void branch(const LmStateRecord& a, const Recon& rec, const TmConfiguration& g, const Rational& w, LmChoice& prefix,
              std::vector<std::pair<Rational, LmChoice>>& out) const {
    if (tm_.is_final(g.state)) {
      out.emplace_back(w, prefix);
      return;
    }
    if (prefix.size() >= step_budget) throw BudgetExceeded("watchdog: run exceeds budget");
    check_no_wildcard(g);
    auto next = next_configurations(tm_, g);
    if (next.empty()) throw SpecError("invalid machine: run not finite (stuck)");
    Rational wi = w / static_cast<long long>(next.size());
    for (std::size_t i = 0; i < next.size(); ++i) {
      prefix.push_back(static_cast<std::uint32_t>(i + 1));
      if (classify(a, rec, g, next[i])) out.emplace_back(wi, prefix);
      else branch(a, rec, next[i], wi, prefix, out);
      prefix.pop_back();
    }
  }

  TmSpec tm_;
  std::size_t m_, n_, len_;
  mutable std::mutex mu_;
  // Holding the cell pointer keeps the key address from being reused.
  mutable std::map<const void*, std::pair<LmCell, std::shared_ptr<const std::vector<BlockContent>>>> cache_;
};

inline std::string render_choice(const LmChoice& c) {
  if (c.empty()) return "e";
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "." : "") + std::to_string(c[i]);
  return s;
}

struct DerivedNlm {
  std::shared_ptr<DerivedMachine> machine;
  LmSpec spec;
};

inline DerivedNlm derive_nlm(const TmSpec& tm, std::size_t m, std::size_t n, std::size_t tape_length = 0) {
  if (tape_length == 0) tape_length = m * (n + 1) + 8;
  auto dm = std::make_shared<DerivedMachine>(tm, m, n, tape_length);
  LmSpec spec;
  spec.t = tm.t;
  spec.m = m;
  spec.initial = dm->initial_state();
  spec.is_final = [dm](const LmStateRecord& a) { return dm->tm().is_final(a.q); };
  spec.is_accepting = [dm](const LmStateRecord& a) { return dm->tm().is_accepting(a.q); };
  spec.alpha = [dm](const LmStateRecord& a, const std::vector<LmCell>& cells, const LmChoice& c) {
    auto r = dm->execute(a, cells, c);
    NlmTransition<LmStateRecord, LmChoice> tr;
    tr.next = std::move(r.next);
    tr.moves = std::move(r.moves);
    tr.recorded = LmChoice(c.begin(), c.begin() + static_cast<long>(r.consumed));
    tr.consumed = r.consumed;
    return tr;
  };
  spec.distribution = [dm](const LmStateRecord& a, const std::vector<LmCell>& cells) {
    return dm->distribution(a, cells);
  };
  spec.state_name = [dm](const LmStateRecord& a) { return dm->render_state(a); };
  spec.choice_name = [](const LmChoice& c) { return render_choice(c); };
  return {dm, spec};
}

// Feeds the unread suffix of one TM choice stream to each list-machine step.
struct StreamFeed {
  const std::vector<std::uint32_t>& stream;
  std::size_t pos = 0;

  LmChoice next() const { return LmChoice(stream.begin() + static_cast<long>(pos), stream.end()); }
  void consumed(std::size_t k) { pos += k; }
};

// TM input word v1#v2#...vm#.
inline std::string tm_input_word(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += x + "#";
  return s;
}

// TM choice sequence realised by a derived-machine run.
inline std::vector<std::uint64_t> concatenated_choices(const LmRun& run) {
  std::vector<std::uint64_t> out;
  for (const auto& c : run.choices_used)
    for (auto x : c) out.push_back(x);
  return out;
}

struct SimulationRow {
  std::vector<std::string> input;
  bool skipped = false;
  std::string reason;
  Rational tm_probability = 0;
  Rational nlm_probability = 0;
  std::optional<Rational> stream_probability;  // NLM driven by every stream in C_T^ell
  bool equal = false;
  bool reversals_ok = true;  // every NLM run uses at most the scans of its TM run
  std::uint64_t max_nlm_scans = 0, max_tm_scans = 0;
  std::size_t nlm_runs = 0;
  std::size_t distinct_states = 0;
};

struct SimulationOptions {
  std::size_t tape_length = 0;                          // 0: m(n+1)+8
  std::uint64_t tm_budget = 100'000;
  std::uint64_t stream_cap = std::uint64_t{1} << 14;    // streams enumerated per input
  std::uint64_t nlm_budget = 100'000;
};

inline SimulationRow simulate_one(const DerivedNlm& d, const std::vector<std::string>& v, const SimulationOptions& opt) {
  const auto& tm = d.machine->tm();
  SimulationRow row;
  row.input = v;
  const std::string word = tm_input_word(v);
  try {
    auto ex = exact_accept_probability_ex(tm, word, opt.tm_budget);
    row.tm_probability = ex.probability;
    std::set<std::string> states;
    row.nlm_probability = 0;
    enumerate_runs(d.spec, v, opt.nlm_budget, [&](const LmRun& run, const Rational& w) {
      if (run.accepted) row.nlm_probability += w;
      ++row.nlm_runs;
      for (const auto& g : run.configs) states.insert(d.spec.state_name(g.state));
      auto cs = concatenated_choices(run);
      auto trun = run_with_choices(tm, word, cs, opt.tm_budget);
      auto tm_scans = meter(tm, trun).scans;
      row.max_tm_scans = std::max(row.max_tm_scans, tm_scans);
      row.max_nlm_scans = std::max<std::uint64_t>(row.max_nlm_scans, run.scans());
      if (run.scans() > tm_scans || trun.accepted != run.accepted) row.reversals_ok = false;
    });
    row.distinct_states = states.size();
    const std::size_t ell = ex.max_run_length > 0 ? ex.max_run_length - 1 : 0;
    const std::uint64_t b = tm.choice_alphabet_size();
    if (sat_pow(b, ell) <= opt.stream_cap) {
      std::vector<std::uint32_t> s(ell, 1);
      BigInt acc = 0;
      const std::uint64_t total = sat_pow(b, ell);
      for (std::uint64_t k = 0; k < total; ++k) {
        StreamFeed feed{s};
        auto run = run_with_feed(d.spec, v, feed, opt.nlm_budget);
        if (run.accepted) ++acc;
        for (std::size_t i = 0; i < ell; ++i) {
          if (++s[i] <= b) break;
          s[i] = 1;
        }
      }
      row.stream_probability = Rational(acc, BigInt(total));
    }
    row.equal = row.tm_probability == row.nlm_probability &&
                (!row.stream_probability || *row.stream_probability == row.tm_probability);
  } catch (const BudgetExceeded& e) {
    row.skipped = true;
    row.reason = e.what();
  } catch (const Refused& e) {
    row.skipped = true;
    row.reason = e.what();
  }
  return row;
}

inline std::vector<SimulationRow> simulate_and_compare(const TmSpec& tm, std::size_t m, std::size_t n,
                                                       const std::vector<std::vector<std::string>>& inputs,
                                                       const SimulationOptions& opt = {}) {
  auto d = derive_nlm(tm, m, n, opt.tape_length);
  std::vector<SimulationRow> rows;
  for (const auto& v : inputs) rows.push_back(simulate_one(d, v, opt));
  return rows;
}

// All m-tuples over (alphabet minus blank and '#')^n.
inline std::vector<std::vector<std::string>> all_small_inputs(const TmSpec& tm, std::size_t m, std::size_t n,
                                                              std::size_t cap = 4096) {
  std::vector<char> sigma;
  for (char c : tm.alphabet)
    if (c != tm.blank && c != '#') sigma.push_back(c);
  if (sigma.empty()) throw SpecError("no input symbols");
  std::uint64_t words = sat_pow(sigma.size(), n), total = sat_pow(words, m);
  if (total > cap) throw Refused("input sweep exceeds cap");
  std::vector<std::string> items;
  for (std::uint64_t k = 0; k < words; ++k) {
    std::string s(n, sigma[0]);
    std::uint64_t x = k;
    for (std::size_t i = n; i-- > 0; x /= sigma.size()) s[i] = sigma[x % sigma.size()];
    items.push_back(s);
  }
  std::vector<std::vector<std::string>> out;
  for (std::uint64_t k = 0; k < total; ++k) {
    std::vector<std::string> v(m);
    std::uint64_t x = k;
    for (std::size_t i = m; i-- > 0; x /= words) v[i] = items[x % words];
    out.push_back(v);
  }
  return out;
}

}  // namespace scanlab
