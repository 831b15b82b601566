#pragma once

#include "scanlab/nlm.hpp"

#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace scanlab {

// Finite list machines with named states and choices.
using TableNlm = NlmSpec<std::string, std::string>;
using TableCell = CellPtr<std::string, std::string>;
using TableRun = NlmRunTrace<std::string, std::string>;
using TableConfiguration = NlmConfiguration<std::string, std::string>;

struct CellPattern {
  enum class Kind { any, empty, any_input, input, any_written, written_by };
  Kind kind = Kind::any;
  std::string text;

  bool matches(const TableCell& c) const {
    using K = Cell<std::string, std::string>::Kind;
    switch (kind) {
      case Kind::any: return true;
      case Kind::empty: return c->kind == K::empty;
      case Kind::any_input: return c->kind == K::input;
      case Kind::input: return c->kind == K::input && c->value == text;
      case Kind::any_written: return c->kind == K::written;
      case Kind::written_by: return c->kind == K::written && c->state == text;
    }
    return false;
  }

  static CellPattern parse(const std::string& tok, int line) {
    CellPattern p;
    if (tok == "*") p.kind = Kind::any;
    else if (tok == "<>") p.kind = Kind::empty;
    else if (tok == "<*>") p.kind = Kind::any_input;
    else if (tok == "@") p.kind = Kind::any_written;
    else if (tok.size() > 1 && tok[0] == '@') p.kind = Kind::written_by, p.text = tok.substr(1);
    else if (tok.size() > 2 && tok.front() == '<' && tok.back() == '>')
      p.kind = Kind::input, p.text = tok.substr(1, tok.size() - 2);
    else throw SpecError("line " + std::to_string(line) + ": bad cell pattern '" + tok + "'");
    return p;
  }
};

struct TableRule {
  std::string from;
  std::vector<CellPattern> cells;
  std::string choice;  // "*" matches any choice
  std::string to;
  std::vector<Movement> moves;
  int line = 0;
};

struct TableNlmFile {
  TableNlm spec;
  std::vector<std::string> states;
  std::vector<std::string> values;  // optional input domain for sweeps
  std::vector<TableRule> rules;
  std::string name;
};

namespace detail {

inline Movement parse_movement(const std::string& tok, int line) {
  auto bad = [&] { return SpecError("line " + std::to_string(line) + ": bad movement '" + tok + "'"); };
  if (tok.size() < 5 || tok.front() != '(' || tok.back() != ')') throw bad();
  auto comma = tok.find(',');
  if (comma == std::string::npos) throw bad();
  std::string d = tok.substr(1, comma - 1), mv = tok.substr(comma + 1, tok.size() - comma - 2);
  Movement m;
  if (d == "+1" || d == "1") m.direction = 1;
  else if (d == "-1") m.direction = -1;
  else throw bad();
  if (mv == "true" || mv == "1") m.move = true;
  else if (mv == "false" || mv == "0") m.move = false;
  else throw bad();
  return m;
}

}  // namespace detail

// Text format:
//   lists t / inputs m / choices c1 c2 ... / states a b ... / start a / final ... / accept ...
//   values v1 v2 ...   (optional input domain)
//   reversals r        (optional claimed bound)
//   a pat1 .. patt c -> b (dir,move) x t
// Patterns: * any, <> empty cell, <*> any input cell, <v> input cell v,
// @ any written cell, @a cell written in state a. The first matching rule wins.
inline std::shared_ptr<TableNlmFile> parse_table_nlm(const std::string& text, std::string name = "") {
  auto file = std::make_shared<TableNlmFile>();
  file->name = std::move(name);
  auto& spec = file->spec;
  std::set<std::string> states, finals, accepts, choices;
  std::string start;
  bool have_lists = false, have_inputs = false;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  std::vector<std::pair<std::vector<std::string>, int>> pending;
  while (std::getline(in, raw)) {
    ++line_no;
    auto tok = split_ws(raw);
    if (tok.empty() || tok[0][0] == '#') continue;
    const auto& h = tok[0];
    if (h == "lists") spec.t = std::stoul(tok.at(1)), have_lists = true;
    else if (h == "inputs") spec.m = std::stoul(tok.at(1)), have_inputs = true;
    else if (h == "choices") {
      for (std::size_t i = 1; i < tok.size(); ++i) spec.choices.push_back(tok[i]), choices.insert(tok[i]);
    } else if (h == "states") {
      for (std::size_t i = 1; i < tok.size(); ++i) file->states.push_back(tok[i]), states.insert(tok[i]);
    } else if (h == "start") start = tok.at(1);
    else if (h == "final") finals.insert(tok.begin() + 1, tok.end());
    else if (h == "accept") accepts.insert(tok.begin() + 1, tok.end());
    else if (h == "values") file->values.assign(tok.begin() + 1, tok.end());
    else if (h == "reversals") spec.declared_reversals = std::stoull(tok.at(1));
    else pending.emplace_back(tok, line_no);
  }
  if (!have_lists || !have_inputs) throw SpecError("missing 'lists' or 'inputs' header");
  if (spec.choices.empty()) throw SpecError("missing 'choices' header");
  if (!states.count(start)) throw SpecError("start state not declared");
  for (const auto& f : finals)
    if (!states.count(f)) throw SpecError("final state '" + f + "' not declared");
  for (const auto& a : accepts)
    if (!finals.count(a)) throw SpecError("accepting state '" + a + "' is not final");
  for (const auto& c : choices)
    if (states.count(c)) throw SpecError("'" + c + "' is both a state and a choice");
  for (const auto& v : file->values)
    if (states.count(v) || choices.count(v)) throw SpecError("input value '" + v + "' clashes with a state or choice");

  const std::size_t t = spec.t;
  for (const auto& [tok, line] : pending) {
    if (tok.size() != 2 * t + 4 || tok[t + 2] != "->")
      throw SpecError("line " + std::to_string(line) + ": syntax error in transition");
    TableRule r;
    r.line = line;
    r.from = tok[0];
    if (!states.count(r.from)) throw SpecError("line " + std::to_string(line) + ": unknown state '" + r.from + "'");
    if (finals.count(r.from)) throw SpecError("line " + std::to_string(line) + ": transition from final state");
    for (std::size_t i = 0; i < t; ++i) r.cells.push_back(CellPattern::parse(tok[1 + i], line));
    r.choice = tok[t + 1];
    if (r.choice != "*" && !choices.count(r.choice))
      throw SpecError("line " + std::to_string(line) + ": unknown choice '" + r.choice + "'");
    r.to = tok[t + 3];
    if (!states.count(r.to)) throw SpecError("line " + std::to_string(line) + ": unknown state '" + r.to + "'");
    for (std::size_t i = 0; i < t; ++i) r.moves.push_back(detail::parse_movement(tok[t + 4 + i], line));
    file->rules.push_back(std::move(r));
  }

  spec.initial = start;
  spec.state_count = states.size();
  spec.is_final = [finals](const std::string& a) { return finals.count(a) > 0; };
  spec.is_accepting = [accepts](const std::string& a) { return accepts.count(a) > 0; };
  spec.state_name = [](const std::string& a) { return a; };
  spec.choice_name = [](const std::string& c) { return c; };
  auto rules = std::make_shared<std::vector<TableRule>>(file->rules);
  spec.alpha = [rules](const std::string& a, const std::vector<TableCell>& cells, const std::string& c) {
    for (const auto& r : *rules) {
      if (r.from != a) continue;
      if (r.choice != "*" && r.choice != c) continue;
      bool ok = true;
      for (std::size_t i = 0; i < cells.size() && ok; ++i) ok = r.cells[i].matches(cells[i]);
      if (!ok) continue;
      NlmTransition<std::string, std::string> tr;
      tr.next = r.to;
      tr.moves = r.moves;
      return tr;
    }
    throw SpecError("transition undefined for state '" + a + "' and choice '" + c + "'");
  };
  return file;
}

}  // namespace scanlab
