#pragma once

#include "scanlab/deciders.hpp"
#include "scanlab/experiment.hpp"
#include "scanlab/fingerprint.hpp"
#include "scanlab/instance.hpp"
#include "scanlab/nlm_table.hpp"
#include "scanlab/short_reduction.hpp"
#include "scanlab/skeleton.hpp"
#include "scanlab/tape_sort.hpp"
#include "scanlab/tm.hpp"
#include "scanlab/tm2lm.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace scanlab::cli {

enum ExitCode : int { kAccept = 0, kReject = 1, kUsage = 2, kInvariant = 3 };

struct Globals {
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> budget;
  unsigned threads = 1;
  std::string out;
  std::string fixtures = SCANLAB_FIXTURE_DIR;
  bool timing = false;
};

inline std::vector<std::string> split_list(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::string cur;
  for (char c : s) {
    if (c == sep) out.push_back(cur), cur.clear();
    else cur += c;
  }
  out.push_back(cur);
  return out;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw SpecError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : fallback_; }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw SpecError("cannot write " + path);
  f << text;
}

inline int verdict_exit(bool accepted) { return accepted ? kAccept : kReject; }

inline nlohmann::json verdict_json(const Verdict& v) {
  nlohmann::json j;
  j["accepted"] = v.accepted;
  j["report"] = to_json(v.report);
  if (v.params) j["params"] = to_json(*v.params);
  return j;
}

// ---------------------------------------------------------------------------

inline int run_simulate(const Globals& g, const std::string& tm_path, std::size_t m, std::size_t n,
                        const std::string& input, const std::string& mode, std::uint64_t trials,
                        const std::string& report_path, std::ostream& out) {
  auto tm = parse_tm_spec(read_file(tm_path));
  std::vector<std::vector<std::string>> inputs;
  if (input.empty()) inputs = all_small_inputs(tm, m, n);
  else inputs.push_back(split_list(input));
  SimulationOptions so;
  if (g.budget) so.tm_budget = so.nlm_budget = *g.budget;
  auto d = derive_nlm(tm, m, n);
  nlohmann::json rows = nlohmann::json::array();
  bool ok = true;
  if (mode == "exact") {
    for (const auto& v : inputs) {
      auto r = simulate_one(d, v, so);
      nlohmann::json j{{"input", tm_input_word(v)}, {"skipped", r.skipped}};
      if (r.skipped) {
        j["reason"] = r.reason;
      } else {
        j["tm_probability"] = to_string(r.tm_probability);
        j["nlm_probability"] = to_string(r.nlm_probability);
        if (r.stream_probability) j["stream_probability"] = to_string(*r.stream_probability);
        j["equal"] = r.equal;
        j["reversals_ok"] = r.reversals_ok;
        j["max_nlm_scans"] = r.max_nlm_scans;
        j["max_tm_scans"] = r.max_tm_scans;
        j["nlm_runs"] = r.nlm_runs;
        j["distinct_states"] = r.distinct_states;
        ok = ok && r.equal && r.reversals_ok;
      }
      rows.push_back(j);
    }
  } else if (mode == "mc") {
    // Each trial draws one TM choice stream and drives both machines with it.
    const std::uint64_t b = tm.choice_alphabet_size();
    for (const auto& v : inputs) {
      const std::string word = tm_input_word(v);
      std::uint64_t tm_acc = 0, nlm_acc = 0, agree = 0;
      for (std::uint64_t t = 0; t < trials; ++t) {
        Rng rng(g.seed, t);
        auto trun = run_driven(tm, word, [&](std::size_t) { return rng.uniform(1, b); }, so.tm_budget);
        std::vector<std::uint32_t> stream(trun.choices_used.begin(), trun.choices_used.end());
        StreamFeed feed{stream};
        auto nrun = run_with_feed(d.spec, v, feed, so.nlm_budget);
        tm_acc += trun.accepted, nlm_acc += nrun.accepted, agree += trun.accepted == nrun.accepted;
      }
      ok = ok && agree == trials;
      rows.push_back({{"input", word},
                      {"trials", trials},
                      {"tm_accepted", tm_acc},
                      {"nlm_accepted", nlm_acc},
                      {"agreements", agree}});
    }
  } else {
    throw SpecError("mode must be exact or mc");
  }
  nlohmann::json report{{"tm", tm_path}, {"m", m}, {"n", n}, {"mode", mode}, {"rows", rows}, {"all_equal", ok}};
  if (!report_path.empty()) write_file(report_path, report.dump(2) + "\n");
  out << report.dump(2) << "\n";
  return ok ? kAccept : kReject;
}

inline int run_tm_command(const Globals& g, const std::string& spec_path, const std::string& input,
                          const std::string& choices, const std::string& mode, std::uint64_t trials, std::ostream& out) {
  auto tm = parse_tm_spec(read_file(spec_path));
  const std::uint64_t budget = g.budget.value_or(default_tm_budget(tm, input.size()));
  nlohmann::json j{{"input", input}, {"mode", mode}};
  if (mode == "run") {
    std::vector<std::uint64_t> cs;
    for (const auto& c : split_list(choices)) cs.push_back(std::stoull(c));
    auto run = run_driven(
        tm, input,
        [&](std::size_t i) -> std::uint64_t {
          if (choices.empty()) return 1;
          if (i >= cs.size()) throw SpecError("choice sequence shorter than the run");
          return cs[i];
        },
        budget);
    auto rep = meter(tm, run);
    j["accepted"] = run.accepted;
    j["report"] = to_json(rep);
    j["final"] = render_configuration(tm, run.configs.back());
    out << j.dump(2) << "\n";
    return verdict_exit(run.accepted);
  }
  if (mode == "exact") {
    j["probability"] = to_string(exact_accept_probability(tm, input, budget));
  } else if (mode == "mc") {
    auto est = mc_accept_probability(tm, input, trials, g.seed, budget);
    j["estimate"] = est.estimate;
    j["half_width"] = est.half_width;
    j["accepted"] = est.accepted;
    j["trials"] = est.trials;
  } else {
    throw SpecError("mode must be run, exact or mc");
  }
  out << j.dump(2) << "\n";
  return kAccept;
}

inline std::vector<std::string> lm_choices(const TableNlm& spec, const std::string& choices, std::size_t fill) {
  auto cs = split_list(choices);
  if (cs.empty()) cs.assign(fill, spec.choices.front());
  return cs;
}

inline int run_lm_command(const Globals& g, const std::string& spec_path, const std::string& input,
                          const std::string& choices, const std::string& mode, std::ostream& out) {
  auto file = parse_table_nlm(read_file(spec_path), spec_path);
  const auto& spec = file->spec;
  auto v = split_list(input);
  const std::uint64_t budget = g.budget.value_or(spec.default_budget());
  nlohmann::json j{{"input", v}, {"mode", mode}};
  if (mode == "exact") {
    const std::size_t ell = max_run_length(spec, v, budget);
    j["recursive"] = to_string(accept_probability_recursive(spec, v, budget));
    j["enumerated"] = to_string(accept_probability(spec, v, ell > 0 ? ell - 1 : 0));
    out << j.dump(2) << "\n";
    return kAccept;
  }
  if (mode != "run") throw SpecError("mode must be run or exact");
  auto run = run_with_choices(spec, v, lm_choices(spec, choices, budget), budget);
  nlohmann::json steps = nlohmann::json::array();
  for (std::size_t i = 0; i < run.configs.size(); ++i) {
    nlohmann::json s;
    s["state"] = spec.state_name(run.configs[i].state);
    s["heads"] = run.configs[i].heads;
    s["dirs"] = run.configs[i].dirs;
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : run.configs[i].local_cells()) cells.push_back(render_cell(spec, c));
    s["cells"] = cells;
    if (i < run.moves.size()) s["moves"] = run.moves[i];
    steps.push_back(s);
  }
  j["steps"] = steps;
  j["accepted"] = run.accepted;
  j["scans"] = run.scans();
  j["reversals"] = run.reversals();
  j["max_total_list_length"] = run.max_total_list_length();
  j["max_cell_size"] = run.max_cell_size();
  out << j.dump(2) << "\n";
  return verdict_exit(run.accepted);
}

inline int skeleton_command(const Globals& g, const std::string& spec_path, const std::string& input,
                            const std::string& choices, std::ostream& out) {
  auto file = parse_table_nlm(read_file(spec_path), spec_path);
  const auto& spec = file->spec;
  auto v = split_list(input);
  const std::uint64_t budget = g.budget.value_or(spec.default_budget());
  auto run = run_with_choices(spec, v, lm_choices(spec, choices, budget), budget);
  out << skel_of_run(spec, run, v).canonical();
  return kAccept;
}

// ---------------------------------------------------------------------------

inline int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"scanlab: reversal-metered machines, list machines and streaming checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--budget", g.budget, "step budget (watchdog)");
  app.add_option("--threads", g.threads, "worker threads for experiment grids")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output file (default: standard output)");
  app.add_option("--fixtures", g.fixtures, "fixture directory");
  app.add_flag("--timing", g.timing, "add wall-clock column to experiment CSV");

  std::function<int()> action;

  // gen
  std::string problem, kind;
  std::uint64_t gm = 0;
  std::optional<std::uint64_t> gn;
  auto* gen = app.add_subcommand("gen", "generate an instance file");
  gen->add_option("--problem", problem)->required()->check(CLI::IsMember({"check-phi", "mset"}));
  gen->add_option("--m", gm)->required();
  gen->add_option("--n", gn);
  gen->add_option("--kind", kind)->required()->check(CLI::IsMember({"yes", "no", "equal", "distinct"}));
  gen->callback([&] {
    action = [&] {
      Instance x;
      if (problem == "check-phi") {
        if (gn && *gn != gm * gm * gm) throw SpecError("check-phi uses n = m^3");
        x = gen_check_phi(gm, parse_kind(kind), g.seed);
      } else {
        if (!gn) throw SpecError("mset needs --n");
        x = gen_random_mset_instance(gm, *gn, parse_kind(kind), g.seed);
      }
      Output o(g.out, out);
      o.stream() << encode(x);
      return int{kAccept};
    };
  });

  // msetcheck
  std::string in_path;
  std::uint64_t trials = 1, mc_trials = 1000;
  auto* msetcheck = app.add_subcommand("msetcheck", "randomized two-scan multiset equality check");
  msetcheck->add_option("--in", in_path)->required();
  msetcheck->add_option("--trials", trials)->check(CLI::PositiveNumber);
  msetcheck->callback([&] {
    action = [&] {
      auto x = parse_instance(read_file(in_path));
      std::uint64_t acc = 0;
      nlohmann::json first;
      for (std::uint64_t t = 0; t < trials; ++t) {
        auto v = fingerprint_msetequality(x, trials == 1 ? g.seed : derive_seed(g.seed, t));
        acc += v.accepted;
        if (t == 0) first = verdict_json(v);
      }
      // Equal multisets are never rejected, so one rejection settles it.
      const bool accepted = acc == trials;
      nlohmann::json j{{"accepted", accepted}, {"accepted_trials", acc}, {"trials", trials}, {"first", first}};
      Output o(g.out, out);
      o.stream() << j.dump(2) << "\n";
      return verdict_exit(accepted);
    };
  });

  // sort
  std::string report_path;
  auto* sort = app.add_subcommand("sort", "metered tape merge sort of a value list");
  sort->add_option("--in", in_path)->required();
  sort->add_option("--report", report_path);
  sort->callback([&] {
    action = [&] {
      auto res = sort_tapes(parse_value_list(read_file(in_path)));
      if (!report_path.empty()) {
        auto j = to_json(res.report);
        j["passes"] = res.passes;
        write_file(report_path, j.dump(2) + "\n");
      }
      Output o(g.out, out);
      o.stream() << encode_value_list(res.sorted) << "\n";
      return int{kAccept};
    };
  });

  // deciders
  for (const char* name : {"checksort", "seteq", "mseteq"}) {
    auto* sc = app.add_subcommand(name, std::string("decide ") + name + " by sorting");
    sc->add_option("--in", in_path)->required();
    std::string n = name;
    sc->callback([&, n] {
      action = [&, n] {
        auto x = parse_instance(read_file(in_path));
        Verdict v = n == "checksort" ? decide_checksort(x) : n == "seteq" ? decide_setequality(x)
                                                                          : decide_msetequality_det(x);
        Output o(g.out, out);
        o.stream() << verdict_json(v).dump(2) << "\n";
        return verdict_exit(v.accepted);
      };
    });
  }

  // reduce-short
  auto* reduce = app.add_subcommand("reduce-short", "map a CHECK-phi instance to a short-item instance");
  reduce->add_option("--in", in_path)->required();
  reduce->callback([&] {
    action = [&] {
      auto y = short_reduction_f(parse_instance(read_file(in_path)));
      Output o(g.out, out);
      o.stream() << encode(y);
      return int{kAccept};
    };
  });

  // run-tm
  std::string spec_path, input, choices, tm_mode = "run", lm_mode = "run", sim_mode = "exact";
  auto* run_tm = app.add_subcommand("run-tm", "run a Turing machine spec");
  run_tm->add_option("--spec", spec_path)->required();
  run_tm->add_option("--input", input, "input word");
  run_tm->add_option("--choices", choices, "comma-separated choice numbers (run mode)");
  run_tm->add_option("--mode", tm_mode, "run | exact | mc")->capture_default_str();
  run_tm->add_option("--trials", mc_trials)->check(CLI::PositiveNumber);
  run_tm->callback([&] {
    action = [&] {
      Output o(g.out, out);
      return run_tm_command(g, spec_path, input, choices, tm_mode, mc_trials, o.stream());
    };
  });

  // run-lm
  auto* run_lm = app.add_subcommand("run-lm", "run a list machine fixture");
  run_lm->add_option("--spec", spec_path)->required();
  run_lm->add_option("--input", input, "comma-separated input values")->required();
  run_lm->add_option("--choices", choices, "comma-separated choices (default: first choice throughout)");
  run_lm->add_option("--mode", lm_mode, "run | exact")->capture_default_str();
  run_lm->callback([&] {
    action = [&] {
      Output o(g.out, out);
      return run_lm_command(g, spec_path, input, choices, lm_mode, o.stream());
    };
  });

  // simulate
  std::uint64_t sm = 2, sn = 2;
  auto* simulate = app.add_subcommand("simulate", "derive a list machine from a TM and compare acceptance");
  simulate->add_option("--tm", spec_path)->required();
  simulate->add_option("--m", sm);
  simulate->add_option("--n", sn);
  simulate->add_option("--input", input, "comma-separated items (default: all small inputs)");
  simulate->add_option("--mode", sim_mode, "exact | mc")->capture_default_str();
  simulate->add_option("--trials", mc_trials)->check(CLI::PositiveNumber);
  simulate->add_option("--report", report_path);
  simulate->callback([&] {
    action = [&] {
      Output o(g.out, out);
      return run_simulate(g, spec_path, sm, sn, input, sim_mode, mc_trials, report_path, o.stream());
    };
  });

  // skeleton
  auto* skel = app.add_subcommand("skeleton", "print the skeleton of a list machine run");
  skel->add_option("--spec", spec_path)->required();
  skel->add_option("--input", input)->required();
  skel->add_option("--choices", choices);
  skel->callback([&] {
    action = [&] {
      Output o(g.out, out);
      return skeleton_command(g, spec_path, input, choices, o.stream());
    };
  });

  // experiment
  std::string exp_name, m_grid;
  ExperimentOptions eo;
  std::optional<std::uint64_t> en;
  std::vector<std::string> tm_files;
  auto* exp = app.add_subcommand("experiment", "run a verification sweep and emit CSV");
  exp->add_option("name", exp_name)->required()->check(CLI::IsMember(experiment_names()));
  exp->add_option("--m", m_grid, "grid: 4..256, 4,8,16 or a single value");
  exp->add_option("--n", en);
  exp->add_option("--instances", eo.instances);
  exp->add_option("--seeds", eo.seeds);
  exp->add_option("--samples", eo.samples);
  exp->add_option("--random-machines", eo.random_machines);
  exp->add_option("--tm", tm_files, "TM fixture (repeatable; simeq)");
  exp->callback([&] {
    action = [&] {
      eo.seed = g.seed;
      eo.threads = g.threads;
      if (g.budget) eo.budget = *g.budget;
      eo.fixtures = g.fixtures;
      eo.n = en;
      eo.tm_files = tm_files;
      if (!m_grid.empty()) eo.m_values = parse_grid(m_grid);
      auto rows = run_experiment(exp_name, eo);
      Output o(g.out, out);
      o.stream() << to_csv(rows, g.timing);
      return verdict_exit(all_passed(rows));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kAccept;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kAccept;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  try {
    return action();
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace scanlab::cli
