// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "scanlab.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

using namespace scanlab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool cond, const std::string& what) {
    if (!cond && pass) detail << "first failure: " << what << "; ";
    pass = pass && cond;
  }
};

TmSpec tm_fixture(const std::string& name) {
  return parse_tm_spec(read_file(std::string(SCANLAB_FIXTURE_DIR) + "/tm/" + name + ".tm"));
}

std::vector<std::string> tm_fixture_names() {
  std::vector<std::string> out;
  for (const auto& p : sorted_files(std::string(SCANLAB_FIXTURE_DIR) + "/tm", ".tm"))
    out.push_back(std::filesystem::path(p).stem().string());
  return out;
}

bool rows_ok(const std::vector<ExperimentRow>& rows, std::size_t& passed) {
  passed = 0;
  for (const auto& r : rows) {
    if (r.status == ExperimentRow::Status::fail) return false;
    passed += r.status == ExperimentRow::Status::pass;
  }
  return true;
}

// Longest monotone subsequence by subset enumeration.
std::size_t sortedness_by_subsets(const Permutation& p) {
  const std::size_t m = p.size();
  std::size_t best = 0;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1) s.push_back(p[i]);
    if (s.size() <= best) continue;
    bool up = std::is_sorted(s.begin(), s.end()), down = std::is_sorted(s.rbegin(), s.rend());
    if (up || down) best = s.size();
  }
  return best;
}

// 1. Equal multisets are always accepted.
Outcome fingerprint_completeness() {
  Outcome o;
  auto t0 = Clock::now();
  std::size_t runs = 0, accepted = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto x = gen_random_mset_instance(16, 32, InstanceKind::equal, derive_seed(101, i));
    for (std::uint64_t s = 0; s < 5; ++s) {
      ++runs;
      accepted += fingerprint_msetequality(x, derive_seed(202 + i, s)).accepted;
    }
  }
  const double secs = seconds_since(t0);
  o.check(accepted == runs, "an equal instance was rejected");
  o.check(secs < 10, "runtime over 10 s");
  o.detail << accepted << "/" << runs << " accepted in " << fmt_double(secs) << " s";
  return o;
}

// 2. Distinct multisets: per-instance acceptance frequency at most 0.6.
Outcome fingerprint_soundness() {
  Outcome o;
  auto t0 = Clock::now();
  ExperimentOptions opt;
  opt.seed = 303;
  auto rows = run_experiment("fingerprint-soundness", opt);
  const double secs = seconds_since(t0);
  double worst = 0;
  for (const auto& r : rows) worst = std::max(worst, std::stod(r.measured));
  std::size_t passed = 0;
  o.check(rows_ok(rows, passed) && passed == 50 && rows.size() == 50, "an instance exceeded 0.6");
  o.check(secs < 60, "runtime over 60 s");
  o.detail << "50 instances x 1000 seeds, max frequency " << fmt_double(worst) << " in " << fmt_double(secs) << " s";
  return o;
}

// 3. Two scans, no writes, internal space <= c * log2 N with one c.
Outcome fingerprint_resources() {
  Outcome o;
  const double c = 32;  // bits per log2 N
  double lo = 1e18, hi = 0, worst = 0;
  for (auto [m, n] : std::vector<std::pair<std::size_t, std::size_t>>{{4, 8}, {8, 16}, {16, 32}, {32, 64}, {64, 128}}) {
    auto x = gen_random_mset_instance(m, n, InstanceKind::distinct, m);
    const double N = static_cast<double>(encode(x).size());
    lo = std::min(lo, N), hi = std::max(hi, N);
    for (std::uint64_t s = 0; s < 5; ++s) {
      auto v = fingerprint_msetequality(x, s);
      o.check(v.report.scans == 2, "scans != 2");
      o.check(v.report.external_writes == 0, "external tape written");
      const double ratio = static_cast<double>(v.report.internal_space) / std::log2(N);
      worst = std::max(worst, ratio);
      o.check(ratio <= c, "internal space above c*log2 N");
    }
  }
  o.check(hi / lo >= 100, "N range under two orders of magnitude");
  o.detail << "N in [" << lo << "," << hi << "], max bits/log2N " << fmt_double(worst) << " <= " << c;
  return o;
}

// 4. Sort output and scan bound for m = 4..256.
Outcome sort_reversals() {
  Outcome o;
  std::uint64_t prev = 0;
  std::ostringstream scans;
  Rng rng(404);
  for (std::size_t m = 4; m <= 256; m *= 2) {
    std::vector<std::string> v(m);
    for (auto& s : v) s = random_bits(rng, 16);
    auto want = v;
    std::sort(want.begin(), want.end());
    auto r = sort_tapes(v);
    o.check(r.sorted == want, "output differs from std::sort at m=" + std::to_string(m));
    o.check(r.report.scans <= 4 * ceil_log2(m) + 4, "scan bound at m=" + std::to_string(m));
    if (prev) o.check(r.report.scans <= prev + 4 && r.report.scans >= prev, "scan increment at m=" + std::to_string(m));
    prev = r.report.scans;
    scans << (m == 4 ? "" : ",") << r.report.scans;
  }
  o.detail << "scans " << scans.str();
  return o;
}

// 5. Deciders against the definition-level oracle.
Outcome decider_agreement() {
  Outcome o;
  std::vector<Instance> xs;
  Rng rng(505);
  for (int i = 0; i < 500; ++i) {
    std::size_t m = rng.uniform(1, 10), n = rng.uniform(0, 4);
    std::vector<std::string> v(m);
    for (auto& s : v) s = random_bits(rng, n);
    auto vp = v;
    std::shuffle(vp.begin(), vp.end(), rng);
    switch (rng.uniform(0, 3)) {
      case 0: break;
      case 1: vp[rng.uniform(0, m - 1)] = random_bits(rng, n); break;
      case 2: std::sort(vp.begin(), vp.end()); break;
      default: vp = v;
    }
    xs.push_back(make_instance(v, vp));
  }
  // Duplicates, empty strings and single-bit differences.
  for (const char* text : {"01#01#10#01#10#10#", "01#01#10#01#10#01#", "##", "#1##1#", "#0##1#", "#0#0##",
                           "0101#0101#0101#0100#", "0#1#1#0#", "1#0#0#1#", "11#11#11#11#11#11#", "000#00#00#000#",
                           "10#01#01#10#", "10#01#10#01#", "1#1#0#1#0#1#"})
    xs.push_back(parse_instance(text));
  std::size_t disagreements = 0;
  for (const auto& x : xs) {
    disagreements += decide_checksort(x).accepted != brute_force_decide(Problem::checksort, x);
    disagreements += decide_setequality(x).accepted != brute_force_decide(Problem::set, x);
    disagreements += decide_msetequality_det(x).accepted != brute_force_decide(Problem::multiset, x);
  }
  o.check(disagreements == 0, std::to_string(disagreements) + " disagreements");
  o.detail << xs.size() << " instances x 3 deciders, " << disagreements << " disagreements";
  return o;
}

// 6. Derived list machine matches the TM exactly on tiny inputs.
Outcome simulation_equality() {
  Outcome o;
  auto t0 = Clock::now();
  ExperimentOptions opt;
  auto rows = run_experiment("simeq", opt);
  const double secs = seconds_since(t0);
  std::size_t passed = 0;
  o.check(rows_ok(rows, passed) && passed == rows.size(), "a row failed or was skipped");
  o.check(rows.size() == 3 * 16, "expected 48 rows");
  o.check(secs < 60, "runtime over 60 s");
  o.detail << passed << "/" << rows.size() << " exact equalities with reversal bound in " << fmt_double(secs) << " s";
  return o;
}

// 7. Exact recursion equals choice-sequence enumeration on all fixtures.
Outcome probability_semantics() {
  Outcome o;
  std::size_t tm_checked = 0, lm_checked = 0;
  for (const auto& name : tm_fixture_names()) {
    auto tm = tm_fixture(name);
    std::vector<std::string> words{"", "0#", "1#", "10#", "01#11#", "11#01#", "10#01#"};
    if (tm.t > 1) words = {"0#0#", "10#01#", "10#10#", "1#1#"};
    for (const auto& w : words) {
      auto ex = exact_accept_probability_ex(tm, w, 100000);
      const std::size_t ell = ex.max_run_length > 0 ? ex.max_run_length - 1 : 0;
      auto en = choice_enumeration_probability(tm, w, ell);
      o.check(en == ex.probability, "TM " + name + " on " + w);
      ++tm_checked;
    }
  }
  ExperimentOptions opt;
  opt.random_machines = 3;
  for (const auto& lm : lab_machines(opt, 3)) {
    Rng rng(707, std::hash<std::string>{}(lm.name));
    auto inputs = sample_inputs(lm, 4, rng);
    const std::size_t ell = choice_length(lm.spec, inputs, opt.budget);
    for (const auto& v : inputs) {
      o.check(accept_probability_recursive(lm.spec, v, opt.budget) == accept_probability(lm.spec, v, ell),
              "NLM " + lm.name);
      ++lm_checked;
    }
  }
  o.detail << tm_checked << " TM and " << lm_checked << " NLM probability pairs equal";
  return o;
}

// 8. Structural bounds on list machine runs.
Outcome structural_bounds() {
  Outcome o;
  ExperimentOptions opt;
  auto rows = run_experiment("lemma22", opt);
  std::size_t passed = 0;
  o.check(rows_ok(rows, passed) && passed == rows.size(), "lemma22 sweep row failed");
  // Derived machines assert the bounds on every completed run.
  std::size_t derived_runs = 0;
  for (const auto& name : {"first_is_one", "coin", "double_coin", "det_compare", "reverse_check", "scan_coin"}) {
    auto tm = tm_fixture(name);
    auto d = derive_nlm(tm, 2, 2);
    for (const auto& v : all_small_inputs(tm, 2, 2))
      enumerate_runs(d.spec, v, 100000, [&](const LmRun& run, const Rational&) {
        o.check(check_structural_bounds(run, d.spec, run.scans()).ok(), std::string("derived ") + name);
        ++derived_runs;
      });
  }
  // The always-on assertion fires on a run that breaks the list-length bound.
  auto file = parse_table_nlm(read_file(std::string(SCANLAB_FIXTURE_DIR) + "/nlm/copy_scan.nlm"));
  auto run = run_with_choices(file->spec, {"1", "2", "3", "4"}, std::vector<std::string>(64, file->spec.choices[0]));
  auto& last = run.configs.back().lists[0];
  const auto bound = check_structural_bounds(run, file->spec, run.scans()).list_bound;
  while (run.configs.back().total_list_length() <= bound) last.push_back(last.back());
  bool fired = false;
  try {
    assert_structural_bounds(run, file->spec);
  } catch (const InvariantViolation&) {
    fired = true;
  }
  o.check(fired, "assertion did not fire on an oversized run");
  o.detail << rows.size() << " sweep rows, " << derived_runs << " derived runs within bounds; assertion armed";
  return o;
}

// 9. Permutation combinatorics and skeleton counting bounds.
Outcome combinatorics() {
  Outcome o;
  Rng rng(909);
  for (int i = 0; i < 500; ++i) {
    std::size_t m = rng.uniform(1, 12);
    Permutation p = identity_permutation(m);
    std::shuffle(p.begin(), p.end(), rng);
    const std::size_t s = sortedness(p);
    o.check(s == sortedness_by_subsets(p), "sortedness differs from subset oracle");
    o.check(s * s >= m, "sortedness below ceil(sqrt m)");
  }
  std::ostringstream phis;
  for (std::size_t m : {4u, 16u, 64u, 256u}) {
    const std::size_t s = sortedness(bit_reversal_perm(m));
    o.check(static_cast<double>(s) <= 2 * std::sqrt(static_cast<double>(m)) - 1, "phi sortedness at m=" + std::to_string(m));
    o.check(s * s >= m, "phi sortedness below ceil(sqrt m)");
    phis << (m == 4 ? "" : ",") << s;
  }
  ExperimentOptions opt;
  std::size_t passed = 0, total = 0;
  for (const char* name : {"lemma27", "lemma25", "merge"}) {
    auto rows = run_experiment(name, opt);
    std::size_t p = 0;
    o.check(rows_ok(rows, p) && p == rows.size(), std::string(name) + " row failed or skipped");
    passed += p, total += rows.size();
  }
  auto comp = run_experiment("composition", opt);
  std::size_t applicable = 0, p = 0;
  o.check(rows_ok(comp, p), "composition failure");
  for (const auto& r : comp)
    if (r.n) applicable = std::max<std::size_t>(applicable, *r.n);
  o.check(applicable >= 100, "no machine reached 100 applicable composition trials");
  auto maj = run_experiment("lemma20", opt);
  std::size_t qualifying = 0;
  o.check(rows_ok(maj, qualifying) && qualifying > 0, "majority choice missing");
  o.detail << "phi sortedness " << phis.str() << "; " << passed << "/" << total
           << " count/cover rows; composition " << applicable << " trials; majority " << qualifying << " machines";
  return o;
}

// 10. Short reduction preserves answers with a constant size blow-up.
Outcome reduction() {
  Outcome o;
  std::size_t trials = 0;
  std::vector<double> ratios;
  for (std::size_t m : {4u, 8u}) {
    for (std::uint64_t s = 0; s < 250; ++s) {
      for (auto kind : {InstanceKind::yes, InstanceKind::no}) {
        auto x = gen_check_phi(m, kind, derive_seed(1010 + m, s));
        auto y = short_reduction_f(x);
        o.check(brute_force_decide(Problem::multiset, y) == brute_force_decide(Problem::check_phi, x),
                "answer changed at m=" + std::to_string(m));
        ++trials;
        if (s == 0 && kind == InstanceKind::yes)
          ratios.push_back(static_cast<double>(encode(y).size()) / static_cast<double>(encode(x).size()));
      }
    }
  }
  for (std::size_t m : {2u, 16u}) {
    auto x = gen_check_phi(m, InstanceKind::yes, 1);
    ratios.push_back(static_cast<double>(encode(short_reduction_f(x)).size()) / static_cast<double>(encode(x).size()));
  }
  const double lo = *std::min_element(ratios.begin(), ratios.end()), hi = *std::max_element(ratios.begin(), ratios.end());
  o.check(hi <= 2 * lo, "size ratio outside a factor-2 band");
  o.detail << trials << " instances preserved; |f(v)|/|v| in [" << fmt_double(lo) << "," << fmt_double(hi) << "]";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"fingerprint completeness", fingerprint_completeness},
      {"fingerprint soundness", fingerprint_soundness},
      {"fingerprint resource class", fingerprint_resources},
      {"sorting reversal bound", sort_reversals},
      {"decider correctness", decider_agreement},
      {"simulation equality", simulation_equality},
      {"probability semantics", probability_semantics},
      {"structural bounds", structural_bounds},
      {"combinatorics", combinatorics},
      {"reduction f", reduction},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << o.detail.str()
              << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
