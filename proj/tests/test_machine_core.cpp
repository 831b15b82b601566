#include "scanlab/experiment.hpp"
#include "scanlab/tm.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <map>

using namespace scanlab;

namespace {

TmSpec fixture(const std::string& name) {
  return parse_tm_spec(read_file(std::string(SCANLAB_FIXTURE_DIR) + "/tm/" + name + ".tm"));
}

const char* kMinimal = R"(tapes 1 0
start q0
final q0
accept q0
)";

// Plain recursion over Next without memoization or choice alphabets.
Rational naive_probability(const TmSpec& spec, const TmConfiguration& c, int depth = 0) {
  if (depth > 10000) throw std::runtime_error("oracle depth");
  if (spec.is_final(c.state)) return spec.is_accepting(c.state) ? Rational(1) : Rational(0);
  auto next = next_configurations(spec, c);
  Rational sum = 0;
  for (const auto& n : next) sum += naive_probability(spec, n, depth + 1);
  return sum / static_cast<long long>(next.size());
}

std::vector<std::string> small_words() {
  std::vector<std::string> out{"", "1#", "0#", "10#01#", "11#11#", "01#00#", "111#"};
  return out;
}

}  // namespace

TEST(ParseTmSpec, MinimalAcceptingMachine) {
  auto spec = parse_tm_spec(kMinimal);
  EXPECT_EQ(spec.states.size(), 1u);
  EXPECT_TRUE(spec.is_accepting(spec.state_id("q0")));
  EXPECT_TRUE(spec.transitions.empty());
  EXPECT_EQ(exact_accept_probability(spec, "", 10), Rational(1));
}

TEST(ParseTmSpec, TransitionFromFinalStateIsRejected) {
  try {
    parse_tm_spec(std::string(kMinimal) + "q0 _ -> q0 _ N\n");
    FAIL() << "expected an error";
  } catch (const SpecError& e) {
    EXPECT_NE(std::string(e.what()).find("transition from final state"), std::string::npos) << e.what();
  }
}

TEST(ParseTmSpec, DuplicateTransitionsGiveBranching) {
  auto spec = fixture("coin");
  EXPECT_EQ(spec.max_branching(), 2u);
  EXPECT_EQ(spec.choice_alphabet_size(), 2u);
  EXPECT_EQ(fixture("branch3").choice_alphabet_size(), 6u);
  EXPECT_EQ(fixture("first_is_one").choice_alphabet_size(), 1u);
}

TEST(ParseTmSpec, SyntaxErrorsCarryLineNumbers) {
  try {
    parse_tm_spec("tapes 1 0\nstart s\nfinal a\naccept a\ns 0 -> a 0 Q\n");
    FAIL();
  } catch (const SpecError& e) {
    EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos) << e.what();
  }
  const std::string declared = "tapes 1 0\nstates s a\nalphabet 0 1 # _\nstart s\nfinal a\naccept a\n";
  EXPECT_NO_THROW(parse_tm_spec(declared + "s 0 -> a 0 N\n"));
  EXPECT_THROW(parse_tm_spec(declared + "s 0 -> nowhere 0 N\n"), SpecError);
  EXPECT_THROW(parse_tm_spec(declared + "s x -> a 0 N\n"), SpecError);
}

TEST(ParseTmSpec, TransitionOrderIsPreserved) {
  auto spec = fixture("coin");
  ASSERT_EQ(spec.transitions.size(), 8u);
  EXPECT_EQ(spec.states[static_cast<std::size_t>(spec.transitions[0].to)], "acc");
  EXPECT_EQ(spec.states[static_cast<std::size_t>(spec.transitions[4].to)], "rej");
}

TEST(ValidateNormalized, Examples) {
  const std::string head = "tapes 1 2\nstart s\nfinal a\naccept a\n";
  EXPECT_TRUE(validate_normalized(parse_tm_spec(head + "s 0 _ _ -> a 0 _ _ R N N\n")));
  EXPECT_FALSE(validate_normalized(parse_tm_spec(head + "s 0 _ _ -> a 0 _ _ R L N\n")));
  EXPECT_TRUE(validate_normalized(parse_tm_spec(head)));
}

TEST(NextConfigurations, DeterministicAndBranching) {
  auto det = fixture("first_is_one");
  EXPECT_EQ(next_configurations(det, initial_configuration(det, "1#")).size(), 1u);
  auto coin = fixture("coin");
  auto next = next_configurations(coin, initial_configuration(coin, "1#"));
  ASSERT_EQ(next.size(), 2u);
  EXPECT_EQ(coin.states[static_cast<std::size_t>(next[0].state)], "acc");
  EXPECT_EQ(coin.states[static_cast<std::size_t>(next[1].state)], "rej");
}

TEST(NextConfigurations, FinalConfigurationHasNoSuccessors) {
  auto spec = parse_tm_spec(kMinimal);
  try {
    next_configurations(spec, initial_configuration(spec, ""));
    FAIL();
  } catch (const SpecError& e) {
    EXPECT_STREQ(e.what(), "no successors of final configuration");
  }
}

TEST(NextConfigurations, HeadUnderflowDropsTheTransition) {
  auto spec = fixture("underflow");
  auto next = next_configurations(spec, initial_configuration(spec, "1#"));
  ASSERT_EQ(next.size(), 1u);
  EXPECT_EQ(spec.states[static_cast<std::size_t>(next[0].state)], "rej");
  EXPECT_EQ(exact_accept_probability(spec, "1#", 100), Rational(0));

  auto only_left = parse_tm_spec("tapes 1 0\nstart s\nfinal a\naccept a\ns 1 -> a 1 L\n");
  try {
    run_with_choices(only_left, "1#", {1}, 10);
    FAIL();
  } catch (const SpecError& e) {
    EXPECT_NE(std::string(e.what()).find("invalid machine: run not finite"), std::string::npos);
  }
}

TEST(StepWithChoice, UniqueSuccessorForAnyChoice) {
  auto spec = fixture("first_is_one");
  auto c = initial_configuration(spec, "1#");
  auto expect = next_configurations(spec, c)[0];
  for (std::uint64_t ch = 1; ch <= 5; ++ch) EXPECT_EQ(step_with_choice(spec, c, ch), expect);
}

TEST(StepWithChoice, ChoicesPartitionEvenly) {
  for (const char* name : {"coin", "branch3", "double_coin"}) {
    auto spec = fixture(name);
    const auto b = spec.choice_alphabet_size();
    auto c = initial_configuration(spec, "1#");
    auto next = next_configurations(spec, c);
    // Identical successors are pooled: a configuration listed k times gets k shares.
    std::vector<std::uint64_t> hits(next.size(), 0), multiplicity(next.size(), 0);
    for (std::uint64_t ch = 1; ch <= b; ++ch) {
      auto s = step_with_choice(spec, c, ch);
      for (std::size_t i = 0; i < next.size(); ++i) hits[i] += next[i] == s;
    }
    for (std::size_t i = 0; i < next.size(); ++i)
      for (const auto& o : next) multiplicity[i] += o == next[i];
    for (std::size_t i = 0; i < next.size(); ++i)
      EXPECT_EQ(hits[i], b / next.size() * multiplicity[i]) << name << " successor " << i;
  }
  // |Next|=3 over C_T of size 6: two choices per successor.
  auto spec = fixture("branch3");
  EXPECT_EQ(spec.choice_alphabet_size(), 6u);
}

TEST(StepWithChoice, TwoWayBranchSplitsChoices) {
  auto spec = fixture("coin");
  auto c = initial_configuration(spec, "0#");
  EXPECT_NE(step_with_choice(spec, c, 1), step_with_choice(spec, c, 2));
  EXPECT_EQ(step_with_choice(spec, c, 1), step_with_choice(spec, c, 3));
}

TEST(RunWithChoices, FirstIsOne) {
  auto spec = fixture("first_is_one");
  auto yes = run_with_choices(spec, "1#", {1}, 100);
  EXPECT_TRUE(yes.accepted);
  EXPECT_EQ(meter(spec, yes).scans, 1u);
  EXPECT_FALSE(run_with_choices(spec, "0#", {1}, 100).accepted);
}

TEST(RunWithChoices, DeterministicMachineIgnoresChoices) {
  auto spec = fixture("forward_scan");
  auto a = run_with_choices(spec, "101#1#", std::vector<std::uint64_t>(20, 1), 100);
  auto b = run_with_choices(spec, "101#1#", std::vector<std::uint64_t>(20, 7), 100);
  EXPECT_EQ(a.configs, b.configs);
  EXPECT_TRUE(a.accepted);
}

TEST(RunWithChoices, WatchdogAndShortSequences) {
  auto spec = fixture("forward_scan");
  try {
    run_with_choices(spec, "1111#", std::vector<std::uint64_t>(20, 1), 3);
    FAIL();
  } catch (const BudgetExceeded& e) {
    EXPECT_STREQ(e.what(), "watchdog: run exceeds budget");
  }
  EXPECT_THROW(run_with_choices(spec, "1111#", {1}, 100), SpecError);
}

TEST(RunWithChoices, RunsAreWellFormed) {
  for (const char* name : {"coin", "scan_coin", "double_coin", "reverse_check", "internal_parity", "forward_scan"}) {
    auto spec = fixture(name);
    for (const auto& w : small_words()) {
      Rng rng(7, w.size());
      auto run = run_driven(spec, w, [&](std::size_t) { return rng.uniform(1, spec.choice_alphabet_size()); }, 1000);
      ASSERT_TRUE(spec.is_final(run.configs.back().state));
      for (std::size_t i = 0; i + 1 < run.configs.size(); ++i) {
        ASSERT_FALSE(spec.is_final(run.configs[i].state));
        auto next = next_configurations(spec, run.configs[i]);
        EXPECT_NE(std::find(next.begin(), next.end(), run.configs[i + 1]), next.end()) << name << " step " << i;
      }
    }
  }
}

TEST(ExactProbability, AgainstNaiveRecursion) {
  struct Case {
    const char* name;
    std::string input;
    Rational expect;
  };
  for (const auto& c : std::vector<Case>{{"first_is_one", "1#", 1},
                                         {"first_is_one", "0#", 0},
                                         {"coin", "1#", Rational(1, 2)},
                                         {"branch3", "1#", Rational(1, 3)},
                                         {"double_coin", "01#", Rational(1, 4)},
                                         {"scan_coin", "11#1#", Rational(1, 8)}}) {
    auto spec = fixture(c.name);
    auto oracle = naive_probability(spec, initial_configuration(spec, c.input));
    EXPECT_EQ(oracle, c.expect) << c.name;
    EXPECT_EQ(exact_accept_probability(spec, c.input, 1000), oracle) << c.name;
  }
}

TEST(ExactProbability, BudgetExhaustion) {
  auto spec = fixture("forward_scan");
  EXPECT_THROW(exact_accept_probability(spec, "1111#1111#", 4), BudgetExceeded);
}

TEST(ChoiceEnumeration, Examples) {
  auto coin = fixture("coin");
  EXPECT_EQ(choice_enumeration_probability(coin, "1#", 2), Rational(1, 2));
  EXPECT_EQ(choice_enumeration_probability(coin, "1#", 2), exact_accept_probability(coin, "1#", 100));
  auto det = fixture("forward_scan");
  EXPECT_EQ(choice_enumeration_probability(det, "1#", 10), Rational(1));
  EXPECT_EQ(choice_enumeration_probability(fixture("double_coin"), "1#", 2), Rational(1, 4));
}

TEST(ChoiceEnumeration, LengthTooSmallAndCap) {
  EXPECT_THROW(choice_enumeration_probability(fixture("forward_scan"), "111#", 2), SpecError);
  EXPECT_THROW(choice_enumeration_probability(fixture("branch3"), "1#", 30), Refused);
}

TEST(ChoiceEnumeration, MatchesExactOnAllFixtures) {
  for (const char* name : {"first_is_one", "forward_scan", "det_compare", "reverse_check", "coin", "double_coin",
                           "branch3", "scan_coin", "underflow", "internal_parity"}) {
    auto spec = fixture(name);
    for (const auto& w : small_words()) {
      auto ex = exact_accept_probability_ex(spec, w, 10000);
      const std::size_t ell = ex.max_run_length - 1;
      if (sat_pow(spec.choice_alphabet_size(), ell) > (1u << 20)) continue;
      EXPECT_EQ(choice_enumeration_probability(spec, w, ell), ex.probability) << name << " on '" << w << "'";
    }
  }
}

TEST(MonteCarlo, DeterministicAcceptingMachine) {
  auto est = mc_accept_probability(fixture("first_is_one"), "1#", 50, 99, 100);
  EXPECT_EQ(est.estimate, 1.0);
  EXPECT_EQ(est.half_width, 0.0);
}

TEST(MonteCarlo, CoinWithinToleranceAndReproducible) {
  auto spec = fixture("coin");
  auto a = mc_accept_probability(spec, "1#", 10000, 5, 100);
  EXPECT_NEAR(a.estimate, 0.5, 0.02);
  auto b = mc_accept_probability(spec, "1#", 10000, 5, 100);
  EXPECT_EQ(a.accepted, b.accepted);
}

TEST(MonteCarlo, ThreeSigmaOnFixtures) {
  for (const char* name : {"double_coin", "branch3", "scan_coin"}) {
    auto spec = fixture(name);
    const double p = to_double(exact_accept_probability(spec, "11#", 1000));
    auto est = mc_accept_probability(spec, "11#", 10000, 11, 1000);
    const double sigma = std::sqrt(p * (1 - p) / 10000.0);
    EXPECT_LE(std::abs(est.estimate - p), 3 * sigma + 1e-12) << name;
  }
}

TEST(Meter, ForwardScanIsOneScan) {
  auto spec = fixture("forward_scan");
  auto r = meter(spec, run_with_choices(spec, "101#1#", std::vector<std::uint64_t>(20, 1), 100));
  EXPECT_EQ(r.scans, 1u);
  EXPECT_EQ(r.reversals, std::vector<std::uint64_t>{0});
  EXPECT_EQ(r.steps, 8u);
  EXPECT_EQ(r.external_space, 7u);
}

TEST(Meter, ForwardThenBackward) {
  auto spec = fixture("reverse_check");
  auto r = meter(spec, run_with_choices(spec, "10#01#", std::vector<std::uint64_t>(20, 1), 100));
  EXPECT_EQ(r.reversals, std::vector<std::uint64_t>{1});
  EXPECT_EQ(r.scans, 2u);
  EXPECT_EQ(r.scans, 1 + r.reversals[0]);
}

TEST(Meter, IdleInternalTapeUsesOneCell) {
  auto spec = fixture("internal_parity");
  auto run = run_with_choices(spec, "0#0#", std::vector<std::uint64_t>(20, 1), 100);
  EXPECT_EQ(meter(spec, run).internal_space, spec.u);
  auto run2 = run_with_choices(spec, "11#1#", std::vector<std::uint64_t>(20, 1), 100);
  EXPECT_TRUE(run2.accepted);
  EXPECT_EQ(meter(spec, run2).internal_space, 1u);
}

TEST(Meter, ScansUnchangedByStationarySteps) {
  auto spec = fixture("reverse_check");
  auto run = run_with_choices(spec, "10#01#", std::vector<std::uint64_t>(20, 1), 100);
  auto before = meter(spec, run).scans;
  for (int i = 0; i < 3; ++i) run.configs.push_back(run.configs.back());
  EXPECT_EQ(meter(spec, run).scans, before);
}

TEST(Meter, JsonKeys) {
  auto spec = fixture("reverse_check");
  auto j = to_json(meter(spec, run_with_choices(spec, "1#", std::vector<std::uint64_t>(20, 1), 100)));
  for (const char* key : {"reversals", "scans", "internal_space", "external_space", "steps", "accepted"})
    EXPECT_TRUE(j.contains(key)) << key;
}

TEST(Budget, DefaultFromDeclaredBounds) {
  auto spec = parse_tm_spec(std::string(kMinimal));
  EXPECT_EQ(default_tm_budget(spec, 5), 1'000'000u);
  spec.declared_bounds = std::make_pair(std::uint64_t{1}, std::uint64_t{0});
  EXPECT_EQ(default_tm_budget(spec, 5), 5u * 256u);
  spec.declared_bounds = std::make_pair(std::uint64_t{10}, std::uint64_t{10});
  EXPECT_EQ(default_tm_budget(spec, 5), 10'000'000u);
}
