#include "scanlab/deciders.hpp"
#include "scanlab/short_reduction.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>

using namespace scanlab;

namespace {

bool trial_division_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Instance random_instance(Rng& rng, std::size_t m, std::size_t n, bool mostly_equal) {
  std::vector<std::string> v(m), vp;
  for (auto& s : v) s = random_bits(rng, n);
  vp = v;
  std::shuffle(vp.begin(), vp.end(), rng);
  if (!mostly_equal || rng.coin()) vp[rng.uniform(0, m - 1)] = random_bits(rng, n);
  if (rng.uniform(0, 3) == 0) std::sort(vp.begin(), vp.end());
  return make_instance(v, vp);
}

// Fingerprint verdict recomputed from the same parameters with big-integer
// arithmetic: e_i = value(v_i) mod p1, accept iff sum x^e_i agrees mod p2.
bool fingerprint_oracle(const Instance& x, const FingerprintParams& p) {
  auto sum = [&](const std::vector<std::string>& vals) {
    BigInt s = 0;
    for (const auto& v : vals) {
      BigInt e = bits_value(v) % p.p1;
      BigInt t = 1;
      for (BigInt i = 0; i < e; ++i) t = (t * p.x) % p.p2;
      s = (s + t) % p.p2;
    }
    return s;
  };
  return sum(x.v) == sum(x.vprime);
}

}  // namespace

TEST(Primes, MillerRabinMatchesTrialDivision) {
  for (std::uint64_t n = 0; n < 20000; ++n) ASSERT_EQ(is_prime(n), trial_division_prime(n)) << n;
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    std::uint64_t n = rng.uniform(1, std::uint64_t{1} << 40);
    ASSERT_EQ(is_prime(n), trial_division_prime(n)) << n;
  }
  EXPECT_TRUE(is_prime(18446744073709551557ULL));
  EXPECT_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
}

TEST(Primes, ComputeK) {
  EXPECT_EQ(compute_k(2, 4), 160u);
  EXPECT_EQ(compute_k(2, 2), 64u);
  EXPECT_EQ(compute_k(1, 1), 2u);
  for (std::uint64_t m = 1; m <= 6; ++m)
    for (std::uint64_t n = 1; n <= 40; ++n) {
      std::uint64_t base = m * m * m * n, lg = 0;
      while ((std::uint64_t{1} << lg) < base) ++lg;
      EXPECT_EQ(compute_k(m, n), std::max<std::uint64_t>(2, base * lg));
    }
  EXPECT_EQ(compute_k_exact(1u << 20, 1u << 20), (BigInt(1) << 80) * 80);
  EXPECT_THROW(compute_k(1u << 20, 1u << 20), Refused);
}

TEST(Primes, SamplePrimeLeq) {
  Rng a(1);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sample_prime_leq(2, a), 2u);
  Rng rng(11);
  std::map<std::uint64_t, int> freq;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) ++freq[sample_prime_leq(10, rng)];
  ASSERT_EQ(freq.size(), 4u);
  for (std::uint64_t p : {2u, 3u, 5u, 7u}) EXPECT_NEAR(freq[p] / double(trials), 0.25, 0.02) << p;
  Rng r1(3), r2(3);
  EXPECT_EQ(sample_prime_leq(3, r1), sample_prime_leq(3, r2));
  EXPECT_THROW(sample_prime_leq(1, r1), SpecError);
}

TEST(Primes, SmallestPrimeIn) {
  EXPECT_EQ(smallest_prime_in(30, 60), 31u);
  EXPECT_EQ(smallest_prime_in(3, 6), 5u);
  EXPECT_EQ(smallest_prime_in(1, 2), 2u);
  EXPECT_THROW(smallest_prime_in(24, 28), SpecError);
  for (std::uint64_t k = 1; k < 300; ++k) {
    std::uint64_t p = smallest_prime_in(3 * k, 6 * k), q = 3 * k + 1;
    while (!trial_division_prime(q)) ++q;
    EXPECT_EQ(p, q);
  }
}

TEST(Fingerprint, ParameterRanges) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    auto p = choose_fingerprint_params(4, 8, rng);
    EXPECT_EQ(p.k, compute_k(4, 8));
    EXPECT_TRUE(trial_division_prime(p.p1));
    EXPECT_LE(p.p1, p.k);
    EXPECT_TRUE(trial_division_prime(p.p2));
    EXPECT_GT(p.p2, 3 * p.k);
    EXPECT_LE(p.p2, 6 * p.k);
    EXPECT_GE(p.x, 1u);
    EXPECT_LT(p.x, p.p2);
  }
}

TEST(Fingerprint, EqualMultisetsAlwaysAccepted) {
  auto x = make_instance({"01", "10"}, {"10", "01"});
  for (std::uint64_t seed = 0; seed < 200; ++seed) EXPECT_TRUE(fingerprint_msetequality(x, seed).accepted);
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    auto y = gen_random_mset_instance(8, 16, InstanceKind::equal, rng());
    EXPECT_TRUE(fingerprint_msetequality(y, rng()).accepted);
  }
}

TEST(Fingerprint, ValueReducedModP1) {
  EXPECT_EQ(bits_value("1101") % 5, 3);
}

TEST(Fingerprint, MatchesBigIntegerOracle) {
  Rng rng(21);
  for (int i = 0; i < 300; ++i) {
    std::size_t m = rng.uniform(1, 6), n = rng.uniform(1, 12);
    auto x = random_instance(rng, m, n, true);
    std::uint64_t seed = rng();
    auto v = fingerprint_msetequality(x, seed);
    ASSERT_TRUE(v.params.has_value());
    EXPECT_EQ(v.accepted, fingerprint_oracle(x, *v.params)) << encode(x);
  }
}

TEST(Fingerprint, DistinctMultisetsRarelyAccepted) {
  const int seeds = 1000;
  auto x = gen_random_mset_instance(16, 32, InstanceKind::distinct, 4);
  int acc = 0;
  for (int s = 0; s < seeds; ++s) acc += fingerprint_msetequality(x, derive_seed(77, s)).accepted;
  EXPECT_LE(acc / double(seeds), 0.6);
}

TEST(Fingerprint, ResourceReport) {
  auto x = gen_random_mset_instance(8, 16, InstanceKind::equal, 1);
  auto v = fingerprint_msetequality(x, 3);
  EXPECT_EQ(v.report.scans, 2u);
  EXPECT_EQ(v.report.external_writes, 0u);
  ASSERT_EQ(v.report.reversals.size(), 1u);
  EXPECT_EQ(v.report.reversals[0], 1u);
  EXPECT_GT(v.report.internal_space, 0u);
  // O(log N) bits: a fixed number of registers of about log k bits each.
  auto big = gen_random_mset_instance(64, 64, InstanceKind::equal, 1);
  auto vb = fingerprint_msetequality(big, 3);
  EXPECT_LT(vb.report.internal_space, 2 * v.report.internal_space + 64);
}

TEST(Fingerprint, MalformedInput) {
  EXPECT_THROW(fingerprint_msetequality(make_instance({"01"}, {"1"}), 1), SpecError);
  EXPECT_THROW(fingerprint_msetequality(make_instance({}, {}), 1), SpecError);
}

TEST(TapeSort, Examples) {
  EXPECT_EQ(sort_tapes({"10", "01"}).sorted, (std::vector<std::string>{"01", "10"}));
  std::vector<std::string> sorted{"000", "001", "011", "110"};
  EXPECT_EQ(sort_tapes(sorted).sorted, sorted);
  EXPECT_EQ(sort_tapes({"1"}).sorted, (std::vector<std::string>{"1"}));
  EXPECT_THROW(sort_tapes({"1", "01"}), SpecError);
  EXPECT_THROW(sort_tapes({}), SpecError);
}

TEST(TapeSort, AgreesWithLibrarySortAndScanBound) {
  Rng rng(33);
  for (std::size_t m : {2u, 3u, 5u, 16u, 17u, 64u, 100u}) {
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<std::string> v(m);
      for (auto& s : v) s = random_bits(rng, 6);
      auto want = v;
      std::sort(want.begin(), want.end());
      auto r = sort_tapes(v);
      EXPECT_EQ(r.sorted, want);
      EXPECT_LE(r.report.scans, 4 * ceil_log2(m) + 4) << m;
      EXPECT_EQ(r.passes, ceil_log2(m));
    }
  }
  std::vector<std::string> v(64);
  for (auto& s : v) s = random_bits(rng, 10);
  EXPECT_LE(sort_tapes(v).report.scans, 4u * 6 + 4);
}

TEST(Deciders, ChecksortExamples) {
  EXPECT_TRUE(decide_checksort(make_instance({"10", "01"}, {"01", "10"})).accepted);
  EXPECT_FALSE(decide_checksort(make_instance({"10", "01"}, {"10", "01"})).accepted);
}

TEST(Deciders, SetAndMultisetExamples) {
  auto a = make_instance({"01", "01"}, {"01", "10"});
  EXPECT_FALSE(decide_setequality(a).accepted);
  EXPECT_FALSE(decide_msetequality_det(a).accepted);
  auto b = make_instance({"01", "10"}, {"10", "01"});
  EXPECT_TRUE(decide_setequality(b).accepted);
  EXPECT_TRUE(decide_msetequality_det(b).accepted);
  auto c = make_instance({"01", "01", "10"}, {"10", "10", "01"});
  EXPECT_TRUE(decide_setequality(c).accepted);
  EXPECT_FALSE(decide_msetequality_det(c).accepted);
}

TEST(Deciders, AgreeWithBruteForce) {
  Rng rng(44);
  for (int i = 0; i < 500; ++i) {
    std::size_t m = rng.uniform(1, 8), n = rng.uniform(1, 3);
    auto x = random_instance(rng, m, n, true);
    EXPECT_EQ(decide_checksort(x).accepted, brute_force_decide(Problem::checksort, x)) << encode(x);
    EXPECT_EQ(decide_setequality(x).accepted, brute_force_decide(Problem::set, x)) << encode(x);
    EXPECT_EQ(decide_msetequality_det(x).accepted, brute_force_decide(Problem::multiset, x)) << encode(x);
    if (brute_force_decide(Problem::multiset, x)) {
      EXPECT_TRUE(brute_force_decide(Problem::set, x));
    }
  }
}

TEST(Deciders, MixedWidthValues) {
  auto x = make_instance({"1", "01"}, {"01", "1"});
  EXPECT_TRUE(decide_msetequality_det(x).accepted);
  EXPECT_TRUE(decide_checksort(x).accepted);
}

TEST(Deciders, ResourcesComposeAllPhases) {
  auto x = gen_random_mset_instance(16, 8, InstanceKind::equal, 2);
  auto v = decide_msetequality_det(x);
  auto a = sort_tapes(x.v).report, b = sort_tapes(x.vprime).report;
  EXPECT_EQ(v.report.scans, a.scans + b.scans + 1);
  EXPECT_LE(v.report.scans, 2 * (4 * ceil_log2(16) + 4) + 1);
  auto c = decide_checksort(x);
  EXPECT_EQ(c.report.scans, a.scans + 1);
}

TEST(Deciders, MalformedInstance) {
  Instance x;
  x.m = 2;
  x.v = {"0"};
  x.vprime = {"0", "1"};
  EXPECT_THROW(decide_checksort(x), SpecError);
  EXPECT_THROW(brute_force_decide(Problem::multiset, x), SpecError);
  EXPECT_THROW(parse_problem("bag"), SpecError);
  EXPECT_EQ(parse_problem("check-phi"), Problem::check_phi);
}

TEST(BruteForce, CheckPhiGenerator) {
  for (std::size_t m : {2u, 4u, 8u})
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      EXPECT_TRUE(brute_force_decide(Problem::check_phi, gen_check_phi(m, InstanceKind::yes, seed)));
      EXPECT_FALSE(brute_force_decide(Problem::check_phi, gen_check_phi(m, InstanceKind::no, seed)));
    }
}

TEST(Certificate, Examples) {
  auto eq = make_instance({"01", "10", "11"}, {"01", "10", "11"});
  EXPECT_TRUE(nst_certificate_check(eq, identity_permutation(3), Problem::multiset));
  EXPECT_TRUE(nst_certificate_check(make_instance({"10", "01"}, {"01", "10"}), {2, 1}, Problem::multiset));
  EXPECT_TRUE(nst_certificate_check(make_instance({"10", "01"}, {"01", "10"}), {2, 1}, Problem::checksort));
  EXPECT_FALSE(nst_certificate_check(make_instance({"01", "10"}, {"10", "01"}), {2, 1}, Problem::checksort));
  EXPECT_THROW(nst_certificate_check(eq, {1, 2}, Problem::multiset), SpecError);
  EXPECT_THROW(nst_certificate_check(eq, {1, 1, 2}, Problem::multiset), SpecError);
  EXPECT_THROW(nst_certificate_check(eq, identity_permutation(3), Problem::check_phi), SpecError);
}

TEST(Certificate, ExhaustiveSearchMatchesBruteForce) {
  Rng rng(55);
  for (int i = 0; i < 150; ++i) {
    std::size_t m = rng.uniform(1, 6);
    auto x = random_instance(rng, m, 2, true);
    Permutation pi = identity_permutation(m);
    bool any_m = false, any_c = false, any_s = false;
    do {
      any_m |= nst_certificate_check(x, pi, Problem::multiset);
      any_c |= nst_certificate_check(x, pi, Problem::checksort);
      any_s |= nst_certificate_check(x, pi, Problem::set);
    } while (std::next_permutation(pi.begin(), pi.end()));
    EXPECT_EQ(any_m, brute_force_decide(Problem::multiset, x)) << encode(x);
    EXPECT_EQ(any_c, brute_force_decide(Problem::checksort, x)) << encode(x);
    EXPECT_EQ(any_s, brute_force_decide(Problem::set, x)) << encode(x);
  }
}

TEST(ShortReduction, ShapeForFour) {
  auto x = gen_check_phi(4, InstanceKind::yes, 1);
  auto y = short_reduction_f(x);
  EXPECT_EQ(y.m, 128u);
  ASSERT_TRUE(y.uniform_width.has_value());
  EXPECT_EQ(*y.uniform_width, 10u);
  EXPECT_LE(10.0, 2 * std::log2(128.0));
}

TEST(ShortReduction, BlocksCarryTagsAndPositions) {
  auto x = gen_check_phi(2, InstanceKind::yes, 3);
  auto y = short_reduction_f(x);
  // m=2: one-bit blocks, 8 per value, tagged with 1 + 3 bits.
  ASSERT_EQ(y.m, 16u);
  auto phi = bit_reversal_perm(2);
  for (std::size_t i = 1; i <= 2; ++i)
    for (std::size_t j = 1; j <= 8; ++j) {
      EXPECT_EQ(y.vprime[(i - 1) * 8 + j - 1], bin(i - 1, 1) + bin(j - 1, 3) + x.vprime[i - 1][j - 1]);
      EXPECT_EQ(y.v[(i - 1) * 8 + j - 1], bin(phi[i - 1] - 1, 1) + bin(j - 1, 3) + x.v[i - 1][j - 1]);
    }
}

TEST(ShortReduction, PreservesAnswer) {
  for (std::size_t m : {2u, 4u}) {
    for (std::uint64_t seed = 0; seed < 250; ++seed) {
      auto yes = short_reduction_f(gen_check_phi(m, InstanceKind::yes, seed));
      EXPECT_TRUE(brute_force_decide(Problem::multiset, yes));
      EXPECT_TRUE(std::is_sorted(yes.vprime.begin(), yes.vprime.end()));
      EXPECT_TRUE(brute_force_decide(Problem::checksort, yes));
      auto no = short_reduction_f(gen_check_phi(m, InstanceKind::no, seed));
      EXPECT_FALSE(brute_force_decide(Problem::multiset, no));
    }
  }
}

TEST(ShortReduction, Preconditions) {
  EXPECT_THROW(short_reduction_f(make_instance({"0", "1", "1"}, {"0", "1", "1"})), SpecError);
  EXPECT_THROW(short_reduction_f(make_instance({"01", "10"}, {"01", "10"})), SpecError);
}
