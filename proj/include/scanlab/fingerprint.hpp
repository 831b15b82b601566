#pragma once

#include "scanlab/instance.hpp"
#include "scanlab/primes.hpp"
#include "scanlab/resources.hpp"
#include "scanlab/tape.hpp"

#include <json.hpp>

#include <optional>

namespace scanlab {

struct FingerprintParams {
  std::uint64_t k = 0, p1 = 0, p2 = 0, x = 0;
};

struct Verdict {
  bool accepted = false;
  ResourceReport report;
  std::optional<FingerprintParams> params;
};

inline FingerprintParams choose_fingerprint_params(std::uint64_t m, std::uint64_t n, Rng& rng) {
  FingerprintParams p;
  p.k = compute_k(m, n);
  p.p1 = sample_prime_leq(p.k, rng);
  p.p2 = smallest_prime_in(3 * p.k, 6 * p.k);
  p.x = rng.uniform(1, p.p2 - 1);
  return p;
}

inline nlohmann::json to_json(const FingerprintParams& p) {
  return {{"k", p.k}, {"p1", p.p1}, {"p2", p.p2}, {"x", p.x}};
}

// Two scans over a single read-only tape holding v1#...#vm#v'1#...#v'm#.
// Scan 1 (forward) measures m, n and N. Scan 2 (backward) meets each value
// least significant bit first; e accumulates the value mod p1 using a running
// power of two, and x^e mod p2 is summed per half.
inline Verdict fingerprint_msetequality(const Instance& instance, std::uint64_t seed) {
  const std::string text = encode(instance);
  MeteredTape<char> tape(std::vector<char>(text.begin(), text.end()), ' ');
  RegisterMeter regs;

  std::uint64_t cells = 0, items = 0, width = 0, n = 0;
  bool have_n = false;
  while (!tape.past_end()) {
    char ch = tape.read();
    ++cells;
    if (ch == '#') {
      if (!have_n) n = width, have_n = true;
      else if (width != n) throw SpecError("fingerprint requires values of uniform width");
      ++items, width = 0;
    } else {
      ++width;
    }
    regs.note("cells", cells), regs.note("items", items), regs.note("width", width), regs.note("n", n);
    tape.move(+1);
  }
  if (items == 0 || items % 2 != 0) throw SpecError("malformed instance");
  const std::uint64_t m = items / 2;

  Rng rng(seed);
  FingerprintParams p = choose_fingerprint_params(m, n, rng);
  regs.note("k", p.k), regs.note("p1", p.p1), regs.note("p2", p.p2), regs.note("x", p.x);

  std::uint64_t sum_v = 0, sum_vp = 0, e = 0, pw = 1 % p.p1, seen = 0;
  bool started = false;
  auto finish = [&] {
    std::uint64_t t = pow_mod(p.x, e, p.p2);
    regs.note("t", t);
    if (seen < m) sum_vp = (sum_vp + t) % p.p2;
    else sum_v = (sum_v + t) % p.p2;
    ++seen;
    e = 0, pw = 1 % p.p1;
    regs.note("seen", seen), regs.note("sum_v", sum_v), regs.note("sum_vp", sum_vp);
  };
  while (!tape.at_start()) {
    tape.move(-1);
    char ch = tape.read();
    if (ch == '#') {
      if (started) finish();
      started = true;
    } else {
      if (ch == '1') e = (e + pw) % p.p1;
      pw = (2 * pw) % p.p1;
      regs.note("e", e), regs.note("pw", pw);
    }
  }
  finish();
  require(seen == items, "backward scan lost a value");

  Verdict out;
  out.accepted = sum_v == sum_vp;
  out.params = p;
  add_tape(out.report, tape);
  out.report.recompute_scans();
  out.report.internal_space = regs.total_bits();
  out.report.accepted = out.accepted;
  require(out.report.scans == 2, "fingerprint run must take two scans");
  require(out.report.external_writes == 0, "fingerprint run wrote the tape");
  return out;
}

}  // namespace scanlab
