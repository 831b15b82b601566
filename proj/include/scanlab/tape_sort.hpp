#pragma once

#include "scanlab/resources.hpp"
#include "scanlab/tape.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace scanlab {

// A tape cell: either a value or the marker that opens a run.
struct SortRecord {
  bool sep = false;
  std::string value;
};

struct SortResult {
  std::vector<std::string> sorted;
  ResourceReport report;
  std::size_t passes = 0;
};

namespace detail {

// Reads runs right to left. Runs are stored as SEP r1 r2 ... so a backward
// read ends a run when it consumes the run's opening marker.
class BackwardRuns {
 public:
  explicit BackwardRuns(MeteredTape<SortRecord>& tape) : tape_(tape) {}

  bool more_runs() const { return !tape_.at_start(); }

  // Loads the first record of the next run, or nothing if no runs are left.
  void open() {
    head_.reset();
    if (more_runs()) advance();
  }

  const std::optional<std::string>& head() const { return head_; }

  void advance() {
    tape_.move(-1);
    const auto& r = tape_.read();
    if (r.sep) head_.reset();
    else head_ = r.value;
  }

 private:
  MeteredTape<SortRecord>& tape_;
  std::optional<std::string> head_;
};

inline void put(MeteredTape<SortRecord>& tape, SortRecord r) {
  tape.write(r);
  tape.move(+1);
}

}  // namespace detail

// External merge sort on four metered tapes. T0 holds the input; T1 and T2
// receive single-value runs. Each pass reads two tapes backward and writes
// merged runs forward, alternating between the other two. Reading backward
// flips run order, so the merge direction alternates per pass; it is set so
// that the last run is descending and the final backward read is ascending.
template <class Less>
SortResult tape_merge_sort(const std::vector<std::string>& values, Less less) {
  if (values.empty()) throw SpecError("sort needs a nonempty list");
  std::vector<SortRecord> input;
  for (const auto& s : values) input.push_back({false, s});
  std::array<MeteredTape<SortRecord>, 4> t{MeteredTape<SortRecord>(std::move(input)), MeteredTape<SortRecord>(),
                                          MeteredTape<SortRecord>(), MeteredTape<SortRecord>()};
  RegisterMeter regs;

  std::uint64_t m = 0;
  while (!t[0].past_end()) {
    ++m;
    regs.note("m", m);
    t[0].move(+1);
  }
  const std::size_t passes = ceil_log2(m);

  // Distribution: T0 backward into single-value runs on T1, T2.
  std::uint64_t runs = 0;
  while (!t[0].at_start()) {
    t[0].move(-1);
    auto& out = t[1 + runs % 2];
    detail::put(out, {true, {}});
    detail::put(out, t[0].read());
    ++runs;
    regs.note("runs", runs);
  }
  t[1].truncate_here(), t[2].truncate_here();

  std::array<std::size_t, 2> in{1, 2}, out{0, 3};
  for (std::size_t pass = 1; pass <= passes; ++pass) {
    const bool descending = (passes - pass) % 2 == 0;
    detail::BackwardRuns a(t[in[0]]), b(t[in[1]]);
    std::uint64_t written = 0;
    while (a.more_runs() || b.more_runs()) {
      auto& dst = t[out[written % 2]];
      detail::put(dst, {true, {}});
      a.open(), b.open();
      while (a.head() || b.head()) {
        bool take_a;
        if (!b.head()) take_a = true;
        else if (!a.head()) take_a = false;
        else take_a = descending ? !less(*a.head(), *b.head()) : !less(*b.head(), *a.head());
        auto& src = take_a ? a : b;
        detail::put(dst, {false, *src.head()});
        src.advance();
      }
      ++written;
      regs.note("written", written);
    }
    for (auto i : out)
      if (t[i].pos() > 0) t[i].truncate_here();
    runs = written;
    regs.note("pass", pass);
    std::swap(in, out);
  }
  require(runs == 1, "merge passes left more than one run");

  // The single run sits on t[in[0]]: read it backward.
  SortResult res;
  auto& last = t[in[0]];
  while (!last.at_start()) {
    last.move(-1);
    if (!last.read().sep) res.sorted.push_back(last.read().value);
  }
  require(res.sorted.size() == m, "sort lost values");
  for (const auto& tape : t) add_tape(res.report, tape);
  res.report.recompute_scans();
  res.report.internal_space = regs.total_bits();
  res.report.accepted = true;
  res.passes = passes;
  return res;
}

inline SortResult sort_tapes(const std::vector<std::string>& values) {
  if (!values.empty())
    for (const auto& s : values)
      if (s.size() != values[0].size()) throw SpecError("sort_tapes requires equal-width values");
  return tape_merge_sort(values, [](const std::string& a, const std::string& b) { return a < b; });
}

}  // namespace scanlab
