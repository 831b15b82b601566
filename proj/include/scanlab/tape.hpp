#pragma once

#include "scanlab/common.hpp"
#include "scanlab/resources.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace scanlab {

// A sequential-access device that counts head reversals, writes and reach.
template <class T>
class MeteredTape {
 public:
  explicit MeteredTape(std::vector<T> cells = {}, T blank = T{}) : cells_(std::move(cells)), blank_(std::move(blank)) {}

  const T& read() const { return pos_ < cells_.size() ? cells_[pos_] : blank_; }

  void write(const T& x) {
    if (pos_ >= cells_.size()) cells_.resize(pos_ + 1, blank_);
    cells_[pos_] = x;
    ++writes_;
  }

  void move(int d) {
    if (d != 1 && d != -1) throw InvariantViolation("tape moves by one cell");
    if (d < 0 && pos_ == 0) throw InvariantViolation("head underflow");
    if (last_dir_ != 0 && d != last_dir_) ++reversals_;
    last_dir_ = d;
    pos_ = d > 0 ? pos_ + 1 : pos_ - 1;
    reach_ = std::max(reach_, pos_ + 1);
    ++moves_;
  }

  // Drops everything from the head position on (an end-of-data mark).
  void truncate_here() {
    if (pos_ < cells_.size()) {
      cells_.resize(pos_);
      ++writes_;
    }
  }

  std::size_t pos() const { return pos_; }
  std::size_t length() const { return cells_.size(); }
  bool at_start() const { return pos_ == 0; }
  bool past_end() const { return pos_ >= cells_.size(); }
  std::uint64_t reversals() const { return reversals_; }
  std::uint64_t writes() const { return writes_; }
  std::uint64_t moves() const { return moves_; }
  std::uint64_t reach() const { return std::max<std::uint64_t>(reach_, 1); }
  const std::vector<T>& cells() const { return cells_; }

 private:
  std::vector<T> cells_;
  T blank_;
  std::size_t pos_ = 0;
  int last_dir_ = 0;
  std::uint64_t reversals_ = 0, writes_ = 0, moves_ = 0;
  std::size_t reach_ = 1;
};

// Internal memory measured as the sum over named registers of the largest
// bit length each one held.
class RegisterMeter {
 public:
  void note(const std::string& name, std::uint64_t value) {
    std::uint64_t bits = 1;
    while (bits < 64 && (value >> bits) != 0) ++bits;
    auto& b = bits_[name];
    b = std::max(b, bits);
  }

  std::uint64_t total_bits() const {
    std::uint64_t s = 0;
    for (const auto& [k, v] : bits_) s += v;
    return s;
  }

  std::size_t registers() const { return bits_.size(); }

 private:
  std::map<std::string, std::uint64_t> bits_;
};

template <class T>
void add_tape(ResourceReport& r, const MeteredTape<T>& tape) {
  r.reversals.push_back(tape.reversals());
  r.external_space += tape.reach();
  r.external_writes += tape.writes();
  r.steps += tape.moves();
}

}  // namespace scanlab
