#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace segstab {

// Fixed-universe bitset sized at construction. The combinatorial solvers
// precompute stabbing relations into these masks once per instance and then
// run on word operations only, which keeps the enumeration-heavy paths
// (power-set oracle, branch and bound, swap search) off rational arithmetic.
class Bits {
 public:
  Bits() = default;
  explicit Bits(int universe) : n_(universe), w_((universe + 63) / 64, 0) {}

  int universe() const { return n_; }

  void set(int i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(int i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

  bool any() const {
    for (auto w : w_)
      if (w) return true;
    return false;
  }

  int count() const {
    int c = 0;
    for (auto w : w_) c += std::popcount(w);
    return c;
  }

  bool intersects(const Bits& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }

  // Number of set bits shared with `o`.
  int count_and(const Bits& o) const {
    int c = 0;
    for (std::size_t i = 0; i < w_.size(); ++i)
      c += std::popcount(w_[i] & o.w_[i]);
    return c;
  }

  Bits& operator|=(const Bits& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }

  Bits& operator&=(const Bits& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }

  // this &= ~o
  Bits& subtract(const Bits& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
  }

  bool is_subset_of(const Bits& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

  // Smallest set bit, or -1 when empty.
  int first() const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i]) return static_cast<int>(i * 64 + std::countr_zero(w_[i]));
    return -1;
  }

  // Smallest set bit strictly greater than i, or -1.
  int next(int i) const {
    ++i;
    if (i >= n_) return -1;
    std::size_t word = static_cast<std::size_t>(i) >> 6;
    std::uint64_t cur = w_[word] & (~std::uint64_t{0} << (i & 63));
    while (true) {
      if (cur) return static_cast<int>(word * 64 + std::countr_zero(cur));
      if (++word >= w_.size()) return -1;
      cur = w_[word];
    }
  }

  bool operator==(const Bits& o) const { return n_ == o.n_ && w_ == o.w_; }

 private:
  int n_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace segstab
