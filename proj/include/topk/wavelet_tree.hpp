#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "topk/bit_vector.hpp"

namespace topk {

// Balanced wavelet tree over the y-ranks of a point sequence given in x
// order. Ranks order points by (y, position), so every node covering the
// rank range [lo, hi] holds exactly hi - lo + 1 points and occupies
// positions [lo, hi] of its level. Each split sends the lower half of the
// node's ranks to the left child, preserving x order. The largest y of a
// node is the y of its highest rank.
class WaveletTree {
 public:
  struct Node {
    std::uint32_t level = 0;
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;

    bool is_leaf() const noexcept { return lo == hi; }
    std::uint32_t size() const noexcept { return hi - lo + 1; }
    std::uint32_t mid() const noexcept { return lo + (hi - lo) / 2; }
  };

  WaveletTree() = default;
  // When level_positions is given it receives, for every level including
  // the final all-leaves level, the original position of each slot.
  explicit WaveletTree(std::span<const std::uint32_t> ys,
                       std::vector<std::vector<std::uint32_t>>* level_positions = nullptr);

  std::uint32_t size() const noexcept { return size_; }
  // Number of bitmap levels; nodes at level `levels()` are all leaves.
  std::uint32_t levels() const noexcept { return levels_; }

  Node root() const noexcept { return {0, 0, size_ == 0 ? 0 : size_ - 1}; }
  static Node left(Node v) noexcept { return {v.level + 1, v.lo, v.mid()}; }
  static Node right(Node v) noexcept { return {v.level + 1, v.mid() + 1, v.hi}; }

  // Map a node-local half-open range [s, e) to the child's local range.
  std::pair<std::uint32_t, std::uint32_t> map_left(Node v, std::uint32_t s, std::uint32_t e) const;
  std::pair<std::uint32_t, std::uint32_t> map_right(Node v, std::uint32_t s, std::uint32_t e) const;
  bool goes_right(Node v, std::uint32_t i) const { return bits_[base(v) + i]; }

  std::uint32_t max_y(Node v) const { return y_sorted_[v.hi]; }
  std::uint32_t y_of_rank(std::uint32_t r) const { return y_sorted_[r]; }
  // Number of points with y < value / y <= value.
  std::uint32_t rank_below(std::uint32_t value) const;
  std::uint32_t rank_at_most(std::uint32_t value) const;

  // y-rank of the i-th point (x order) of a node.
  std::uint32_t rank_at(Node v, std::uint32_t i) const;

  // Points at local positions [a, b] with y <= h; 0 when a > b.
  std::uint32_t count(std::uint32_t a, std::uint32_t b, std::uint32_t h) const;

  // Calls f(node, s, e) for the canonical nodes whose rank range lies in
  // [rank_lo, rank_hi] and whose mapped local range [s, e) is nonempty.
  template <class F>
  void for_each_cover(std::uint32_t rank_lo, std::uint32_t rank_hi, std::uint32_t s,
                      std::uint32_t e, F&& f) const {
    if (size_ == 0 || rank_lo > rank_hi) return;
    cover(root(), rank_lo, rank_hi, s, e, f);
  }

  std::size_t bytes() const noexcept { return bits_.bytes() + y_sorted_.size() * 4; }

 private:
  std::size_t base(Node v) const noexcept {
    return static_cast<std::size_t>(v.level) * size_ + v.lo;
  }

  template <class F>
  void cover(Node v, std::uint32_t rl, std::uint32_t rr, std::uint32_t s, std::uint32_t e,
             F& f) const {
    if (s >= e || v.hi < rl || v.lo > rr) return;
    if (rl <= v.lo && v.hi <= rr) {
      f(v, s, e);
      return;
    }
    const auto [ls, le] = map_left(v, s, e);
    const auto [rs, re] = map_right(v, s, e);
    cover(left(v), rl, rr, ls, le, f);
    cover(right(v), rl, rr, rs, re, f);
  }

  std::uint32_t size_ = 0;
  std::uint32_t levels_ = 0;
  RankBitVector bits_;
  std::vector<std::uint32_t> y_sorted_;
};

}  // namespace topk
