#include "topk/wavelet_tree.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <tuple>

namespace topk {

WaveletTree::WaveletTree(std::span<const std::uint32_t> ys,
                         std::vector<std::vector<std::uint32_t>>* level_positions)
    : size_(static_cast<std::uint32_t>(ys.size())) {
  const std::uint32_t v = size_;
  levels_ = v <= 1 ? 0 : static_cast<std::uint32_t>(std::bit_width(v - 1));

  std::vector<std::uint32_t> by_rank(v);
  std::iota(by_rank.begin(), by_rank.end(), 0u);
  std::stable_sort(by_rank.begin(), by_rank.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return ys[a] < ys[b]; });
  y_sorted_.resize(v);
  std::vector<std::uint32_t> cur(v);  // y-rank of each slot
  for (std::uint32_t r = 0; r < v; ++r) {
    y_sorted_[r] = ys[by_rank[r]];
    cur[by_rank[r]] = r;
  }
  std::vector<std::uint32_t> pos(v);  // original position of each slot
  std::iota(pos.begin(), pos.end(), 0u);
  if (level_positions) {
    level_positions->clear();
    level_positions->push_back(pos);
  }

  bits_ = RankBitVector(static_cast<std::size_t>(levels_) * v);
  std::vector<std::uint32_t> next(v), next_pos(v);
  std::vector<Node> nodes{root()}, children;
  for (std::uint32_t level = 0; level < levels_; ++level) {
    children.clear();
    for (const Node& nd : nodes) {
      if (nd.is_leaf()) {
        next[nd.lo] = cur[nd.lo];
        next_pos[nd.lo] = pos[nd.lo];
        children.push_back({level + 1, nd.lo, nd.hi});
        continue;
      }
      const std::uint32_t mid = nd.mid();
      std::uint32_t l = nd.lo, r = mid + 1;
      for (std::uint32_t p = nd.lo; p <= nd.hi; ++p) {
        if (cur[p] > mid) {
          bits_.set(static_cast<std::size_t>(level) * v + p);
          next[r] = cur[p];
          next_pos[r++] = pos[p];
        } else {
          next[l] = cur[p];
          next_pos[l++] = pos[p];
        }
      }
      children.push_back(left({level, nd.lo, nd.hi}));
      children.push_back(right({level, nd.lo, nd.hi}));
    }
    std::swap(nodes, children);
    std::swap(cur, next);
    std::swap(pos, next_pos);
    if (level_positions) level_positions->push_back(pos);
  }
  bits_.build_rank();
}

std::pair<std::uint32_t, std::uint32_t> WaveletTree::map_left(Node v, std::uint32_t s,
                                                              std::uint32_t e) const {
  const std::size_t b = base(v);
  const auto r0 = bits_.rank0(b);
  return {static_cast<std::uint32_t>(bits_.rank0(b + s) - r0),
          static_cast<std::uint32_t>(bits_.rank0(b + e) - r0)};
}

std::pair<std::uint32_t, std::uint32_t> WaveletTree::map_right(Node v, std::uint32_t s,
                                                               std::uint32_t e) const {
  const std::size_t b = base(v);
  const auto r1 = bits_.rank1(b);
  return {static_cast<std::uint32_t>(bits_.rank1(b + s) - r1),
          static_cast<std::uint32_t>(bits_.rank1(b + e) - r1)};
}

std::uint32_t WaveletTree::rank_below(std::uint32_t value) const {
  return static_cast<std::uint32_t>(
      std::lower_bound(y_sorted_.begin(), y_sorted_.end(), value) - y_sorted_.begin());
}

std::uint32_t WaveletTree::rank_at_most(std::uint32_t value) const {
  return static_cast<std::uint32_t>(
      std::upper_bound(y_sorted_.begin(), y_sorted_.end(), value) - y_sorted_.begin());
}

std::uint32_t WaveletTree::rank_at(Node v, std::uint32_t i) const {
  while (!v.is_leaf()) {
    if (goes_right(v, i)) {
      i = map_right(v, 0, i).second;
      v = right(v);
    } else {
      i = map_left(v, 0, i).second;
      v = left(v);
    }
  }
  return v.lo;
}

std::uint32_t WaveletTree::count(std::uint32_t a, std::uint32_t b, std::uint32_t h) const {
  if (size_ == 0 || a > b) return 0;
  Node v = root();
  std::uint32_t s = a, e = std::min(b, size_ - 1) + 1;
  std::uint32_t total = 0;
  while (!v.is_leaf() && s < e) {
    const auto [ls, le] = map_left(v, s, e);
    if (y_sorted_[v.mid()] <= h) {
      // Every point of the left child qualifies.
      total += le - ls;
      std::tie(s, e) = map_right(v, s, e);
      v = right(v);
    } else {
      s = ls;
      e = le;
      v = left(v);
    }
  }
  if (v.is_leaf() && s < e && y_sorted_[v.lo] <= h) total += e - s;
  return total;
}

}  // namespace topk
