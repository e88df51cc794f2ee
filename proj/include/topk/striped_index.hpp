#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "topk/class_tree.hpp"
#include "topk/weighted_grid.hpp"

namespace topk {

struct StripedOptions {
  // L in the level schedule; 0 picks max(2, floor(log2 width)).
  std::uint32_t log_factor = 0;
  ClassTreeOptions class_options;
};

// Three-sided top-k over a whole grid with query time driven by
// max(h, k) rather than by the grid width.
//
// Level j >= 1 cuts the x-axis into intervals of width
// W_j = max(ceil(width^(1/2^j)) * L^2, L^2), each indexed by a ClassTree;
// level 0 is a single ClassTree over everything. Levels stop after the
// first width <= 4 L^2. For every level, top lists over runs of 2^v whole
// intervals are precomputed for all heights c <= cap_j and truncated at
// cap_j = ceil(width^(1/2^(j+1))). A query picks the narrowest level whose
// cap exceeds max(h, k) and combines at most two edge-interval answers
// with two overlapping precomputed lists.
class StripedIndex {
 public:
  StripedIndex() = default;
  explicit StripedIndex(std::shared_ptr<const WeightedGrid> grid, StripedOptions options = {});

  const WeightedGrid& grid() const noexcept { return *grid_; }
  std::uint32_t width() const noexcept { return grid_ ? grid_->width() : 0; }

  std::vector<GridHit> topk(Column a, Column b, std::uint32_t h, std::size_t k) const;

  std::size_t num_levels() const noexcept { return levels_.size(); }
  std::uint64_t interval_width(std::size_t level) const { return levels_[level].width; }
  std::uint64_t list_capacity(std::size_t level) const { return levels_[level].cap; }
  std::span<const ClassTree> trees(std::size_t level) const { return levels_[level].trees; }
  // Level used for a query with the given max(h, k).
  std::size_t select_level(std::uint64_t hk) const;

  // Test hook: visits every stored list as (level, first column, last
  // column, height, hits).
  using ListVisitor = std::function<void(std::size_t, Column, Column, std::uint32_t,
                                         std::span<const GridHit>)>;
  void for_each_list(const ListVisitor& visit) const;

  std::size_t bytes() const;

 private:
  struct Level {
    std::uint64_t width = 0;  // interval width W_j
    std::uint64_t cap = 0;    // list capacity and maximum stored height
    std::vector<ClassTree> trees;
    std::vector<std::size_t> run_base;  // per v: index of list (v, t = 0, c = 0)
    std::vector<std::uint32_t> list_offset;
    std::vector<GridHit> entries;

    std::size_t num_intervals() const noexcept { return trees.size(); }
    std::size_t list_index(std::size_t v, std::size_t t, std::size_t c) const {
      return run_base[v] + t * (cap + 1) + c;
    }
    std::span<const GridHit> list(std::size_t v, std::size_t t, std::size_t c) const {
      const std::size_t i = list_index(v, t, c);
      return std::span<const GridHit>(entries).subspan(list_offset[i],
                                                       list_offset[i + 1] - list_offset[i]);
    }
  };

  void build_lists(Level& level);
  std::vector<GridHit> query_level(const Level& level, Column a, Column b, std::uint32_t h,
                                   std::size_t k) const;

  std::shared_ptr<const WeightedGrid> grid_;
  std::vector<Level> levels_;
};

// Merges two heaviest-first lists, dropping repeated columns, keeping at
// most k hits.
std::vector<GridHit> merge_hits(std::span<const GridHit> x, std::span<const GridHit> y,
                                std::size_t k);

}  // namespace topk
