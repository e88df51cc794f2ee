#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "topk/three_sided.hpp"
#include "topk/weighted_grid.hpp"

namespace topk {

struct ClassTreeOptions {
  // Classes per split; 0 picks ceil(m^(1/4)) for an m-point tree.
  std::uint32_t branching = 0;
  // Classes this small keep their points in weight order and are scanned
  // instead of carrying count/report structures.
  std::uint32_t scan_limit = 32;
};

// Three-sided top-k over the grid columns [lo, hi].
//
// Points are partitioned by weight into classes S_1..S_r (every point of
// S_i outweighs every point of S_j for i < j), recursively, so the tree
// has constant height. Each class answers unweighted three-sided counting
// and reporting; a query walks the classes heaviest first, taking whole
// classes while they fit in the remaining k and descending into the first
// one that does not.
class ClassTree {
 public:
  ClassTree() = default;
  ClassTree(std::shared_ptr<const WeightedGrid> grid, Column lo, Column hi,
            ClassTreeOptions options = {});

  Column lo() const noexcept { return lo_; }
  Column hi() const noexcept { return hi_; }
  std::uint32_t size() const noexcept { return hi_ >= lo_ && grid_ ? hi_ - lo_ + 1 : 0; }
  std::uint32_t branching() const noexcept { return branching_; }
  // Levels of classes, counting the root (the whole point set).
  std::uint32_t height() const noexcept { return height_; }

  // Top-k of [a, b] x [0, h], heaviest first.
  std::vector<GridHit> topk(Column a, Column b, std::uint32_t h, std::size_t k) const;

  // The top-k set of [a, b] x [0, h] in no particular order.
  std::vector<Column> descend(Column a, Column b, std::uint32_t h, std::size_t k) const;

  struct ClassView {
    std::uint32_t level;
    std::uint32_t parent;  // kNone for the root
    std::span<const Column> columns;
  };
  // Test hook: every class with its level and member columns.
  std::vector<ClassView> classes() const;

  std::size_t bytes() const;

 private:
  struct ClassNode {
    std::uint32_t level = 0;
    std::uint32_t parent = kNone;
    std::uint32_t first_child = kNone;
    std::uint32_t num_children = 0;
    // Scanned classes: their points, heaviest first, in pool_[begin, begin + size).
    // Indexed classes other than the root: indexes_[index].
    std::uint32_t begin = 0;
    std::uint32_t size = 0;
    std::uint32_t index = kNone;
    bool scanned = false;
  };

  std::span<const Column> scanned_points(const ClassNode& c) const {
    return std::span<const Column>(pool_).subspan(c.begin, c.size);
  }

  void build(std::uint32_t node, std::span<const Column> by_weight);
  std::uint32_t count(const ClassNode& c, Column a, Column b, std::uint32_t h) const;
  void report(const ClassNode& c, Column a, Column b, std::uint32_t h,
              std::vector<Column>& out) const;
  void take_heaviest(const ClassNode& c, Column a, Column b, std::uint32_t h, std::size_t k,
                     std::vector<Column>& out) const;

  std::shared_ptr<const WeightedGrid> grid_;
  Column lo_ = 0;
  Column hi_ = 0;
  std::uint32_t branching_ = 2;
  std::uint32_t scan_limit_ = 32;
  std::uint32_t height_ = 0;
  std::vector<ClassNode> nodes_;
  std::vector<Column> pool_;
  std::vector<ThreeSidedIndex> indexes_;
};

// Sorts hits heaviest first: comparison sort for short lists, LSD radix
// sort on the weight ranks otherwise.
void sort_by_weight(std::vector<GridHit>& hits, std::size_t radix_threshold);

}  // namespace topk
