#include "topk/striped_index.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace topk {

namespace {

// Smallest x with x^e >= w, for e a power of two.
std::uint64_t ceil_root(std::uint64_t w, std::uint64_t e) {
  if (w <= 1) return 1;
  auto reaches = [&](std::uint64_t x) {
    long double p = 1;
    for (std::uint64_t i = 0; i < e; ++i) {
      p *= static_cast<long double>(x);
      if (p >= static_cast<long double>(w)) return true;
    }
    return false;
  };
  auto x = static_cast<std::uint64_t>(std::ceil(std::pow(static_cast<double>(w), 1.0 / e)));
  x = std::max<std::uint64_t>(x, 1);
  while (x > 1 && reaches(x - 1)) --x;
  while (!reaches(x)) ++x;
  return x;
}

}  // namespace

std::vector<GridHit> merge_hits(std::span<const GridHit> x, std::span<const GridHit> y,
                                std::size_t k) {
  std::vector<GridHit> out;
  out.reserve(std::min(k, x.size() + y.size()));
  std::size_t i = 0, j = 0;
  while (out.size() < k && (i < x.size() || j < y.size())) {
    GridHit next;
    if (j == y.size() || (i < x.size() && x[i].rank >= y[j].rank)) {
      next = x[i++];
    } else {
      next = y[j++];
    }
    // Equal ranks mean the same column.
    if (!out.empty() && out.back().column == next.column) continue;
    out.push_back(next);
  }
  return out;
}

StripedIndex::StripedIndex(std::shared_ptr<const WeightedGrid> grid, StripedOptions options)
    : grid_(std::move(grid)) {
  if (!grid_) throw InputError("striped index needs a grid");
  const std::uint64_t w = grid_->width();
  if (w == 0) return;
  const std::uint64_t l =
      options.log_factor != 0
          ? options.log_factor
          : std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::bit_width(w)) - 1);
  const std::uint64_t l2 = l * l;

  Level whole;
  whole.width = w;
  whole.cap = ceil_root(w, 2);
  whole.trees.emplace_back(grid_, 0, static_cast<Column>(w - 1), options.class_options);
  levels_.push_back(std::move(whole));

  for (std::uint64_t j = 1; j < 64; ++j) {
    Level level;
    level.width = std::max(ceil_root(w, std::uint64_t{1} << j) * l2, l2);
    level.cap = ceil_root(w, std::uint64_t{1} << (j + 1));
    for (std::uint64_t lo = 0; lo < w; lo += level.width) {
      const std::uint64_t hi = std::min(w, lo + level.width) - 1;
      level.trees.emplace_back(grid_, static_cast<Column>(lo), static_cast<Column>(hi),
                               options.class_options);
    }
    build_lists(level);
    const bool last = level.width <= 4 * l2;
    levels_.push_back(std::move(level));
    if (last) break;
  }
}

void StripedIndex::build_lists(Level& level) {
  const std::size_t t_count = level.num_intervals();
  const std::size_t heights = level.cap + 1;
  std::size_t lists = 0;
  for (std::size_t v = 0; (std::size_t{1} << v) <= t_count; ++v) {
    level.run_base.push_back(lists);
    lists += (t_count - (std::size_t{1} << v) + 1) * heights;
  }
  level.list_offset.assign(lists + 1, 0);
  std::vector<GridHit> scratch;
  for (std::size_t v = 0; v < level.run_base.size(); ++v) {
    const std::size_t runs = t_count - (std::size_t{1} << v) + 1;
    for (std::size_t t = 0; t < runs; ++t) {
      for (std::size_t c = 0; c < heights; ++c) {
        if (v == 0) {
          const ClassTree& tree = level.trees[t];
          scratch = tree.topk(tree.lo(), tree.hi(), static_cast<std::uint32_t>(c), level.cap);
        } else {
          const std::size_t half = std::size_t{1} << (v - 1);
          scratch = merge_hits(level.list(v - 1, t, c), level.list(v - 1, t + half, c), level.cap);
        }
        const std::size_t i = level.list_index(v, t, c);
        level.list_offset[i] = static_cast<std::uint32_t>(level.entries.size());
        level.entries.insert(level.entries.end(), scratch.begin(), scratch.end());
        level.list_offset[i + 1] = static_cast<std::uint32_t>(level.entries.size());
      }
    }
  }
}

std::size_t StripedIndex::select_level(std::uint64_t hk) const {
  std::size_t j = 0;
  while (j + 1 < levels_.size() && levels_[j + 1].cap > hk) ++j;
  return j;
}

std::vector<GridHit> StripedIndex::topk(Column a, Column b, std::uint32_t h,
                                        std::size_t k) const {
  if (!grid_ || k == 0 || a > b || a >= width()) return {};
  b = std::min<Column>(b, width() - 1);
  return query_level(levels_[select_level(std::max<std::uint64_t>(h, k))], a, b, h, k);
}

std::vector<GridHit> StripedIndex::query_level(const Level& level, Column a, Column b,
                                               std::uint32_t h, std::size_t k) const {
  const std::uint64_t w = level.width;
  const std::size_t t1 = a / w, t2 = b / w;
  if (t1 == t2) return level.trees[t1].topk(a, b, h, k);
  const auto left_end = static_cast<Column>((t1 + 1) * w - 1);
  const auto right_begin = static_cast<Column>(t2 * w);
  auto left = level.trees[t1].topk(a, left_end, h, k);
  auto right = level.trees[t2].topk(right_begin, b, h, k);
  if (t2 == t1 + 1) return merge_hits(left, right, k);

  // Whole intervals t1+1 .. t2-1, covered by two runs of 2^v intervals.
  const std::size_t first = t1 + 1, len = t2 - first;
  const std::size_t v = static_cast<std::size_t>(std::bit_width(len)) - 1;
  auto l1 = level.list(v, first, h);
  auto l2 = level.list(v, t2 - (std::size_t{1} << v), h);
  const auto middle = merge_hits(l1.first(std::min(k, l1.size())),
                                 l2.first(std::min(k, l2.size())), k);
  return merge_hits(merge_hits(left, middle, k), right, k);
}

void StripedIndex::for_each_list(const ListVisitor& visit) const {
  for (std::size_t j = 1; j < levels_.size(); ++j) {
    const Level& level = levels_[j];
    for (std::size_t v = 0; v < level.run_base.size(); ++v) {
      const std::size_t runs = level.num_intervals() - (std::size_t{1} << v) + 1;
      for (std::size_t t = 0; t < runs; ++t) {
        const auto lo = static_cast<Column>(t * level.width);
        const auto hi = static_cast<Column>(
            std::min<std::uint64_t>(width(), (t + (std::size_t{1} << v)) * level.width) - 1);
        for (std::size_t c = 0; c <= level.cap; ++c) {
          visit(j, lo, hi, static_cast<std::uint32_t>(c), level.list(v, t, c));
        }
      }
    }
  }
}

std::size_t StripedIndex::bytes() const {
  std::size_t b = 0;
  for (const auto& level : levels_) {
    for (const auto& t : level.trees) b += t.bytes();
    b += level.list_offset.size() * 4 + level.entries.size() * sizeof(GridHit) +
         level.run_base.size() * sizeof(std::size_t);
  }
  return b;
}

}  // namespace topk
