#include "topk/class_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace topk {

void sort_by_weight(std::vector<GridHit>& hits, std::size_t radix_threshold) {
  if (hits.size() < radix_threshold || hits.size() < 2) {
    std::sort(hits.begin(), hits.end(), heavier);
    return;
  }
  // Keys ~rank ascending == rank descending; 11-bit digits, 3 passes.
  constexpr unsigned kBits = 11;
  constexpr std::uint32_t kMask = (1u << kBits) - 1;
  std::vector<GridHit> buffer(hits.size());
  std::uint32_t max_key = 0;
  for (const auto& h : hits) max_key = std::max(max_key, ~h.rank);
  for (unsigned shift = 0; shift < 32 && (max_key >> shift) != 0; shift += kBits) {
    std::vector<std::size_t> bucket(kMask + 2, 0);
    for (const auto& h : hits) ++bucket[((~h.rank >> shift) & kMask) + 1];
    std::partial_sum(bucket.begin(), bucket.end(), bucket.begin());
    for (const auto& h : hits) buffer[bucket[(~h.rank >> shift) & kMask]++] = h;
    hits.swap(buffer);
  }
}

ClassTree::ClassTree(std::shared_ptr<const WeightedGrid> grid, Column lo, Column hi,
                     ClassTreeOptions options)
    : grid_(std::move(grid)), lo_(lo), hi_(hi), scan_limit_(std::max(1u, options.scan_limit)) {
  if (!grid_ || hi >= grid_->width() || lo > hi) {
    throw InputError("class tree interval outside the grid");
  }
  const std::uint32_t m = hi - lo + 1;
  branching_ = options.branching != 0
                   ? options.branching
                   : static_cast<std::uint32_t>(std::ceil(std::pow(double(m), 0.25) - 1e-9));
  branching_ = std::max(branching_, 2u);

  std::vector<Column> by_weight(m);
  std::iota(by_weight.begin(), by_weight.end(), lo);
  const auto ranks = grid_->weight_rank_of();
  std::sort(by_weight.begin(), by_weight.end(),
            [&](Column a, Column b) { return ranks[a] > ranks[b]; });
  nodes_.emplace_back();
  pool_.reserve(m);
  build(0, by_weight);
  pool_.shrink_to_fit();
  nodes_.shrink_to_fit();
  indexes_.shrink_to_fit();
  for (const auto& n : nodes_) height_ = std::max(height_, n.level + 1);
}

void ClassTree::build(std::uint32_t node, std::span<const Column> by_weight) {
  const auto size = static_cast<std::uint32_t>(by_weight.size());
  if (size <= scan_limit_) {
    nodes_[node].scanned = true;
    nodes_[node].begin = static_cast<std::uint32_t>(pool_.size());
    nodes_[node].size = size;
    pool_.insert(pool_.end(), by_weight.begin(), by_weight.end());
    return;
  }
  if (node != 0) {
    std::vector<Column> by_x(by_weight.begin(), by_weight.end());
    std::sort(by_x.begin(), by_x.end());
    nodes_[node].index = static_cast<std::uint32_t>(indexes_.size());
    indexes_.emplace_back(std::move(by_x), grid_->y_of());
  }
  const std::uint32_t parts = std::min(size, branching_);
  const std::uint32_t chunk = (size + parts - 1) / parts;
  const std::uint32_t count = (size + chunk - 1) / chunk;
  const auto first = static_cast<std::uint32_t>(nodes_.size());
  const std::uint32_t level = nodes_[node].level + 1;
  nodes_[node].first_child = first;
  nodes_[node].num_children = count;
  nodes_.resize(nodes_.size() + count);
  for (std::uint32_t i = 0; i < count; ++i) {
    nodes_[first + i].level = level;
    nodes_[first + i].parent = node;
    const std::uint32_t b = i * chunk;
    build(first + i, by_weight.subspan(b, std::min(chunk, size - b)));
  }
}

std::uint32_t ClassTree::count(const ClassNode& c, Column a, Column b, std::uint32_t h) const {
  if (!c.scanned) return indexes_[c.index].count(a, b, h);
  std::uint32_t total = 0;
  for (Column x : scanned_points(c)) total += (a <= x && x <= b && grid_->y(x) <= h);
  return total;
}

void ClassTree::report(const ClassNode& c, Column a, Column b, std::uint32_t h,
                       std::vector<Column>& out) const {
  if (!c.scanned) {
    indexes_[c.index].report(a, b, h, grid_->y_of(), out);
    return;
  }
  for (Column x : scanned_points(c)) {
    if (a <= x && x <= b && grid_->y(x) <= h) out.push_back(x);
  }
}

void ClassTree::take_heaviest(const ClassNode& c, Column a, Column b, std::uint32_t h,
                              std::size_t k, std::vector<Column>& out) const {
  for (Column x : scanned_points(c)) {
    if (k == 0) return;
    if (a <= x && x <= b && grid_->y(x) <= h) {
      out.push_back(x);
      --k;
    }
  }
}

std::vector<Column> ClassTree::descend(Column a, Column b, std::uint32_t h, std::size_t k) const {
  std::vector<Column> out;
  if (!grid_ || k == 0) return out;
  a = std::max(a, lo_);
  b = std::min(b, hi_);
  if (a > b) return out;
  out.reserve(std::min<std::size_t>(k, size()));

  const ClassNode* node = &nodes_[0];
  if (node->scanned) {
    take_heaviest(*node, a, b, h, k, out);
    return out;
  }
  std::uint32_t i = 0;
  while (i < node->num_children) {
    const ClassNode& child = nodes_[node->first_child + i];
    const std::uint32_t ki = count(child, a, b, h);
    if (ki <= k) {
      report(child, a, b, h, out);
      k -= ki;
      if (k == 0) break;
      ++i;
    } else if (child.scanned) {
      take_heaviest(child, a, b, h, k, out);
      break;
    } else {
      node = &child;
      i = 0;
    }
  }
  return out;
}

std::vector<GridHit> ClassTree::topk(Column a, Column b, std::uint32_t h, std::size_t k) const {
  const auto cols = descend(a, b, h, k);
  std::vector<GridHit> hits;
  hits.reserve(cols.size());
  for (Column c : cols) hits.push_back({c, grid_->weight_rank(c)});
  sort_by_weight(hits, branching_);
  return hits;
}

std::vector<ClassTree::ClassView> ClassTree::classes() const {
  std::vector<ClassView> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) {
    std::span<const Column> cols =
        n.scanned ? scanned_points(n)
                  : n.index == kNone ? std::span<const Column>() : indexes_[n.index].columns();
    out.push_back({n.level, n.parent, cols});
  }
  return out;
}

std::size_t ClassTree::bytes() const {
  std::size_t b = nodes_.size() * sizeof(ClassNode) + pool_.size() * 4;
  for (const auto& ix : indexes_) b += ix.bytes();
  return b;
}

}  // namespace topk
