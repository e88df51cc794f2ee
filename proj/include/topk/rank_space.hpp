#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "topk/common.hpp"

namespace topk {

// Rank-space reduction of a sorted set of distinct x-coordinates. A query
// [a, b] maps to ranks [rank(succ(a)), rank(pred(b))] (0-based).
class RankSpace {
 public:
  RankSpace() = default;
  explicit RankSpace(std::vector<Column> xs) : xs_(std::move(xs)) {}

  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(xs_.size()); }
  Column x_at(std::uint32_t rank) const { return xs_[rank]; }
  std::span<const Column> xs() const noexcept { return xs_; }

  // Inclusive rank range of the x's inside [a, b]; absent when empty.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> map(Column a, Column b) const {
    if (a > b) return std::nullopt;
    const auto lo = std::lower_bound(xs_.begin(), xs_.end(), a) - xs_.begin();
    const auto hi = std::upper_bound(xs_.begin(), xs_.end(), b) - xs_.begin();
    if (lo >= hi) return std::nullopt;
    return std::pair{static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(hi - 1)};
  }

  std::size_t bytes() const noexcept { return xs_.size() * sizeof(Column); }

 private:
  std::vector<Column> xs_;
};

}  // namespace topk
