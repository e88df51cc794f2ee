#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "topk/rank_space.hpp"
#include "topk/ranked_wavelet.hpp"
#include "topk/rmq.hpp"
#include "topk/wavelet_tree.hpp"
#include "topk/weighted_grid.hpp"

namespace topk {

// Top-k over boxes [a, b] x [c, d] x [zlo, zhi] where the third
// coordinate z is a small integer below z_max.
//
// An outer wavelet tree over y lays every level out as one slot array.
// Each level carries an inner wavelet tree over the z values of that
// array with a weight RMQ per inner level, so the heaviest point of any
// slot interval restricted to a z range is the best of O(log) inner RMQs.
// Queries run the same extract-and-split loop as RankedWavelet, with the
// two halves re-queried through the inner structure.
class LimitedGrid {
 public:
  LimitedGrid() = default;
  // `columns` sorted ascending; z_of is indexed by global column.
  LimitedGrid(std::shared_ptr<const WeightedGrid> grid, std::vector<Column> columns,
              std::span<const std::uint32_t> z_of, std::uint32_t z_max);

  std::uint32_t size() const noexcept { return xs_.size(); }
  std::uint32_t z_max() const noexcept { return z_max_; }
  std::uint32_t levels() const noexcept { return static_cast<std::uint32_t>(outer_.size()); }
  std::uint32_t level_size(std::uint32_t level) const {
    return static_cast<std::uint32_t>(outer_[level].slots.size());
  }

  Column column_at(std::uint32_t level, std::uint32_t slot) const {
    return xs_.x_at(outer_[level].slots[slot]);
  }
  std::uint32_t z_at(std::uint32_t level, std::uint32_t slot) const {
    return z_[outer_[level].slots[slot]];
  }
  std::uint32_t rank_at(std::uint32_t level, std::uint32_t slot) const {
    return grid_->weight_rank(column_at(level, slot));
  }

  struct Witness {
    std::uint32_t slot = 0;
    std::uint32_t rank = 0;
  };
  // Heaviest point among slots [lo, hi] of an outer level with z in
  // [zlo, zhi]; absent when there is none.
  std::optional<Witness> inner_max_2d(std::uint32_t level, std::uint32_t lo, std::uint32_t hi,
                                      std::uint32_t zlo, std::uint32_t zhi) const;

  class Cursor {
   public:
    std::optional<GridHit> next();
    const QueueStats& stats() const noexcept { return stats_; }

   private:
    friend class LimitedGrid;
    struct Candidate {
      std::uint32_t rank;
      std::uint32_t level;
      std::uint32_t lo;
      std::uint32_t hi;
      std::uint32_t at;
    };
    void push(std::uint32_t level, std::uint32_t lo, std::uint32_t hi);

    const LimitedGrid* owner_ = nullptr;
    std::uint32_t zlo_ = 0;
    std::uint32_t zhi_ = 0;
    std::vector<Candidate> heap_;
    QueueStats stats_;
  };

  Cursor cursor(Column a, Column b, std::uint32_t c, std::uint32_t d, std::uint32_t zlo,
                std::uint32_t zhi) const;
  std::vector<GridHit> topk(Column a, Column b, std::uint32_t c, std::uint32_t d,
                            std::uint32_t zlo, std::uint32_t zhi, std::size_t k) const;

  std::size_t bytes() const;

 private:
  struct OuterLevel {
    std::vector<std::uint32_t> slots;  // local x of each slot
    WaveletTree inner;                 // over the z of each slot
    std::vector<std::vector<std::uint32_t>> inner_slots;  // per inner level: outer slot
    std::vector<RmqIndex> rmq;                            // per inner level, kNone - rank
  };

  std::uint32_t inner_rank(const OuterLevel& o, std::uint32_t il, std::uint32_t i) const {
    return grid_->weight_rank(xs_.x_at(o.slots[o.inner_slots[il][i]]));
  }

  std::shared_ptr<const WeightedGrid> grid_;
  RankSpace xs_;
  std::vector<std::uint32_t> z_;  // by local x
  std::uint32_t z_max_ = 0;
  WaveletTree outer_wt_;
  std::vector<OuterLevel> outer_;
};

inline std::vector<GridHit> topk_3d_limited(const LimitedGrid& lg, Column a, Column b,
                                            std::uint32_t c, std::uint32_t d, std::uint32_t zlo,
                                            std::uint32_t zhi, std::size_t k) {
  return lg.topk(a, b, c, d, zlo, zhi, k);
}

}  // namespace topk
