#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "topk/rank_space.hpp"
#include "topk/rmq.hpp"
#include "topk/wavelet_tree.hpp"
#include "topk/weighted_grid.hpp"

namespace topk {

// Counters kept by a cursor; every candidate interval holds one point.
struct QueueStats {
  std::size_t inserted = 0;
  std::size_t extracted = 0;
  std::size_t max_inserts_per_point = 0;
};

// Four-sided top-k over a subset of grid columns.
//
// A wavelet tree over y keeps, for every level, the points of each node
// in x order; the level array maps a slot to its local x. One RMQ per
// level over weight ranks gives the heaviest point of any node interval.
// A query seeds a max-heap with the heaviest point of each canonical node
// and repeatedly extracts the top, splitting its interval around it.
class RankedWavelet {
 public:
  RankedWavelet() = default;
  // `columns` must be sorted ascending.
  RankedWavelet(std::shared_ptr<const WeightedGrid> grid, std::vector<Column> columns);
  // Every column of the grid.
  explicit RankedWavelet(std::shared_ptr<const WeightedGrid> grid);

  std::uint32_t size() const noexcept { return xs_.size(); }
  const WaveletTree& wavelet() const noexcept { return wt_; }

  // Global column stored at a slot of a level.
  Column column_at(std::uint32_t level, std::uint32_t slot) const {
    return xs_.x_at(slots_[level][slot]);
  }

  class Cursor {
   public:
    std::optional<GridHit> next();
    const QueueStats& stats() const noexcept { return stats_; }

   private:
    friend class RankedWavelet;
    struct Candidate {
      std::uint32_t rank;
      std::uint32_t level;
      std::uint32_t lo;  // slot interval [lo, hi] of the level array
      std::uint32_t hi;
      std::uint32_t at;
    };
    void push(std::uint32_t level, std::uint32_t lo, std::uint32_t hi);

    const RankedWavelet* owner_ = nullptr;
    std::vector<Candidate> heap_;
    QueueStats stats_;
    std::vector<std::uint32_t> inserts_;  // per local x, only when tracking
    bool track_ = false;
  };

  // Hits of [a, b] x [c, d] in weight order; `track` enables per-point
  // insertion counts in the cursor stats.
  Cursor cursor(Column a, Column b, std::uint32_t c, std::uint32_t d, bool track = false) const;
  std::vector<GridHit> topk(Column a, Column b, std::uint32_t c, std::uint32_t d,
                            std::size_t k) const;

  std::size_t bytes() const;

 private:
  std::uint32_t rank_of(std::uint32_t level, std::uint32_t slot) const {
    return grid_->weight_rank(xs_.x_at(slots_[level][slot]));
  }

  std::shared_ptr<const WeightedGrid> grid_;
  RankSpace xs_;
  WaveletTree wt_;
  std::vector<std::vector<std::uint32_t>> slots_;  // per level: local x of each slot
  std::vector<RmqIndex> rmq_;                      // per level, minimum of kNone - rank
};

inline std::vector<GridHit> topk_2d(const RankedWavelet& rw, Column a, Column b, std::uint32_t c,
                                    std::uint32_t d, std::size_t k) {
  return rw.topk(a, b, c, d, k);
}

}  // namespace topk
