#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "topk/weighted_grid.hpp"

namespace topk {

// Turns a batch top-k routine into an iterator that reports hits one by
// one in weight order without knowing k in advance.
//
// Reporting runs in stages of doubling size k_1, 2k_1, 4k_1, ... Stage i
// emits list L_i, the hits ranked s_i + 1 .. s_i + k_i where s_i is the
// number emitted before it. L_{i+1} is fetched on the first emission of
// stage i, so a consumer that stops early pays for at most two stages.
class TopKIterator {
 public:
  using BatchFn = std::function<std::vector<GridHit>(std::size_t k)>;

  TopKIterator() = default;
  TopKIterator(BatchFn batch, std::size_t first_stage)
      : batch_(std::move(batch)), stage_(std::max<std::size_t>(1, first_stage)) {
    current_ = fetch(0, stage_);
    next_start_ = stage_;
  }

  std::optional<GridHit> next() {
    if (!batch_) return std::nullopt;
    if (pos_ == current_.size()) {
      if (!prefetched_) prefetch();
      if (next_.empty()) return std::nullopt;
      current_ = std::move(next_);
      next_.clear();
      pos_ = 0;
      prefetched_ = false;
    }
    if (pos_ == 0 && !prefetched_) prefetch();
    ++emitted_;
    return current_[pos_++];
  }

  std::size_t emitted() const noexcept { return emitted_; }
  // Batch calls issued so far.
  std::size_t batches() const noexcept { return batches_; }

 private:
  std::vector<GridHit> fetch(std::size_t skip, std::size_t k) {
    ++batches_;
    auto hits = batch_(skip + k);
    if (hits.size() < skip + k) exhausted_ = true;
    if (skip >= hits.size()) return {};
    hits.erase(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(skip));
    return hits;
  }

  void prefetch() {
    prefetched_ = true;
    if (exhausted_) return;
    stage_ *= 2;
    next_ = fetch(next_start_, stage_);
    next_start_ += stage_;
  }

  BatchFn batch_;
  std::size_t stage_ = 1;
  std::size_t next_start_ = 0;
  std::vector<GridHit> current_;
  std::vector<GridHit> next_;
  std::size_t pos_ = 0;
  std::size_t emitted_ = 0;
  std::size_t batches_ = 0;
  bool prefetched_ = false;
  bool exhausted_ = false;
};

// Seed stage size for a structure over `width` points.
inline std::size_t first_stage_size(std::size_t width) {
  std::size_t lg = 0;
  while ((std::size_t{1} << lg) < width) ++lg;
  return std::max<std::size_t>(1, lg);
}

}  // namespace topk
