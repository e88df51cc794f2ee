#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "topk/common.hpp"

namespace topk {

// A point reported by a top-k structure. Weight ranks are unique, so the
// rank alone fixes the output order.
struct GridHit {
  Column column = 0;
  std::uint32_t rank = 0;

  friend bool operator==(const GridHit&, const GridHit&) = default;
};

// Output order: heavier first.
inline bool heavier(const GridHit& a, const GridHit& b) noexcept { return a.rank > b.rank; }

// The global column arrays: one point per column with its y-coordinate,
// document and weight. Weights are replaced by ranks in [0, width): the
// heaviest point gets width - 1; equal weights are ordered by ascending
// doc id, then ascending column (the earlier one ranks higher).
class WeightedGrid {
 public:
  WeightedGrid() = default;
  WeightedGrid(std::vector<std::uint32_t> y_of, std::vector<DocId> doc_of,
               std::span<const double> weight_of_column);

  std::uint32_t width() const noexcept { return static_cast<std::uint32_t>(y_of_.size()); }

  std::uint32_t y(Column c) const { return y_of_[c]; }
  DocId doc(Column c) const { return doc_of_[c]; }
  std::uint32_t weight_rank(Column c) const { return weight_rank_of_[c]; }
  double weight(Column c) const { return raw_weight_of_[weight_rank_of_[c]]; }
  double raw_weight_of_rank(std::uint32_t r) const { return raw_weight_of_[r]; }

  std::span<const std::uint32_t> y_of() const noexcept { return y_of_; }
  std::span<const DocId> doc_of() const noexcept { return doc_of_; }
  std::span<const std::uint32_t> weight_rank_of() const noexcept { return weight_rank_of_; }
  std::span<const double> raw_weight_of() const noexcept { return raw_weight_of_; }

  std::size_t bytes() const noexcept {
    return y_of_.size() * 4 + doc_of_.size() * 4 + weight_rank_of_.size() * 4 +
           raw_weight_of_.size() * 8;
  }

 private:
  std::vector<std::uint32_t> y_of_;
  std::vector<DocId> doc_of_;
  std::vector<std::uint32_t> weight_rank_of_;
  std::vector<double> raw_weight_of_;  // indexed by weight rank
};

}  // namespace topk
