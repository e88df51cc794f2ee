#include "topk/weighted_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace topk {

WeightedGrid::WeightedGrid(std::vector<std::uint32_t> y_of, std::vector<DocId> doc_of,
                           std::span<const double> weight_of_column)
    : y_of_(std::move(y_of)), doc_of_(std::move(doc_of)) {
  const std::size_t w = y_of_.size();
  if (doc_of_.size() != w || weight_of_column.size() != w) {
    throw InputError("grid arrays differ in length");
  }
  if (w >= kNone) {
    throw InputError("grid too wide");
  }
  for (double x : weight_of_column) {
    if (std::isnan(x)) throw InputError("NaN weight");
  }
  std::vector<Column> order(w);
  std::iota(order.begin(), order.end(), Column{0});
  std::sort(order.begin(), order.end(), [&](Column a, Column b) {
    if (weight_of_column[a] != weight_of_column[b]) {
      return weight_of_column[a] > weight_of_column[b];
    }
    if (doc_of_[a] != doc_of_[b]) return doc_of_[a] < doc_of_[b];
    return a < b;
  });
  weight_rank_of_.resize(w);
  raw_weight_of_.resize(w);
  for (std::size_t i = 0; i < w; ++i) {
    const auto r = static_cast<std::uint32_t>(w - 1 - i);
    weight_rank_of_[order[i]] = r;
    raw_weight_of_[r] = weight_of_column[order[i]];
  }
}

}  // namespace topk
