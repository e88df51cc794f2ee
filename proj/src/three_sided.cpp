#include "topk/three_sided.hpp"

namespace topk {

ThreeSidedIndex::ThreeSidedIndex(std::vector<Column> columns, std::span<const std::uint32_t> y_of)
    : xs_(std::move(columns)) {
  std::vector<std::uint32_t> ys(xs_.size());
  for (std::uint32_t i = 0; i < ys.size(); ++i) ys[i] = y_of[xs_.x_at(i)];
  wt_ = WaveletTree(ys);
  rmq_ = RmqIndex(ys.size(), [&](std::size_t i) { return ys[i]; });
}

std::uint32_t ThreeSidedIndex::count(Column a, Column b, std::uint32_t h) const {
  const auto range = xs_.map(a, b);
  if (!range) return 0;
  return wt_.count(range->first, range->second, h);
}

void ThreeSidedIndex::report(Column a, Column b, std::uint32_t h,
                             std::span<const std::uint32_t> y_of, std::vector<Column>& out) const {
  const auto range = xs_.map(a, b);
  if (!range) return;
  const std::size_t first = out.size();
  report_three_sided(
      rmq_, [&](std::size_t i) { return y_of[xs_.x_at(static_cast<std::uint32_t>(i))]; },
      range->first, range->second, h, out);
  for (std::size_t i = first; i < out.size(); ++i) out[i] = xs_.x_at(out[i]);
}

}  // namespace topk
