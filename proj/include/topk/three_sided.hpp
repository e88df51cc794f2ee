#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "topk/rank_space.hpp"
#include "topk/rmq.hpp"
#include "topk/wavelet_tree.hpp"

namespace topk {

// |{p : a <= p.x <= b, p.y <= h}| over local positions; 0 for a > b.
inline std::uint32_t count_three_sided(const WaveletTree& wt, std::uint32_t a, std::uint32_t b,
                                       std::uint32_t h) {
  return wt.count(a, b, h);
}

// Appends every local position in [a, b] whose y is <= h, by recursive
// splitting around range minima. Output order is unspecified.
template <class Y>
void report_three_sided(const RmqIndex& rmq, Y&& y, std::uint32_t a, std::uint32_t b,
                        std::uint32_t h, std::vector<std::uint32_t>& out) {
  if (a > b || rmq.size() == 0) return;
  if (b >= rmq.size()) b = static_cast<std::uint32_t>(rmq.size() - 1);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pending{{a, b}};
  while (!pending.empty()) {
    const auto [s, e] = pending.back();
    pending.pop_back();
    const auto m = static_cast<std::uint32_t>(rmq.argmin(s, e, y));
    if (y(m) > h) continue;
    out.push_back(m);
    if (m > s) pending.emplace_back(s, m - 1);
    if (m < e) pending.emplace_back(m + 1, e);
  }
}

inline std::vector<std::uint32_t> report_three_sided(const RmqIndex& rmq,
                                                     std::span<const std::uint32_t> y,
                                                     std::uint32_t a, std::uint32_t b,
                                                     std::uint32_t h) {
  std::vector<std::uint32_t> out;
  report_three_sided(rmq, [y](std::size_t i) { return y[i]; }, a, b, h, out);
  return out;
}

// Unweighted three-sided counting and reporting over a subset of grid
// columns: rank space on x, a wavelet tree for counting and an RMQ on y
// for reporting. y values are read from the global column array.
class ThreeSidedIndex {
 public:
  ThreeSidedIndex() = default;
  ThreeSidedIndex(std::vector<Column> columns, std::span<const std::uint32_t> y_of);

  std::uint32_t size() const noexcept { return xs_.size(); }
  std::span<const Column> columns() const noexcept { return xs_.xs(); }
  const WaveletTree& wavelet() const noexcept { return wt_; }

  std::uint32_t count(Column a, Column b, std::uint32_t h) const;
  void report(Column a, Column b, std::uint32_t h, std::span<const std::uint32_t> y_of,
              std::vector<Column>& out) const;

  std::size_t bytes() const noexcept { return xs_.bytes() + wt_.bytes() + rmq_.bytes(); }

 private:
  RankSpace xs_;
  WaveletTree wt_;
  RmqIndex rmq_;
};

}  // namespace topk
