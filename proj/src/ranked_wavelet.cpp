#include "topk/ranked_wavelet.hpp"

#include <algorithm>
#include <numeric>

namespace topk {

namespace {

template <class C>
bool lighter(const C& x, const C& y) {
  return x.rank < y.rank;
}

}  // namespace

RankedWavelet::RankedWavelet(std::shared_ptr<const WeightedGrid> grid)
    : RankedWavelet(grid, [&] {
        std::vector<Column> all(grid ? grid->width() : 0);
        std::iota(all.begin(), all.end(), Column{0});
        return all;
      }()) {}

RankedWavelet::RankedWavelet(std::shared_ptr<const WeightedGrid> grid, std::vector<Column> columns)
    : grid_(std::move(grid)), xs_(std::move(columns)) {
  if (!grid_) throw InputError("ranked wavelet needs a grid");
  std::vector<std::uint32_t> ys(xs_.size());
  for (std::uint32_t i = 0; i < ys.size(); ++i) ys[i] = grid_->y(xs_.x_at(i));
  wt_ = WaveletTree(ys, &slots_);
  rmq_.reserve(slots_.size());
  for (std::uint32_t level = 0; level < slots_.size(); ++level) {
    rmq_.emplace_back(slots_[level].size(), [&](std::size_t i) {
      return kNone - rank_of(level, static_cast<std::uint32_t>(i));
    });
  }
}

RankedWavelet::Cursor RankedWavelet::cursor(Column a, Column b, std::uint32_t c, std::uint32_t d,
                                            bool track) const {
  Cursor cur;
  cur.owner_ = this;
  cur.track_ = track;
  if (track) cur.inserts_.assign(size(), 0);
  const auto xr = xs_.map(a, b);
  if (!xr || c > d || size() == 0) return cur;
  const std::uint32_t rl = wt_.rank_below(c);
  const std::uint32_t rr_end = wt_.rank_at_most(d);
  if (rl >= rr_end) return cur;
  wt_.for_each_cover(rl, rr_end - 1, xr->first, xr->second + 1,
                     [&](WaveletTree::Node v, std::uint32_t s, std::uint32_t e) {
                       cur.push(v.level, v.lo + s, v.lo + e - 1);
                     });
  return cur;
}

void RankedWavelet::Cursor::push(std::uint32_t level, std::uint32_t lo, std::uint32_t hi) {
  const RankedWavelet& o = *owner_;
  const auto at = static_cast<std::uint32_t>(o.rmq_[level].argmin(
      lo, hi, [&](std::size_t i) { return kNone - o.rank_of(level, static_cast<std::uint32_t>(i)); }));
  heap_.push_back({o.rank_of(level, at), level, lo, hi, at});
  std::push_heap(heap_.begin(), heap_.end(), lighter<Candidate>);
  ++stats_.inserted;
  if (track_) {
    auto& n = inserts_[o.slots_[level][at]];
    stats_.max_inserts_per_point = std::max<std::size_t>(stats_.max_inserts_per_point, ++n);
  }
}

std::optional<GridHit> RankedWavelet::Cursor::next() {
  if (heap_.empty()) return std::nullopt;
  std::pop_heap(heap_.begin(), heap_.end(), lighter<Candidate>);
  const Candidate top = heap_.back();
  heap_.pop_back();
  ++stats_.extracted;
  if (top.at > top.lo) push(top.level, top.lo, top.at - 1);
  if (top.at < top.hi) push(top.level, top.at + 1, top.hi);
  return GridHit{owner_->column_at(top.level, top.at), top.rank};
}

std::vector<GridHit> RankedWavelet::topk(Column a, Column b, std::uint32_t c, std::uint32_t d,
                                         std::size_t k) const {
  std::vector<GridHit> out;
  if (k == 0) return out;
  auto cur = cursor(a, b, c, d);
  while (out.size() < k) {
    auto hit = cur.next();
    if (!hit) break;
    out.push_back(*hit);
  }
  return out;
}

std::size_t RankedWavelet::bytes() const {
  std::size_t b = xs_.bytes() + wt_.bytes();
  for (const auto& s : slots_) b += s.size() * 4;
  for (const auto& r : rmq_) b += r.bytes();
  return b;
}

}  // namespace topk
