#include "topk/limited_grid.hpp"

#include <algorithm>

namespace topk {

namespace {

template <class C>
bool lighter(const C& x, const C& y) {
  return x.rank < y.rank;
}

}  // namespace

LimitedGrid::LimitedGrid(std::shared_ptr<const WeightedGrid> grid, std::vector<Column> columns,
                         std::span<const std::uint32_t> z_of, std::uint32_t z_max)
    : grid_(std::move(grid)), xs_(std::move(columns)), z_max_(z_max) {
  if (!grid_) throw InputError("limited grid needs a grid");
  const std::uint32_t v = xs_.size();
  std::vector<std::uint32_t> ys(v);
  z_.resize(v);
  for (std::uint32_t i = 0; i < v; ++i) {
    const Column c = xs_.x_at(i);
    ys[i] = grid_->y(c);
    z_[i] = z_of[c];
    if (z_[i] >= z_max_) throw InputError("z value not below z_max");
  }
  std::vector<std::vector<std::uint32_t>> slots;
  outer_wt_ = WaveletTree(ys, &slots);
  outer_.resize(slots.size());
  std::vector<std::uint32_t> zs;
  for (std::size_t l = 0; l < slots.size(); ++l) {
    OuterLevel& o = outer_[l];
    o.slots = std::move(slots[l]);
    zs.resize(o.slots.size());
    for (std::size_t i = 0; i < zs.size(); ++i) zs[i] = z_[o.slots[i]];
    o.inner = WaveletTree(zs, &o.inner_slots);
    o.rmq.reserve(o.inner_slots.size());
    for (std::uint32_t il = 0; il < o.inner_slots.size(); ++il) {
      o.rmq.emplace_back(o.inner_slots[il].size(), [&](std::size_t i) {
        return kNone - inner_rank(o, il, static_cast<std::uint32_t>(i));
      });
    }
  }
}

std::optional<LimitedGrid::Witness> LimitedGrid::inner_max_2d(std::uint32_t level,
                                                              std::uint32_t lo, std::uint32_t hi,
                                                              std::uint32_t zlo,
                                                              std::uint32_t zhi) const {
  if (level >= outer_.size() || lo > hi || zlo > zhi) return std::nullopt;
  const OuterLevel& o = outer_[level];
  if (hi >= o.slots.size()) return std::nullopt;
  const std::uint32_t rl = o.inner.rank_below(zlo);
  const std::uint32_t rr_end = o.inner.rank_at_most(zhi);
  if (rl >= rr_end) return std::nullopt;
  std::optional<Witness> best;
  o.inner.for_each_cover(rl, rr_end - 1, lo, hi + 1,
                         [&](WaveletTree::Node n, std::uint32_t s, std::uint32_t e) {
                           const std::uint32_t il = n.level;
                           const auto at = static_cast<std::uint32_t>(o.rmq[il].argmin(
                               n.lo + s, n.lo + e - 1, [&](std::size_t i) {
                                 return kNone - inner_rank(o, il, static_cast<std::uint32_t>(i));
                               }));
                           const std::uint32_t r = inner_rank(o, il, at);
                           if (!best || r > best->rank) best = Witness{o.inner_slots[il][at], r};
                         });
  return best;
}

LimitedGrid::Cursor LimitedGrid::cursor(Column a, Column b, std::uint32_t c, std::uint32_t d,
                                        std::uint32_t zlo, std::uint32_t zhi) const {
  Cursor cur;
  cur.owner_ = this;
  cur.zlo_ = zlo;
  cur.zhi_ = zhi;
  const auto xr = xs_.map(a, b);
  if (!xr || c > d || zlo > zhi || size() == 0) return cur;
  const std::uint32_t rl = outer_wt_.rank_below(c);
  const std::uint32_t rr_end = outer_wt_.rank_at_most(d);
  if (rl >= rr_end) return cur;
  outer_wt_.for_each_cover(rl, rr_end - 1, xr->first, xr->second + 1,
                           [&](WaveletTree::Node n, std::uint32_t s, std::uint32_t e) {
                             cur.push(n.level, n.lo + s, n.lo + e - 1);
                           });
  return cur;
}

void LimitedGrid::Cursor::push(std::uint32_t level, std::uint32_t lo, std::uint32_t hi) {
  const auto w = owner_->inner_max_2d(level, lo, hi, zlo_, zhi_);
  if (!w) return;
  heap_.push_back({w->rank, level, lo, hi, w->slot});
  std::push_heap(heap_.begin(), heap_.end(), lighter<Candidate>);
  ++stats_.inserted;
}

std::optional<GridHit> LimitedGrid::Cursor::next() {
  if (heap_.empty()) return std::nullopt;
  std::pop_heap(heap_.begin(), heap_.end(), lighter<Candidate>);
  const Candidate top = heap_.back();
  heap_.pop_back();
  ++stats_.extracted;
  if (top.at > top.lo) push(top.level, top.lo, top.at - 1);
  if (top.at < top.hi) push(top.level, top.at + 1, top.hi);
  return GridHit{owner_->column_at(top.level, top.at), top.rank};
}

std::vector<GridHit> LimitedGrid::topk(Column a, Column b, std::uint32_t c, std::uint32_t d,
                                       std::uint32_t zlo, std::uint32_t zhi, std::size_t k) const {
  std::vector<GridHit> out;
  if (k == 0) return out;
  auto cur = cursor(a, b, c, d, zlo, zhi);
  while (out.size() < k) {
    auto hit = cur.next();
    if (!hit) break;
    out.push_back(*hit);
  }
  return out;
}

std::size_t LimitedGrid::bytes() const {
  std::size_t b = xs_.bytes() + z_.size() * 4 + outer_wt_.bytes();
  for (const auto& o : outer_) {
    b += o.slots.size() * 4 + o.inner.bytes();
    for (const auto& s : o.inner_slots) b += s.size() * 4;
    for (const auto& r : o.rmq) b += r.bytes();
  }
  return b;
}

}  // namespace topk
