#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace topk {

// Range-minimum index returning the leftmost position of the minimum key.
//
// Keys are not stored: the caller passes the same key accessor to the
// constructor and to every query (the owner keeps the keyed arrays).
// Layout: blocks of 32 positions, a sparse table over block minima and,
// per position, a 32-bit mask of the in-block suffix-minimum stack, so a
// query costs O(1) and space is O(n) words.
class RmqIndex {
 public:
  RmqIndex() = default;

  template <class Key>
  RmqIndex(std::size_t n, Key&& key);

  std::size_t size() const noexcept { return n_; }

  // Leftmost argmin over [i, j], i <= j < size().
  template <class Key>
  std::size_t argmin(std::size_t i, std::size_t j, Key&& key) const;

  std::size_t bytes() const noexcept {
    std::size_t b = masks_.size() * 4;
    for (const auto& row : table_) b += row.size() * 4;
    return b;
  }

 private:
  static constexpr std::size_t kBlock = 32;

  std::size_t in_block(std::size_t i, std::size_t j) const {
    const std::uint32_t m = masks_[j] & (~std::uint32_t{0} << (i % kBlock));
    return (j / kBlock) * kBlock + static_cast<std::size_t>(std::countr_zero(m));
  }

  template <class Key>
  static std::size_t better(std::size_t a, std::size_t b, Key& key) {
    // a < b positionally; ties keep the left one.
    return key(b) < key(a) ? b : a;
  }

  std::size_t n_ = 0;
  std::vector<std::uint32_t> masks_;
  std::vector<std::vector<std::uint32_t>> table_;  // table_[l][b]: argmin of blocks [b, b + 2^l)
};

template <class Key>
RmqIndex::RmqIndex(std::size_t n, Key&& key) : n_(n), masks_(n, 0) {
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<std::uint32_t> block_min(blocks);
  std::vector<std::size_t> stack;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * kBlock, hi = std::min(n, lo + kBlock);
    stack.clear();
    std::uint32_t mask = 0;
    for (std::size_t j = lo; j < hi; ++j) {
      while (!stack.empty() && key(j) < key(stack.back())) {
        mask &= ~(std::uint32_t{1} << (stack.back() - lo));
        stack.pop_back();
      }
      stack.push_back(j);
      mask |= std::uint32_t{1} << (j - lo);
      masks_[j] = mask;
    }
    block_min[b] = static_cast<std::uint32_t>(lo + std::countr_zero(masks_[hi - 1]));
  }
  if (blocks == 0) return;
  table_.push_back(std::move(block_min));
  for (std::size_t l = 1; (std::size_t{1} << l) <= blocks; ++l) {
    const auto& prev = table_.back();
    const std::size_t half = std::size_t{1} << (l - 1);
    std::vector<std::uint32_t> row(blocks - (std::size_t{1} << l) + 1);
    for (std::size_t b = 0; b < row.size(); ++b) {
      row[b] = static_cast<std::uint32_t>(better(prev[b], prev[b + half], key));
    }
    table_.push_back(std::move(row));
  }
}

template <class Key>
std::size_t RmqIndex::argmin(std::size_t i, std::size_t j, Key&& key) const {
  const std::size_t bi = i / kBlock, bj = j / kBlock;
  if (bi == bj) return in_block(i, j);
  std::size_t best = in_block(i, bi * kBlock + kBlock - 1);
  if (bj > bi + 1) {
    const std::size_t l = static_cast<std::size_t>(std::bit_width(bj - bi - 1)) - 1;
    const std::size_t a = table_[l][bi + 1];
    const std::size_t b = table_[l][bj - (std::size_t{1} << l)];
    best = better(best, better(a, b, key), key);
  }
  return better(best, in_block(bj * kBlock, j), key);
}

}  // namespace topk
