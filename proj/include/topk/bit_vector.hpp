#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace topk {

// Plain bit vector with a two-level rank directory: an absolute count per
// 512-bit superblock and a relative count per 64-bit word.
class RankBitVector {
 public:
  RankBitVector() = default;
  explicit RankBitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  // Must be called after the last set() and before any rank query.
  void build_rank();

  std::size_t size() const noexcept { return size_; }
  bool operator[](std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }

  // Ones in [0, i).
  std::size_t rank1(std::size_t i) const {
    const std::size_t w = i / 64;
    std::size_t r = super_[w / 8] + block_[w];
    if (const unsigned rem = i % 64; rem != 0) {
      r += static_cast<std::size_t>(std::popcount(words_[w] & ((std::uint64_t{1} << rem) - 1)));
    }
    return r;
  }
  std::size_t rank0(std::size_t i) const { return i - rank1(i); }

  std::size_t bytes() const noexcept {
    return words_.size() * 8 + super_.size() * 8 + block_.size() * 2;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
  std::vector<std::uint64_t> super_;
  std::vector<std::uint16_t> block_;
};

inline void RankBitVector::build_rank() {
  // One spare word so rank1(size) never reads past the directory.
  words_.push_back(0);
  super_.assign(words_.size() / 8 + 1, 0);
  block_.assign(words_.size(), 0);
  std::uint64_t total = 0;
  std::uint16_t in_super = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (w % 8 == 0) {
      super_[w / 8] = total;
      in_super = 0;
    }
    block_[w] = in_super;
    const auto c = static_cast<std::uint16_t>(std::popcount(words_[w]));
    in_super = static_cast<std::uint16_t>(in_super + c);
    total += c;
  }
}

}  // namespace topk
