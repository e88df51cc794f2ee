#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "grid_oracle.hpp"
#include "topk/bit_vector.hpp"
#include "topk/rank_space.hpp"
#include "topk/rmq.hpp"
#include "topk/three_sided.hpp"
#include "topk/wavelet_tree.hpp"
#include "topk/weighted_grid.hpp"

namespace topk {
namespace {

TEST(RankBitVector, RankMatchesPrefixCounts) {
  std::mt19937_64 rng(31);
  for (std::size_t size : {0u, 1u, 63u, 64u, 65u, 511u, 512u, 513u, 5000u}) {
    RankBitVector bv(size);
    std::vector<bool> ref(size);
    for (std::size_t i = 0; i < size; ++i) {
      if (rng() % 3 == 0) {
        bv.set(i);
        ref[i] = true;
      }
    }
    bv.build_rank();
    std::size_t ones = 0;
    for (std::size_t i = 0; i <= size; ++i) {
      ASSERT_EQ(bv.rank1(i), ones) << size << " " << i;
      ASSERT_EQ(bv.rank0(i), i - ones);
      if (i < size) {
        ASSERT_EQ(bv[i], ref[i]);
        ones += ref[i];
      }
    }
  }
}

TEST(RankSpace, MapsThroughSuccessorAndPredecessor) {
  const RankSpace rs({10, 40, 70});
  EXPECT_EQ(rs.map(20, 80), (std::pair<std::uint32_t, std::uint32_t>{1, 2}));
  EXPECT_FALSE(rs.map(0, 5).has_value());
  EXPECT_FALSE(rs.map(41, 69).has_value());
  EXPECT_FALSE(rs.map(50, 20).has_value());
  const RankSpace id({0, 1, 2, 3});
  for (Column a = 0; a < 4; ++a) {
    EXPECT_EQ(id.map(a, a), (std::pair<std::uint32_t, std::uint32_t>{a, a}));
  }
}

TEST(RmqIndex, LeftmostMinimumOnAllShortWindows) {
  std::mt19937_64 rng(32);
  for (std::size_t n : {1u, 2u, 63u, 64u, 65u, 130u, 300u}) {
    std::vector<std::uint32_t> keys(n);
    for (auto& k : keys) k = static_cast<std::uint32_t>(rng() % 8);
    auto key = [&](std::size_t i) { return keys[i]; };
    const RmqIndex rmq(n, key);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n && j < i + 64; ++j) {
        const auto expect = std::min_element(keys.begin() + i, keys.begin() + j + 1) - keys.begin();
        ASSERT_EQ(rmq.argmin(i, j, key), static_cast<std::size_t>(expect)) << n << " " << i << " " << j;
      }
    }
    for (int q = 0; q < 2000; ++q) {
      std::size_t i = rng() % n, j = rng() % n;
      if (i > j) std::swap(i, j);
      const auto expect = std::min_element(keys.begin() + i, keys.begin() + j + 1) - keys.begin();
      ASSERT_EQ(rmq.argmin(i, j, key), static_cast<std::size_t>(expect));
    }
  }
}

TEST(ThreeSided, CountAndReportExamples) {
  const std::vector<std::uint32_t> ys{0, 3, 1, 2};
  const WaveletTree wt(ys);
  EXPECT_EQ(count_three_sided(wt, 0, 3, 2), 3u);
  EXPECT_EQ(count_three_sided(wt, 0, 3, 100), 4u);
  EXPECT_EQ(count_three_sided(wt, 2, 1, 5), 0u);
  const RmqIndex rmq(ys.size(), [&](std::size_t i) { return ys[i]; });
  auto rep = report_three_sided(rmq, ys, 0, 3, 1);
  std::sort(rep.begin(), rep.end());
  EXPECT_EQ(rep, (std::vector<std::uint32_t>{0, 2}));
  EXPECT_TRUE(report_three_sided(rmq, ys, 1, 1, 2).empty());
  EXPECT_EQ(report_three_sided(rmq, ys, 2, 2, 1), (std::vector<std::uint32_t>{2}));
}

TEST(ThreeSided, AgreesWithLinearScan) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto n = static_cast<std::uint32_t>(1 + rng() % 200);
    std::vector<std::uint32_t> ys(n);
    for (auto& y : ys) y = static_cast<std::uint32_t>(rng() % 20);
    const WaveletTree wt(ys);
    const RmqIndex rmq(n, [&](std::size_t i) { return ys[i]; });
    std::uint32_t a = rng() % n, b = rng() % n;
    if (a > b) std::swap(a, b);
    const auto h = static_cast<std::uint32_t>(rng() % 22);
    std::vector<std::uint32_t> expect;
    for (std::uint32_t i = a; i <= b; ++i) {
      if (ys[i] <= h) expect.push_back(i);
    }
    auto got = report_three_sided(rmq, ys, a, b, h);
    std::sort(got.begin(), got.end());
    ASSERT_EQ(got, expect);
    ASSERT_EQ(count_three_sided(wt, a, b, h), expect.size());
  }
}

TEST(WaveletTree, ChildrenPartitionTheirParent) {
  std::mt19937_64 rng(34);
  std::vector<std::uint32_t> ys(300);
  for (auto& y : ys) y = static_cast<std::uint32_t>(rng() % 40);
  std::vector<std::vector<std::uint32_t>> pos;
  const WaveletTree wt(ys, &pos);
  ASSERT_EQ(pos.size(), wt.levels() + 1);
  std::vector<WaveletTree::Node> frontier{wt.root()};
  while (!frontier.empty()) {
    const auto v = frontier.back();
    frontier.pop_back();
    // Slots of a node are in x order and hold exactly its rank range.
    std::vector<std::uint32_t> mine(pos[v.level].begin() + v.lo, pos[v.level].begin() + v.hi + 1);
    ASSERT_TRUE(std::is_sorted(mine.begin(), mine.end()));
    std::uint32_t max_y = 0;
    for (std::uint32_t p : mine) max_y = std::max(max_y, ys[p]);
    ASSERT_EQ(wt.max_y(v), max_y);
    if (v.is_leaf()) continue;
    const auto l = WaveletTree::left(v), r = WaveletTree::right(v);
    std::vector<std::uint32_t> merged(pos[l.level].begin() + l.lo, pos[l.level].begin() + l.hi + 1);
    merged.insert(merged.end(), pos[r.level].begin() + r.lo, pos[r.level].begin() + r.hi + 1);
    std::sort(merged.begin(), merged.end());
    ASSERT_EQ(merged, mine);
    for (std::uint32_t p : std::vector<std::uint32_t>(pos[l.level].begin() + l.lo,
                                                      pos[l.level].begin() + l.hi + 1)) {
      for (std::uint32_t q : std::vector<std::uint32_t>(pos[r.level].begin() + r.lo,
                                                        pos[r.level].begin() + r.hi + 1)) {
        ASSERT_LE(ys[p], ys[q]);
      }
    }
    // Rank directory maps every prefix exactly.
    for (std::uint32_t i = 0; i <= v.size(); ++i) {
      std::uint32_t right = 0;
      for (std::uint32_t j = 0; j < i; ++j) right += wt.goes_right(v, j);
      ASSERT_EQ(wt.map_right(v, 0, i).second, right);
      ASSERT_EQ(wt.map_left(v, 0, i).second, i - right);
    }
    frontier.push_back(l);
    frontier.push_back(r);
  }
}

TEST(WeightedGrid, RanksFollowWeightThenDocThenColumn) {
  const std::vector<double> w{5, 9, 5, 1, 5};
  const WeightedGrid g({0, 0, 0, 0, 0}, {2, 0, 1, 0, 1}, w);
  // Order: col1 (9), col2 (5, d1), col4 (5, d1), col0 (5, d2), col3 (1).
  EXPECT_EQ(g.weight_rank(1), 4u);
  EXPECT_EQ(g.weight_rank(2), 3u);
  EXPECT_EQ(g.weight_rank(4), 2u);
  EXPECT_EQ(g.weight_rank(0), 1u);
  EXPECT_EQ(g.weight_rank(3), 0u);
  EXPECT_EQ(g.weight(4), 5.0);
  EXPECT_EQ(g.raw_weight_of_rank(4), 9.0);
  const std::vector<double> bad{1, std::nan("")};
  EXPECT_THROW(WeightedGrid({0, 0}, {0, 0}, bad), InputError);
  EXPECT_THROW(WeightedGrid({0}, {0, 0}, std::vector<double>{1}), InputError);
}

TEST(ThreeSidedIndex, SubsetOfColumnsMapsBackToGlobalColumns) {
  const std::vector<std::uint32_t> y_of{0, 3, 1, 2, 0, 5, 1};
  const ThreeSidedIndex idx({1, 2, 4, 6}, y_of);
  EXPECT_EQ(idx.count(0, 6, 1), 3u);
  EXPECT_EQ(idx.count(3, 3, 9), 0u);
  std::vector<Column> out;
  idx.report(0, 6, 1, y_of, out);
  std::sort(out.begin(), out.end());
  EXPECT_EQ(out, (std::vector<Column>{2, 4, 6}));
}

}  // namespace
}  // namespace topk
