#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "grid_oracle.hpp"
#include "topk/limited_grid.hpp"
#include "topk/ranked_wavelet.hpp"
#include "topk/striped_index.hpp"

namespace topk {
namespace {

using testing::filter_sort;
using testing::make_grid;
using testing::random_grid;

std::vector<Column> all_columns(std::uint32_t w) {
  std::vector<Column> c(w);
  std::iota(c.begin(), c.end(), Column{0});
  return c;
}

TEST(RankedWavelet, ExhaustiveOnSmallGrids) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const auto width = static_cast<std::uint32_t>(1 + rng() % 24);
    const auto g = make_grid(random_grid(rng, width, 6, 8));
    const RankedWavelet rw(g);
    for (Column a = 0; a < width; ++a) {
      for (Column b = a; b < width; ++b) {
        for (std::uint32_t c = 0; c <= 6; ++c) {
          for (std::uint32_t d = c; d <= 6; ++d) {
            ASSERT_EQ(topk_2d(rw, a, b, c, d, width), filter_sort(*g, a, b, c, d, width));
          }
        }
      }
    }
  }
}

TEST(RankedWavelet, Examples) {
  std::mt19937_64 rng(52);
  const auto g = make_grid(random_grid(rng, 8, 5));
  const RankedWavelet rw(g);
  EXPECT_EQ(rw.topk(0, 7, 0, 5, 3), filter_sort(*g, 0, 7, 0, 5, 3));
  EXPECT_TRUE(rw.topk(0, 7, 6, 9, 3).empty());
  EXPECT_TRUE(rw.topk(0, 7, 0, 5, 0).empty());
}

TEST(RankedWavelet, FullHeightAgreesWithStripedIndex) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const auto width = static_cast<std::uint32_t>(1 + rng() % 3000);
    const auto g = make_grid(random_grid(rng, width, 40));
    const RankedWavelet rw(g);
    StripedOptions opts;
    opts.log_factor = 2;
    const StripedIndex si(g, opts);
    for (int q = 0; q < 200; ++q) {
      Column a = rng() % width, b = rng() % width;
      if (a > b) std::swap(a, b);
      const auto h = static_cast<std::uint32_t>(rng() % 42);
      const std::size_t k = 1 + rng() % 30;
      ASSERT_EQ(rw.topk(a, b, 0, h, k), si.topk(a, b, h, k));
    }
  }
}

TEST(RankedWavelet, CursorExtendsPrefixAndKeepsQueueDiscipline) {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 50; ++trial) {
    const auto width = static_cast<std::uint32_t>(1 + rng() % 500);
    const auto g = make_grid(random_grid(rng, width, 20));
    const RankedWavelet rw(g);
    Column a = rng() % width, b = rng() % width;
    if (a > b) std::swap(a, b);
    std::uint32_t c = rng() % 21, d = rng() % 21;
    if (c > d) std::swap(c, d);
    auto cur = rw.cursor(a, b, c, d, true);
    std::vector<GridHit> got;
    while (auto h = cur.next()) {
      got.push_back(*h);
      ASSERT_EQ(got, rw.topk(a, b, c, d, got.size()));
    }
    ASSERT_EQ(got, filter_sort(*g, a, b, c, d, width));
    EXPECT_EQ(cur.stats().extracted, got.size());
    EXPECT_LE(cur.stats().max_inserts_per_point, 2u);
    EXPECT_EQ(cur.stats().inserted, cur.stats().extracted);
  }
}

TEST(LimitedGrid, InnerMaxMatchesScanOnEverySubBox) {
  std::mt19937_64 rng(55);
  const auto rg = random_grid(rng, 64, 7, 30, 8);
  const auto g = make_grid(rg);
  const LimitedGrid lg(g, all_columns(64), rg.z, 8);
  for (std::uint32_t level = 0; level < lg.levels(); ++level) {
    const std::uint32_t n = lg.level_size(level);
    for (std::uint32_t lo = 0; lo < n; ++lo) {
      for (std::uint32_t hi = lo; hi < n; ++hi) {
        for (std::uint32_t zlo = 0; zlo < 8; ++zlo) {
          for (std::uint32_t zhi = zlo; zhi < 8; ++zhi) {
            std::optional<LimitedGrid::Witness> best;
            for (std::uint32_t s = lo; s <= hi; ++s) {
              const std::uint32_t z = lg.z_at(level, s);
              if (z < zlo || z > zhi) continue;
              if (!best || lg.rank_at(level, s) > best->rank) {
                best = LimitedGrid::Witness{s, lg.rank_at(level, s)};
              }
            }
            const auto got = lg.inner_max_2d(level, lo, hi, zlo, zhi);
            ASSERT_EQ(got.has_value(), best.has_value());
            if (got) {
              ASSERT_EQ(got->slot, best->slot);
              ASSERT_EQ(got->rank, best->rank);
            }
          }
        }
      }
    }
  }
}

TEST(LimitedGrid, SingleBoxExamples) {
  const std::vector<double> w{4};
  const auto g = std::make_shared<const WeightedGrid>(std::vector<std::uint32_t>{2},
                                                      std::vector<DocId>{0}, w);
  const std::vector<std::uint32_t> z{3};
  const LimitedGrid lg(g, {0}, z, 4);
  const auto hit = lg.inner_max_2d(0, 0, 0, 0, 3);
  ASSERT_TRUE(hit.has_value());
  EXPECT_EQ(lg.column_at(0, hit->slot), 0u);
  EXPECT_FALSE(lg.inner_max_2d(0, 0, 0, 0, 2).has_value());
  EXPECT_THROW(LimitedGrid(g, {0}, z, 3), InputError);
}

TEST(LimitedGrid, MatchesOracleOnRandomBoxes) {
  std::mt19937_64 rng(56);
  for (int trial = 0; trial < 40; ++trial) {
    const auto width = static_cast<std::uint32_t>(1 + rng() % 400);
    const std::uint32_t z_max = 1 + static_cast<std::uint32_t>(rng() % 64);
    const auto rg = random_grid(rng, width, 15, 40, z_max);
    const auto g = make_grid(rg);
    // A random subset of columns, as in a stripe.
    std::vector<Column> cols;
    for (Column c = 0; c < width; ++c) {
      if (trial % 2 == 0 || rng() % 3 != 0) cols.push_back(c);
    }
    const LimitedGrid lg(g, cols, rg.z, z_max);
    const RankedWavelet rw(g, cols);
    std::vector<std::uint32_t> z_masked = rg.z;
    for (Column c = 0; c < width; ++c) {
      if (!std::binary_search(cols.begin(), cols.end(), c)) z_masked[c] = kNone;
    }
    for (int q = 0; q < 200; ++q) {
      Column a = rng() % width, b = rng() % width;
      if (a > b) std::swap(a, b);
      std::uint32_t c = rng() % 16, d = rng() % 16;
      if (c > d) std::swap(c, d);
      std::uint32_t zlo = rng() % z_max, zhi = rng() % z_max;
      if (zlo > zhi) std::swap(zlo, zhi);
      if (q % 5 == 0) zhi = zlo;
      const std::size_t k = rng() % 20;
      ASSERT_EQ(topk_3d_limited(lg, a, b, c, d, zlo, zhi, k),
                filter_sort(*g, a, b, c, d, k, &z_masked, zlo, zhi));
      // The whole z range reduces to the two-dimensional query.
      ASSERT_EQ(lg.topk(a, b, c, d, 0, z_max - 1, k), rw.topk(a, b, c, d, k));
    }
  }
}

TEST(LimitedGrid, CursorExtendsPrefix) {
  std::mt19937_64 rng(57);
  const auto rg = random_grid(rng, 300, 10, 30, 16);
  const auto g = make_grid(rg);
  const LimitedGrid lg(g, all_columns(300), rg.z, 16);
  auto cur = lg.cursor(20, 250, 1, 9, 3, 12);
  std::vector<GridHit> got;
  while (auto h = cur.next()) {
    got.push_back(*h);
    ASSERT_EQ(got, lg.topk(20, 250, 1, 9, 3, 12, got.size()));
  }
  EXPECT_EQ(got, filter_sort(*g, 20, 250, 1, 9, 300, &rg.z, 3, 12));
  EXPECT_EQ(cur.stats().extracted, got.size());
  EXPECT_TRUE(lg.topk(20, 250, 1, 9, 3, 12, 0).empty());
}

}  // namespace
}  // namespace topk
