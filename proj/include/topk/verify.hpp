#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "topk/engine.hpp"

namespace topk {

struct BatteryOptions {
  std::uint32_t max_pattern = 4;
  // All patterns up to max_pattern when there are at most this many;
  // otherwise this many sampled patterns (document substrings and random
  // strings).
  std::size_t pattern_budget = 4000;
  std::uint64_t seed = 1;
};

struct Mismatch {
  std::string reproducer;  // corpus, pattern and query
  std::string expected;
  std::string actual;
};

struct BatteryReport {
  std::size_t patterns = 0;
  std::size_t checks = 0;
  std::optional<Mismatch> failure;

  bool ok() const noexcept { return !failure; }
};

// Compares every query family of the index against brute-force answers
// and stops at the first disagreement.
BatteryReport check_index(const Index& index, const BatteryOptions& options = {});

// Builds an index over a random corpus and checks it. Corpus shape,
// measures and the parameter kind are drawn from `seed`.
BatteryReport check_random_corpus(std::uint64_t seed, const BatteryOptions& options = {});

}  // namespace topk
