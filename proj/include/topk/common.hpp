#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace topk {

using Symbol = std::uint32_t;
using DocId = std::uint32_t;
using NodeId = std::uint32_t;
using Column = std::uint32_t;

inline constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

// Malformed user input: bad symbols, empty documents, negative k, bad ranges.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// An index file that fails its checksum or structural checks.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace topk
