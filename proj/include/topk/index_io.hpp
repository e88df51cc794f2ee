#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "topk/engine.hpp"

namespace topk {

inline constexpr std::uint32_t kIndexVersion = 1;

// Canonical little-endian encoding of an index: magic, version, header,
// length-prefixed sections and a trailing CRC-32 of every preceding byte.
// Search structures are not stored; loading rebuilds them.
std::string serialize_index(const Index& index);
// Throws FormatError on any checksum, version or structural problem.
Index deserialize_index(std::string_view bytes);

// A file that cannot be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void save_index(const Index& index, const std::filesystem::path& path);
Index load_index(const std::filesystem::path& path);

}  // namespace topk
