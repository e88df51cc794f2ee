#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "topk/common.hpp"

namespace topk {

enum class MeasureKind : std::uint8_t { kTf = 0, kMinDist = 1, kDocRank = 2 };

inline constexpr MeasureKind kAllMeasures[] = {MeasureKind::kTf, MeasureKind::kMinDist,
                                               MeasureKind::kDocRank};

std::string_view to_string(MeasureKind kind);
std::optional<MeasureKind> parse_measure(std::string_view name);

// Auxiliary per-(pattern, document) parameter used by filtered queries.
enum class ParamKind : std::uint8_t { kNone = 0, kTf = 1, kDocLength = 2 };

std::string_view to_string(ParamKind kind);
std::optional<ParamKind> parse_param(std::string_view name);

// Everything the supported measures need from a set of occurrence starts.
struct OccurrenceSummary {
  std::uint32_t count = 0;
  std::uint32_t min_gap = kNone;  // kNone when count < 2

  friend bool operator==(const OccurrenceSummary&, const OccurrenceSummary&) = default;
};

OccurrenceSummary summarize(std::span<const std::uint32_t> sorted_starts);

// Weight of a document for a pattern. Larger is more relevant.
//   tf      : number of occurrences
//   mindist : -(minimum gap between occurrence starts); documents with a
//             single occurrence get -infinity, below every real gap
//   docrank : the document's static rank
class RelevanceMeasure {
 public:
  constexpr explicit RelevanceMeasure(MeasureKind kind) noexcept : kind_(kind) {}

  constexpr MeasureKind kind() const noexcept { return kind_; }
  constexpr bool needs_gaps() const noexcept { return kind_ == MeasureKind::kMinDist; }

  double weight(const OccurrenceSummary& occ, double doc_rank) const;
  double weight(std::span<const std::uint32_t> sorted_starts, double doc_rank) const {
    return weight(summarize(sorted_starts), doc_rank);
  }

 private:
  MeasureKind kind_;
};

std::uint32_t param_value(ParamKind kind, const OccurrenceSummary& occ, std::size_t doc_length);

}  // namespace topk
