#include "topk/measures.hpp"

#include <algorithm>
#include <limits>

namespace topk {

std::string_view to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::kTf:
      return "tf";
    case MeasureKind::kMinDist:
      return "mindist";
    case MeasureKind::kDocRank:
      return "docrank";
  }
  return "?";
}

std::optional<MeasureKind> parse_measure(std::string_view name) {
  for (MeasureKind k : kAllMeasures) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view to_string(ParamKind kind) {
  switch (kind) {
    case ParamKind::kNone:
      return "none";
    case ParamKind::kTf:
      return "tf";
    case ParamKind::kDocLength:
      return "doclen";
  }
  return "?";
}

std::optional<ParamKind> parse_param(std::string_view name) {
  for (ParamKind k : {ParamKind::kNone, ParamKind::kTf, ParamKind::kDocLength}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

OccurrenceSummary summarize(std::span<const std::uint32_t> sorted_starts) {
  OccurrenceSummary out;
  out.count = static_cast<std::uint32_t>(sorted_starts.size());
  for (std::size_t i = 1; i < sorted_starts.size(); ++i) {
    out.min_gap = std::min(out.min_gap, sorted_starts[i] - sorted_starts[i - 1]);
  }
  return out;
}

double RelevanceMeasure::weight(const OccurrenceSummary& occ, double doc_rank) const {
  switch (kind_) {
    case MeasureKind::kTf:
      return static_cast<double>(occ.count);
    case MeasureKind::kMinDist:
      if (occ.count < 2) return -std::numeric_limits<double>::infinity();
      return -static_cast<double>(occ.min_gap);
    case MeasureKind::kDocRank:
      return doc_rank;
  }
  return 0.0;
}

std::uint32_t param_value(ParamKind kind, const OccurrenceSummary& occ, std::size_t doc_length) {
  switch (kind) {
    case ParamKind::kNone:
      return 0;
    case ParamKind::kTf:
      return occ.count;
    case ParamKind::kDocLength:
      return static_cast<std::uint32_t>(doc_length);
  }
  return 0;
}

}  // namespace topk
