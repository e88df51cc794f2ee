#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "topk/corpus.hpp"
#include "topk/doc_links.hpp"
#include "topk/limited_grid.hpp"
#include "topk/measures.hpp"
#include "topk/online.hpp"
#include "topk/striped_index.hpp"
#include "topk/suffix_tree.hpp"
#include "topk/three_sided.hpp"
#include "topk/weighted_grid.hpp"

namespace topk {

struct BuildOptions {
  std::vector<MeasureKind> measures{MeasureKind::kTf};
  ParamKind par = ParamKind::kNone;
  std::uint32_t z_max = 1024;
  StripedOptions striped;
  std::vector<unsigned char> alphabet;  // kept in the index for decoding byte patterns
};

struct DocHit {
  DocId doc = 0;
  double weight = 0.0;

  friend bool operator==(const DocHit&, const DocHit&) = default;
};

struct QueryResult {
  std::vector<DocHit> hits;
  std::uint32_t locus_depth = 0;  // string depth of the locus; 0 when absent
  bool found = false;
};

struct TfIdfHit {
  DocId doc = 0;
  std::uint32_t tf = 0;
  double score = 0.0;
};

// Everything needed to rebuild an index without re-running construction.
// Index::assemble consumes `tree` and `weights`; afterwards they live in
// the tree and the per-measure grids.
struct IndexParts {
  Corpus corpus{1};
  std::vector<unsigned char> alphabet;  // byte alphabet used to encode texts; may be empty
  SuffixTree::Storage tree;
  GridLayout layout;
  std::vector<std::pair<MeasureKind, std::vector<double>>> weights;  // per column
  ParamKind par = ParamKind::kNone;
  std::uint32_t z_max = 1024;
  std::vector<std::uint32_t> z;  // per column, empty without par
  StripedOptions striped;
};

// Top-k document retrieval over a frozen corpus.
//
// Every (marked node, document) link becomes a grid point (column, depth
// of the link target). For a pattern with locus v, the documents that
// contain it correspond one-to-one to the points in
// [col_lo(v), col_hi(v)] x [0, depth(v) - 1], each carrying the weight of
// the document for the pattern.
class Index {
 public:
  // Online stream of documents for one pattern.
  class DocIterator {
   public:
    DocIterator() = default;
    std::optional<DocHit> next();

   private:
    friend class Index;
    const WeightedGrid* grid_ = nullptr;
    TopKIterator it_;
  };

  static Index build(Corpus corpus, const BuildOptions& options = {});
  static Index assemble(IndexParts parts);

  Index(Index&&) noexcept = default;
  Index& operator=(Index&&) noexcept = default;
  Index(const Index&) = delete;
  Index& operator=(const Index&) = delete;

  const Corpus& corpus() const noexcept { return parts_.corpus; }
  const SuffixTree& tree() const noexcept { return tree_; }
  const GridLayout& layout() const noexcept { return parts_.layout; }
  const IndexParts& parts() const noexcept { return parts_; }
  std::size_t num_links() const noexcept { return parts_.layout.size(); }
  ParamKind par() const noexcept { return parts_.par; }
  std::uint32_t z_max() const noexcept { return parts_.z_max; }
  std::uint32_t max_y() const noexcept { return max_y_; }
  std::uint32_t stripe_height() const noexcept { return stripe_height_; }
  // Parameter values raised to z_max - 1 during build.
  std::size_t clamped_params() const noexcept { return clamped_; }

  bool has_measure(MeasureKind m) const noexcept { return slot(m) != nullptr; }
  std::vector<MeasureKind> measures() const;
  const WeightedGrid& grid(MeasureKind m) const { return *require(m).grid; }
  const StripedIndex& striped(MeasureKind m) const { return require(m).striped; }

  std::optional<Locus> locus(std::span<const Symbol> pattern) const { return tree_.locus(pattern); }

  QueryResult top_k(std::span<const Symbol> pattern, long long k, MeasureKind m) const;
  // The grid points behind top_k.
  std::vector<GridHit> top_k_hits(std::span<const Symbol> pattern, std::size_t k,
                                  MeasureKind m) const;
  DocIterator top_k_online(std::span<const Symbol> pattern, MeasureKind m) const;
  std::uint32_t doc_frequency(std::span<const Symbol> pattern) const;
  std::vector<TfIdfHit> report_tfidf_above(std::span<const Symbol> pattern, double tau) const;
  std::vector<DocId> k_mine(std::span<const Symbol> pattern, std::uint32_t min_tf) const;
  std::vector<DocId> k_repeats(std::span<const Symbol> pattern, std::uint32_t max_gap) const;
  // Top-k among documents with par(P, d) in [tau1, tau2].
  QueryResult top_k_param(std::span<const Symbol> pattern, long long k, double tau1, double tau2,
                          MeasureKind m) const;

  // Test hook: replaces one column's weight and rebuilds that measure.
  void override_weight(MeasureKind m, Column column, double weight);

  std::size_t bytes() const;

 private:
  struct Measure {
    MeasureKind kind{};
    std::shared_ptr<const WeightedGrid> grid;
    StripedIndex striped;
    std::vector<LimitedGrid> stripes;  // par queries; stripe s covers y in [s*h, (s+1)*h)
  };

  // The grid query of a pattern: columns [a, b], heights [0, h].
  struct Range {
    Column a = 0;
    Column b = 0;
    std::uint32_t h = 0;
    std::uint32_t string_depth = 0;
  };

  Index() = default;
  void build_measure(Measure& m, std::span<const double> weights) const;
  std::optional<Range> range(std::span<const Symbol> pattern) const;
  const Measure* slot(MeasureKind m) const noexcept;
  const Measure& require(MeasureKind m) const;
  std::vector<DocHit> to_docs(const WeightedGrid& g, std::span<const GridHit> hits) const;

  IndexParts parts_;
  SuffixTree tree_;
  std::uint32_t max_y_ = 0;
  std::uint32_t stripe_height_ = 1;
  std::size_t clamped_ = 0;
  std::vector<Measure> measures_;
  ThreeSidedIndex counter_;  // all columns, for df
};

}  // namespace topk
