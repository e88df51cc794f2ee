#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "topk/common.hpp"
#include "topk/corpus.hpp"

namespace topk {

struct Locus {
  NodeId node = kNone;
  bool exact = false;  // the pattern ends exactly at the node (string depth == |P|)
};

// Generalized suffix tree over a frozen corpus.
//
// Nodes are numbered in preorder. Node 0 is the virtual super-root (tree
// depth 0, no children in the child table); node 1 is the real root at
// tree depth 1. Leaves appear in preorder in lexicographic suffix order,
// so leaf_lo/leaf_hi give each node's suffix-array interval.
class SuffixTree {
 public:
  static constexpr NodeId kVirtualRoot = 0;
  static constexpr NodeId kRoot = 1;

  // Flat storage. Everything the tree knows lives here; the index file
  // format serializes it verbatim.
  struct Storage {
    std::vector<std::uint32_t> keys;        // keyed text: sentinel of doc d -> d, symbol s -> D + s
    std::vector<std::size_t> doc_starts;    // global start of every document
    std::vector<NodeId> parent;             // parent[kRoot] == kVirtualRoot
    std::vector<std::uint32_t> string_depth;
    std::vector<std::uint32_t> depth;       // tree depth
    std::vector<std::uint32_t> label_start; // start of some suffix below the node
    std::vector<std::uint32_t> leaf_lo;     // suffix-array interval of the subtree
    std::vector<std::uint32_t> leaf_hi;
    std::vector<NodeId> subtree_end;        // last preorder id in the subtree
    std::vector<std::uint32_t> child_offset;// CSR offsets, size num_nodes + 1
    std::vector<NodeId> child_ids;          // children ordered by first edge key
    std::vector<std::uint32_t> child_keys;
    std::vector<std::uint32_t> col_lo;      // grid column interval, set by assign_columns
    std::vector<std::uint32_t> col_hi;
  };

  SuffixTree() = default;
  explicit SuffixTree(Storage storage);

  // Sorts all suffixes, derives the LCP array and builds the compact tree.
  static SuffixTree build(const Corpus& corpus);

  std::size_t num_nodes() const noexcept { return s_.parent.size(); }
  std::size_t leaf_count() const noexcept { return s_.keys.size(); }
  std::size_t num_docs() const noexcept { return s_.doc_starts.size(); }

  NodeId parent(NodeId v) const { return s_.parent[v]; }
  std::uint32_t string_depth(NodeId v) const { return s_.string_depth[v]; }
  std::uint32_t depth(NodeId v) const { return s_.depth[v]; }
  std::uint32_t leaf_lo(NodeId v) const { return s_.leaf_lo[v]; }
  std::uint32_t leaf_hi(NodeId v) const { return s_.leaf_hi[v]; }
  NodeId subtree_end(NodeId v) const { return s_.subtree_end[v]; }
  std::uint32_t label_start(NodeId v) const { return s_.label_start[v]; }
  std::uint32_t col_lo(NodeId v) const { return s_.col_lo[v]; }
  std::uint32_t col_hi(NodeId v) const { return s_.col_hi[v]; }

  bool is_leaf(NodeId v) const { return v != kVirtualRoot && s_.child_offset[v] == s_.child_offset[v + 1]; }
  std::span<const NodeId> children(NodeId v) const;
  std::span<const std::uint32_t> child_keys(NodeId v) const;

  // u is v or an ancestor of v.
  bool is_ancestor_or_self(NodeId u, NodeId v) const {
    return u == kVirtualRoot || (u <= v && v <= s_.subtree_end[u]);
  }

  // Document and offset of the suffix stored at a leaf.
  std::optional<DocPosition> leaf_payload(NodeId v) const;
  DocPosition position_to_doc(std::size_t global_pos) const;

  // Highest node whose path has the pattern as a prefix; absent when the
  // pattern does not occur. The empty pattern maps to the root.
  std::optional<Locus> locus(std::span<const Symbol> pattern) const;

  void set_column_intervals(std::vector<std::uint32_t> lo, std::vector<std::uint32_t> hi);

  // One line per node: id parent string_depth [col_lo,col_hi].
  void dump(std::ostream& os) const;

  const Storage& storage() const noexcept { return s_; }
  std::size_t bytes() const;

 private:
  std::uint32_t symbol_key(Symbol s) const {
    return static_cast<std::uint32_t>(s_.doc_starts.size()) + s;
  }

  Storage s_;
};

// Suffix array of the keyed text (sentinel keys distinct per document).
std::vector<std::uint32_t> build_suffix_array(std::span<const std::uint32_t> keys);
// lcp[i] = LCP(suffix sa[i-1], suffix sa[i]); lcp[0] = 0.
std::vector<std::uint32_t> build_lcp_array(std::span<const std::uint32_t> keys,
                                           std::span<const std::uint32_t> sa);

}  // namespace topk
