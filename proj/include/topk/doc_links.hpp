#pragma once

#include <vector>

#include "topk/common.hpp"
#include "topk/measures.hpp"
#include "topk/suffix_tree.hpp"

namespace topk {

// ptr(v, d): from a node v marked with document d to its lowest marked
// proper ancestor for d (or the virtual super-root). Carries the summary
// of d's occurrences below v, from which every measure derives its weight.
struct DocLink {
  NodeId source = kNone;
  NodeId target = kNone;
  DocId doc = 0;
  Column column = kNone;
  OccurrenceSummary occ;
};

// Column-indexed point set derived from the links. One point per column:
// x = column, y = tree depth of the link target.
struct GridLayout {
  std::vector<std::uint32_t> y_of;
  std::vector<DocId> doc_of;
  std::vector<NodeId> source_of;
  std::vector<NodeId> target_of;

  std::size_t size() const noexcept { return y_of.size(); }
};

// Marks nodes per document and materializes every link. A leaf is marked
// with its own document; an internal node is marked with d when at least
// two of its children contain d-leaves. Gap tracking (needed only by the
// mindist measure) is skipped unless requested.
std::vector<DocLink> mark_and_link(const SuffixTree& tree, bool track_gaps);

// Orders links by (source preorder, doc), numbers them as columns and
// stores every node's column interval in the tree.
GridLayout assign_columns(SuffixTree& tree, std::vector<DocLink>& links);

}  // namespace topk
