#include "topk/doc_links.hpp"

#include <algorithm>
#include <set>

namespace topk {

namespace {

// Per-document pass over the marked nodes of one document, given in
// preorder: recovers the induced tree and the occurrence summaries.
void link_document(const SuffixTree& tree, DocId doc, std::span<const NodeId> marked,
                   bool track_gaps, std::vector<DocLink>& out) {
  const std::size_t m = marked.size();
  std::vector<std::uint32_t> up(m, kNone);
  std::vector<std::uint32_t> stack;
  for (std::uint32_t i = 0; i < m; ++i) {
    while (!stack.empty() && !tree.is_ancestor_or_self(marked[stack.back()], marked[i])) {
      stack.pop_back();
    }
    up[i] = stack.empty() ? kNone : stack.back();
    stack.push_back(i);
  }

  std::vector<std::uint32_t> count(m, 0);
  std::vector<std::set<std::uint32_t>> offsets;
  std::vector<std::uint32_t> gap;
  if (track_gaps) {
    offsets.resize(m);
    gap.assign(m, kNone);
  }
  const std::size_t doc_start = tree.storage().doc_starts[doc];
  for (std::uint32_t i = 0; i < m; ++i) {
    if (tree.is_leaf(marked[i])) {
      count[i] = 1;
      if (track_gaps) {
        offsets[i].insert(static_cast<std::uint32_t>(tree.label_start(marked[i]) - doc_start));
      }
    }
  }

  const std::size_t first = out.size();
  out.resize(first + m);
  for (std::uint32_t i = m; i-- > 0;) {
    DocLink& link = out[first + i];
    link.source = marked[i];
    link.target = up[i] == kNone ? SuffixTree::kVirtualRoot : marked[up[i]];
    link.doc = doc;
    link.occ.count = count[i];
    if (track_gaps) link.occ.min_gap = gap[i];
    if (up[i] == kNone) continue;

    const std::uint32_t p = up[i];
    count[p] += count[i];
    if (!track_gaps) continue;
    // Small-to-large merge keeping the minimum gap between neighbours.
    if (offsets[p].size() < offsets[i].size()) {
      std::swap(offsets[p], offsets[i]);
      std::swap(gap[p], gap[i]);
    }
    std::uint32_t g = std::min(gap[p], gap[i]);
    auto& into = offsets[p];
    for (std::uint32_t x : offsets[i]) {
      auto it = into.insert(x).first;
      if (it != into.begin()) g = std::min(g, x - *std::prev(it));
      if (auto next = std::next(it); next != into.end()) g = std::min(g, *next - x);
    }
    gap[p] = g;
    offsets[i].clear();
  }
}

}  // namespace

std::vector<DocLink> mark_and_link(const SuffixTree& tree, bool track_gaps) {
  const std::size_t n = tree.leaf_count();
  const std::size_t num_docs = tree.num_docs();

  std::vector<NodeId> leaf_by_rank(n, kNone);
  for (NodeId v = SuffixTree::kRoot; v < tree.num_nodes(); ++v) {
    if (tree.is_leaf(v)) leaf_by_rank[tree.leaf_lo(v)] = v;
  }

  // Marked nodes of d: its leaves and the LCAs of consecutive d-leaves in
  // suffix order. The LCA is found on the root-to-leaf path of the current
  // leaf as the deepest node whose suffix interval starts at or before
  // the previous d-leaf.
  std::vector<std::uint64_t> pairs;
  pairs.reserve(2 * n);
  std::vector<std::uint32_t> last_rank(num_docs, kNone);
  std::vector<NodeId> path;
  std::vector<NodeId> chain;
  auto lo_of = [&](NodeId x) { return tree.leaf_lo(x); };
  for (std::uint32_t i = 0; i < n; ++i) {
    const NodeId leaf = leaf_by_rank[i];
    chain.clear();
    NodeId x = leaf;
    while (x != SuffixTree::kVirtualRoot && tree.leaf_lo(x) == i) {
      chain.push_back(x);
      x = tree.parent(x);
    }
    while (!path.empty() && path.back() != x) path.pop_back();
    path.insert(path.end(), chain.rbegin(), chain.rend());

    const DocId d = tree.position_to_doc(tree.label_start(leaf)).doc;
    pairs.push_back((static_cast<std::uint64_t>(d) << 32) | leaf);
    if (last_rank[d] != kNone) {
      auto it = std::ranges::upper_bound(path, last_rank[d], {}, lo_of);
      pairs.push_back((static_cast<std::uint64_t>(d) << 32) | *std::prev(it));
    }
    last_rank[d] = i;
  }
  path = {};
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  std::vector<DocLink> links;
  links.reserve(pairs.size());
  std::vector<NodeId> marked;
  for (std::size_t b = 0; b < pairs.size();) {
    const auto d = static_cast<DocId>(pairs[b] >> 32);
    std::size_t e = b;
    marked.clear();
    while (e < pairs.size() && (pairs[e] >> 32) == d) {
      marked.push_back(static_cast<NodeId>(pairs[e] & 0xffffffffu));
      ++e;
    }
    link_document(tree, d, marked, track_gaps, links);
    b = e;
  }
  return links;
}

GridLayout assign_columns(SuffixTree& tree, std::vector<DocLink>& links) {
  std::sort(links.begin(), links.end(), [](const DocLink& a, const DocLink& b) {
    return a.source != b.source ? a.source < b.source : a.doc < b.doc;
  });
  const std::size_t nodes = tree.num_nodes();
  std::vector<std::uint32_t> first_col(nodes + 1, 0);
  GridLayout layout;
  layout.y_of.resize(links.size());
  layout.doc_of.resize(links.size());
  layout.source_of.resize(links.size());
  layout.target_of.resize(links.size());
  for (std::size_t c = 0; c < links.size(); ++c) {
    DocLink& link = links[c];
    link.column = static_cast<Column>(c);
    ++first_col[link.source + 1];
    layout.y_of[c] = tree.depth(link.target);
    layout.doc_of[c] = link.doc;
    layout.source_of[c] = link.source;
    layout.target_of[c] = link.target;
  }
  for (std::size_t v = 0; v < nodes; ++v) first_col[v + 1] += first_col[v];

  std::vector<std::uint32_t> lo(nodes), hi(nodes);
  for (NodeId v = 0; v < nodes; ++v) {
    lo[v] = first_col[v];
    hi[v] = first_col[tree.subtree_end(v) + 1] - 1;
  }
  // The virtual root owns no links; its interval is the whole grid.
  lo[SuffixTree::kVirtualRoot] = 0;
  tree.set_column_intervals(std::move(lo), std::move(hi));
  return layout;
}

}  // namespace topk
