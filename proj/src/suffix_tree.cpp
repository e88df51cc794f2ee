#include "topk/suffix_tree.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <utility>

namespace topk {

std::vector<std::uint32_t> build_suffix_array(std::span<const std::uint32_t> keys) {
  const std::size_t n = keys.size();
  std::vector<std::uint32_t> sa(n);
  if (n == 0) return sa;

  // Prefix doubling. Ranks start at key + 1 so that 0 can stand for
  // "past the end"; the unique sentinel keys make every suffix distinct,
  // hence the loop ends once all ranks differ.
  std::vector<std::uint32_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) rank[i] = keys[i] + 1;

  std::vector<std::pair<std::uint64_t, std::uint32_t>> items(n);
  for (std::size_t h = 1;; h *= 2) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t second = i + h < n ? rank[i + h] : 0;
      items[i] = {(static_cast<std::uint64_t>(rank[i]) << 32) | second,
                  static_cast<std::uint32_t>(i)};
    }
    std::sort(items.begin(), items.end());
    std::uint32_t r = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == 0 || items[j].first != items[j - 1].first) ++r;
      rank[items[j].second] = r;
    }
    if (r == n) break;
  }
  for (std::size_t j = 0; j < n; ++j) sa[j] = items[j].second;
  return sa;
}

std::vector<std::uint32_t> build_lcp_array(std::span<const std::uint32_t> keys,
                                           std::span<const std::uint32_t> sa) {
  const std::size_t n = keys.size();
  std::vector<std::uint32_t> inverse(n), lcp(n, 0);
  for (std::size_t i = 0; i < n; ++i) inverse[sa[i]] = static_cast<std::uint32_t>(i);
  std::size_t h = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (inverse[i] == 0) {
      h = 0;
      continue;
    }
    const std::size_t j = sa[inverse[i] - 1];
    // Distinct sentinel keys guarantee a mismatch before running off the text.
    while (keys[i + h] == keys[j + h]) ++h;
    lcp[inverse[i]] = static_cast<std::uint32_t>(h);
    if (h > 0) --h;
  }
  return lcp;
}

SuffixTree::SuffixTree(Storage storage) : s_(std::move(storage)) {
  const std::size_t nodes = s_.parent.size();
  const std::size_t n = s_.keys.size();
  auto fail = [](const char* what) { throw FormatError(std::string("suffix tree: ") + what); };
  for (const auto* v : {&s_.string_depth, &s_.depth, &s_.label_start, &s_.leaf_lo, &s_.leaf_hi,
                        &s_.subtree_end}) {
    if (v->size() != nodes) fail("node arrays differ in length");
  }
  if (!s_.col_lo.empty() && (s_.col_lo.size() != nodes || s_.col_hi.size() != nodes)) {
    fail("column intervals differ in length");
  }
  if (nodes < 2 || s_.child_offset.size() != nodes + 1) fail("bad node count");
  if (s_.child_ids.size() != s_.child_keys.size() || s_.child_offset.back() != s_.child_ids.size()) {
    fail("bad child table");
  }
  for (std::size_t v = 0; v < nodes; ++v) {
    if (s_.child_offset[v] > s_.child_offset[v + 1]) fail("bad child offsets");
    if (v > 0 && s_.parent[v] >= v) fail("parent after child");
    if (s_.subtree_end[v] < v || s_.subtree_end[v] >= nodes) fail("bad subtree end");
    if (s_.leaf_lo[v] > s_.leaf_hi[v] || s_.leaf_hi[v] >= n) fail("bad leaf interval");
    if (s_.label_start[v] >= n) fail("bad label start");
    if (s_.label_start[v] + std::size_t{s_.string_depth[v]} > n) fail("bad string depth");
  }
  for (NodeId c : s_.child_ids) {
    if (c == 0 || c >= nodes) fail("bad child id");
  }
  for (std::size_t d = 0; d < s_.doc_starts.size(); ++d) {
    if (s_.doc_starts[d] >= n || (d > 0 && s_.doc_starts[d] <= s_.doc_starts[d - 1])) {
      fail("bad document starts");
    }
  }
}

namespace {

struct TempTree {
  std::vector<std::uint32_t> parent, sd, lo, hi, label;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // (parent, child) in attach order

  std::uint32_t add(std::uint32_t string_depth, std::uint32_t leaf_lo, std::uint32_t label_start) {
    parent.push_back(kNone);
    sd.push_back(string_depth);
    lo.push_back(leaf_lo);
    hi.push_back(leaf_lo);
    label.push_back(label_start);
    return static_cast<std::uint32_t>(parent.size() - 1);
  }
  void attach(std::uint32_t child, std::uint32_t p) {
    parent[child] = p;
    edges.emplace_back(p, child);
  }
};

}  // namespace

SuffixTree SuffixTree::build(const Corpus& corpus) {
  const std::size_t n = corpus.size();
  const std::size_t num_docs = corpus.num_docs();
  if (n == 0) {
    throw InputError("cannot build a suffix tree over an empty corpus");
  }
  if (n >= kNone / 2 || num_docs + corpus.sigma() >= kNone) {
    throw InputError("corpus too large for 32-bit node and key ids");
  }

  Storage s;
  s.keys.resize(n);
  s.doc_starts.resize(num_docs);
  for (DocId d = 0; d < num_docs; ++d) {
    const std::size_t start = corpus.doc_start(d);
    s.doc_starts[d] = start;
    const auto& text = corpus.doc(d).text;
    for (std::size_t i = 0; i < text.size(); ++i) {
      s.keys[start + i] = static_cast<std::uint32_t>(num_docs) + text[i];
    }
    s.keys[start + text.size()] = d;
  }

  const auto sa = build_suffix_array(s.keys);
  const auto lcp = build_lcp_array(s.keys, sa);

  auto suffix_length = [&](std::uint32_t pos) -> std::uint32_t {
    auto it = std::upper_bound(s.doc_starts.begin(), s.doc_starts.end(), std::size_t{pos});
    const auto d = static_cast<std::size_t>(std::distance(s.doc_starts.begin(), it) - 1);
    const std::size_t sentinel = (d + 1 < num_docs ? s.doc_starts[d + 1] : n) - 1;
    return static_cast<std::uint32_t>(sentinel - pos + 1);
  };

  // Bottom-up construction over lcp-intervals.
  TempTree t;
  t.parent.reserve(2 * n);
  const std::uint32_t root = t.add(0, 0, sa[0]);
  std::vector<std::uint32_t> stack{root};
  std::uint32_t pending = t.add(suffix_length(sa[0]), 0, sa[0]);
  for (std::uint32_t i = 1; i < n; ++i) {
    const std::uint32_t h = lcp[i];
    while (t.sd[stack.back()] > h) {
      const std::uint32_t top = stack.back();
      t.hi[top] = i - 1;
      t.attach(pending, top);
      pending = top;
      stack.pop_back();
    }
    if (t.sd[stack.back()] < h) {
      const std::uint32_t w = t.add(h, t.lo[pending], t.label[pending]);
      t.attach(pending, w);
      stack.push_back(w);
    } else {
      t.attach(pending, stack.back());
    }
    pending = t.add(suffix_length(sa[i]), i, sa[i]);
  }
  while (stack.size() > 1) {
    const std::uint32_t top = stack.back();
    t.hi[top] = static_cast<std::uint32_t>(n - 1);
    t.attach(pending, top);
    pending = top;
    stack.pop_back();
  }
  t.attach(pending, root);
  t.hi[root] = static_cast<std::uint32_t>(n - 1);

  // Children in attach order are already in lexicographic order.
  const std::size_t m = t.parent.size();
  std::vector<std::uint32_t> offset(m + 1, 0);
  for (const auto& [p, c] : t.edges) ++offset[p + 1];
  std::partial_sum(offset.begin(), offset.end(), offset.begin());
  std::vector<std::uint32_t> kids(t.edges.size());
  {
    std::vector<std::uint32_t> fill(offset.begin(), offset.end() - 1);
    for (const auto& [p, c] : t.edges) kids[fill[p]++] = c;
  }
  t.edges.clear();
  t.edges.shrink_to_fit();

  // Preorder renumbering; id 0 is reserved for the virtual super-root.
  std::vector<std::uint32_t> order;  // temp ids in preorder
  order.reserve(m);
  {
    std::vector<std::uint32_t> dfs{root};
    while (!dfs.empty()) {
      const std::uint32_t v = dfs.back();
      dfs.pop_back();
      order.push_back(v);
      for (std::uint32_t j = offset[v + 1]; j-- > offset[v];) dfs.push_back(kids[j]);
    }
  }
  std::vector<std::uint32_t> new_id(m);
  for (std::size_t i = 0; i < m; ++i) new_id[order[i]] = static_cast<std::uint32_t>(i + 1);

  const std::size_t total = m + 1;
  s.parent.assign(total, kNone);
  s.string_depth.assign(total, 0);
  s.depth.assign(total, 0);
  s.label_start.assign(total, 0);
  s.leaf_lo.assign(total, 0);
  s.leaf_hi.assign(total, static_cast<std::uint32_t>(n - 1));
  s.subtree_end.assign(total, 0);
  s.child_offset.assign(total + 1, 0);
  s.child_ids.clear();
  s.child_keys.clear();
  s.child_ids.reserve(m - 1);
  s.child_keys.reserve(m - 1);
  s.col_lo.assign(total, 0);
  s.col_hi.assign(total, 0);

  for (std::size_t i = 0; i < m; ++i) {
    const std::uint32_t old = order[i];
    const NodeId v = static_cast<NodeId>(i + 1);
    s.parent[v] = old == root ? kVirtualRoot : new_id[t.parent[old]];
    s.string_depth[v] = t.sd[old];
    s.depth[v] = s.depth[s.parent[v]] + 1;
    s.label_start[v] = t.label[old];
    s.leaf_lo[v] = t.lo[old];
    s.leaf_hi[v] = t.hi[old];
    s.child_offset[v] = static_cast<std::uint32_t>(s.child_ids.size());
    for (std::uint32_t j = offset[old]; j < offset[old + 1]; ++j) {
      const std::uint32_t c = kids[j];
      s.child_ids.push_back(new_id[c]);
      s.child_keys.push_back(s.keys[t.label[c] + t.sd[old]]);
    }
  }
  s.child_offset[total] = static_cast<std::uint32_t>(s.child_ids.size());
  for (std::size_t v = total; v-- > 1;) {
    const std::uint32_t b = s.child_offset[v], e = s.child_offset[v + 1];
    s.subtree_end[v] = b == e ? static_cast<NodeId>(v) : s.subtree_end[s.child_ids[e - 1]];
  }
  s.subtree_end[kVirtualRoot] = static_cast<NodeId>(total - 1);

  return SuffixTree(std::move(s));
}

std::span<const NodeId> SuffixTree::children(NodeId v) const {
  const auto b = s_.child_offset[v], e = s_.child_offset[v + 1];
  return std::span<const NodeId>(s_.child_ids).subspan(b, e - b);
}

std::span<const std::uint32_t> SuffixTree::child_keys(NodeId v) const {
  const auto b = s_.child_offset[v], e = s_.child_offset[v + 1];
  return std::span<const std::uint32_t>(s_.child_keys).subspan(b, e - b);
}

DocPosition SuffixTree::position_to_doc(std::size_t global_pos) const {
  if (global_pos >= s_.keys.size()) {
    throw BoundsError("position out of range");
  }
  auto it = std::upper_bound(s_.doc_starts.begin(), s_.doc_starts.end(), global_pos);
  const auto d = static_cast<DocId>(std::distance(s_.doc_starts.begin(), it) - 1);
  return {d, global_pos - s_.doc_starts[d]};
}

std::optional<DocPosition> SuffixTree::leaf_payload(NodeId v) const {
  if (!is_leaf(v)) return std::nullopt;
  return position_to_doc(s_.label_start[v]);
}

std::optional<Locus> SuffixTree::locus(std::span<const Symbol> pattern) const {
  const std::size_t p = pattern.size();
  if (p == 0) return Locus{kRoot, s_.string_depth[kRoot] == 0};
  const auto doc_count = static_cast<std::uint32_t>(s_.doc_starts.size());
  NodeId v = kRoot;
  std::size_t matched = 0;
  while (true) {
    // Symbols outside [1, sigma] never match: 0 maps to a non-sentinel key
    // and large values map past every child key.
    if (pattern[matched] > kNone - doc_count) return std::nullopt;
    const auto keys = child_keys(v);
    const std::uint32_t want = symbol_key(pattern[matched]);
    auto it = std::lower_bound(keys.begin(), keys.end(), want);
    if (it == keys.end() || *it != want) return std::nullopt;
    const NodeId c = children(v)[static_cast<std::size_t>(it - keys.begin())];
    const std::size_t edge_end = std::min<std::size_t>(s_.string_depth[c], p);
    const std::size_t base = s_.label_start[c];
    for (std::size_t j = matched + 1; j < edge_end; ++j) {
      if (pattern[j] > kNone - doc_count || s_.keys[base + j] != symbol_key(pattern[j])) {
        return std::nullopt;
      }
    }
    if (p <= s_.string_depth[c]) return Locus{c, p == s_.string_depth[c]};
    v = c;
    matched = s_.string_depth[c];
  }
}

void SuffixTree::set_column_intervals(std::vector<std::uint32_t> lo, std::vector<std::uint32_t> hi) {
  if (lo.size() != num_nodes() || hi.size() != num_nodes()) {
    throw std::logic_error("column interval arrays do not match node count");
  }
  s_.col_lo = std::move(lo);
  s_.col_hi = std::move(hi);
}

void SuffixTree::dump(std::ostream& os) const {
  for (NodeId v = 0; v < num_nodes(); ++v) {
    os << v << ' ';
    if (s_.parent[v] == kNone) {
      os << '-';
    } else {
      os << s_.parent[v];
    }
    os << ' ' << s_.string_depth[v] << " [" << s_.col_lo[v] << ',' << s_.col_hi[v] << "]\n";
  }
}

std::size_t SuffixTree::bytes() const {
  auto sz = [](const auto& v) { return v.size() * sizeof(v[0]); };
  return sz(s_.keys) + sz(s_.doc_starts) + sz(s_.parent) + sz(s_.string_depth) + sz(s_.depth) +
         sz(s_.label_start) + sz(s_.leaf_lo) + sz(s_.leaf_hi) + sz(s_.subtree_end) +
         sz(s_.child_offset) + sz(s_.child_ids) + sz(s_.child_keys) + sz(s_.col_lo) +
         sz(s_.col_hi);
}

}  // namespace topk
