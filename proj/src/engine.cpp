#include "topk/engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

namespace topk {

namespace {

std::size_t to_count(long long k) {
  if (k < 0) throw InputError("k must be non-negative");
  return static_cast<std::size_t>(k);
}

}  // namespace

std::optional<DocHit> Index::DocIterator::next() {
  if (!grid_) return std::nullopt;
  const auto hit = it_.next();
  if (!hit) return std::nullopt;
  return DocHit{grid_->doc(hit->column), grid_->weight(hit->column)};
}

Index Index::build(Corpus corpus, const BuildOptions& options) {
  if (corpus.num_docs() == 0) throw InputError("corpus has no documents");
  if (options.z_max == 0) throw InputError("z_max must be positive");
  corpus.freeze();
  std::vector<MeasureKind> kinds;
  for (MeasureKind m : options.measures) {
    if (std::find(kinds.begin(), kinds.end(), m) == kinds.end()) kinds.push_back(m);
  }
  if (kinds.empty()) throw InputError("no measures requested");
  const bool gaps = std::find(kinds.begin(), kinds.end(), MeasureKind::kMinDist) != kinds.end();

  SuffixTree tree = SuffixTree::build(corpus);
  auto links = mark_and_link(tree, gaps);
  IndexParts parts;
  parts.layout = assign_columns(tree, links);
  parts.tree = tree.storage();
  tree = SuffixTree();

  for (MeasureKind m : kinds) {
    const RelevanceMeasure measure(m);
    std::vector<double> w(links.size());
    for (const auto& link : links) {
      w[link.column] = measure.weight(link.occ, corpus.doc(link.doc).rank);
    }
    parts.weights.emplace_back(m, std::move(w));
  }
  parts.par = options.par;
  parts.z_max = options.z_max;
  std::size_t clamped = 0;
  if (options.par != ParamKind::kNone) {
    parts.z.resize(links.size());
    for (const auto& link : links) {
      std::uint32_t z =
          param_value(options.par, link.occ, corpus.doc(link.doc).text.size());
      if (z >= options.z_max) {
        z = options.z_max - 1;
        ++clamped;
      }
      parts.z[link.column] = z;
    }
  }
  links.clear();
  links.shrink_to_fit();
  parts.corpus = std::move(corpus);
  parts.striped = options.striped;
  parts.alphabet = options.alphabet;
  Index index = assemble(std::move(parts));
  index.clamped_ = clamped;
  return index;
}

Index Index::assemble(IndexParts parts) {
  const std::size_t w = parts.layout.size();
  const auto& lay = parts.layout;
  if (lay.doc_of.size() != w || lay.source_of.size() != w || lay.target_of.size() != w) {
    throw FormatError("grid layout arrays differ in length");
  }
  if (parts.par != ParamKind::kNone && parts.z.size() != w) {
    throw FormatError("parameter array does not match the grid");
  }
  if (parts.z_max == 0) throw FormatError("z_max must be positive");
  for (std::uint32_t z : parts.z) {
    if (z >= parts.z_max) throw FormatError("parameter value not below z_max");
  }
  for (DocId d : lay.doc_of) {
    if (d >= parts.corpus.num_docs()) throw FormatError("link names an unknown document");
  }

  Index index;
  index.tree_ = SuffixTree(std::move(parts.tree));
  parts.tree = {};
  if (index.tree_.leaf_count() != parts.corpus.size() ||
      index.tree_.num_docs() != parts.corpus.num_docs()) {
    throw FormatError("suffix tree does not match the corpus");
  }
  index.max_y_ = w == 0 ? 0 : *std::max_element(lay.y_of.begin(), lay.y_of.end());
  const std::uint32_t lg =
      w < 2 ? 1 : static_cast<std::uint32_t>(std::bit_width(static_cast<std::uint64_t>(w)) - 1);
  const std::uint32_t l = std::max(2u, lg);
  index.stripe_height_ = l * l;

  std::vector<Column> all(w);
  std::iota(all.begin(), all.end(), Column{0});
  index.counter_ = ThreeSidedIndex(std::move(all), lay.y_of);

  auto weights = std::move(parts.weights);
  parts.weights.clear();
  index.parts_ = std::move(parts);
  for (auto& [kind, values] : weights) {
    if (values.size() != w) throw FormatError("weight array does not match the grid");
    if (index.slot(kind)) throw FormatError("measure stored twice");
    Measure m;
    m.kind = kind;
    index.build_measure(m, values);
    index.measures_.push_back(std::move(m));
    values = {};
  }
  return index;
}

void Index::build_measure(Measure& m, std::span<const double> weights) const {
  const auto& lay = parts_.layout;
  m.grid = std::make_shared<const WeightedGrid>(lay.y_of, lay.doc_of, weights);
  m.striped = StripedIndex(m.grid, parts_.striped);
  m.stripes.clear();
  if (parts_.par == ParamKind::kNone) return;
  const std::uint32_t count = max_y_ / stripe_height_ + 1;
  std::vector<std::vector<Column>> cols(count);
  for (Column c = 0; c < lay.size(); ++c) cols[lay.y_of[c] / stripe_height_].push_back(c);
  m.stripes.reserve(count);
  for (auto& c : cols) m.stripes.emplace_back(m.grid, std::move(c), parts_.z, parts_.z_max);
}

std::vector<MeasureKind> Index::measures() const {
  std::vector<MeasureKind> out;
  for (const auto& m : measures_) out.push_back(m.kind);
  return out;
}

const Index::Measure* Index::slot(MeasureKind m) const noexcept {
  for (const auto& x : measures_) {
    if (x.kind == m) return &x;
  }
  return nullptr;
}

const Index::Measure& Index::require(MeasureKind m) const {
  const Measure* x = slot(m);
  if (!x) throw InputError("measure '" + std::string(to_string(m)) + "' is not in the index");
  return *x;
}

std::optional<Index::Range> Index::range(std::span<const Symbol> pattern) const {
  const auto loc = tree_.locus(pattern);
  if (!loc) return std::nullopt;
  const NodeId v = loc->node;
  return Range{tree_.col_lo(v), tree_.col_hi(v), tree_.depth(v) - 1, tree_.string_depth(v)};
}

std::vector<DocHit> Index::to_docs(const WeightedGrid& g, std::span<const GridHit> hits) const {
  std::vector<DocHit> out;
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back({g.doc(h.column), g.weight(h.column)});
  return out;
}

QueryResult Index::top_k(std::span<const Symbol> pattern, long long k, MeasureKind m) const {
  const std::size_t kk = to_count(k);
  const Measure& meas = require(m);
  QueryResult res;
  const auto r = range(pattern);
  if (!r) return res;
  res.found = true;
  res.locus_depth = r->string_depth;
  const auto hits = meas.striped.topk(r->a, r->b, r->h, kk);
  res.hits = to_docs(*meas.grid, hits);
  return res;
}

std::vector<GridHit> Index::top_k_hits(std::span<const Symbol> pattern, std::size_t k,
                                      MeasureKind m) const {
  const Measure& meas = require(m);
  const auto r = range(pattern);
  if (!r) return {};
  return meas.striped.topk(r->a, r->b, r->h, k);
}

Index::DocIterator Index::top_k_online(std::span<const Symbol> pattern, MeasureKind m) const {
  const Measure& meas = require(m);
  DocIterator it;
  const auto r = range(pattern);
  if (!r) return it;
  it.grid_ = meas.grid.get();
  const StripedIndex* s = &meas.striped;
  const Range q = *r;
  it.it_ = TopKIterator([s, q](std::size_t k) { return s->topk(q.a, q.b, q.h, k); },
                        first_stage_size(meas.grid->width()));
  return it;
}

std::uint32_t Index::doc_frequency(std::span<const Symbol> pattern) const {
  const auto r = range(pattern);
  if (!r) return 0;
  return counter_.count(r->a, r->b, r->h);
}

std::vector<TfIdfHit> Index::report_tfidf_above(std::span<const Symbol> pattern,
                                                double tau) const {
  if (!(tau >= 0)) throw InputError("tau must be non-negative");
  require(MeasureKind::kTf);
  std::vector<TfIdfHit> out;
  const std::uint32_t df = doc_frequency(pattern);
  if (df == 0) return out;
  const double idf = std::log(static_cast<double>(corpus().num_docs()) / df);
  auto it = top_k_online(pattern, MeasureKind::kTf);
  while (auto hit = it.next()) {
    const double score = hit->weight * idf;
    if (score < tau) break;
    out.push_back({hit->doc, static_cast<std::uint32_t>(hit->weight), score});
  }
  return out;
}

std::vector<DocId> Index::k_mine(std::span<const Symbol> pattern, std::uint32_t min_tf) const {
  std::vector<DocId> out;
  auto it = top_k_online(pattern, MeasureKind::kTf);
  while (auto hit = it.next()) {
    if (hit->weight < min_tf) break;
    out.push_back(hit->doc);
  }
  return out;
}

std::vector<DocId> Index::k_repeats(std::span<const Symbol> pattern,
                                    std::uint32_t max_gap) const {
  std::vector<DocId> out;
  auto it = top_k_online(pattern, MeasureKind::kMinDist);
  while (auto hit = it.next()) {
    if (!std::isfinite(hit->weight) || -hit->weight > max_gap) break;
    out.push_back(hit->doc);
  }
  return out;
}

QueryResult Index::top_k_param(std::span<const Symbol> pattern, long long k, double tau1,
                               double tau2, MeasureKind m) const {
  const std::size_t kk = to_count(k);
  if (parts_.par == ParamKind::kNone) throw InputError("index has no parameter annotation");
  if (std::isnan(tau1) || std::isnan(tau2)) throw InputError("NaN parameter bound");
  const Measure& meas = require(m);
  QueryResult res;
  const auto r = range(pattern);
  if (!r) return res;
  res.found = true;
  res.locus_depth = r->string_depth;

  // Bounds are quantized like the stored values: integers clamped into
  // [0, z_max - 1].
  const double top = parts_.z_max - 1;
  const double lo = std::ceil(tau1), hi = std::floor(tau2);
  if (kk == 0 || lo > hi || hi < 0) return res;
  const auto zlo = static_cast<std::uint32_t>(std::clamp(lo, 0.0, top));
  const auto zhi = static_cast<std::uint32_t>(std::clamp(hi, 0.0, top));

  struct Head {
    GridHit hit;
    std::size_t stripe;
  };
  auto lighter = [](const Head& x, const Head& y) { return x.hit.rank < y.hit.rank; };
  std::priority_queue<Head, std::vector<Head>, decltype(lighter)> heads(lighter);
  std::vector<LimitedGrid::Cursor> cursors;
  const std::uint32_t last = std::min<std::uint32_t>(
      r->h / stripe_height_, static_cast<std::uint32_t>(meas.stripes.size() - 1));
  for (std::uint32_t s = 0; s <= last; ++s) {
    const std::uint32_t c = s * stripe_height_;
    const std::uint32_t d = std::min(r->h, c + stripe_height_ - 1);
    cursors.push_back(meas.stripes[s].cursor(r->a, r->b, c, d, zlo, zhi));
    if (auto h = cursors.back().next()) heads.push({*h, cursors.size() - 1});
  }
  std::vector<GridHit> hits;
  while (hits.size() < kk && !heads.empty()) {
    const Head top_head = heads.top();
    heads.pop();
    hits.push_back(top_head.hit);
    if (auto h = cursors[top_head.stripe].next()) heads.push({*h, top_head.stripe});
  }
  res.hits = to_docs(*meas.grid, hits);
  return res;
}

void Index::override_weight(MeasureKind m, Column column, double weight) {
  const Measure& cur = require(m);
  if (column >= cur.grid->width()) throw BoundsError("column outside the grid");
  std::vector<double> w(cur.grid->width());
  for (Column c = 0; c < w.size(); ++c) w[c] = cur.grid->weight(c);
  w[column] = weight;
  for (auto& x : measures_) {
    if (x.kind == m) build_measure(x, w);
  }
}

std::size_t Index::bytes() const {
  std::size_t b = tree_.bytes() + counter_.bytes();
  const auto& lay = parts_.layout;
  b += lay.size() * 16 + parts_.z.size() * 4;
  for (const auto& d : parts_.corpus.docs()) b += d.text.size() * sizeof(Symbol);
  for (const auto& m : measures_) {
    b += m.grid->bytes() + m.striped.bytes();
    for (const auto& s : m.stripes) b += s.bytes();
  }
  return b;
}

}  // namespace topk
