#include "topk/oracle.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>

namespace topk {

std::vector<std::uint32_t> naive_occurrences(std::span<const Symbol> text,
                                             std::span<const Symbol> pattern) {
  std::vector<std::uint32_t> out;
  if (pattern.empty()) {
    for (std::uint32_t i = 0; i <= text.size(); ++i) out.push_back(i);
    return out;
  }
  if (pattern.size() > text.size()) return out;
  for (std::size_t i = 0; i + pattern.size() <= text.size(); ++i) {
    if (std::equal(pattern.begin(), pattern.end(), text.begin() + static_cast<std::ptrdiff_t>(i))) {
      out.push_back(static_cast<std::uint32_t>(i));
    }
  }
  return out;
}

namespace {

void order(std::vector<DocHit>& hits) {
  std::sort(hits.begin(), hits.end(), [](const DocHit& a, const DocHit& b) {
    return a.weight != b.weight ? a.weight > b.weight : a.doc < b.doc;
  });
}

}  // namespace

std::vector<DocHit> oracle_ranking(const Corpus& corpus, std::span<const Symbol> pattern,
                                   MeasureKind m) {
  std::vector<DocHit> out;
  const RelevanceMeasure measure(m);
  for (const auto& d : corpus.docs()) {
    const auto occ = naive_occurrences(d.text, pattern);
    if (occ.empty()) continue;
    out.push_back({d.id, measure.weight(occ, d.rank)});
  }
  order(out);
  return out;
}

std::vector<DocHit> oracle_top_k(const Corpus& corpus, std::span<const Symbol> pattern,
                                 std::size_t k, MeasureKind m) {
  auto all = oracle_ranking(corpus, pattern, m);
  if (all.size() > k) all.resize(k);
  return all;
}

std::vector<DocHit> oracle_top_k_param(const Corpus& corpus, std::span<const Symbol> pattern,
                                       std::size_t k, double tau1, double tau2, MeasureKind m,
                                       ParamKind par) {
  std::vector<DocHit> out;
  const RelevanceMeasure measure(m);
  for (const auto& d : corpus.docs()) {
    const auto occ = naive_occurrences(d.text, pattern);
    if (occ.empty()) continue;
    const double p = param_value(par, summarize(occ), d.text.size());
    if (p < tau1 || p > tau2) continue;
    out.push_back({d.id, measure.weight(occ, d.rank)});
  }
  order(out);
  if (out.size() > k) out.resize(k);
  return out;
}

Corpus random_corpus(std::mt19937_64& rng, const RandomCorpusShape& shape) {
  const Symbol sigma = std::uniform_int_distribution<Symbol>(1, shape.max_sigma)(rng);
  const std::uint32_t docs = std::uniform_int_distribution<std::uint32_t>(1, shape.max_docs)(rng);
  const std::uint32_t total =
      std::uniform_int_distribution<std::uint32_t>(docs, std::max(docs, shape.max_total))(rng);
  // Uneven lengths: random cut points over the total.
  std::vector<std::uint32_t> points(total - 1), cuts;
  std::iota(points.begin(), points.end(), 1u);
  std::sample(points.begin(), points.end(), std::back_inserter(cuts), docs - 1, rng);
  std::vector<std::uint32_t> lengths;
  std::uint32_t prev = 0;
  for (std::uint32_t c : cuts) {
    lengths.push_back(c - prev);
    prev = c;
  }
  lengths.push_back(total - prev);
  // Skewed symbol distribution so that repeats are common.
  std::vector<double> freq(sigma);
  for (Symbol s = 0; s < sigma; ++s) freq[s] = 1.0 / (s + 1);
  std::discrete_distribution<Symbol> pick(freq.begin(), freq.end());
  std::uniform_int_distribution<int> rank_pick(0, 9);

  Corpus corpus(sigma);
  for (std::uint32_t len : lengths) {
    std::vector<Symbol> text(len);
    for (auto& s : text) s = pick(rng) + 1;
    corpus.add_document(std::move(text), static_cast<double>(rank_pick(rng)));
  }
  return corpus;
}

std::string spell(std::span<const Symbol> s) {
  std::string out;
  for (Symbol x : s) {
    out.push_back(x >= 1 && x <= 26 ? static_cast<char>('a' + x - 1) : '?');
  }
  return out;
}

}  // namespace topk
