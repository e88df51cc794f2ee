#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "topk/corpus.hpp"
#include "topk/engine.hpp"
#include "topk/measures.hpp"

namespace topk {

// Brute-force reference answers computed by scanning every document.

// Start offsets of the pattern in a document, in increasing order. The
// empty pattern occurs at every offset 0..|d| (the sentinel included).
std::vector<std::uint32_t> naive_occurrences(std::span<const Symbol> text,
                                             std::span<const Symbol> pattern);

// (doc, weight) for every document containing the pattern, weight
// descending then doc ascending.
std::vector<DocHit> oracle_ranking(const Corpus& corpus, std::span<const Symbol> pattern,
                                   MeasureKind m);
std::vector<DocHit> oracle_top_k(const Corpus& corpus, std::span<const Symbol> pattern,
                                 std::size_t k, MeasureKind m);
// Documents whose parameter value lies in [tau1, tau2].
std::vector<DocHit> oracle_top_k_param(const Corpus& corpus, std::span<const Symbol> pattern,
                                       std::size_t k, double tau1, double tau2, MeasureKind m,
                                       ParamKind par);

struct RandomCorpusShape {
  std::uint32_t max_docs = 16;
  std::uint32_t max_total = 400;  // total symbols over all documents
  Symbol max_sigma = 8;
};

Corpus random_corpus(std::mt19937_64& rng, const RandomCorpusShape& shape = {});

// Printable form of a symbol sequence: 'a' for 1, 'b' for 2, ...
std::string spell(std::span<const Symbol> s);

}  // namespace topk
