#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topk/common.hpp"

namespace topk {

struct Document {
  DocId id = 0;
  std::vector<Symbol> text;  // symbols in [1, sigma]; the sentinel is implicit
  double rank = 0.0;         // static importance, used by the docrank measure
  std::string name;
};

struct DocPosition {
  DocId doc = 0;
  std::size_t offset = 0;  // offset == text length denotes the sentinel

  friend bool operator==(const DocPosition&, const DocPosition&) = default;
};

// An ordered document collection over the integer alphabet [1, sigma].
//
// The concatenated text places one sentinel (symbol 0) after every
// document, so the total length is sum(|text| + 1). Sentinels of
// different documents are ordered by doc id wherever suffixes are
// compared.
class Corpus {
 public:
  explicit Corpus(Symbol sigma);

  // Appends a document and returns its dense id. Throws InputError on
  // empty text or symbols outside [1, sigma]; std::logic_error once frozen.
  DocId add_document(std::vector<Symbol> text, std::optional<double> rank = std::nullopt,
                     std::string name = {});

  void freeze() noexcept { frozen_ = true; }
  bool frozen() const noexcept { return frozen_; }

  Symbol sigma() const noexcept { return sigma_; }
  std::size_t size() const noexcept { return n_; }
  std::size_t num_docs() const noexcept { return docs_.size(); }

  const Document& doc(DocId id) const;
  std::span<const Document> docs() const noexcept { return docs_; }

  // Global position of the first symbol of a document.
  std::size_t doc_start(DocId id) const { return starts_.at(id); }

  DocPosition position_to_doc(std::size_t global_pos) const;
  std::size_t global_position(DocId id, std::size_t offset) const;

  // Symbol at a global position; 0 at sentinels.
  Symbol symbol_at(std::size_t global_pos) const;

 private:
  Symbol sigma_;
  std::vector<Document> docs_;
  std::vector<std::size_t> starts_;
  std::size_t n_ = 0;
  bool frozen_ = false;
};

// Dense byte -> symbol mapping. Codes follow byte order, so symbol order
// matches byte order and sigma equals the number of distinct bytes seen.
class ByteAlphabet {
 public:
  ByteAlphabet() = default;
  explicit ByteAlphabet(std::vector<unsigned char> bytes);

  static ByteAlphabet from_texts(std::span<const std::string> texts);

  Symbol sigma() const noexcept { return static_cast<Symbol>(bytes_.size()); }
  std::span<const unsigned char> bytes() const noexcept { return bytes_; }

  // Throws InputError on a byte outside the alphabet.
  std::vector<Symbol> encode(std::string_view text) const;
  // Absent when the text uses a byte outside the alphabet.
  std::optional<std::vector<Symbol>> try_encode(std::string_view text) const;
  std::string decode(std::span<const Symbol> symbols) const;

 private:
  std::vector<unsigned char> bytes_;
  std::array<Symbol, 256> code_{};  // 0 = not in the alphabet
};

}  // namespace topk
