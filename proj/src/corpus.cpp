#include "topk/corpus.hpp"

#include <algorithm>

namespace topk {

Corpus::Corpus(Symbol sigma) : sigma_(sigma) {
  if (sigma == 0) {
    throw InputError("alphabet size must be positive");
  }
}

DocId Corpus::add_document(std::vector<Symbol> text, std::optional<double> rank,
                           std::string name) {
  if (frozen_) {
    throw std::logic_error("corpus is frozen");
  }
  if (text.empty()) {
    throw InputError("document text must be nonempty");
  }
  for (Symbol s : text) {
    if (s == 0 || s > sigma_) {
      throw InputError("symbol " + std::to_string(s) + " outside alphabet [1, " +
                       std::to_string(sigma_) + "]");
    }
  }
  const auto id = static_cast<DocId>(docs_.size());
  if (name.empty()) {
    name = "d" + std::to_string(id);
  }
  starts_.push_back(n_);
  n_ += text.size() + 1;
  docs_.push_back(Document{id, std::move(text), rank.value_or(0.0), std::move(name)});
  return id;
}

const Document& Corpus::doc(DocId id) const {
  if (id >= docs_.size()) {
    throw BoundsError("doc id " + std::to_string(id) + " out of range");
  }
  return docs_[id];
}

DocPosition Corpus::position_to_doc(std::size_t global_pos) const {
  if (global_pos >= n_) {
    throw BoundsError("position " + std::to_string(global_pos) + " out of range");
  }
  auto it = std::upper_bound(starts_.begin(), starts_.end(), global_pos);
  const auto doc = static_cast<DocId>(std::distance(starts_.begin(), it) - 1);
  return {doc, global_pos - starts_[doc]};
}

std::size_t Corpus::global_position(DocId id, std::size_t offset) const {
  const Document& d = doc(id);
  if (offset > d.text.size()) {
    throw BoundsError("offset " + std::to_string(offset) + " beyond sentinel of doc " +
                      std::to_string(id));
  }
  return starts_[id] + offset;
}

Symbol Corpus::symbol_at(std::size_t global_pos) const {
  const DocPosition p = position_to_doc(global_pos);
  const Document& d = docs_[p.doc];
  return p.offset == d.text.size() ? 0 : d.text[p.offset];
}

ByteAlphabet::ByteAlphabet(std::vector<unsigned char> bytes) : bytes_(std::move(bytes)) {
  std::sort(bytes_.begin(), bytes_.end());
  bytes_.erase(std::unique(bytes_.begin(), bytes_.end()), bytes_.end());
  for (std::size_t i = 0; i < bytes_.size(); ++i) {
    code_[bytes_[i]] = static_cast<Symbol>(i + 1);
  }
}

ByteAlphabet ByteAlphabet::from_texts(std::span<const std::string> texts) {
  std::array<bool, 256> seen{};
  for (const auto& t : texts) {
    for (unsigned char c : t) seen[c] = true;
  }
  std::vector<unsigned char> bytes;
  for (int c = 0; c < 256; ++c) {
    if (seen[c]) bytes.push_back(static_cast<unsigned char>(c));
  }
  return ByteAlphabet(std::move(bytes));
}

std::optional<std::vector<Symbol>> ByteAlphabet::try_encode(std::string_view text) const {
  std::vector<Symbol> out;
  out.reserve(text.size());
  for (unsigned char c : text) {
    if (code_[c] == 0) return std::nullopt;
    out.push_back(code_[c]);
  }
  return out;
}

std::vector<Symbol> ByteAlphabet::encode(std::string_view text) const {
  auto out = try_encode(text);
  if (!out) {
    throw InputError("text contains a byte outside the alphabet");
  }
  return std::move(*out);
}

std::string ByteAlphabet::decode(std::span<const Symbol> symbols) const {
  std::string out;
  out.reserve(symbols.size());
  for (Symbol s : symbols) {
    if (s == 0 || s > bytes_.size()) {
      throw InputError("symbol outside alphabet");
    }
    out.push_back(static_cast<char>(bytes_[s - 1]));
  }
  return out;
}

}  // namespace topk
