#include "topk/index_io.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace topk {

namespace {

constexpr char kMagic[8] = {'T', 'O', 'P', 'K', 'D', 'O', 'C', '\0'};

enum Section : std::uint32_t {
  kCorpus = 1,
  kTree = 2,
  kLayout = 3,
  kWeights = 4,
  kParams = 5,
};

class Writer {
 public:
  void raw(const void* p, std::size_t n) { out_.append(static_cast<const char*>(p), n); }
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u64(s.size());
    raw(s.data(), s.size());
  }
  template <class T>
  void vec(const std::vector<T>& v) {
    u64(v.size());
    for (const auto& x : v) {
      if constexpr (sizeof(T) == 8) {
        u64(static_cast<std::uint64_t>(x));
      } else {
        u32(static_cast<std::uint32_t>(x));
      }
    }
  }

  // Starts a section; end_section patches its length.
  std::size_t begin_section(Section tag) {
    u32(tag);
    const std::size_t at = out_.size();
    u64(0);
    return at;
  }
  void end_section(std::size_t at) {
    const std::uint64_t len = out_.size() - at - 8;
    for (int i = 0; i < 8; ++i) out_[at + i] = static_cast<char>(len >> (8 * i));
  }

  std::string& bytes() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw FormatError("index file truncated");
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{static_cast<std::uint8_t>(in_[pos_++])} << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{static_cast<std::uint8_t>(in_[pos_++])} << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint64_t n = u64();
    need(n);
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  template <class T>
  std::vector<T> vec() {
    const std::uint64_t n = u64();
    need(n * std::min<std::size_t>(sizeof(T), 8));
    std::vector<T> v(n);
    for (auto& x : v) {
      if constexpr (sizeof(T) == 8) {
        x = static_cast<T>(u64());
      } else {
        x = static_cast<T>(u32());
      }
    }
    return v;
  }

  // Enters a section with the expected tag and returns its end offset.
  std::size_t section(Section tag) {
    if (u32() != tag) throw FormatError("unexpected section");
    const std::uint64_t len = u64();
    need(len);
    return pos_ + len;
  }
  void close(std::size_t end) const {
    if (pos_ != end) throw FormatError("section length mismatch");
  }
  std::size_t pos() const noexcept { return pos_; }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

std::uint32_t crc(std::string_view bytes) {
  uLong c = crc32(0L, Z_NULL, 0);
  std::size_t done = 0;
  while (done < bytes.size()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - done, 1u << 30));
    c = crc32(c, reinterpret_cast<const Bytef*>(bytes.data() + done), chunk);
    done += chunk;
  }
  return static_cast<std::uint32_t>(c);
}

}  // namespace

std::string serialize_index(const Index& index) {
  Writer w;
  w.raw(kMagic, sizeof kMagic);
  w.u32(kIndexVersion);

  const Corpus& corpus = index.corpus();
  const auto& parts = index.parts();
  const auto measures = index.measures();
  w.u64(corpus.size());
  w.u32(static_cast<std::uint32_t>(corpus.num_docs()));
  w.u32(corpus.sigma());
  w.u32(static_cast<std::uint32_t>(measures.size()));
  for (MeasureKind m : measures) w.u8(static_cast<std::uint8_t>(m));
  w.u8(static_cast<std::uint8_t>(parts.par));
  w.u32(parts.z_max);
  w.u32(parts.striped.log_factor);
  w.u32(parts.striped.class_options.branching);
  w.u32(parts.striped.class_options.scan_limit);

  auto at = w.begin_section(kCorpus);
  w.str(std::string_view(reinterpret_cast<const char*>(parts.alphabet.data()),
                         parts.alphabet.size()));
  for (const auto& d : corpus.docs()) {
    w.str(d.name);
    w.f64(d.rank);
    w.vec(d.text);
  }
  w.end_section(at);

  const auto& t = index.tree().storage();
  at = w.begin_section(kTree);
  w.vec(t.keys);
  w.vec(t.doc_starts);
  w.vec(t.parent);
  w.vec(t.string_depth);
  w.vec(t.depth);
  w.vec(t.label_start);
  w.vec(t.leaf_lo);
  w.vec(t.leaf_hi);
  w.vec(t.subtree_end);
  w.vec(t.child_offset);
  w.vec(t.child_ids);
  w.vec(t.child_keys);
  w.vec(t.col_lo);
  w.vec(t.col_hi);
  w.end_section(at);

  const auto& lay = index.layout();
  at = w.begin_section(kLayout);
  w.vec(lay.y_of);
  w.vec(lay.doc_of);
  w.vec(lay.source_of);
  w.vec(lay.target_of);
  w.end_section(at);

  for (MeasureKind m : measures) {
    const WeightedGrid& g = index.grid(m);
    at = w.begin_section(kWeights);
    w.u8(static_cast<std::uint8_t>(m));
    w.u64(g.width());
    for (Column c = 0; c < g.width(); ++c) w.f64(g.weight(c));
    w.end_section(at);
  }

  at = w.begin_section(kParams);
  w.vec(parts.z);
  w.end_section(at);

  const std::uint32_t sum = crc(w.bytes());
  w.u32(sum);
  return std::move(w.bytes());
}

Index deserialize_index(std::string_view bytes) {
  if (bytes.size() < sizeof kMagic + 8 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw FormatError("not an index file");
  }
  const std::string_view body = bytes.substr(0, bytes.size() - 4);
  Reader tail(bytes.substr(bytes.size() - 4));
  if (tail.u32() != crc(body)) throw FormatError("index checksum mismatch");

  Reader r(body);
  r.need(sizeof kMagic);
  for (std::size_t i = 0; i < sizeof kMagic; ++i) r.u8();
  if (r.u32() != kIndexVersion) throw FormatError("unsupported index version");

  const std::uint64_t n = r.u64();
  const std::uint32_t num_docs = r.u32();
  const std::uint32_t sigma = r.u32();
  const std::uint32_t num_measures = r.u32();
  std::vector<MeasureKind> kinds;
  for (std::uint32_t i = 0; i < num_measures; ++i) {
    const std::uint8_t m = r.u8();
    if (m > static_cast<std::uint8_t>(MeasureKind::kDocRank)) throw FormatError("unknown measure");
    kinds.push_back(static_cast<MeasureKind>(m));
  }
  IndexParts parts;
  const std::uint8_t par = r.u8();
  if (par > static_cast<std::uint8_t>(ParamKind::kDocLength)) throw FormatError("unknown par");
  parts.par = static_cast<ParamKind>(par);
  parts.z_max = r.u32();
  parts.striped.log_factor = r.u32();
  parts.striped.class_options.branching = r.u32();
  parts.striped.class_options.scan_limit = r.u32();
  if (sigma == 0) throw FormatError("empty alphabet");

  try {
    auto end = r.section(kCorpus);
    const std::string alpha = r.str();
    parts.alphabet.assign(alpha.begin(), alpha.end());
    Corpus corpus(sigma);
    for (std::uint32_t d = 0; d < num_docs; ++d) {
      std::string name = r.str();
      const double rank = r.f64();
      corpus.add_document(r.vec<Symbol>(), rank, std::move(name));
    }
    corpus.freeze();
    r.close(end);
    if (corpus.size() != n) throw FormatError("corpus length disagrees with the header");
    parts.corpus = std::move(corpus);
  } catch (const InputError& e) {
    throw FormatError(std::string("bad corpus section: ") + e.what());
  }

  auto end = r.section(kTree);
  auto& t = parts.tree;
  t.keys = r.vec<std::uint32_t>();
  t.doc_starts = r.vec<std::size_t>();
  t.parent = r.vec<NodeId>();
  t.string_depth = r.vec<std::uint32_t>();
  t.depth = r.vec<std::uint32_t>();
  t.label_start = r.vec<std::uint32_t>();
  t.leaf_lo = r.vec<std::uint32_t>();
  t.leaf_hi = r.vec<std::uint32_t>();
  t.subtree_end = r.vec<NodeId>();
  t.child_offset = r.vec<std::uint32_t>();
  t.child_ids = r.vec<NodeId>();
  t.child_keys = r.vec<std::uint32_t>();
  t.col_lo = r.vec<std::uint32_t>();
  t.col_hi = r.vec<std::uint32_t>();
  r.close(end);

  end = r.section(kLayout);
  parts.layout.y_of = r.vec<std::uint32_t>();
  parts.layout.doc_of = r.vec<DocId>();
  parts.layout.source_of = r.vec<NodeId>();
  parts.layout.target_of = r.vec<NodeId>();
  r.close(end);

  for (MeasureKind m : kinds) {
    end = r.section(kWeights);
    if (r.u8() != static_cast<std::uint8_t>(m)) throw FormatError("weight section out of order");
    const std::uint64_t width = r.u64();
    r.need(width * 8);
    std::vector<double> w(width);
    for (auto& x : w) x = r.f64();
    r.close(end);
    parts.weights.emplace_back(m, std::move(w));
  }

  end = r.section(kParams);
  parts.z = r.vec<std::uint32_t>();
  r.close(end);
  if (r.pos() != body.size()) throw FormatError("trailing bytes in index file");

  try {
    return Index::assemble(std::move(parts));
  } catch (const InputError& e) {
    throw FormatError(std::string("inconsistent index: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw FormatError(std::string("inconsistent index: ") + e.what());
  }
}

void save_index(const Index& index, const std::filesystem::path& path) {
  const std::string bytes = serialize_index(index);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

Index load_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return deserialize_index(buf.str());
}

}  // namespace topk
