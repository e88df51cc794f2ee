#include "topk/verify.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "topk/oracle.hpp"

namespace topk {

namespace {

std::string describe(const std::vector<DocHit>& hits) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < hits.size(); ++i) {
    os << (i ? ", " : "") << "(d" << hits[i].doc << ", " << hits[i].weight << ')';
  }
  os << ']';
  return os.str();
}

std::string describe(const std::vector<DocId>& docs) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < docs.size(); ++i) os << (i ? ", " : "") << 'd' << docs[i];
  os << '}';
  return os.str();
}

std::string describe_corpus(const Corpus& corpus) {
  std::ostringstream os;
  os << "corpus:";
  for (const auto& d : corpus.docs()) os << " d" << d.id << "=\"" << spell(d.text) << "\"/" << d.rank;
  return os.str();
}

class Checker {
 public:
  Checker(const Index& index, BatteryReport& report) : index_(index), report_(report) {}

  // Returns false once a mismatch is recorded.
  bool pattern(const std::vector<Symbol>& p) {
    ++report_.patterns;
    const Corpus& corpus = index_.corpus();
    const std::size_t docs = corpus.num_docs();
    for (MeasureKind m : index_.measures()) {
      const auto truth = oracle_ranking(corpus, p, m);
      for (std::size_t k : {std::size_t{0}, std::size_t{1}, std::size_t{2}, std::size_t{5}, docs}) {
        auto expect = truth;
        if (expect.size() > k) expect.resize(k);
        const auto got = index_.top_k(p, static_cast<long long>(k), m).hits;
        if (!same(p, "top_k k=" + std::to_string(k) + " " + std::string(to_string(m)), expect, got)) {
          return false;
        }
      }
      std::vector<DocHit> streamed;
      auto it = index_.top_k_online(p, m);
      while (auto h = it.next()) streamed.push_back(*h);
      if (!same(p, "online " + std::string(to_string(m)), truth, streamed)) return false;

      if (index_.par() != ParamKind::kNone) {
        const double inf = std::numeric_limits<double>::infinity();
        for (auto [lo, hi] : {std::pair{0.0, inf}, std::pair{2.0, inf}, std::pair{1.0, 3.0},
                              std::pair{5.0, 40.0}, std::pair{4.0, 1.0}}) {
          for (std::size_t k : {std::size_t{1}, std::size_t{3}, docs}) {
            const auto expect = oracle_top_k_param(corpus, p, k, lo, hi, m, index_.par());
            const auto got =
                index_.top_k_param(p, static_cast<long long>(k), lo, hi, m).hits;
            std::ostringstream q;
            q << "top_k_param k=" << k << " tau=[" << lo << ", " << hi << "] "
              << to_string(m) << " par=" << to_string(index_.par());
            if (!same(p, q.str(), expect, got)) return false;
          }
        }
      }
    }

    std::set<DocId> containing;
    for (const auto& d : corpus.docs()) {
      if (!naive_occurrences(d.text, p).empty()) containing.insert(d.id);
    }
    ++report_.checks;
    if (index_.doc_frequency(p) != containing.size()) {
      return fail(p, "doc_frequency", std::to_string(containing.size()),
                  std::to_string(index_.doc_frequency(p)));
    }

    if (index_.has_measure(MeasureKind::kTf)) {
      const auto tf = oracle_ranking(corpus, p, MeasureKind::kTf);
      for (std::uint32_t k_min : {1u, 2u, 3u}) {
        std::vector<DocId> expect;
        for (const auto& h : tf) {
          if (h.weight >= k_min) expect.push_back(h.doc);
        }
        if (!same(p, "k_mine K=" + std::to_string(k_min), expect, index_.k_mine(p, k_min))) {
          return false;
        }
      }
      if (!containing.empty()) {
        const double idf = std::log(static_cast<double>(docs) / containing.size());
        for (double tau : {0.0, 0.5, 2.0}) {
          std::vector<DocId> expect, got;
          for (const auto& h : tf) {
            if (h.weight * idf >= tau) expect.push_back(h.doc);
          }
          for (const auto& h : index_.report_tfidf_above(p, tau)) got.push_back(h.doc);
          std::ostringstream q;
          q << "tfidf tau=" << tau;
          if (!same(p, q.str(), expect, got)) return false;
        }
      }
    }
    if (index_.has_measure(MeasureKind::kMinDist)) {
      for (std::uint32_t gap : {0u, 1u, 2u, 5u}) {
        std::vector<DocId> expect;
        for (const auto& d : corpus.docs()) {
          const auto s = summarize(naive_occurrences(d.text, p));
          if (s.count >= 2 && s.min_gap <= gap) expect.push_back(d.id);
        }
        // The stream reports in gap order; compare as sets.
        auto got = index_.k_repeats(p, gap);
        std::sort(got.begin(), got.end());
        if (!same(p, "k_repeats K=" + std::to_string(gap), expect, got)) return false;
      }
    }
    return true;
  }

 private:
  template <class T>
  bool same(const std::vector<Symbol>& p, const std::string& query, const std::vector<T>& expect,
            const std::vector<T>& got) {
    ++report_.checks;
    if (expect == got) return true;
    return fail(p, query, describe(expect), describe(got));
  }

  bool fail(const std::vector<Symbol>& p, const std::string& query, std::string expect,
            std::string got) {
    Mismatch m;
    m.reproducer = describe_corpus(index_.corpus()) + " pattern=\"" + spell(p) + "\" " + query;
    m.expected = std::move(expect);
    m.actual = std::move(got);
    report_.failure = std::move(m);
    return false;
  }

  const Index& index_;
  BatteryReport& report_;
};

}  // namespace

BatteryReport check_index(const Index& index, const BatteryOptions& options) {
  BatteryReport report;
  Checker checker(index, report);
  const Corpus& corpus = index.corpus();
  const Symbol sigma = corpus.sigma();

  std::size_t total = 0;
  {
    std::size_t level = 1;
    for (std::uint32_t len = 0; len <= options.max_pattern && total <= options.pattern_budget;
         ++len) {
      total += level;
      level *= sigma;
    }
  }
  if (total <= options.pattern_budget) {
    std::vector<Symbol> p;
    // Depth-first over all strings up to max_pattern.
    auto walk = [&](auto&& self) -> bool {
      if (!checker.pattern(p)) return false;
      if (p.size() == options.max_pattern) return true;
      for (Symbol s = 1; s <= sigma; ++s) {
        p.push_back(s);
        const bool ok = self(self);
        p.pop_back();
        if (!ok) return false;
      }
      return true;
    };
    walk(walk);
    return report;
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::uint32_t> len_pick(1, std::max(1u, options.max_pattern));
  for (std::size_t i = 0; i < options.pattern_budget; ++i) {
    std::vector<Symbol> p;
    const std::uint32_t len = len_pick(rng);
    if (i % 4 != 3) {
      const auto& d = corpus.doc(std::uniform_int_distribution<DocId>(
          0, static_cast<DocId>(corpus.num_docs() - 1))(rng));
      const std::size_t take = std::min<std::size_t>(len, d.text.size());
      const std::size_t at =
          std::uniform_int_distribution<std::size_t>(0, d.text.size() - take)(rng);
      p.assign(d.text.begin() + static_cast<std::ptrdiff_t>(at),
               d.text.begin() + static_cast<std::ptrdiff_t>(at + take));
    } else {
      for (std::uint32_t j = 0; j < len; ++j) {
        p.push_back(std::uniform_int_distribution<Symbol>(1, sigma)(rng));
      }
    }
    if (!checker.pattern(p)) break;
  }
  return report;
}

BatteryReport check_random_corpus(std::uint64_t seed, const BatteryOptions& options) {
  std::mt19937_64 rng(seed);
  Corpus corpus = random_corpus(rng);
  BuildOptions build;
  build.measures = {MeasureKind::kTf, MeasureKind::kMinDist, MeasureKind::kDocRank};
  build.par = (seed % 2 == 0) ? ParamKind::kTf : ParamKind::kDocLength;
  const Index index = Index::build(std::move(corpus), build);
  BatteryOptions opts = options;
  opts.seed = seed;
  return check_index(index, opts);
}

}  // namespace topk
