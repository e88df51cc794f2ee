// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grid_oracle.hpp"
#include "topk/class_tree.hpp"
#include "topk/engine.hpp"
#include "topk/index_io.hpp"
#include "topk/online.hpp"
#include "topk/oracle.hpp"
#include "topk/ranked_wavelet.hpp"
#include "topk/striped_index.hpp"
#include "topk/three_sided.hpp"
#include "topk/verify.hpp"

namespace topk {
namespace {

using Clock = std::chrono::steady_clock;
const double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool ok = true;
  std::string detail;
  std::string failure;

  bool fail(std::string why) {
    if (ok) failure = std::move(why);
    ok = false;
    return false;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string describe(const std::vector<DocHit>& hits) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < hits.size(); ++i) {
    os << (i ? ", " : "") << "(d" << hits[i].doc << ", " << hits[i].weight << ')';
  }
  return os.str() + "]";
}

std::string describe(const std::vector<GridHit>& hits) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < hits.size(); ++i) {
    os << (i ? ", " : "") << "(x" << hits[i].column << ", r" << hits[i].rank << ')';
  }
  return os.str() + "]";
}

// The fixed corpus set shared by the exhaustive checks.
constexpr int kCorpora = 50;
constexpr std::uint32_t kMaxPattern = 6;

Corpus fixed_corpus(int i) {
  std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(i));
  return random_corpus(rng);
}

BuildOptions all_measures(ParamKind par = ParamKind::kNone) {
  BuildOptions opts;
  opts.measures = {kAllMeasures[0], kAllMeasures[1], kAllMeasures[2]};
  opts.par = par;
  return opts;
}

// Exhaustive pattern sweep: every pattern of length <= kMaxPattern over the
// corpus alphabet. Occurrence lists are extended one symbol at a time, so
// the reference answers come from scanning the text directly.
struct SweepStats {
  std::size_t patterns = 0;
  std::size_t present = 0;
  std::size_t top_k_checks = 0;
  std::size_t grid_points = 0;
};

class Sweep {
 public:
  Sweep(const Index& index, Outcome& topk_out, Outcome& unique_out)
      : index_(index), corpus_(index.corpus()), topk_(topk_out), unique_(unique_out) {}

  SweepStats run() {
    std::vector<std::vector<std::uint32_t>> occ(corpus_.num_docs());
    for (const auto& d : corpus_.docs()) {
      for (std::uint32_t i = 0; i <= d.text.size(); ++i) occ[d.id].push_back(i);
    }
    std::vector<Symbol> p;
    visit(p, occ);
    return stats_;
  }

 private:
  bool visit(std::vector<Symbol>& p, const std::vector<std::vector<std::uint32_t>>& occ) {
    if (!check_present(p, occ)) return false;
    if (p.size() == kMaxPattern) return true;
    for (Symbol s = 1; s <= corpus_.sigma(); ++s) {
      std::vector<std::vector<std::uint32_t>> next(occ.size());
      bool any = false;
      for (const auto& d : corpus_.docs()) {
        for (std::uint32_t at : occ[d.id]) {
          if (at + p.size() < d.text.size() && d.text[at + p.size()] == s) {
            next[d.id].push_back(at);
            any = true;
          }
        }
      }
      p.push_back(s);
      const bool ok = any ? visit(p, next) : visit_absent(p);
      p.pop_back();
      if (!ok) return false;
    }
    return true;
  }

  // Every extension of an absent pattern is absent too.
  bool visit_absent(std::vector<Symbol>& p) {
    if (!check_absent(p)) return false;
    if (p.size() == kMaxPattern) return true;
    for (Symbol s = 1; s <= corpus_.sigma(); ++s) {
      p.push_back(s);
      const bool ok = visit_absent(p);
      p.pop_back();
      if (!ok) return false;
    }
    return true;
  }

  std::vector<std::size_t> ks() const {
    return {1, 2, 5, corpus_.num_docs()};
  }

  bool check_absent(const std::vector<Symbol>& p) {
    ++stats_.patterns;
    for (MeasureKind m : kAllMeasures) {
      for (std::size_t k : ks()) {
        ++stats_.top_k_checks;
        const auto got = index_.top_k(p, static_cast<long long>(k), m);
        if (!got.hits.empty() || got.found) {
          return topk_.fail("absent pattern '" + spell(p) + "' returned " + describe(got.hits));
        }
      }
    }
    return true;
  }

  bool check_present(const std::vector<Symbol>& p,
                     const std::vector<std::vector<std::uint32_t>>& occ) {
    ++stats_.patterns;
    ++stats_.present;
    std::map<MeasureKind, std::vector<DocHit>> truth;
    for (MeasureKind m : kAllMeasures) {
      const RelevanceMeasure measure(m);
      auto& t = truth[m];
      for (const auto& d : corpus_.docs()) {
        if (!occ[d.id].empty()) t.push_back({d.id, measure.weight(occ[d.id], d.rank)});
      }
      std::sort(t.begin(), t.end(), [](const DocHit& a, const DocHit& b) {
        return a.weight != b.weight ? a.weight > b.weight : a.doc < b.doc;
      });
      for (std::size_t k : ks()) {
        ++stats_.top_k_checks;
        auto expect = t;
        if (expect.size() > k) expect.resize(k);
        const auto got = index_.top_k(p, static_cast<long long>(k), m).hits;
        if (got != expect) {
          std::ostringstream os;
          os << "pattern '" << spell(p) << "' k=" << k << " " << to_string(m) << ": expected "
             << describe(expect) << " got " << describe(got);
          return topk_.fail(os.str());
        }
      }
    }
    return check_points(p, truth);
  }

  // The grid query of the locus holds exactly one point per containing
  // document, carrying that document's weight.
  bool check_points(const std::vector<Symbol>& p,
                    const std::map<MeasureKind, std::vector<DocHit>>& truth) {
    const auto loc = index_.locus(p);
    const auto where = "pattern '" + spell(p) + "': ";
    if (!loc) return unique_.fail(where + "no locus");
    const SuffixTree& tree = index_.tree();
    const NodeId v = loc->node;
    const std::uint32_t h = tree.depth(v) - 1;
    const auto& layout = index_.layout();
    std::map<DocId, Column> seen;
    for (Column x = tree.col_lo(v); x <= tree.col_hi(v) && x < layout.size(); ++x) {
      if (layout.y_of[x] > h) continue;
      ++stats_.grid_points;
      if (!seen.emplace(layout.doc_of[x], x).second) {
        return unique_.fail(where + "two points for d" + std::to_string(layout.doc_of[x]));
      }
    }
    for (const auto& [m, hits] : truth) {
      if (hits.size() != seen.size()) {
        return unique_.fail(where + std::to_string(seen.size()) + " points for " +
                            std::to_string(hits.size()) + " documents");
      }
      const WeightedGrid& grid = index_.grid(m);
      for (const auto& hit : hits) {
        const auto it = seen.find(hit.doc);
        if (it == seen.end()) return unique_.fail(where + "no point for d" + std::to_string(hit.doc));
        if (grid.weight(it->second) != hit.weight) {
          return unique_.fail(where + "wrong " + std::string(to_string(m)) + " weight for d" +
                              std::to_string(hit.doc));
        }
      }
    }
    return true;
  }

  const Index& index_;
  const Corpus& corpus_;
  Outcome& topk_;
  Outcome& unique_;
  SweepStats stats_;
};

// Criteria 1, 2 and 7 share the fixed corpus set.
struct CorpusSetResult {
  Outcome oracle, unique, links;
};

CorpusSetResult check_corpus_set() {
  CorpusSetResult r;
  const auto t0 = Clock::now();
  SweepStats total;
  std::size_t max_links = 0, max_n = 0;
  double worst_ratio = 0;
  for (int i = 0; i < kCorpora && r.oracle.ok && r.unique.ok; ++i) {
    const Index index = Index::build(fixed_corpus(i), all_measures());
    const std::size_t n = index.corpus().size();
    const double ratio = static_cast<double>(index.num_links()) / static_cast<double>(n);
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      max_links = index.num_links();
      max_n = n;
    }
    if (index.num_links() > 2 * n) {
      r.links.fail("corpus " + std::to_string(i) + ": " + std::to_string(index.num_links()) +
                   " links for n=" + std::to_string(n));
    }
    const auto s = Sweep(index, r.oracle, r.unique).run();
    total.patterns += s.patterns;
    total.present += s.present;
    total.top_k_checks += s.top_k_checks;
    total.grid_points += s.grid_points;
  }
  std::ostringstream os;
  os << kCorpora << " corpora, " << total.patterns << " patterns (" << total.present
     << " present), " << total.top_k_checks << " top-k checks, " << std::fixed
     << std::setprecision(1) << seconds_since(t0) << " s";
  r.oracle.detail = os.str();
  r.unique.detail = std::to_string(total.present) + " loci, " + std::to_string(total.grid_points) +
                    " grid points audited";
  std::ostringstream ls;
  ls << "worst links/n = " << std::setprecision(3) << worst_ratio << " (" << max_links << " / "
     << max_n << ")";
  r.links.detail = ls.str();
  return r;
}

// Random width skewed toward small grids.
std::uint32_t random_width(std::mt19937_64& rng, std::uint32_t max_width) {
  const double lg = std::uniform_real_distribution<double>(0, std::log2(max_width))(rng);
  return std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::exp2(lg)));
}

Outcome check_grid_agreement() {
  Outcome r;
  std::mt19937_64 rng(3);
  std::size_t pairs = 0;
  constexpr std::size_t kGrids = 200, kQueries = 50;
  for (std::size_t g = 0; g < kGrids && r.ok; ++g) {
    const std::uint32_t width = g == 0 ? 4096 : random_width(rng, 4096);
    const std::uint32_t max_y = static_cast<std::uint32_t>(rng() % 64);
    const std::uint32_t max_w = rng() % 2 ? 20 : 1000000;
    const auto rg = testing::random_grid(rng, width, max_y, max_w);
    const auto grid = testing::make_grid(rg);
    StripedOptions opts;
    if (g % 2) opts.log_factor = 2;
    const ClassTree tree(grid, 0, width - 1);
    const StripedIndex striped(grid, opts);
    const RankedWavelet rw(grid);
    for (std::size_t q = 0; q < kQueries; ++q) {
      ++pairs;
      Column a = static_cast<Column>(rng() % width), b = static_cast<Column>(rng() % width);
      if (a > b) std::swap(a, b);
      const auto h = static_cast<std::uint32_t>(rng() % (max_y + 2));
      const std::size_t k = rng() % 4 == 0 ? width : rng() % 40;
      const auto expect = testing::filter_sort(*grid, a, b, 0, h, k);
      const auto by_class = tree.topk(a, b, h, k);
      const auto by_stripes = striped.topk(a, b, h, k);
      const auto by_wavelet = topk_2d(rw, a, b, 0, h, k);
      if (by_class != expect || by_stripes != expect || by_wavelet != expect) {
        std::ostringstream os;
        os << "width " << width << " query [" << a << ", " << b << "] x [0, " << h << "] k=" << k
           << ": expected " << describe(expect) << " class " << describe(by_class) << " striped "
           << describe(by_stripes) << " wavelet " << describe(by_wavelet);
        r.fail(os.str());
        break;
      }
    }
  }
  r.detail = std::to_string(pairs) + " grid/query pairs, widths up to 4096";
  return r;
}

Outcome check_count_report() {
  Outcome r;
  std::mt19937_64 rng(4);
  std::size_t queries = 0, grids = 0;
  std::vector<std::uint32_t> widths;
  for (std::uint32_t w = 1; w <= 48; ++w) widths.push_back(w);
  for (std::uint32_t w : {64u, 100u, 128u, 200u, 256u, 384u, 512u}) widths.push_back(w);
  for (std::uint32_t width : widths) {
    if (!r.ok) break;
    const std::uint32_t max_y = width >= 256 ? 7 : static_cast<std::uint32_t>(rng() % 20);
    const auto rg = testing::random_grid(rng, width, max_y);
    // Half of the grids index a column subset, as inner classes do.
    std::vector<Column> cols;
    for (Column x = 0; x < width; ++x) {
      if (width % 2 == 0 || rng() % 3 != 0) cols.push_back(x);
    }
    ++grids;
    const ThreeSidedIndex index(cols, rg.y);
    std::vector<std::uint32_t> member(width, 0);
    for (Column x : cols) member[x] = 1;
    std::vector<Column> out;
    for (std::uint32_t h = 0; h <= max_y + 1 && r.ok; ++h) {
      // prefix[x] = members below column x with y <= h
      std::vector<std::uint32_t> prefix(width + 1, 0);
      for (Column x = 0; x < width; ++x) {
        prefix[x + 1] = prefix[x] + (member[x] && rg.y[x] <= h);
      }
      for (Column a = 0; a < width && r.ok; ++a) {
        for (Column b = a; b < width; ++b) {
          ++queries;
          out.clear();
          index.report(a, b, h, rg.y, out);
          const std::uint32_t count = index.count(a, b, h);
          const std::uint32_t truth = prefix[b + 1] - prefix[a];
          std::sort(out.begin(), out.end());
          const bool distinct = std::adjacent_find(out.begin(), out.end()) == out.end();
          const bool inside = std::all_of(out.begin(), out.end(), [&](Column x) {
            return a <= x && x <= b && member[x] && rg.y[x] <= h;
          });
          if (count != out.size() || count != truth || !distinct || !inside) {
            std::ostringstream os;
            os << "width " << width << " query [" << a << ", " << b << "] x [0, " << h
               << "]: count " << count << ", reported " << out.size() << ", truth " << truth;
            r.fail(os.str());
            break;
          }
        }
      }
    }
  }
  r.detail = std::to_string(queries) + " queries over " + std::to_string(grids) +
             " grids of up to 512 points";
  return r;
}

Outcome check_online() {
  Outcome r;
  std::mt19937_64 rng(5);
  std::size_t engine_queries = 0, grid_queries = 0, prefixes = 0;
  // Engine iterators over random corpora.
  for (int c = 0; c < 20 && r.ok; ++c) {
    const Index index = Index::build(random_corpus(rng), all_measures());
    const Corpus& corpus = index.corpus();
    for (int q = 0; q < 25 && r.ok; ++q) {
      ++engine_queries;
      const auto& d = corpus.doc(static_cast<DocId>(rng() % corpus.num_docs()));
      const std::size_t len = 1 + rng() % std::min<std::size_t>(3, d.text.size());
      const std::size_t at = rng() % (d.text.size() - len + 1);
      const std::vector<Symbol> p(d.text.begin() + at, d.text.begin() + at + len);
      const MeasureKind m = kAllMeasures[rng() % 3];
      std::vector<DocHit> streamed;
      auto it = index.top_k_online(p, m);
      while (auto hit = it.next()) streamed.push_back(*hit);
      for (std::size_t k = 0; k <= streamed.size() + 1; ++k) {
        ++prefixes;
        const auto batch = index.top_k(p, static_cast<long long>(k), m).hits;
        const std::vector<DocHit> prefix(streamed.begin(),
                                         streamed.begin() + std::min(k, streamed.size()));
        if (batch != prefix) {
          r.fail("pattern '" + spell(p) + "' " + std::string(to_string(m)) + " k=" +
                 std::to_string(k) + ": batch " + describe(batch) + " online " + describe(prefix));
          break;
        }
      }
    }
  }
  // Grid iterators over striped indexes.
  for (int g = 0; g < 100 && r.ok; ++g) {
    const std::uint32_t width = random_width(rng, 2048);
    const std::uint32_t max_y = static_cast<std::uint32_t>(rng() % 32);
    const auto grid = testing::make_grid(testing::random_grid(rng, width, max_y, 30));
    StripedOptions opts;
    if (g % 2) opts.log_factor = 2;
    const StripedIndex striped(grid, opts);
    for (int q = 0; q < 5 && r.ok; ++q) {
      ++grid_queries;
      Column a = static_cast<Column>(rng() % width), b = static_cast<Column>(rng() % width);
      if (a > b) std::swap(a, b);
      const auto h = static_cast<std::uint32_t>(rng() % (max_y + 1));
      TopKIterator it([&](std::size_t k) { return striped.topk(a, b, h, k); },
                      first_stage_size(width));
      std::vector<GridHit> streamed;
      while (auto hit = it.next()) streamed.push_back(*hit);
      for (std::size_t k = 0; k <= streamed.size() + 1; ++k) {
        ++prefixes;
        const auto batch = testing::filter_sort(*grid, a, b, 0, h, k);
        const std::vector<GridHit> prefix(streamed.begin(),
                                          streamed.begin() + std::min(k, streamed.size()));
        if (batch != prefix) {
          std::ostringstream os;
          os << "width " << width << " query [" << a << ", " << b << "] x [0, " << h << "] k=" << k
             << ": batch " << describe(batch) << " online " << describe(prefix);
          r.fail(os.str());
          break;
        }
      }
    }
  }
  r.detail = std::to_string(engine_queries + grid_queries) + " queries (" +
             std::to_string(engine_queries) + " engine, " + std::to_string(grid_queries) +
             " grid), " + std::to_string(prefixes) + " prefixes";
  return r;
}

Outcome check_param() {
  Outcome r;
  std::mt19937_64 rng(6);
  std::size_t triples = 0, unconstrained = 0;
  for (int c = 0; c < 20 && r.ok; ++c) {
    const ParamKind par = c % 2 ? ParamKind::kDocLength : ParamKind::kTf;
    const Index index = Index::build(random_corpus(rng), all_measures(par));
    const Corpus& corpus = index.corpus();
    std::uint32_t longest = 0;
    for (const auto& d : corpus.docs()) longest = std::max<std::uint32_t>(longest, d.text.size());
    auto bound = [&]() -> double {
      switch (rng() % 6) {
        case 0: return -kInf;
        case 1: return kInf;
        case 2: return static_cast<double>(rng() % (longest + 2)) + 0.5;
        default: return static_cast<double>(rng() % (longest + 2));
      }
    };
    for (int q = 0; q < 50 && r.ok; ++q) {
      ++triples;
      std::vector<Symbol> p;
      if (rng() % 5) {
        const auto& d = corpus.doc(static_cast<DocId>(rng() % corpus.num_docs()));
        const std::size_t len = 1 + rng() % std::min<std::size_t>(4, d.text.size());
        const std::size_t at = rng() % (d.text.size() - len + 1);
        p.assign(d.text.begin() + at, d.text.begin() + at + len);
      } else {
        p.resize(1 + rng() % 3);
        for (auto& s : p) s = 1 + static_cast<Symbol>(rng() % corpus.sigma());
      }
      const MeasureKind m = kAllMeasures[rng() % 3];
      const std::size_t k = 1 + rng() % (corpus.num_docs() + 1);
      double lo = bound(), hi = bound();
      if (rng() % 8 && lo > hi) std::swap(lo, hi);
      const auto expect = oracle_top_k_param(corpus, p, k, lo, hi, m, par);
      const auto got = index.top_k_param(p, static_cast<long long>(k), lo, hi, m).hits;
      if (got != expect) {
        std::ostringstream os;
        os << "par " << to_string(par) << " pattern '" << spell(p) << "' k=" << k << " "
           << to_string(m) << " range [" << lo << ", " << hi << "]: expected " << describe(expect)
           << " got " << describe(got);
        r.fail(os.str());
        break;
      }
      ++unconstrained;
      const auto all = index.top_k_param(p, static_cast<long long>(k), -kInf, kInf, m).hits;
      const auto plain = index.top_k(p, static_cast<long long>(k), m).hits;
      if (all != plain) {
        r.fail("pattern '" + spell(p) + "' unconstrained " + describe(all) + " vs top_k " +
               describe(plain));
        break;
      }
    }
  }
  r.detail = std::to_string(triples) + " (corpus, pattern, range) triples over tf and doclen, " +
             std::to_string(unconstrained) + " unconstrained comparisons";
  return r;
}

// Spot checks of the striped index of every measure against the oracle.
bool check_grids_of(const Index& index, std::mt19937_64& rng, std::string& why) {
  for (MeasureKind m : index.measures()) {
    const WeightedGrid& grid = index.grid(m);
    const StripedIndex& striped = index.striped(m);
    const std::uint32_t width = grid.width();
    for (int q = 0; q < 20; ++q) {
      Column a = static_cast<Column>(rng() % width), b = static_cast<Column>(rng() % width);
      if (a > b) std::swap(a, b);
      const auto h = static_cast<std::uint32_t>(rng() % (index.max_y() + 2));
      const std::size_t k = rng() % 20;
      if (striped.topk(a, b, h, k) != testing::filter_sort(grid, a, b, 0, h, k)) {
        why = "striped " + std::string(to_string(m)) + " query differs after loading";
        return false;
      }
    }
  }
  return true;
}

Outcome check_persistence() {
  Outcome r;
  std::mt19937_64 rng(9);
  std::size_t bytes = 0, checks = 0;
  for (int i = 0; i < kCorpora && r.ok; ++i) {
    const ParamKind par = i % 2 ? ParamKind::kDocLength : ParamKind::kTf;
    const Index built = Index::build(fixed_corpus(i), all_measures(par));
    const std::string image = serialize_index(built);
    bytes += image.size();
    const Index loaded = deserialize_index(image);
    if (serialize_index(loaded) != image) {
      r.fail("corpus " + std::to_string(i) + ": re-serialization differs");
      break;
    }
    Outcome sweep_topk, sweep_unique;
    const auto before = Sweep(built, sweep_topk, sweep_unique).run();
    Outcome loaded_topk, loaded_unique;
    const auto after = Sweep(loaded, loaded_topk, loaded_unique).run();
    if (!loaded_topk.ok || !loaded_unique.ok) {
      r.fail("corpus " + std::to_string(i) + " after loading: " + loaded_topk.failure +
             loaded_unique.failure);
      break;
    }
    if (before.top_k_checks != after.top_k_checks || before.grid_points != after.grid_points) {
      r.fail("corpus " + std::to_string(i) + ": sweep counts differ after loading");
      break;
    }
    BatteryOptions opts;
    opts.pattern_budget = 600;
    opts.seed = static_cast<std::uint64_t>(i) + 1;
    const auto a = check_index(built, opts);
    const auto b = check_index(loaded, opts);
    if (!b.ok()) {
      r.fail("corpus " + std::to_string(i) + " after loading: " + b.failure->reproducer +
             " expected " + b.failure->expected + " actual " + b.failure->actual);
      break;
    }
    if (a.ok() != b.ok() || a.checks != b.checks) {
      r.fail("corpus " + std::to_string(i) + ": battery differs after loading");
      break;
    }
    checks += after.top_k_checks + b.checks;
    std::string why;
    if (!check_grids_of(loaded, rng, why)) {
      r.fail("corpus " + std::to_string(i) + ": " + why);
      break;
    }
  }
  r.detail = std::to_string(kCorpora) + " indexes round-tripped (" + std::to_string(bytes) +
             " bytes), " + std::to_string(checks) + " checks on loaded indexes";
  return r;
}

// Synthetic text: words from a fixed vocabulary mixed with random filler.
Corpus synthetic_corpus(std::size_t total, std::mt19937_64& rng) {
  constexpr Symbol kSigma = 16;
  std::uniform_int_distribution<Symbol> sym(1, kSigma);
  std::vector<std::vector<Symbol>> words(3000);
  for (auto& w : words) {
    w.resize(2 + rng() % 7);
    for (auto& s : w) s = sym(rng);
  }
  Corpus corpus(kSigma);
  std::size_t n = 0;
  while (n < total) {
    const std::size_t len = 200 + rng() % 1801;
    std::vector<Symbol> text;
    while (text.size() < len) {
      if (rng() % 10 < 7) {
        const auto& w = words[rng() % words.size()];
        text.insert(text.end(), w.begin(), w.end());
      } else {
        for (int i = 0; i < 5; ++i) text.push_back(sym(rng));
      }
    }
    text.resize(len);
    n += len;
    corpus.add_document(std::move(text), std::uniform_real_distribution<double>(0, 1)(rng));
  }
  corpus.freeze();
  return corpus;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.empty() ? 0 : v[v.size() / 2];
}

Outcome check_scaling(double megabytes) {
  Outcome r;
  std::mt19937_64 rng(8);
  const auto size = static_cast<std::size_t>(megabytes * 1e6);
  const auto t0 = Clock::now();
  const Index index = Index::build(synthetic_corpus(size, rng));
  const double build_s = seconds_since(t0);
  const Corpus& corpus = index.corpus();
  const std::size_t n = corpus.size();
  const double words = static_cast<double>(index.bytes()) / 8.0 / static_cast<double>(n);

  const std::vector<std::size_t> lengths{1, 2, 4, 8, 16, 32};
  const std::vector<std::size_t> ks{10, 100, 1000};
  constexpr int kPatterns = 200, kRepeat = 3;
  std::map<std::pair<std::size_t, std::size_t>, double> latency, hits;
  for (std::size_t p : lengths) {
    std::vector<std::vector<Symbol>> patterns;
    while (patterns.size() < kPatterns) {
      const auto& d = corpus.doc(static_cast<DocId>(rng() % corpus.num_docs()));
      if (d.text.size() < p) continue;
      const std::size_t at = rng() % (d.text.size() - p + 1);
      patterns.emplace_back(d.text.begin() + at, d.text.begin() + at + p);
    }
    for (std::size_t k : ks) {
      std::vector<double> us;
      double found = 0;
      for (const auto& pat : patterns) {
        std::vector<double> reps;
        for (int i = 0; i < kRepeat; ++i) {
          const auto q0 = Clock::now();
          const auto res = index.top_k(pat, static_cast<long long>(k), MeasureKind::kTf);
          reps.push_back(seconds_since(q0) * 1e6);
          if (i == 0) found += static_cast<double>(res.hits.size());
        }
        us.push_back(median(reps));
      }
      latency[{p, k}] = median(us);
      hits[{p, k}] = found / kPatterns;
    }
  }

  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << "n=" << n << " D=" << corpus.num_docs()
     << " links=" << index.num_links() << " build " << build_s << " s, "
     << std::setprecision(2) << words << " words/symbol\n";
  os << "    p\\k";
  for (std::size_t k : ks) os << "  k=" << k << " median_us (hits)";
  os << '\n';
  for (std::size_t p : lengths) {
    os << "    p=" << p;
    for (std::size_t k : ks) {
      os << "  " << std::setprecision(1) << latency[{p, k}] << " (" << hits[{p, k}] << ")";
    }
    os << '\n';
  }
  // Per reported item, k=1000 against k=10, where both return full answers.
  std::vector<std::string> within, beyond;
  for (std::size_t p : lengths) {
    const double h10 = hits[{p, 10}], h1000 = hits[{p, 1000}];
    if (h1000 < 500) continue;
    const double per10 = latency[{p, 10}] / h10, per1000 = latency[{p, 1000}] / h1000;
    std::ostringstream cell;
    cell << "p=" << p << " ratio " << std::setprecision(2) << per1000 / per10;
    (per1000 <= 3 * per10 ? within : beyond).push_back(cell.str());
    // Super-quadratic in k: total time growing faster than (k ratio)^2.
    const double kr = h1000 / h10;
    if (latency[{p, 1000}] > kr * kr * latency[{p, 10}] + 100) {
      r.fail("latency at k=1000 grows faster than quadratically in k for p=" + std::to_string(p));
    }
  }
  os << "    per-item cost k=1000 vs k=10 within 3x: ";
  for (const auto& s : within) os << s << "; ";
  if (!beyond.empty()) {
    os << "beyond 3x: ";
    for (const auto& s : beyond) os << s << "; ";
  }
  os << '\n';
  for (std::size_t k : ks) {
    const double base = latency[{lengths.front(), k}];
    for (std::size_t p : lengths) {
      const double pr = static_cast<double>(p) / static_cast<double>(lengths.front());
      if (latency[{p, k}] > pr * pr * base + 100) {
        r.fail("latency at k=" + std::to_string(k) + " grows faster than quadratically in p");
      }
    }
    os << "    k=" << k << ": latency p=" << lengths.back() << " / p=" << lengths.front() << " = "
       << std::setprecision(2) << latency[{lengths.back(), k}] / base << " (linear bound "
       << lengths.back() / lengths.front() << ")\n";
  }
  r.detail = os.str();
  r.detail.pop_back();
  return r;
}

}  // namespace
}  // namespace topk

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks for the top-k document index"};
  std::set<int> only;
  double scaling_mb = 5.0;
  app.add_option("--only", only, "Run only these criteria")->check(CLI::Range(1, 9));
  app.add_option("--scaling-mb", scaling_mb, "Synthetic corpus size for the scaling check")
      ->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  auto wanted = [&](int c) { return only.empty() || only.count(c) > 0; };

  using topk::Outcome;
  std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria;
  std::optional<topk::CorpusSetResult> corpus_set;
  auto from_set = [&](int which) {
    if (!corpus_set) corpus_set = topk::check_corpus_set();
    return which == 1 ? corpus_set->oracle : which == 2 ? corpus_set->unique : corpus_set->links;
  };
  criteria[1] = {"top-k equals the brute-force oracle", [&] { return from_set(1); }};
  criteria[2] = {"one grid point per containing document", [&] { return from_set(2); }};
  criteria[3] = {"class tree, striped index and 2D wavelet agree", topk::check_grid_agreement};
  criteria[4] = {"three-sided count equals report size", topk::check_count_report};
  criteria[5] = {"online prefixes equal batch answers", topk::check_online};
  criteria[6] = {"parameter-restricted top-k equals the filtered oracle", topk::check_param};
  criteria[7] = {"document links <= 2n", [&] { return from_set(7); }};
  criteria[8] = {"scaling smoke check",
                 [&] { return topk::check_scaling(scaling_mb); }};
  criteria[9] = {"save, load and re-check", topk::check_persistence};

  bool all_ok = true;
  for (auto& [id, entry] : criteria) {
    if (!wanted(id)) continue;
    const auto t0 = topk::Clock::now();
    Outcome out;
    try {
      out = entry.second();
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    all_ok = all_ok && out.ok;
    std::cout << (out.ok ? "PASS" : "FAIL") << " criterion " << id << ": " << entry.first << " ("
              << std::fixed << std::setprecision(1) << topk::seconds_since(t0) << " s)\n";
    std::cout << "    " << out.detail << '\n';
    if (!out.ok) std::cout << "    failure: " << out.failure << '\n';
    std::cout.flush();
  }
  return all_ok ? 0 : 1;
}
