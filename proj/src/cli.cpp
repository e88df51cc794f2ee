#include "topk/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "topk/engine.hpp"
#include "topk/index_io.hpp"
#include "topk/verify.hpp"

namespace topk {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return buf.str();
}

struct ManifestEntry {
  std::string name;
  fs::path path;
  std::optional<double> rank;
};

std::vector<ManifestEntry> read_manifest(const fs::path& manifest) {
  std::istringstream in(read_file(manifest));
  std::vector<ManifestEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    ManifestEntry e;
    const auto tab = line.find('\t');
    e.name = line.substr(0, tab);
    if (tab != std::string::npos) {
      const std::string r = line.substr(tab + 1);
      char* end = nullptr;
      const double v = std::strtod(r.c_str(), &end);
      if (end == r.c_str() || *end != '\0' || std::isnan(v)) {
        throw InputError(manifest.string() + ":" + std::to_string(line_no) + ": bad rank '" + r +
                         "'");
      }
      e.rank = v;
    }
    e.path = fs::path(e.name);
    if (e.path.is_relative()) e.path = manifest.parent_path() / e.path;
    out.push_back(std::move(e));
  }
  return out;
}

Index open_index(const std::string& path) { return load_index(path); }

std::optional<std::vector<Symbol>> encode_pattern(const Index& index, const std::string& pattern) {
  const ByteAlphabet alphabet(index.parts().alphabet);
  return alphabet.try_encode(pattern);
}

int cmd_build(const std::string& input, const std::string& measures_arg, std::uint32_t z_max,
              const std::string& par_arg, const std::string& output, std::ostream& out,
              std::ostream& err) {
  BuildOptions opts;
  opts.measures.clear();
  for (const auto& name : split(measures_arg, ',')) {
    const auto m = parse_measure(name);
    if (!m) {
      err << "error: unsupported measure '" << name << "'\n";
      return kExitUsage;
    }
    if (std::find(opts.measures.begin(), opts.measures.end(), *m) != opts.measures.end()) {
      err << "warning: measure '" << name << "' listed twice; ignoring the repeat\n";
      continue;
    }
    opts.measures.push_back(*m);
  }
  if (opts.measures.empty()) {
    err << "error: no measures given\n";
    return kExitUsage;
  }
  const auto par = parse_param(par_arg);
  if (!par) {
    err << "error: unsupported parameter '" << par_arg << "'\n";
    return kExitUsage;
  }
  opts.par = *par;
  opts.z_max = z_max;

  const auto t0 = Clock::now();
  const auto entries = read_manifest(input);
  if (entries.empty()) {
    err << "error: manifest " << input << " lists no documents\n";
    return kExitUsage;
  }
  std::vector<std::string> texts;
  for (const auto& e : entries) {
    texts.push_back(read_file(e.path));
    if (texts.back().empty()) {
      err << "error: document " << e.path.string() << " is empty\n";
      return kExitUsage;
    }
  }
  const ByteAlphabet alphabet = ByteAlphabet::from_texts(texts);
  Corpus corpus(alphabet.sigma());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    corpus.add_document(alphabet.encode(texts[i]), entries[i].rank, entries[i].name);
    texts[i].clear();
    texts[i].shrink_to_fit();
  }
  opts.alphabet.assign(alphabet.bytes().begin(), alphabet.bytes().end());
  const Index index = Index::build(std::move(corpus), opts);
  const double build_ms = ms_since(t0);
  if (index.clamped_params() > 0) {
    err << "warning: " << index.clamped_params() << " parameter values clamped to "
        << z_max - 1 << "\n";
  }
  save_index(index, output);
  const std::size_t n = index.corpus().size();
  const std::size_t bytes = index.bytes();
  out << "n=" << n << " D=" << index.corpus().num_docs() << " sigma=" << index.corpus().sigma()
      << " links=" << index.num_links() << " build_ms=" << std::fixed << std::setprecision(1)
      << build_ms << " index_bytes=" << bytes << " words_per_symbol=" << std::setprecision(2)
      << static_cast<double>(bytes) / 8.0 / static_cast<double>(n) << "\n";
  return kExitOk;
}

void print_hit(std::ostream& out, const Index& index, std::size_t rank, DocId doc,
               double weight) {
  out << rank << '\t' << index.corpus().doc(doc).name << '\t' << weight << '\n';
}

struct QueryArgs {
  std::string index;
  std::string pattern;
  std::optional<long long> k;
  std::string measure = "tf";
  std::optional<std::string> par;
  std::optional<double> tau_lo;
  std::optional<double> tau_hi;
  bool online = false;
};

int cmd_query(const QueryArgs& a, std::ostream& out, std::ostream& err) {
  const auto m = parse_measure(a.measure);
  if (!m) {
    err << "error: unsupported measure '" << a.measure << "'\n";
    return kExitUsage;
  }
  if (a.k && *a.k < 0) {
    err << "error: k must be non-negative\n";
    return kExitUsage;
  }
  if (a.tau_lo && a.tau_hi && *a.tau_lo > *a.tau_hi) {
    err << "error: tau-lo exceeds tau-hi\n";
    return kExitUsage;
  }
  const Index index = open_index(a.index);
  if (!index.has_measure(*m)) {
    err << "error: measure '" << a.measure << "' is not in the index\n";
    return kExitUsage;
  }
  const auto pattern = encode_pattern(index, a.pattern);
  const std::vector<Symbol> none;

  if (a.par) {
    const auto par = parse_param(*a.par);
    if (!par || *par == ParamKind::kNone) {
      err << "error: unsupported parameter '" << *a.par << "'\n";
      return kExitUsage;
    }
    if (index.par() != *par) {
      err << "error: index carries parameter '" << to_string(index.par()) << "', not '"
          << *a.par << "'\n";
      return kExitUsage;
    }
    if (!pattern) return kExitOk;
    const double lo = a.tau_lo.value_or(-std::numeric_limits<double>::infinity());
    const double hi = a.tau_hi.value_or(std::numeric_limits<double>::infinity());
    const auto res = index.top_k_param(*pattern, a.k.value_or(10), lo, hi, *m);
    for (std::size_t i = 0; i < res.hits.size(); ++i) {
      print_hit(out, index, i + 1, res.hits[i].doc, res.hits[i].weight);
    }
    return kExitOk;
  }
  if (a.tau_lo || a.tau_hi) {
    if (a.tau_hi) {
      err << "error: tau-hi needs --par\n";
      return kExitUsage;
    }
    if (*m != MeasureKind::kTf) {
      err << "error: tf-idf thresholds use the tf measure\n";
      return kExitUsage;
    }
    if (!pattern) return kExitOk;
    const auto hits = index.report_tfidf_above(*pattern, *a.tau_lo);
    for (std::size_t i = 0; i < hits.size(); ++i) {
      out << i + 1 << '\t' << index.corpus().doc(hits[i].doc).name << '\t' << hits[i].tf << '\t'
          << hits[i].score << '\n';
    }
    return kExitOk;
  }
  if (!pattern) return kExitOk;
  if (a.online) {
    auto it = index.top_k_online(*pattern, *m);
    const std::size_t limit =
        a.k ? static_cast<std::size_t>(*a.k) : std::numeric_limits<std::size_t>::max();
    std::size_t rank = 0;
    while (rank < limit) {
      const auto hit = it.next();
      if (!hit) break;
      print_hit(out, index, ++rank, hit->doc, hit->weight);
      out.flush();
    }
    return kExitOk;
  }
  const auto res = index.top_k(*pattern, a.k.value_or(10), *m);
  for (std::size_t i = 0; i < res.hits.size(); ++i) {
    print_hit(out, index, i + 1, res.hits[i].doc, res.hits[i].weight);
  }
  return kExitOk;
}

struct VerifyArgs {
  std::optional<std::string> index;
  std::uint64_t seed = 1;
  std::size_t trials = 10;
  // Fault injection: overwrite the weight behind the top answer for this
  // pattern before checking.
  std::optional<std::string> corrupt_pattern;
  double corrupt_weight = 1e9;
};

void print_failure(std::ostream& err, const Mismatch& m) {
  err << "FAIL " << m.reproducer << "\n  expected " << m.expected << "\n  actual   " << m.actual
      << "\n";
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  std::size_t checks = 0;
  if (a.index) {
    Index index = open_index(*a.index);
    if (a.corrupt_pattern) {
      const auto p = encode_pattern(index, *a.corrupt_pattern);
      for (MeasureKind m : index.measures()) {
        const auto hits = p ? index.top_k_hits(*p, 1, m) : std::vector<GridHit>{};
        if (hits.empty()) {
          err << "error: pattern '" << *a.corrupt_pattern << "' does not occur\n";
          return kExitUsage;
        }
        index.override_weight(m, hits[0].column, a.corrupt_weight);
      }
    }
    BatteryOptions opts;
    opts.seed = a.seed;
    const auto rep = check_index(index, opts);
    checks += rep.checks;
    if (!rep.ok()) {
      print_failure(err, *rep.failure);
      return kExitVerifyFailed;
    }
    out << "index " << *a.index << ": " << rep.patterns << " patterns, " << rep.checks
        << " checks ok\n";
  }
  for (std::size_t t = 0; t < a.trials; ++t) {
    const std::uint64_t seed = a.seed * 1000003u + t;
    BatteryOptions opts;
    opts.pattern_budget = 600;
    const auto rep = check_random_corpus(seed, opts);
    checks += rep.checks;
    if (!rep.ok()) {
      err << "random corpus seed " << seed << "\n";
      print_failure(err, *rep.failure);
      return kExitVerifyFailed;
    }
  }
  out << "verify ok: " << a.trials << " random corpora, " << checks << " checks\n";
  return kExitOk;
}

int cmd_bench(const std::string& index_path, const std::string& patterns_path,
              const std::string& ks_arg, const std::string& measure, std::size_t repeat,
              std::ostream& out, std::ostream& err) {
  const auto m = parse_measure(measure);
  if (!m) {
    err << "error: unsupported measure '" << measure << "'\n";
    return kExitUsage;
  }
  std::vector<long long> ks;
  for (const auto& s : split(ks_arg, ',')) {
    try {
      std::size_t used = 0;
      const long long k = std::stoll(s, &used);
      if (used != s.size() || k < 0) throw std::invalid_argument(s);
      ks.push_back(k);
    } catch (const std::exception&) {
      err << "error: bad k '" << s << "'\n";
      return kExitUsage;
    }
  }
  const Index index = open_index(index_path);
  if (!index.has_measure(*m)) {
    err << "error: measure '" << measure << "' is not in the index\n";
    return kExitUsage;
  }
  std::istringstream in(read_file(patterns_path));
  std::vector<std::vector<Symbol>> patterns;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (auto p = encode_pattern(index, line)) patterns.push_back(std::move(*p));
  }

  // (bucket lower bound, k) -> latencies in microseconds
  std::map<std::pair<std::size_t, long long>, std::vector<double>> samples;
  std::map<std::pair<std::size_t, long long>, std::size_t> hits;
  std::map<std::size_t, std::string> labels;
  for (const auto& p : patterns) {
    std::size_t lo = 1;
    while (lo * 2 <= p.size()) lo *= 2;
    labels[lo] = std::to_string(lo) + "-" + std::to_string(lo * 2 - 1);
    for (long long k : ks) {
      for (std::size_t r = 0; r < repeat; ++r) {
        const auto t0 = Clock::now();
        const std::size_t got = index.top_k(p, k, *m).hits.size();
        samples[{lo, k}].push_back(ms_since(t0) * 1000.0);
        hits[{lo, k}] += got;
      }
    }
  }
  out << "len_bucket\tk\tqueries\tmedian_us\tp99_us\tmean_hits\n";
  for (auto& [key, v] : samples) {
    std::sort(v.begin(), v.end());
    const double median = v[v.size() / 2];
    const double p99 = v[std::min(v.size() - 1, static_cast<std::size_t>(0.99 * v.size()))];
    out << labels[key.first] << '\t' << key.second << '\t' << v.size() << '\t' << std::fixed
        << std::setprecision(2) << median << '\t' << p99 << '\t'
        << static_cast<double>(hits[key]) / static_cast<double>(v.size()) << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Top-k document retrieval over a suffix-tree grid index", "topkdoc"};
  app.require_subcommand(1);

  auto* build = app.add_subcommand("build", "Build an index from a manifest of documents");
  std::string input, output, measures = "tf", par = "none";
  std::uint32_t z_max = 1024;
  build->add_option("--input", input, "Manifest: one path per line, optional TAB rank")
      ->required();
  build->add_option("--measures", measures, "Comma-separated: tf, mindist, docrank");
  build->add_option("--zmax", z_max, "Exclusive bound of parameter values")
      ->check(CLI::PositiveNumber);
  build->add_option("--par", par, "Parameter annotation: none, tf, doclen");
  build->add_option("--out", output, "Index file to write")->required();

  auto* query = app.add_subcommand("query", "Query an index");
  QueryArgs qa;
  long long k_value = 0;
  query->add_option("--index", qa.index)->required();
  query->add_option("--pattern", qa.pattern)->required();
  auto* k_opt = query->add_option("--k", k_value, "Number of documents (default 10)");
  query->add_option("--measure", qa.measure);
  std::string par_name;
  auto* par_opt = query->add_option("--par", par_name, "Restrict by this parameter");
  double tau_lo = 0, tau_hi = 0;
  auto* lo_opt = query->add_option("--tau-lo", tau_lo,
                                   "Parameter lower bound, or the tf-idf threshold without --par");
  auto* hi_opt = query->add_option("--tau-hi", tau_hi, "Parameter upper bound");
  query->add_flag("--online", qa.online, "Stream results until exhausted or k reached");

  auto* verify = app.add_subcommand("verify", "Run the oracle batteries");
  VerifyArgs va;
  std::string verify_index;
  std::string corrupt_pattern;
  auto* vi_opt = verify->add_option("--index", verify_index, "Also check this index file");
  verify->add_option("--seed", va.seed);
  verify->add_option("--trials", va.trials, "Random corpora to build and check");
  auto* cc_opt = verify->add_option("--corrupt-pattern", corrupt_pattern)->group("");
  verify->add_option("--corrupt-weight", va.corrupt_weight)->group("");

  auto* bench = app.add_subcommand("bench", "Time top-k queries");
  std::string bench_index, patterns, ks = "1,10,100", bench_measure = "tf";
  std::size_t repeat = 5;
  bench->add_option("--index", bench_index)->required();
  bench->add_option("--patterns", patterns, "One pattern per line")->required();
  bench->add_option("--k", ks, "Comma-separated k values");
  bench->add_option("--measure", bench_measure);
  bench->add_option("--repeat", repeat)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*build) return cmd_build(input, measures, z_max, par, output, out, err);
    if (*query) {
      if (*k_opt) qa.k = k_value;
      if (*par_opt) qa.par = par_name;
      if (*lo_opt) qa.tau_lo = tau_lo;
      if (*hi_opt) qa.tau_hi = tau_hi;
      return cmd_query(qa, out, err);
    }
    if (*verify) {
      if (*vi_opt) va.index = verify_index;
      if (*cc_opt) va.corrupt_pattern = corrupt_pattern;
      return cmd_verify(va, out, err);
    }
    if (*bench) return cmd_bench(bench_index, patterns, ks, bench_measure, repeat, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const FormatError& e) {
    err << "error: corrupt index: " << e.what() << "\n";
    return kExitCorruptIndex;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BoundsError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace topk
