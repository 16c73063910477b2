// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//
// Environment:
//   IRKIT_CLI            path to the irkit binary (defaults to the build's)
//   IRKIT_REFERENCE_DIR  optional directory with the published collection
//                        (docs.xml, queries.xml, qrels.txt, stoplist.txt,
//                        lemmas.tsv, variants.tsv) for the informational
//                        full-scale report.

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "irkit/collection.hpp"
#include "irkit/errors.hpp"
#include "irkit/index.hpp"
#include "irkit/metrics.hpp"
#include "irkit/retrieval.hpp"
#include "oracle.hpp"
#include "pool_fixture.hpp"
#include "util.hpp"

#include <unistd.h>

namespace fs = std::filesystem;
using Big = boost::multiprecision::cpp_dec_float_50;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int n, const std::string& name, const std::function<Outcome()>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.3fs", secs);
  std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << n << "] " << name << ": " << o.detail << " ("
            << timing << ")\n";
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << std::fixed << v;
  return os.str();
}

irkit::JudgmentSet load_qrels(const std::string& rel) {
  return irkit::parse_qrels(irkit::detail::read_file(fixtures::data_path(rel)), rel);
}

Outcome kappa_reproduction() {
  const auto s1 = load_qrels("agreement/s1.qrels");
  const auto s2 = load_qrels("agreement/s2.qrels");
  const auto table = irkit::contingency(s1, s2);
  const irkit::ContingencyTable expected{701, 31, 112, 252};
  const auto direct = irkit::kappa(expected);
  const auto via_files = irkit::kappa(table);
  const bool ok = table == expected && direct.kappa && via_files.kappa &&
                  direct.observed >= 0.865 && direct.observed <= 0.875 && *direct.kappa >= 0.68 &&
                  *direct.kappa <= 0.70 && *via_files.kappa == *direct.kappa;
  return {ok, "table (" + std::to_string(table.a) + "," + std::to_string(table.b) + "," +
                  std::to_string(table.c) + "," + std::to_string(table.d) + ") P(A)=" +
                  fmt(direct.observed, 4) + " P(E)=" + fmt(direct.chance, 4) +
                  " kappa=" + (direct.kappa ? fmt(*direct.kappa, 4) : "undefined")};
}

Outcome merge_arithmetic() {
  const auto s1 = load_qrels("agreement/s1.qrels");
  const auto s2 = load_qrels("agreement/s2.qrels");
  const auto s3 = load_qrels("agreement/s3.qrels");
  const auto merged = irkit::resolve_conflicts(s1, s2, s3);
  const auto total = merged.judgments.total_relevant();
  const bool ok = merged.conflicts == 143 && s3.total_relevant() == 92 && total == 793;
  return {ok, std::to_string(merged.conflicts) + " conflicts, " +
                  std::to_string(s3.total_relevant()) + " third-judge relevant, merged relevant " +
                  std::to_string(total)};
}

Outcome oracle_equivalence() {
  constexpr int kCorpora = 120;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(0xC0FFEE);
  std::size_t rankings = 0;
  for (int iter = 0; iter < kCorpora; ++iter) {
    const auto c = oracle::random_corpus(rng);
    const auto docs = fixtures::to_documents(c.docs);
    const auto lex = fixtures::to_lexicons(c.lex);
    for (auto tech : irkit::kAllTechniques) {
      const auto index = irkit::Index::build(docs, irkit::PipelineConfig::for_technique(tech), lex);
      for (auto model : irkit::kAllModels) {
        const auto cfg = irkit::PipelineConfig::for_technique(tech, model);
        const auto ocfg = fixtures::to_oracle(cfg);
        for (const auto& q : c.queries) {
          const auto terms = oracle::query_side(q, ocfg, c.lex);
          if (terms.empty()) continue;
          const auto got = irkit::rank(index, "Q", terms, cfg, 50);
          const auto want = oracle::rank(c.docs, terms, ocfg, c.lex, 50);
          ++rankings;
          if (got.docs.size() != want.size()) {
            return {false, "corpus " + std::to_string(iter) + ": result count differs"};
          }
          for (std::size_t i = 0; i < want.size(); ++i) {
            const double scale = std::max(1.0, std::abs(want[i].score));
            if (got.docs[i].doc_id != want[i].id ||
                std::abs(got.docs[i].score - want[i].score) > 1e-9 * scale) {
              return {false, "corpus " + std::to_string(iter) + " " + irkit::run_tag(cfg) + " rank " +
                                 std::to_string(i + 1) + ": " + got.docs[i].doc_id + " vs " +
                                 want[i].id};
            }
          }
        }
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {secs < 30.0, std::to_string(kCorpora) + " corpora, " + std::to_string(rankings) +
                           " rankings identical to the linear scan (limit 30s)"};
}

Outcome formula_checks() {
  using boost::multiprecision::log;
  struct Check {
    const char* name;
    double got;
    Big want;
  };
  const Big two = 2, one = 1;
  const std::vector<Check> checks{
      {"tf-idf", irkit::score_tfidf(4, 10, 4), two * (one + log(two))},
      {"bm25", irkit::score_bm25(4, 10, 4, 5, 5, 1.2, 0.75),
       log(Big("6.5") / Big("4.5")) * Big("8.8") / Big("5.2")},
      {"dirichlet tf=4", irkit::score_lm_ds_factor(4, 100, 2000, 0.01).value(), Big(24) / Big(2100)},
      {"dirichlet tf=0", irkit::score_lm_ds_factor(0, 100, 2000, 0.01).value(), Big(20) / Big(2100)},
      {"jelinek-mercer", irkit::score_lm_jms_factor(4, 100, 0.7, 0.01).value(), Big("0.019")},
  };
  bool ok = true;
  std::string detail;
  for (const auto& c : checks) {
    const double err = std::abs(static_cast<double>(Big(c.got) - c.want));
    ok = ok && err <= 1e-9;
    if (!detail.empty()) detail += ", ";
    char err_text[32];
    std::snprintf(err_text, sizeof err_text, "%.1e", err);
    detail += std::string(c.name) + "=" + fmt(c.got, 6) + " (err " + err_text + ")";
  }
  return {ok, detail};
}

Outcome metric_fixtures() {
  std::vector<std::string> ranked;
  for (int i = 1; i <= 10; ++i) ranked.push_back("d" + std::to_string(i));
  const irkit::RelevantSet rel{"d1", "d3", "d5", "x1", "x2"};
  const double p = irkit::precision_at_k(ranked, rel, 10);
  const double ap = irkit::average_precision_at_k(ranked, rel, 10).value();
  const irkit::RelevantSet five{"d1", "d2", "d4", "d7", "d9", "x1", "x2"};
  const double p5 = irkit::precision_at_k(ranked, five, 10);
  const bool ok = p == 0.3 && std::abs(ap - 34.0 / 75.0) <= 1e-15 && p5 == 0.5;
  return {ok, "P@10=" + fmt(p, 4) + " AP@10=" + fmt(ap, 4) + " (34/75) worked case P@10=" + fmt(p5, 4)};
}

Outcome pooling_dedup() {
  const auto f = pool_fixture::build();
  const auto res = irkit::dedup(f.pool, f.docs);
  const auto again = irkit::dedup(res.pool, f.docs);
  bool idempotent = again.unique_docs == res.unique_docs && again.pool.dump() == res.pool.dump();

  // Idempotence on arbitrary pools.
  std::mt19937 rng(904);
  for (int iter = 0; iter < 200 && idempotent; ++iter) {
    std::vector<irkit::Document> docs;
    const int n = 1 + static_cast<int>(rng() % 80);
    for (int i = 0; i < n; ++i) {
      docs.push_back(irkit::Document{"D" + std::to_string(i), "t" + std::to_string(rng() % 10),
                                     "b" + std::to_string(rng() % 4), std::nullopt});
    }
    irkit::Pool pool(15);
    for (int q = 0; q < 5; ++q) {
      for (const std::string tag : {"bm25-base", "lmds-base", "vsm-base"}) {
        pool.add_contributor(tag);
        // A run lists each document at most once.
        std::vector<std::size_t> order(docs.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        const std::size_t depth = std::min<std::size_t>(rng() % 16, order.size());
        for (std::size_t r = 1; r <= depth; ++r) {
          pool.add("Q" + std::to_string(q), docs[order[r - 1]].doc_id, tag, r);
        }
      }
    }
    const auto once = irkit::dedup(pool, docs);
    const auto twice = irkit::dedup(once.pool, docs);
    idempotent = once.unique_docs == twice.unique_docs && once.pool.dump() == twice.pool.dump();
  }
  const bool ok = f.pool.total_entries() == 2000 && res.unique_docs.size() == 1096 && idempotent;
  return {ok, std::to_string(f.pool.total_entries()) + " entries -> " +
                  std::to_string(res.unique_docs.size()) + " unique documents; idempotent: " +
                  (idempotent ? "yes" : "no")};
}

int run_command(const std::string& cmd) {
  return std::system((cmd + " >/dev/null 2>&1").c_str());
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

Outcome cli_determinism() {
  const char* env = std::getenv("IRKIT_CLI");
  const std::string cli = env != nullptr ? env : IRKIT_CLI;
  if (!fs::exists(cli)) return {false, "CLI binary not found at " + cli};
  const std::string mini = fixtures::data_path("mini");
  const std::string lex = " --stoplist " + quote(mini + "/stoplist.txt") + " --lemmas " +
                          quote(mini + "/lemmas.tsv") + " --variants " + quote(mini + "/variants.tsv");
  const fs::path work = fs::temp_directory_path() / ("irkit_acceptance_" + std::to_string(::getpid()));

  double slowest = 0.0;
  std::vector<std::vector<std::string>> outputs;
  for (int round = 0; round < 2; ++round) {
    const fs::path dir = work / std::to_string(round);
    fs::create_directories(dir);
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> runs;
    for (const std::string tech : {"base", "swr", "lemma", "qe"}) {
      const std::string idx = (dir / (tech + ".idx")).string();
      if (run_command(quote(cli) + " index --docs " + quote(mini + "/docs.xml") + " --technique " +
                      tech + lex + " --out " + quote(idx)) != 0) {
        return {false, "index failed for " + tech};
      }
      for (const std::string model : {"vsm", "bm25", "lmds", "lmjms"}) {
        const std::string run = (dir / (model + "-" + tech + ".run")).string();
        if (run_command(quote(cli) + " search --index " + quote(idx) + " --queries " +
                        quote(mini + "/queries.xml") + " --model " + model + " --technique " +
                        tech + lex + " --out " + quote(run)) != 0) {
          return {false, "search failed for " + model + "-" + tech};
        }
        runs.push_back(run);
      }
    }
    std::string eval = quote(cli) + " eval --qrels " + quote(mini + "/qrels.txt");
    for (const auto& r : runs) eval += " " + quote(r);
    eval += " --out " + quote((dir / "report.txt").string()) + " --tsv " +
            quote((dir / "report.tsv").string());
    if (run_command(eval) != 0) return {false, "eval failed"};
    slowest = std::max(slowest,
                       std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

    std::vector<std::string> contents;
    for (const auto& entry : fs::directory_iterator(dir)) contents.push_back(entry.path().filename());
    std::sort(contents.begin(), contents.end());
    for (auto& name : contents) name += "\n" + irkit::detail::read_file((dir / name).string());
    outputs.push_back(std::move(contents));
  }
  fs::remove_all(work);
  const bool identical = outputs[0] == outputs[1];
  const bool ok = identical && slowest < 1.0;
  return {ok, std::to_string(outputs[0].size()) + " outputs " +
                  (identical ? "byte-identical" : "DIFFER") + " across runs; slowest pipeline " +
                  fmt(slowest, 3) + "s (limit 1s)"};
}

Outcome published_collection() {
  const char* dir = std::getenv("IRKIT_REFERENCE_DIR");
  if (dir == nullptr) {
    return {true, "INFO: not asserted; the published 1,096-document collection is not bundled "
                  "(set IRKIT_REFERENCE_DIR to print the full 16-row report)"};
  }
  const std::string base = dir;
  const auto docs = irkit::parse_documents(irkit::detail::read_file(base + "/docs.xml"));
  const auto queries = irkit::parse_queries(irkit::detail::read_file(base + "/queries.xml"));
  const auto qrels = irkit::parse_qrels(irkit::detail::read_file(base + "/qrels.txt"));
  irkit::Lexicons lex;
  lex.load_stoplist(irkit::detail::read_file(base + "/stoplist.txt"));
  lex.load_lemmas(irkit::detail::read_file(base + "/lemmas.tsv"));
  lex.load_variants(irkit::detail::read_file(base + "/variants.tsv"));
  std::vector<irkit::RunEntry> all;
  for (auto tech : irkit::kAllTechniques) {
    const auto index = irkit::Index::build(docs, irkit::PipelineConfig::for_technique(tech), lex);
    for (auto model : irkit::kAllModels) {
      const auto res = irkit::search(index, queries, irkit::PipelineConfig::for_technique(tech, model), lex, 50);
      all.insert(all.end(), res.run.begin(), res.run.end());
    }
  }
  const auto report = irkit::evaluate_runs(all, qrels);
  std::cout << report.format_table();
  return {true, "INFO: full report printed above for side-by-side comparison (reporting slack 0.005)"};
}

}  // namespace

int main() {
  report(1, "kappa reproduction", kappa_reproduction);
  report(2, "merge arithmetic", merge_arithmetic);
  report(3, "oracle equivalence", oracle_equivalence);
  report(4, "formula point-checks", formula_checks);
  report(5, "metric fixtures", metric_fixtures);
  report(6, "pooling and de-duplication", pooling_dedup);
  report(7, "CLI determinism", cli_determinism);
  report(8, "published-collection metrics", published_collection);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << "\n";
  return failures == 0 ? 0 : 1;
}
