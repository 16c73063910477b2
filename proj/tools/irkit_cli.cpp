// irkit command-line driver. Talks to the library only through irkit.h.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "irkit/irkit.h"

namespace {

struct Failure {
  std::string message;
};

void check(irkit_status st, const std::string& context = {}) {
  if (st == IRKIT_OK) return;
  std::string msg = irkit_last_error();
  if (msg.empty()) msg = irkit_status_string(st);
  throw Failure{context.empty() ? msg : context + ": " + msg};
}

// Owning wrapper for strings returned by the library.
struct Text {
  char* p = nullptr;
  ~Text() { irkit_string_free(p); }
  char** out() { return &p; }
  std::string str() const { return p == nullptr ? std::string() : std::string(p); }
};

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  ~Handle() { Free(p); }
  T** out() { return &p; }
  T* get() const { return p; }
};

using Lexicons = Handle<irkit_lexicons, irkit_lexicons_free>;
using Corpus = Handle<irkit_corpus, irkit_corpus_free>;
using Queries = Handle<irkit_queries, irkit_queries_free>;
using IndexH = Handle<irkit_index, irkit_index_free>;
using PoolH = Handle<irkit_pool, irkit_pool_free>;
using Judgments = Handle<irkit_judgments, irkit_judgments_free>;

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Failure{"cannot write '" + path + "'"};
    out << content;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw Failure{"write failed for '" + path + "'"};
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw Failure{"cannot rename into '" + path + "': " + ec.message()};
  }
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    write_atomic(path, content);
  }
}

const char* opt_path(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

struct LexiconPaths {
  std::string stoplist;
  std::string lemmas;
  std::string variants;

  void attach(CLI::App* cmd) {
    cmd->add_option("--stoplist", stoplist, "Stop-list file, one word per line")
        ->check(CLI::ExistingFile);
    cmd->add_option("--lemmas", lemmas, "Lemma map, word<TAB>lemma per line")
        ->check(CLI::ExistingFile);
    cmd->add_option("--variants", variants, "Variant map, lemma<TAB>v1,v2,... per line")
        ->check(CLI::ExistingFile);
  }
  void load(Lexicons& lex) const {
    check(irkit_lexicons_load(opt_path(stoplist), opt_path(lemmas), opt_path(variants), lex.out()),
          "lexicons");
  }
};

struct ModelParams {
  std::string technique = "base";
  double k1 = 1.2;
  double b = 0.75;
  double mu = 2000;
  double lambda = 0.7;

  void attach_technique(CLI::App* cmd) {
    cmd->add_option("--technique", technique, "base | swr | lemma | qe")->capture_default_str();
  }
  void attach_params(CLI::App* cmd) {
    cmd->add_option("--k1", k1, "BM25 k1")->capture_default_str();
    cmd->add_option("--b", b, "BM25 b")->capture_default_str();
    cmd->add_option("--mu", mu, "Dirichlet mu")->capture_default_str();
    cmd->add_option("--lambda", lambda, "Jelinek-Mercer lambda")->capture_default_str();
  }
  irkit_config config(const std::string& model) const {
    irkit_config c;
    irkit_config_init(&c);
    check(irkit_config_set_technique(&c, technique.c_str()), "--technique");
    check(irkit_config_set_model(&c, model.c_str()), "--model");
    c.k1 = k1;
    c.b = b;
    c.mu = mu;
    c.lambda = lambda;
    check(irkit_config_validate(&c));
    return c;
  }
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void print_warnings(const std::string& text) {
  if (!text.empty()) std::cerr << text;
}

// ---- config file ----

// Appends "--key value" for every key=value line whose option exists on the
// chosen subcommand and was not given on the command line.
std::vector<std::string> apply_config(const CLI::App& app, std::vector<std::string> args) {
  std::string path;
  std::string sub_name;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    if (sub_name.empty() && args[i].rfind("-", 0) != 0) {
      for (const auto* s : app.get_subcommands({})) {
        if (s->get_name() == args[i]) sub_name = args[i];
      }
    }
  }
  if (path.empty() || sub_name.empty()) return args;
  std::ifstream in(path);
  if (!in) throw Failure{"cannot open config file '" + path + "'"};
  const CLI::App* sub = app.get_subcommand(sub_name);
  auto given = [&](const std::string& flag) {
    for (const auto& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  std::vector<std::string> extra;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Failure{path + ":" + std::to_string(lineno) + ": expected key=value"};
    }
    std::string key = CLI::detail::trim_copy(line.substr(0, eq));
    std::string value = CLI::detail::trim_copy(line.substr(eq + 1));
    const std::string flag = "--" + key;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (opt == nullptr || flag == "--config" || given(flag)) continue;
    if (opt->get_expected_max() == 0) {
      if (value == "true" || value == "1" || value == "on") extra.push_back(flag);
    } else {
      extra.push_back(flag);
      extra.push_back(value);
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"irkit: test-collection construction and ranked-retrieval evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(irkit_version()));

  std::string config_path;
  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "key=value file (keys are long flag names without dashes); flags on the "
                    "command line win");
  };

  // index
  auto* cmd_index = app.add_subcommand("index", "Build an index snapshot from a document XML file");
  std::string docs_path, index_out;
  ModelParams index_params;
  LexiconPaths index_lex;
  cmd_index->add_option("--docs", docs_path, "Document XML")->required()->check(CLI::ExistingFile);
  cmd_index->add_option("--out,-o", index_out, "Snapshot output path")->required();
  index_params.attach_technique(cmd_index);
  index_lex.attach(cmd_index);
  add_config(cmd_index);

  // search
  auto* cmd_search = app.add_subcommand("search", "Rank every query and write a run file");
  std::string index_path, queries_path, run_out, trace_out, model = "bm25";
  std::size_t k = 50;
  bool strict = false;
  ModelParams search_params;
  LexiconPaths search_lex;
  cmd_search->add_option("--index", index_path, "Index snapshot")->required()->check(CLI::ExistingFile);
  cmd_search->add_option("--queries", queries_path, "Query XML")->required()->check(CLI::ExistingFile);
  cmd_search->add_option("--model", model, "vsm | bm25 | lmds | lmjms")->capture_default_str();
  search_params.attach_technique(cmd_search);
  search_params.attach_params(cmd_search);
  cmd_search->add_option("-k,--k", k, "Results per query")->capture_default_str();
  cmd_search->add_option("--out,-o", run_out, "Run file (stdout when omitted)");
  cmd_search->add_option("--trace", trace_out, "Per-query diagnostic output file");
  cmd_search->add_flag("--strict", strict, "Enforce the 2..7 query length bound");
  search_lex.attach(cmd_search);
  add_config(cmd_search);

  // pool
  auto* cmd_pool = app.add_subcommand("pool", "Pool the top documents of several models");
  std::string pool_models = "bm25,lmds", pool_out, pool_docs, unique_out;
  std::size_t depth = 20;
  ModelParams pool_params;
  LexiconPaths pool_lex;
  cmd_pool->add_option("--index", index_path, "Index snapshot")->required()->check(CLI::ExistingFile);
  cmd_pool->add_option("--queries", queries_path, "Query XML")->required()->check(CLI::ExistingFile);
  cmd_pool->add_option("--models", pool_models, "Comma-separated models")->capture_default_str();
  pool_params.attach_technique(cmd_pool);
  pool_params.attach_params(cmd_pool);
  cmd_pool->add_option("--depth", depth, "Pool depth per model")->capture_default_str();
  cmd_pool->add_option("--docs", pool_docs, "Document XML; enables content de-duplication")
      ->check(CLI::ExistingFile);
  cmd_pool->add_option("--out,-o", pool_out, "Pool dump (stdout when omitted)");
  cmd_pool->add_option("--unique-out", unique_out, "Surviving doc ids after de-duplication");
  pool_lex.attach(cmd_pool);
  add_config(cmd_pool);

  // kappa
  auto* cmd_kappa = app.add_subcommand("kappa", "Agreement between two judges");
  std::string j1_path, j2_path, j3_path, worksheet;
  cmd_kappa->add_option("--j1", j1_path, "First judge qrels")->required()->check(CLI::ExistingFile);
  cmd_kappa->add_option("--j2", j2_path, "Second judge qrels")->required()->check(CLI::ExistingFile);
  cmd_kappa->add_option("--worksheet", worksheet, "Write the conflict worksheet here");
  add_config(cmd_kappa);

  // merge
  auto* cmd_merge = app.add_subcommand("merge", "Resolve conflicts with a third judge");
  std::string merged_out;
  cmd_merge->add_option("--j1", j1_path, "First judge qrels")->required()->check(CLI::ExistingFile);
  cmd_merge->add_option("--j2", j2_path, "Second judge qrels")->required()->check(CLI::ExistingFile);
  cmd_merge->add_option("--j3", j3_path, "Third judge qrels over the conflicts")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_merge->add_option("--out,-o", merged_out, "Merged qrels (stdout when omitted)");
  add_config(cmd_merge);

  // eval
  auto* cmd_eval = app.add_subcommand("eval", "Evaluate run files against qrels");
  std::string qrels_path, p_cut = "10,20", r_cut = "50", map_cut = "50", table_out, tsv_out, per_query_out;
  std::vector<std::string> run_paths;
  cmd_eval->add_option("--qrels", qrels_path, "Qrels file")->required()->check(CLI::ExistingFile);
  cmd_eval->add_option("runs", run_paths, "Run files")->required()->check(CLI::ExistingFile);
  cmd_eval->add_option("--precision", p_cut, "Precision cutoffs")->capture_default_str();
  cmd_eval->add_option("--recall", r_cut, "Recall cutoffs")->capture_default_str();
  cmd_eval->add_option("--map", map_cut, "MAP cutoffs")->capture_default_str();
  cmd_eval->add_option("--out,-o", table_out, "Report table (stdout when omitted)");
  cmd_eval->add_option("--tsv", tsv_out, "Machine-readable report");
  cmd_eval->add_option("--per-query", per_query_out, "Per-query metrics");
  add_config(cmd_eval);

  // stats
  auto* cmd_stats = app.add_subcommand("stats", "Collection statistics");
  bool json = false;
  std::string stats_out;
  LexiconPaths stats_lex;
  cmd_stats->add_option("--docs", docs_path, "Document XML")->required()->check(CLI::ExistingFile);
  cmd_stats->add_option("--queries", queries_path, "Query XML")->check(CLI::ExistingFile);
  cmd_stats->add_flag("--json", json, "JSON output");
  cmd_stats->add_option("--out,-o", stats_out, "Output file (stdout when omitted)");
  stats_lex.attach(cmd_stats);
  add_config(cmd_stats);

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = apply_config(app, std::move(args));
    std::vector<char*> cargs;
    for (auto& a : args) cargs.push_back(a.data());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Failure& f) {
    std::cerr << "irkit: " << f.message << "\n";
    return 2;
  }

  try {
    if (*cmd_index) {
      Lexicons lex;
      index_lex.load(lex);
      Corpus corpus;
      check(irkit_corpus_load(docs_path.c_str(), corpus.out()), docs_path);
      const irkit_config cfg = index_params.config("bm25");
      IndexH index;
      check(irkit_index_build(corpus.get(), &cfg, lex.get(), index.out()));
      check(irkit_index_save(index.get(), index_out.c_str()), index_out);
      Text stats;
      check(irkit_stats(corpus.get(), nullptr, lex.get(), 0, stats.out()));
      Text istats;
      check(irkit_index_stats(index.get(), istats.out()));
      std::cout << stats.str() << "\n" << istats.str();
    } else if (*cmd_search) {
      Lexicons lex;
      search_lex.load(lex);
      IndexH index;
      check(irkit_index_load(index_path.c_str(), index.out()), index_path);
      Queries queries;
      check(irkit_queries_load(queries_path.c_str(), strict ? 1 : 0, queries.out()), queries_path);
      const irkit_config cfg = search_params.config(model);
      Text run, warnings, trace;
      check(irkit_search(index.get(), queries.get(), &cfg, lex.get(), k, run.out(), warnings.out(),
                         trace_out.empty() ? nullptr : trace.out()));
      print_warnings(warnings.str());
      emit(run_out, run.str());
      if (!trace_out.empty()) write_atomic(trace_out, trace.str());
    } else if (*cmd_pool) {
      Lexicons lex;
      pool_lex.load(lex);
      IndexH index;
      check(irkit_index_load(index_path.c_str(), index.out()), index_path);
      Queries queries;
      check(irkit_queries_load(queries_path.c_str(), 0, queries.out()), queries_path);
      std::vector<irkit_config> configs;
      for (const auto& m : split_csv(pool_models)) configs.push_back(pool_params.config(m));
      PoolH pool;
      Text warnings;
      check(irkit_pool_build(index.get(), queries.get(), configs.data(), configs.size(), lex.get(),
                             depth, pool.out(), warnings.out()));
      print_warnings(warnings.str());
      std::cerr << "pooled entries: " << irkit_pool_entries(pool.get()) << "\n";
      if (!pool_docs.empty()) {
        Corpus corpus;
        check(irkit_corpus_load(pool_docs.c_str(), corpus.out()), pool_docs);
        irkit_dedup_summary summary{};
        Text unique;
        check(irkit_pool_dedup(pool.get(), corpus.get(), &summary, unique.out()));
        std::cerr << "distinct doc ids: " << summary.pooled_ids
                  << "\nunique documents after de-duplication: " << summary.unique_docs << "\n";
        if (!unique_out.empty()) write_atomic(unique_out, unique.str());
      }
      Text dump;
      check(irkit_pool_dump(pool.get(), dump.out()));
      emit(pool_out, dump.str());
    } else if (*cmd_kappa) {
      Judgments j1, j2;
      check(irkit_judgments_load(j1_path.c_str(), j1.out()), j1_path);
      check(irkit_judgments_load(j2_path.c_str(), j2.out()), j2_path);
      irkit_contingency t{};
      check(irkit_contingency_compute(j1.get(), j2.get(), &t));
      irkit_kappa_result k_res{};
      const irkit_status st = irkit_kappa_compute(&t, &k_res);
      char line[256];
      std::snprintf(line, sizeof line,
                    "both relevant (a)\t%zu\nj2 only (b)\t%zu\nj1 only (c)\t%zu\nneither (d)\t%zu\n"
                    "P(A)\t%.4f\nP(E)\t%.4f\n",
                    t.a, t.b, t.c, t.d, k_res.observed, k_res.chance);
      std::cout << line;
      if (st == IRKIT_ERR_UNDEFINED) {
        std::cout << "kappa\tundefined\n";
      } else {
        check(st);
        std::snprintf(line, sizeof line, "kappa\t%.4f\n", k_res.kappa);
        std::cout << line;
      }
      if (!worksheet.empty()) {
        Text sheet;
        check(irkit_conflict_worksheet(j1.get(), j2.get(), sheet.out()));
        write_atomic(worksheet, sheet.str());
      }
    } else if (*cmd_merge) {
      Judgments j1, j2, j3;
      check(irkit_judgments_load(j1_path.c_str(), j1.out()), j1_path);
      check(irkit_judgments_load(j2_path.c_str(), j2.out()), j2_path);
      check(irkit_judgments_load(j3_path.c_str(), j3.out()), j3_path);
      irkit_merge_summary s{};
      Text qrels;
      check(irkit_merge(j1.get(), j2.get(), j3.get(), &s, qrels.out()));
      std::cerr << "pairs: " << s.total << "\nconflicts: " << s.conflicts
                << "\nagreed relevant: " << s.agreed_relevant
                << "\nthird-judge relevant: " << s.third_judge_relevant
                << "\nmerged relevant: " << s.merged_relevant << "\n";
      emit(merged_out, qrels.str());
    } else if (*cmd_eval) {
      Judgments qrels;
      check(irkit_judgments_load(qrels_path.c_str(), qrels.out()), qrels_path);
      auto to_sizes = [](const std::string& s, const char* flag) {
        std::vector<size_t> out;
        for (const auto& item : split_csv(s)) {
          try {
            std::size_t used = 0;
            const unsigned long v = std::stoul(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
          } catch (const std::exception&) {
            throw Failure{std::string(flag) + ": not a cutoff list: " + s};
          }
        }
        return out;
      };
      const auto p = to_sizes(p_cut, "--precision");
      const auto r = to_sizes(r_cut, "--recall");
      const auto m = to_sizes(map_cut, "--map");
      const irkit_cutoffs cutoffs{p.data(), p.size(), r.data(), r.size(), m.data(), m.size()};
      std::vector<const char*> paths;
      for (const auto& rp : run_paths) paths.push_back(rp.c_str());
      Text table, tsv, per_query;
      check(irkit_eval(paths.data(), paths.size(), qrels.get(), &cutoffs, table.out(), tsv.out(),
                       per_query.out(), nullptr));
      emit(table_out, table.str());
      if (!tsv_out.empty()) write_atomic(tsv_out, tsv.str());
      if (!per_query_out.empty()) write_atomic(per_query_out, per_query.str());
    } else if (*cmd_stats) {
      Lexicons lex;
      stats_lex.load(lex);
      Corpus corpus;
      check(irkit_corpus_load(docs_path.c_str(), corpus.out()), docs_path);
      Queries queries;
      if (!queries_path.empty()) {
        check(irkit_queries_load(queries_path.c_str(), 0, queries.out()), queries_path);
      }
      Text out;
      check(irkit_stats(corpus.get(), queries.get(), lex.get(), json ? 1 : 0, out.out()));
      emit(stats_out, out.str());
    }
  } catch (const Failure& f) {
    std::cerr << "irkit: " << f.message << "\n";
    return 1;
  }
  return 0;
}
