#include "irkit/irkit.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "irkit/collection.hpp"
#include "irkit/corpus.hpp"
#include "irkit/errors.hpp"
#include "irkit/index.hpp"
#include "irkit/metrics.hpp"
#include "irkit/retrieval.hpp"
#include "irkit/textproc.hpp"
#include "util.hpp"

struct irkit_lexicons {
  irkit::Lexicons value;
};
struct irkit_corpus {
  std::vector<irkit::Document> docs;
};
struct irkit_queries {
  std::vector<irkit::Query> queries;
};
struct irkit_index {
  irkit::Index value;
};
struct irkit_pool {
  irkit::Pool value;
};
struct irkit_judgments {
  irkit::JudgmentSet value;
};

namespace {

thread_local std::string g_last_error;

irkit_status to_status(irkit::ErrorKind kind) {
  using irkit::ErrorKind;
  switch (kind) {
    case ErrorKind::InvalidArgument: return IRKIT_ERR_INVALID_ARGUMENT;
    case ErrorKind::Io: return IRKIT_ERR_IO;
    case ErrorKind::Parse: return IRKIT_ERR_PARSE;
    case ErrorKind::Record: return IRKIT_ERR_RECORD;
    case ErrorKind::Validation: return IRKIT_ERR_VALIDATION;
    case ErrorKind::EmptyQuery: return IRKIT_ERR_EMPTY_QUERY;
    case ErrorKind::EmptyCorpus: return IRKIT_ERR_EMPTY_CORPUS;
    case ErrorKind::Mismatch: return IRKIT_ERR_MISMATCH;
    case ErrorKind::Coverage: return IRKIT_ERR_COVERAGE;
    case ErrorKind::Undefined: return IRKIT_ERR_UNDEFINED;
  }
  return IRKIT_ERR_INTERNAL;
}

template <class F>
irkit_status guarded(F&& body) noexcept {
  try {
    body();
    g_last_error.clear();
    return IRKIT_OK;
  } catch (const irkit::Error& e) {
    g_last_error = e.what();
    return to_status(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return IRKIT_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return IRKIT_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return IRKIT_ERR_INTERNAL;
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) {
    throw irkit::Error(irkit::ErrorKind::InvalidArgument, std::string(name) + " is NULL");
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void put(char** out, const std::string& s) {
  if (out != nullptr) *out = dup(s);
}

irkit::Model to_model(irkit_model m) {
  switch (m) {
    case IRKIT_MODEL_VSM: return irkit::Model::Vsm;
    case IRKIT_MODEL_BM25: return irkit::Model::Bm25;
    case IRKIT_MODEL_LM_DS: return irkit::Model::LmDirichlet;
    case IRKIT_MODEL_LM_JMS: return irkit::Model::LmJelinekMercer;
  }
  throw irkit::Error(irkit::ErrorKind::InvalidArgument, "unknown model value");
}

irkit_model from_model(irkit::Model m) {
  switch (m) {
    case irkit::Model::Vsm: return IRKIT_MODEL_VSM;
    case irkit::Model::Bm25: return IRKIT_MODEL_BM25;
    case irkit::Model::LmDirichlet: return IRKIT_MODEL_LM_DS;
    case irkit::Model::LmJelinekMercer: return IRKIT_MODEL_LM_JMS;
  }
  return IRKIT_MODEL_BM25;
}

irkit::PipelineConfig to_config(const irkit_config* c) {
  require(c, "config");
  irkit::PipelineConfig p;
  p.use_swr = c->use_swr != 0;
  p.use_lemma = c->use_lemma != 0;
  p.use_expansion = c->use_expansion != 0;
  p.model = to_model(c->model);
  p.k1 = c->k1;
  p.b = c->b;
  p.mu = c->mu;
  p.lambda = c->lambda;
  p.pool_depth = c->pool_depth;
  return p;
}

const irkit::Lexicons& lexicons_or_empty(const irkit_lexicons* lex) {
  static const irkit::Lexicons kEmpty;
  return lex == nullptr ? kEmpty : lex->value;
}

irkit::RelevantSet to_set(const char* const* ids, std::size_t n) {
  irkit::RelevantSet out;
  if (n > 0) require(ids, "relevant");
  for (std::size_t i = 0; i < n; ++i) {
    require(ids[i], "relevant id");
    out.insert(ids[i]);
  }
  return out;
}

std::vector<std::string> to_list(const char* const* ids, std::size_t n) {
  std::vector<std::string> out;
  if (n > 0) require(ids, "ranked");
  for (std::size_t i = 0; i < n; ++i) {
    require(ids[i], "ranked id");
    out.emplace_back(ids[i]);
  }
  return out;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

}  // namespace

extern "C" {

const char* irkit_version(void) { return "1.0.0"; }

const char* irkit_status_string(irkit_status status) {
  switch (status) {
    case IRKIT_OK: return "ok";
    case IRKIT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case IRKIT_ERR_IO: return "i/o error";
    case IRKIT_ERR_PARSE: return "parse error";
    case IRKIT_ERR_RECORD: return "record error";
    case IRKIT_ERR_VALIDATION: return "validation error";
    case IRKIT_ERR_EMPTY_QUERY: return "empty query";
    case IRKIT_ERR_EMPTY_CORPUS: return "empty corpus";
    case IRKIT_ERR_MISMATCH: return "key mismatch";
    case IRKIT_ERR_COVERAGE: return "coverage error";
    case IRKIT_ERR_UNDEFINED: return "undefined";
    case IRKIT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* irkit_last_error(void) { return g_last_error.c_str(); }

void irkit_string_free(char* s) { std::free(s); }

// ---- configuration ----

void irkit_config_init(irkit_config* config) {
  if (config == nullptr) return;
  const irkit::PipelineConfig d;
  config->use_swr = d.use_swr;
  config->use_lemma = d.use_lemma;
  config->use_expansion = d.use_expansion;
  config->model = from_model(d.model);
  config->k1 = d.k1;
  config->b = d.b;
  config->mu = d.mu;
  config->lambda = d.lambda;
  config->pool_depth = d.pool_depth;
}

irkit_status irkit_config_set_technique(irkit_config* config, const char* technique) {
  return guarded([&] {
    require(config, "config");
    require(technique, "technique");
    const auto p = irkit::PipelineConfig::for_technique(irkit::parse_technique(technique));
    config->use_swr = p.use_swr;
    config->use_lemma = p.use_lemma;
    config->use_expansion = p.use_expansion;
  });
}

irkit_status irkit_config_set_model(irkit_config* config, const char* model) {
  return guarded([&] {
    require(config, "config");
    require(model, "model");
    config->model = from_model(irkit::parse_model(model));
  });
}

irkit_status irkit_config_validate(const irkit_config* config) {
  return guarded([&] { to_config(config).validate(); });
}

irkit_status irkit_config_tag(const irkit_config* config, char** out) {
  return guarded([&] {
    require(out, "out");
    put(out, irkit::run_tag(to_config(config)));
  });
}

// ---- lexicons ----

irkit_status irkit_lexicons_load(const char* stoplist_path, const char* lemma_path,
                                 const char* variant_path, irkit_lexicons** out) {
  return guarded([&] {
    require(out, "out");
    auto lex = std::make_unique<irkit_lexicons>();
    if (stoplist_path != nullptr) lex->value.load_stoplist(irkit::detail::read_file(stoplist_path));
    if (lemma_path != nullptr) lex->value.load_lemmas(irkit::detail::read_file(lemma_path));
    if (variant_path != nullptr) lex->value.load_variants(irkit::detail::read_file(variant_path));
    *out = lex.release();
  });
}

void irkit_lexicons_free(irkit_lexicons* lexicons) { delete lexicons; }

irkit_status irkit_preprocess_query(const char* text, const irkit_config* config,
                                    const irkit_lexicons* lexicons, char** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    const auto cfg = to_config(config);
    cfg.validate();
    put(out, join_lines(irkit::preprocess_query_text(text, cfg, lexicons_or_empty(lexicons))));
  });
}

// ---- documents and queries ----

irkit_status irkit_corpus_load(const char* docs_path, irkit_corpus** out) {
  return guarded([&] {
    require(docs_path, "docs_path");
    require(out, "out");
    auto c = std::make_unique<irkit_corpus>();
    c->docs = irkit::parse_documents(irkit::detail::read_file(docs_path));
    *out = c.release();
  });
}

size_t irkit_corpus_size(const irkit_corpus* corpus) {
  return corpus == nullptr ? 0 : corpus->docs.size();
}

void irkit_corpus_free(irkit_corpus* corpus) { delete corpus; }

irkit_status irkit_queries_load(const char* path, int strict, irkit_queries** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto q = std::make_unique<irkit_queries>();
    q->queries = irkit::parse_queries(irkit::detail::read_file(path),
                                      irkit::QueryParseOptions{strict != 0});
    *out = q.release();
  });
}

size_t irkit_queries_size(const irkit_queries* queries) {
  return queries == nullptr ? 0 : queries->queries.size();
}

void irkit_queries_free(irkit_queries* queries) { delete queries; }

irkit_status irkit_stats(const irkit_corpus* corpus, const irkit_queries* queries,
                         const irkit_lexicons* lexicons, int json, char** out) {
  return guarded([&] {
    require(corpus, "corpus");
    require(out, "out");
    static const std::vector<irkit::Query> kNoQueries;
    const auto stats = irkit::collection_stats(
        corpus->docs, queries == nullptr ? kNoQueries : queries->queries,
        lexicons_or_empty(lexicons).stoplist());
    put(out, json ? irkit::format_stats_json(stats) : irkit::format_stats_table(stats));
  });
}

// ---- index ----

irkit_status irkit_index_build(const irkit_corpus* corpus, const irkit_config* config,
                               const irkit_lexicons* lexicons, irkit_index** out) {
  return guarded([&] {
    require(corpus, "corpus");
    require(out, "out");
    auto idx = std::make_unique<irkit_index>(irkit_index{
        irkit::Index::build(corpus->docs, to_config(config), lexicons_or_empty(lexicons))});
    *out = idx.release();
  });
}

irkit_status irkit_index_save(const irkit_index* index, const char* path) {
  return guarded([&] {
    require(index, "index");
    require(path, "path");
    irkit::detail::write_file_atomic(path, index->value.serialize());
  });
}

irkit_status irkit_index_load(const char* path, irkit_index** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto idx = std::make_unique<irkit_index>(
        irkit_index{irkit::Index::deserialize(irkit::detail::read_file(path))});
    *out = idx.release();
  });
}

size_t irkit_index_num_docs(const irkit_index* index) {
  return index == nullptr ? 0 : index->value.num_docs();
}

irkit_status irkit_index_stats(const irkit_index* index, char** out) {
  return guarded([&] {
    require(index, "index");
    require(out, "out");
    put(out, index->value.stats_text());
  });
}

void irkit_index_free(irkit_index* index) { delete index; }

// ---- search ----

irkit_status irkit_search(const irkit_index* index, const irkit_queries* queries,
                          const irkit_config* config, const irkit_lexicons* lexicons, size_t k,
                          char** run_out, char** warnings_out, char** trace_out) {
  return guarded([&] {
    require(index, "index");
    require(queries, "queries");
    require(run_out, "run_out");
    const auto result = irkit::search(index->value, queries->queries, to_config(config),
                                      lexicons_or_empty(lexicons), k, trace_out != nullptr);
    std::string run = irkit::write_run(result.run);
    std::string traces;
    for (const auto& t : result.traces) traces += t.format();
    const std::string warnings = join_lines(result.warnings);
    // Allocate everything before handing out ownership.
    char* r = dup(run);
    char* w = nullptr;
    char* t = nullptr;
    try {
      if (warnings_out != nullptr) w = dup(warnings);
      if (trace_out != nullptr) t = dup(traces);
    } catch (...) {
      std::free(r);
      std::free(w);
      throw;
    }
    *run_out = r;
    if (warnings_out != nullptr) *warnings_out = w;
    if (trace_out != nullptr) *trace_out = t;
  });
}

// ---- scoring kernels ----

double irkit_score_tfidf(double tf, double nd, double df) { return irkit::score_tfidf(tf, nd, df); }

double irkit_score_bm25(double tf, double nd, double df, double dl, double avgdl, double k1,
                        double b) {
  return irkit::score_bm25(tf, nd, df, dl, avgdl, k1, b);
}

irkit_status irkit_score_lm_ds(double tf, double dl, double mu, double p_tc, double* out) {
  return guarded([&] {
    require(out, "out");
    auto v = irkit::score_lm_ds_factor(tf, dl, mu, p_tc);
    if (!v) throw irkit::Error(irkit::ErrorKind::Undefined, "zero probability: tf=0 and p(t|c)=0");
    *out = *v;
  });
}

irkit_status irkit_score_lm_jms(double tf, double dl, double lambda, double p_tc, double* out) {
  return guarded([&] {
    require(out, "out");
    auto v = irkit::score_lm_jms_factor(tf, dl, lambda, p_tc);
    if (!v) throw irkit::Error(irkit::ErrorKind::Undefined, "zero probability: tf=0 and p(t|c)=0");
    *out = *v;
  });
}

double irkit_dirichlet_lambda(double n, double mu) { return irkit::dirichlet_lambda(n, mu); }

// ---- pooling ----

irkit_status irkit_pool_create(size_t depth, irkit_pool** out) {
  return guarded([&] {
    require(out, "out");
    if (depth == 0) throw irkit::Error(irkit::ErrorKind::InvalidArgument, "pool depth must be >= 1");
    *out = new irkit_pool{irkit::Pool(depth)};
  });
}

irkit_status irkit_pool_add(irkit_pool* pool, const char* qid, const char* doc_id,
                            const char* tag, size_t rank) {
  return guarded([&] {
    require(pool, "pool");
    require(qid, "qid");
    require(doc_id, "doc_id");
    require(tag, "tag");
    pool->value.add(qid, doc_id, tag, rank);
  });
}

irkit_status irkit_pool_build(const irkit_index* index, const irkit_queries* queries,
                              const irkit_config* configs, size_t nconfigs,
                              const irkit_lexicons* lexicons, size_t depth, irkit_pool** out,
                              char** warnings_out) {
  return guarded([&] {
    require(index, "index");
    require(queries, "queries");
    require(out, "out");
    if (nconfigs > 0) require(configs, "configs");
    std::vector<irkit::PipelineConfig> cfgs;
    for (size_t i = 0; i < nconfigs; ++i) cfgs.push_back(to_config(&configs[i]));
    std::vector<std::string> warnings;
    auto pool = std::make_unique<irkit_pool>(irkit_pool{irkit::build_pool(
        index->value, queries->queries, cfgs, lexicons_or_empty(lexicons), depth, &warnings)});
    put(warnings_out, join_lines(warnings));
    *out = pool.release();
  });
}

size_t irkit_pool_entries(const irkit_pool* pool) {
  return pool == nullptr ? 0 : pool->value.total_entries();
}

irkit_status irkit_pool_dump(const irkit_pool* pool, char** out) {
  return guarded([&] {
    require(pool, "pool");
    require(out, "out");
    put(out, pool->value.dump());
  });
}

void irkit_pool_free(irkit_pool* pool) { delete pool; }

irkit_status irkit_pool_dedup(irkit_pool* pool, const irkit_corpus* corpus,
                              irkit_dedup_summary* summary, char** unique_out) {
  return guarded([&] {
    require(pool, "pool");
    require(corpus, "corpus");
    auto result = irkit::dedup(pool->value, corpus->docs);
    std::string unique = join_lines(result.unique_docs);
    if (summary != nullptr) {
      summary->input_entries = result.input_entries;
      summary->pooled_ids = result.unique_docs.size() + result.replaced.size();
      summary->unique_docs = result.unique_docs.size();
    }
    put(unique_out, unique);
    pool->value = std::move(result.pool);
  });
}

// ---- judgments ----

irkit_status irkit_judgments_load(const char* path, irkit_judgments** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new irkit_judgments{irkit::parse_qrels(irkit::detail::read_file(path), path)};
  });
}

irkit_status irkit_judgments_parse(const char* text, const char* judge_id,
                                   irkit_judgments** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new irkit_judgments{irkit::parse_qrels(text, judge_id == nullptr ? "" : judge_id)};
  });
}

size_t irkit_judgments_size(const irkit_judgments* judgments) {
  return judgments == nullptr ? 0 : judgments->value.size();
}

size_t irkit_judgments_relevant(const irkit_judgments* judgments) {
  return judgments == nullptr ? 0 : judgments->value.total_relevant();
}

irkit_status irkit_judgments_write(const irkit_judgments* judgments, char** out) {
  return guarded([&] {
    require(judgments, "judgments");
    require(out, "out");
    put(out, irkit::write_qrels(judgments->value));
  });
}

void irkit_judgments_free(irkit_judgments* judgments) { delete judgments; }

irkit_status irkit_contingency_compute(const irkit_judgments* first,
                                       const irkit_judgments* second, irkit_contingency* out) {
  return guarded([&] {
    require(first, "first");
    require(second, "second");
    require(out, "out");
    const auto t = irkit::contingency(first->value, second->value);
    *out = irkit_contingency{t.a, t.b, t.c, t.d};
  });
}

irkit_status irkit_kappa_compute(const irkit_contingency* table, irkit_kappa_result* out) {
  return guarded([&] {
    require(table, "table");
    require(out, "out");
    const auto k = irkit::kappa(irkit::ContingencyTable{table->a, table->b, table->c, table->d});
    out->observed = k.observed;
    out->chance = k.chance;
    out->kappa = k.kappa.value_or(0.0);
    if (!k.kappa) {
      throw irkit::Error(irkit::ErrorKind::Undefined,
                         "kappa undefined: chance agreement is 1 (both judges used one label)");
    }
  });
}

irkit_status irkit_conflict_worksheet(const irkit_judgments* first,
                                      const irkit_judgments* second, char** out) {
  return guarded([&] {
    require(first, "first");
    require(second, "second");
    require(out, "out");
    put(out, irkit::conflict_worksheet(first->value, second->value));
  });
}

irkit_status irkit_merge(const irkit_judgments* first, const irkit_judgments* second,
                         const irkit_judgments* third, irkit_merge_summary* summary,
                         char** qrels_out) {
  return guarded([&] {
    require(first, "first");
    require(second, "second");
    require(third, "third");
    const auto merged = irkit::resolve_conflicts(first->value, second->value, third->value);
    if (summary != nullptr) {
      summary->total = merged.judgments.size();
      summary->conflicts = merged.conflicts;
      summary->agreed_relevant = merged.agreed_relevant;
      summary->third_judge_relevant = merged.third_judge_relevant;
      summary->merged_relevant = merged.judgments.total_relevant();
    }
    put(qrels_out, irkit::write_qrels(merged.judgments));
  });
}

// ---- evaluation ----

irkit_status irkit_precision_at_k(const char* const* ranked, size_t n_ranked,
                                  const char* const* relevant, size_t n_relevant, size_t k,
                                  double* out) {
  return guarded([&] {
    require(out, "out");
    *out = irkit::precision_at_k(to_list(ranked, n_ranked), to_set(relevant, n_relevant), k);
  });
}

irkit_status irkit_recall_at_k(const char* const* ranked, size_t n_ranked,
                               const char* const* relevant, size_t n_relevant, size_t k,
                               double* out) {
  return guarded([&] {
    require(out, "out");
    auto v = irkit::recall_at_k(to_list(ranked, n_ranked), to_set(relevant, n_relevant), k);
    if (!v) throw irkit::Error(irkit::ErrorKind::Undefined, "recall undefined: no relevant documents");
    *out = *v;
  });
}

irkit_status irkit_average_precision_at_k(const char* const* ranked, size_t n_ranked,
                                          const char* const* relevant, size_t n_relevant,
                                          size_t k, double* out) {
  return guarded([&] {
    require(out, "out");
    auto v = irkit::average_precision_at_k(to_list(ranked, n_ranked),
                                           to_set(relevant, n_relevant), k);
    if (!v) throw irkit::Error(irkit::ErrorKind::Undefined, "AP undefined: no relevant documents");
    *out = *v;
  });
}

irkit_status irkit_eval(const char* const* run_paths, size_t nruns, const irkit_judgments* qrels,
                        const irkit_cutoffs* cutoffs, char** table_out, char** tsv_out,
                        char** per_query_out, size_t* row_count_out) {
  return guarded([&] {
    require(qrels, "qrels");
    if (nruns > 0) require(run_paths, "run_paths");
    std::vector<irkit::RunEntry> all;
    for (size_t i = 0; i < nruns; ++i) {
      require(run_paths[i], "run path");
      auto entries = irkit::parse_run(irkit::detail::read_file(run_paths[i]));
      for (auto& e : entries) all.push_back(std::move(e));
    }
    irkit::Cutoffs cut;
    if (cutoffs != nullptr) {
      auto copy = [](const size_t* p, size_t n) {
        std::vector<std::size_t> v;
        if (n > 0) require(p, "cutoff list");
        for (size_t i = 0; i < n; ++i) v.push_back(p[i]);
        return v;
      };
      cut.precision = copy(cutoffs->precision, cutoffs->n_precision);
      cut.recall = copy(cutoffs->recall, cutoffs->n_recall);
      cut.map = copy(cutoffs->map, cutoffs->n_map);
    }
    const auto report = irkit::evaluate_runs(all, qrels->value, cut);
    if (row_count_out != nullptr) *row_count_out = report.rows.size();
    put(table_out, report.format_table());
    put(tsv_out, report.format_tsv());
    put(per_query_out, report.format_per_query());
  });
}

}  // extern "C"
