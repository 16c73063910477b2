/*
 * irkit C API.
 *
 * Every object is an opaque handle created by a *_load / *_build / *_create
 * call and released with the matching *_free. Functions return an
 * irkit_status; on failure irkit_last_error() describes the problem for the
 * calling thread. Strings returned through char** out-parameters are owned
 * by the caller and released with irkit_string_free().
 *
 * Handles are immutable after construction (except irkit_pool_add) and may
 * be shared between threads for concurrent reads.
 */
#ifndef IRKIT_H
#define IRKIT_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(IRKIT_BUILDING)
#define IRKIT_API __declspec(dllexport)
#else
#define IRKIT_API __declspec(dllimport)
#endif
#else
#define IRKIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum irkit_status {
  IRKIT_OK = 0,
  IRKIT_ERR_INVALID_ARGUMENT = 1,
  IRKIT_ERR_IO = 2,
  IRKIT_ERR_PARSE = 3,
  IRKIT_ERR_RECORD = 4,
  IRKIT_ERR_VALIDATION = 5,
  IRKIT_ERR_EMPTY_QUERY = 6,
  IRKIT_ERR_EMPTY_CORPUS = 7,
  IRKIT_ERR_MISMATCH = 8,
  IRKIT_ERR_COVERAGE = 9,
  IRKIT_ERR_UNDEFINED = 10,
  IRKIT_ERR_INTERNAL = 11
} irkit_status;

typedef enum irkit_model {
  IRKIT_MODEL_VSM = 0,
  IRKIT_MODEL_BM25 = 1,
  IRKIT_MODEL_LM_DS = 2,
  IRKIT_MODEL_LM_JMS = 3
} irkit_model;

typedef struct irkit_config {
  int use_swr;
  int use_lemma;
  int use_expansion;
  irkit_model model;
  double k1;          /* 1.2 */
  double b;           /* 0.75 */
  double mu;          /* 2000 */
  double lambda;      /* 0.7 */
  size_t pool_depth;  /* 20 */
} irkit_config;

typedef struct irkit_lexicons irkit_lexicons;
typedef struct irkit_corpus irkit_corpus;
typedef struct irkit_queries irkit_queries;
typedef struct irkit_index irkit_index;
typedef struct irkit_pool irkit_pool;
typedef struct irkit_judgments irkit_judgments;

/* ---- general ---- */

IRKIT_API const char* irkit_version(void);
IRKIT_API const char* irkit_status_string(irkit_status status);
/* Message of the last failed call on this thread; "" if none. */
IRKIT_API const char* irkit_last_error(void);
IRKIT_API void irkit_string_free(char* s);

/* ---- configuration ---- */

IRKIT_API void irkit_config_init(irkit_config* config);
/* technique: "base", "swr", "lemma" or "qe". Sets the three flags. */
IRKIT_API irkit_status irkit_config_set_technique(irkit_config* config, const char* technique);
/* model: "vsm", "bm25", "lmds" or "lmjms". */
IRKIT_API irkit_status irkit_config_set_model(irkit_config* config, const char* model);
IRKIT_API irkit_status irkit_config_validate(const irkit_config* config);
/* "<model>-<technique>", e.g. "bm25-base". */
IRKIT_API irkit_status irkit_config_tag(const irkit_config* config, char** out);

/* ---- lexicons ---- */

/* Any path may be NULL, giving an empty resource. */
IRKIT_API irkit_status irkit_lexicons_load(const char* stoplist_path, const char* lemma_path,
                                           const char* variant_path, irkit_lexicons** out);
IRKIT_API void irkit_lexicons_free(irkit_lexicons* lexicons);

/* Preprocesses one query string and returns the terms, one per line. */
IRKIT_API irkit_status irkit_preprocess_query(const char* text, const irkit_config* config,
                                              const irkit_lexicons* lexicons, char** out);

/* ---- documents and queries ---- */

IRKIT_API irkit_status irkit_corpus_load(const char* docs_path, irkit_corpus** out);
IRKIT_API size_t irkit_corpus_size(const irkit_corpus* corpus);
IRKIT_API void irkit_corpus_free(irkit_corpus* corpus);

IRKIT_API irkit_status irkit_queries_load(const char* path, int strict, irkit_queries** out);
IRKIT_API size_t irkit_queries_size(const irkit_queries* queries);
IRKIT_API void irkit_queries_free(irkit_queries* queries);

/* Collection statistics; queries and lexicons may be NULL. json != 0 selects
 * the JSON rendering, otherwise an aligned table. */
IRKIT_API irkit_status irkit_stats(const irkit_corpus* corpus, const irkit_queries* queries,
                                   const irkit_lexicons* lexicons, int json, char** out);

/* ---- index ---- */

IRKIT_API irkit_status irkit_index_build(const irkit_corpus* corpus, const irkit_config* config,
                                         const irkit_lexicons* lexicons, irkit_index** out);
/* Written to a temporary file and renamed into place. */
IRKIT_API irkit_status irkit_index_save(const irkit_index* index, const char* path);
IRKIT_API irkit_status irkit_index_load(const char* path, irkit_index** out);
IRKIT_API size_t irkit_index_num_docs(const irkit_index* index);
IRKIT_API irkit_status irkit_index_stats(const irkit_index* index, char** out);
IRKIT_API void irkit_index_free(irkit_index* index);

/* ---- search ---- */

/* Runs every query and renders a six-column run file into run_out.
 * warnings_out (may be NULL) receives one line per skipped query; trace_out
 * (may be NULL) receives per-query diagnostics. */
IRKIT_API irkit_status irkit_search(const irkit_index* index, const irkit_queries* queries,
                                    const irkit_config* config, const irkit_lexicons* lexicons,
                                    size_t k, char** run_out, char** warnings_out,
                                    char** trace_out);

/* ---- scoring kernels ---- */

IRKIT_API double irkit_score_tfidf(double tf, double nd, double df);
IRKIT_API double irkit_score_bm25(double tf, double nd, double df, double dl, double avgdl,
                                  double k1, double b);
/* IRKIT_ERR_UNDEFINED when tf == 0 and p_tc == 0. */
IRKIT_API irkit_status irkit_score_lm_ds(double tf, double dl, double mu, double p_tc,
                                         double* out);
IRKIT_API irkit_status irkit_score_lm_jms(double tf, double dl, double lambda, double p_tc,
                                          double* out);
IRKIT_API double irkit_dirichlet_lambda(double n, double mu);

/* ---- pooling ---- */

IRKIT_API irkit_status irkit_pool_create(size_t depth, irkit_pool** out);
IRKIT_API irkit_status irkit_pool_add(irkit_pool* pool, const char* qid, const char* doc_id,
                                      const char* tag, size_t rank);
/* Pools the top `depth` documents of each config; all configs must match the
 * index preprocessing. */
IRKIT_API irkit_status irkit_pool_build(const irkit_index* index, const irkit_queries* queries,
                                        const irkit_config* configs, size_t nconfigs,
                                        const irkit_lexicons* lexicons, size_t depth,
                                        irkit_pool** out, char** warnings_out);
IRKIT_API size_t irkit_pool_entries(const irkit_pool* pool);
IRKIT_API irkit_status irkit_pool_dump(const irkit_pool* pool, char** out);
IRKIT_API void irkit_pool_free(irkit_pool* pool);

typedef struct irkit_dedup_summary {
  size_t input_entries;  /* (query, run, document) entries */
  size_t pooled_ids;     /* distinct doc ids */
  size_t unique_docs;    /* after content de-duplication */
} irkit_dedup_summary;

/* Replaces *pool with the de-duplicated pool. unique_out (may be NULL)
 * receives the surviving doc ids, one per line. */
IRKIT_API irkit_status irkit_pool_dedup(irkit_pool* pool, const irkit_corpus* corpus,
                                        irkit_dedup_summary* summary, char** unique_out);

/* ---- judgments and agreement ---- */

IRKIT_API irkit_status irkit_judgments_load(const char* path, irkit_judgments** out);
IRKIT_API irkit_status irkit_judgments_parse(const char* text, const char* judge_id,
                                             irkit_judgments** out);
IRKIT_API size_t irkit_judgments_size(const irkit_judgments* judgments);
IRKIT_API size_t irkit_judgments_relevant(const irkit_judgments* judgments);
IRKIT_API irkit_status irkit_judgments_write(const irkit_judgments* judgments, char** out);
IRKIT_API void irkit_judgments_free(irkit_judgments* judgments);

typedef struct irkit_contingency {
  size_t a; /* both relevant */
  size_t b; /* second relevant, first not */
  size_t c; /* first relevant, second not */
  size_t d; /* both not relevant */
} irkit_contingency;

typedef struct irkit_kappa_result {
  double observed; /* P(A) */
  double chance;   /* P(E) */
  double kappa;    /* valid only when the call returns IRKIT_OK */
} irkit_kappa_result;

IRKIT_API irkit_status irkit_contingency_compute(const irkit_judgments* first,
                                                 const irkit_judgments* second,
                                                 irkit_contingency* out);
/* IRKIT_ERR_UNDEFINED when P(E) == 1; observed and chance are still set. */
IRKIT_API irkit_status irkit_kappa_compute(const irkit_contingency* table,
                                           irkit_kappa_result* out);
IRKIT_API irkit_status irkit_conflict_worksheet(const irkit_judgments* first,
                                                const irkit_judgments* second, char** out);

typedef struct irkit_merge_summary {
  size_t total;
  size_t conflicts;
  size_t agreed_relevant;
  size_t third_judge_relevant;
  size_t merged_relevant;
} irkit_merge_summary;

IRKIT_API irkit_status irkit_merge(const irkit_judgments* first, const irkit_judgments* second,
                                   const irkit_judgments* third, irkit_merge_summary* summary,
                                   char** qrels_out);

/* ---- evaluation ---- */

typedef struct irkit_cutoffs {
  const size_t* precision;
  size_t n_precision;
  const size_t* recall;
  size_t n_recall;
  const size_t* map;
  size_t n_map;
} irkit_cutoffs;

/* Metric kernels over a ranked list of doc ids and a relevant set.
 * IRKIT_ERR_UNDEFINED for recall / AP when n_relevant == 0. */
IRKIT_API irkit_status irkit_precision_at_k(const char* const* ranked, size_t n_ranked,
                                            const char* const* relevant, size_t n_relevant,
                                            size_t k, double* out);
IRKIT_API irkit_status irkit_recall_at_k(const char* const* ranked, size_t n_ranked,
                                         const char* const* relevant, size_t n_relevant,
                                         size_t k, double* out);
IRKIT_API irkit_status irkit_average_precision_at_k(const char* const* ranked, size_t n_ranked,
                                                    const char* const* relevant,
                                                    size_t n_relevant, size_t k, double* out);

/* Evaluates the concatenation of the given run files against qrels.
 * cutoffs may be NULL for P@10, P@20, R@50, MAP@50. Any of the outputs may be
 * NULL. row_count_out receives the number of report rows. */
IRKIT_API irkit_status irkit_eval(const char* const* run_paths, size_t nruns,
                                  const irkit_judgments* qrels, const irkit_cutoffs* cutoffs,
                                  char** table_out, char** tsv_out, char** per_query_out,
                                  size_t* row_count_out);

#ifdef __cplusplus
}
#endif

#endif /* IRKIT_H */
