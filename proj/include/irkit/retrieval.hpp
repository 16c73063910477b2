#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "irkit/corpus.hpp"
#include "irkit/index.hpp"
#include "irkit/textproc.hpp"

namespace irkit {

// Per-term scoring kernels. Logarithms are natural.

// sqrt(tf) * (1 + ln(nd / (df + 1)))
double score_tfidf(double tf, double nd, double df);

// ln((nd - df + 0.5) / (df + 0.5)) * tf (k1 + 1) / (tf + k1 (1 - b + b dl / avgdl)).
// The idf factor is not floored, so it is negative when df > nd / 2.
double score_bm25(double tf, double nd, double df, double dl, double avgdl, double k1, double b);

// Dirichlet-smoothed term probability (tf + mu p_tc) / (dl + mu).
// Empty optional when tf == 0 and p_tc == 0: the term would zero the product.
std::optional<double> score_lm_ds_factor(double tf, double dl, double mu, double p_tc);

// Jelinek-Mercer term probability (1 - lambda) tf / dl + lambda p_tc, with
// tf / dl taken as 0 for an empty document.
std::optional<double> score_lm_jms_factor(double tf, double dl, double lambda, double p_tc);

// 1 - n / (n + mu): the document-dependent interpolation weight implied by
// Dirichlet smoothing. Reported for diagnostics only.
double dirichlet_lambda(double n, double mu);

struct ScoredDoc {
  std::string doc_id;
  double score = 0.0;

  bool operator==(const ScoredDoc&) const = default;
};

struct RankedList {
  std::string qid;
  std::vector<ScoredDoc> docs;  // descending score, ascending doc_id on ties
  std::string model_tag;
  std::string pipeline_tag;

  std::string tag() const { return model_tag + "-" + pipeline_tag; }
};

struct TermTrace {
  std::string term;
  std::size_t occurrences = 0;
  double collection_prob = 0.0;
  std::size_t title_wins = 0;    // candidates whose title score beat content
  std::size_t content_wins = 0;  // candidates whose content score beat title
  std::size_t ties = 0;
  bool dropped = false;          // LM only: unseen in collection
};

struct QueryTrace {
  std::string qid;
  std::size_t candidates = 0;
  std::vector<TermTrace> terms;

  std::string format() const;
};

// Scores the OR-ed candidate set of query_terms. For each term the document
// score is the max over title and content; VSM and BM25 sum those maxima,
// the language models sum their logarithms. VSM field scores are
// w(t,d,f) / (|q| |d_f|) with unit query weights.
RankedList rank(const Index& index, const std::string& qid,
                const std::vector<std::string>& query_terms, const PipelineConfig& config,
                std::size_t k, QueryTrace* trace = nullptr);

std::vector<RunEntry> to_run_entries(const RankedList& list);

struct SearchResult {
  std::vector<RunEntry> run;
  std::vector<std::string> warnings;  // e.g. all-stop-word queries
  std::vector<QueryTrace> traces;
};

// Preprocesses and ranks every query. Queries that preprocess to nothing get
// a warning and no run entries.
SearchResult search(const Index& index, const std::vector<Query>& queries,
                    const PipelineConfig& config, const Lexicons& lexicons, std::size_t k,
                    bool collect_traces = false);

}  // namespace irkit
