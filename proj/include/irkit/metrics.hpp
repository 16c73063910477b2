#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "irkit/corpus.hpp"

namespace irkit {

using RelevantSet = std::unordered_set<std::string>;

// |relevant in first min(k, n)| / k.
double precision_at_k(const std::vector<std::string>& ranked, const RelevantSet& relevant,
                      std::size_t k);

// Empty when the query has no relevant documents.
std::optional<double> recall_at_k(const std::vector<std::string>& ranked,
                                  const RelevantSet& relevant, std::size_t k);

// Sum of precision at each relevant rank r <= k, divided by |relevant|.
std::optional<double> average_precision_at_k(const std::vector<std::string>& ranked,
                                             const RelevantSet& relevant, std::size_t k);

struct Cutoffs {
  std::vector<std::size_t> precision{10, 20};
  std::vector<std::size_t> recall{50};
  std::vector<std::size_t> map{50};

  std::vector<std::string> column_names() const;
};

struct QueryEval {
  std::string qid;
  std::map<std::size_t, double> p_at;
  std::map<std::size_t, double> r_at;
  std::map<std::size_t, double> ap_at;
  std::size_t num_relevant = 0;
};

QueryEval evaluate_query(const std::string& qid, const std::vector<std::string>& ranked,
                         const RelevantSet& relevant, const Cutoffs& cutoffs);

struct EvalRow {
  std::string technique;
  std::string model;
  std::string tag;
  std::vector<double> values;  // in Cutoffs::column_names() order
  std::vector<QueryEval> per_query;
};

struct EvalReport {
  Cutoffs cutoffs;
  std::vector<EvalRow> rows;
  std::vector<std::string> skipped;  // qrels queries with no relevant document
  std::size_t evaluated_queries = 0;

  std::string format_table() const;
  std::string format_tsv() const;  // four-decimal values
  std::string format_per_query() const;
};

// Groups run entries by tag. Each tag is one report row; "<model>-<technique>"
// tags are labelled with display names and ordered like the ablation table
// (techniques Baseline, SWR, Lemmatization, Expansion; models BM25, VSM,
// LM-DS, LM-JMS). Every qrels query with at least one relevant document is
// evaluated for every row; a query absent from a run scores 0. Throws
// Validation if a run mentions a qid absent from the qrels.
EvalReport evaluate_runs(const std::vector<RunEntry>& runs, const JudgmentSet& qrels,
                         const Cutoffs& cutoffs = {});

}  // namespace irkit
