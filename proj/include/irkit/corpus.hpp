#pragma once

// Data model and file I/O for documents, queries, relevance judgments, run
// files and collection statistics.
//
// Document XML:
//   <documents>
//     <document>
//       <document_ID>URD-0070</document_ID>
//       <source>example.pk</source>          (optional)
//       <title>...</title>
//       <body>...</body>
//     </document>
//   </documents>
//
// Query XML:
//   <queries>
//     <query>
//       <QID>Q03</QID>
//       <totalWords>4</totalWords>
//       <noOfWordsWithSWR>3</noOfWordsWithSWR>
//       <title>...</title>
//       <description>...</description>
//     </query>
//   </queries>
//
// All text is decoded as UTF-8 and NFC-normalized at parse time.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace irkit {

struct Document {
  std::string doc_id;
  std::string title;
  std::string body;
  std::optional<std::string> source;

  bool operator==(const Document&) const = default;
};

struct Query {
  std::string qid;
  std::string title;
  std::string description;
  std::size_t total_words = 0;
  std::size_t words_after_swr = 0;

  bool operator==(const Query&) const = default;
};

struct QueryParseOptions {
  // Enforce 2 <= totalWords <= 7.
  bool strict = false;
};

inline constexpr std::size_t kMinQueryWords = 2;
inline constexpr std::size_t kMaxQueryWords = 7;

std::vector<Document> parse_documents(std::string_view bytes);
std::vector<Query> parse_queries(std::string_view bytes, QueryParseOptions options = {});

std::string write_documents(const std::vector<Document>& docs);
std::string write_queries(const std::vector<Query>& queries);

using JudgmentKey = std::pair<std::string, std::string>;  // (qid, doc_id)

// Binary relevance labels keyed by (qid, doc_id). Iteration order is the
// canonical (qid, doc_id) lexicographic order.
class JudgmentSet {
 public:
  JudgmentSet() = default;
  explicit JudgmentSet(std::string judge_id) : judge_id_(std::move(judge_id)) {}

  // Throws Validation on non-binary relevance or a duplicate key.
  void add(const std::string& qid, const std::string& doc_id, int relevance);

  std::optional<int> get(const std::string& qid, const std::string& doc_id) const;
  bool contains(const JudgmentKey& key) const { return entries_.count(key) != 0; }

  const std::map<JudgmentKey, int>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  // Relevant doc ids for one query.
  std::unordered_set<std::string> relevant(const std::string& qid) const;
  std::size_t num_relevant(const std::string& qid) const;
  std::size_t total_relevant() const;
  std::vector<std::string> qids() const;

  const std::string& judge_id() const noexcept { return judge_id_; }
  void set_judge_id(std::string id) { judge_id_ = std::move(id); }

  bool operator==(const JudgmentSet& other) const { return entries_ == other.entries_; }

 private:
  std::string judge_id_;
  std::map<JudgmentKey, int> entries_;
};

// Lines are "qid doc_id rel"; the four-column TREC form "qid iter doc_id rel"
// is also accepted. Blank lines and lines starting with '#' are skipped.
JudgmentSet parse_qrels(std::string_view text, std::string judge_id = {});
std::string write_qrels(const JudgmentSet& judgments);

struct RunEntry {
  std::string qid;
  std::string doc_id;
  std::size_t rank = 0;
  double score = 0.0;
  std::string tag;

  bool operator==(const RunEntry&) const = default;
};

// Checks that every (qid, tag) group has ranks 1..n in order and
// non-increasing scores. Throws Validation naming the offending entry.
void validate_run(const std::vector<RunEntry>& entries);

// "qid Q0 doc_id rank score tag", score printed with six decimals.
std::string write_run(const std::vector<RunEntry>& entries);
std::vector<RunEntry> parse_run(std::string_view text);

struct StatsReport {
  std::size_t total_documents = 0;
  std::size_t total_tokens = 0;
  std::size_t tokens_after_swr = 0;
  std::size_t unique_tokens = 0;
  std::size_t total_queries = 0;
  std::size_t query_token_total = 0;
  std::size_t query_unique_tokens = 0;
  double avg_docs_per_query = 0.0;
  std::size_t min_doc_bytes = 0;
  std::size_t max_doc_bytes = 0;
  double avg_doc_bytes = 0.0;
  std::size_t min_query_length = 0;
  std::size_t max_query_length = 0;
  double avg_query_length = 0.0;

  bool operator==(const StatsReport&) const = default;
};

// Token counts use textproc::tokenize. Document size is the UTF-8 byte length
// of title plus body. Query length is the token count of the query title.
StatsReport collection_stats(const std::vector<Document>& docs,
                             const std::vector<Query>& queries,
                             const std::unordered_set<std::string>& stoplist);

std::string format_stats_table(const StatsReport& stats);
std::string format_stats_json(const StatsReport& stats);

}  // namespace irkit
