#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "irkit/corpus.hpp"
#include "irkit/index.hpp"
#include "irkit/textproc.hpp"

namespace irkit {

struct Provenance {
  std::string tag;
  std::size_t rank = 0;

  bool operator==(const Provenance&) const = default;
};

// Judgment pool: per query, the union of the top-k documents of each
// contributing run, with the runs and ranks that put each document there.
class Pool {
 public:
  explicit Pool(std::size_t depth = 20) : depth_(depth) {}

  // Throws Validation if rank is 0 or exceeds the depth.
  void add(const std::string& qid, const std::string& doc_id, const std::string& tag,
           std::size_t rank);
  void add_contributor(const std::string& tag);
  void touch_query(const std::string& qid);

  std::size_t depth() const noexcept { return depth_; }
  const std::vector<std::string>& contributors() const noexcept { return contributors_; }
  const std::map<std::string, std::map<std::string, std::vector<Provenance>>>& queries()
      const noexcept {
    return pool_;
  }

  // Number of (query, run, document) entries before any union.
  std::size_t total_entries() const;
  std::size_t query_size(const std::string& qid) const;

  // "qid<TAB>doc_id<TAB>tag1,tag2<TAB>best_rank" per pooled document.
  std::string dump() const;

 private:
  std::size_t depth_;
  std::vector<std::string> contributors_;
  std::map<std::string, std::map<std::string, std::vector<Provenance>>> pool_;
};

// Ranks every query under every config and pools the top `depth` documents.
// Queries that retrieve nothing under every config are reported in warnings.
Pool build_pool(const Index& index, const std::vector<Query>& queries,
                const std::vector<PipelineConfig>& configs, const Lexicons& lexicons,
                std::size_t depth, std::vector<std::string>* warnings = nullptr);

// SHA-256 (hex) of NFC(title) U+001F NFC(body).
std::string content_fingerprint(const Document& doc);

struct DedupResult {
  std::vector<std::string> unique_docs;          // ascending doc_id
  std::map<std::string, std::string> replaced;   // duplicate id -> survivor id
  std::size_t input_entries = 0;
  Pool pool;                                     // entries rewritten to survivors
};

// Unique by doc_id across queries, then by content fingerprint; the
// lexicographically smallest id of each fingerprint class survives. Throws
// Validation if a pooled id has no document.
DedupResult dedup(const Pool& pool, const std::vector<Document>& docs);

struct ContingencyTable {
  std::size_t a = 0;  // both relevant
  std::size_t b = 0;  // second judge relevant, first not
  std::size_t c = 0;  // first judge relevant, second not
  std::size_t d = 0;  // both not relevant

  std::size_t n() const noexcept { return a + b + c + d; }
  bool operator==(const ContingencyTable&) const = default;
};

// Throws Mismatch listing the symmetric difference when the key sets differ.
ContingencyTable contingency(const JudgmentSet& first, const JudgmentSet& second);

struct KappaResult {
  double observed = 0.0;        // P(A)
  double chance = 0.0;          // P(E) from the judges' marginals
  std::optional<double> kappa;  // empty when P(E) == 1
};

// Cohen's kappa. Throws InvalidArgument for an empty table.
KappaResult kappa(const ContingencyTable& table);

enum class JudgmentSource { Agreed, ThirdJudge };

struct MergedJudgments {
  JudgmentSet judgments{"merged"};
  std::map<JudgmentKey, JudgmentSource> source;
  std::size_t conflicts = 0;
  std::size_t agreed_relevant = 0;
  std::size_t third_judge_relevant = 0;
};

std::vector<JudgmentKey> conflicts(const JudgmentSet& first, const JudgmentSet& second);

// "qid<TAB>doc_id<TAB>j1<TAB>j2<TAB>" per conflicting pair; the empty last
// column is for the third assessor.
std::string conflict_worksheet(const JudgmentSet& first, const JudgmentSet& second);

// Agreed pairs keep their label, conflicting pairs take the third judge's.
// Throws Coverage unless the third judge's keys equal the conflict set.
MergedJudgments resolve_conflicts(const JudgmentSet& first, const JudgmentSet& second,
                                  const JudgmentSet& third);

}  // namespace irkit
