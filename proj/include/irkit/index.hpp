#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "irkit/corpus.hpp"
#include "irkit/textproc.hpp"

namespace irkit {

// Dense document number. Documents are numbered in ascending doc_id order, so
// postings sorted by DocNo are also sorted by doc_id.
using DocNo = std::uint32_t;

struct Posting {
  DocNo doc = 0;
  std::uint32_t tf = 0;

  bool operator==(const Posting&) const = default;
};

enum class Field : std::uint8_t { Title = 0, Content = 1 };
inline constexpr Field kFields[] = {Field::Title, Field::Content};
const char* field_name(Field f);

class FieldIndex {
 public:
  const std::vector<Posting>* postings(const std::string& term) const;
  std::uint32_t df(const std::string& term) const;
  std::uint32_t doc_len(DocNo doc) const { return doc_len_[doc]; }
  std::uint64_t total_tokens() const noexcept { return total_tokens_; }
  double avg_len() const noexcept { return avg_len_; }
  // Euclidean norm of the document's TF-IDF weight vector in this field.
  double vsm_norm(DocNo doc) const { return vsm_norm_[doc]; }

  const std::map<std::string, std::vector<Posting>>& terms() const noexcept { return postings_; }
  const std::vector<std::uint32_t>& doc_lengths() const noexcept { return doc_len_; }

 private:
  friend class IndexBuilder;
  friend class Index;

  std::map<std::string, std::vector<Posting>> postings_;
  std::vector<std::uint32_t> doc_len_;
  std::vector<double> vsm_norm_;
  std::uint64_t total_tokens_ = 0;
  double avg_len_ = 0.0;
};

// Fielded in-memory inverted index. Immutable once built.
class Index {
 public:
  static Index build(const std::vector<Document>& docs, const PipelineConfig& config,
                     const Lexicons& lexicons);

  std::size_t num_docs() const noexcept { return doc_ids_.size(); }
  const std::string& doc_id(DocNo d) const { return doc_ids_[d]; }
  const std::vector<std::string>& doc_ids() const noexcept { return doc_ids_; }

  const FieldIndex& field(Field f) const { return fields_[static_cast<int>(f)]; }

  std::uint64_t collection_tf(const std::string& term) const;
  std::uint64_t collection_total() const noexcept { return collection_total_; }
  // P(t|c) over title and content jointly; 0 for unseen terms.
  double collection_prob(const std::string& term) const;

  // Union of posting doc numbers over all terms and both fields, ascending.
  std::vector<DocNo> candidate_set(const std::vector<std::string>& terms) const;
  std::vector<std::string> candidate_ids(const std::vector<std::string>& terms) const;

  bool built_with_swr() const noexcept { return use_swr_; }
  bool built_with_lemma() const noexcept { return use_lemma_; }
  const std::string& lexicon_digest() const noexcept { return lexicon_digest_; }

  // Throws Validation if config/lexicons do not match the preprocessing this
  // index was built with.
  void check_compatible(const PipelineConfig& config, const Lexicons& lexicons) const;

  // Snapshot layout (all integers little-endian):
  //   magic "IRKX" | u32 version=1 | u8 use_swr | u8 use_lemma
  //   str lexicon_digest | u32 num_docs | num_docs x str doc_id
  //   for title, content:
  //     num_docs x u32 doc_len | u32 num_terms
  //     num_terms x (str term | u32 n | n x (u32 doc | u32 tf))
  // where str is u32 byte length followed by UTF-8 bytes.
  std::string serialize() const;
  static Index deserialize(std::string_view bytes);

  std::string stats_text() const;

 private:
  friend class IndexBuilder;
  void finalize();

  std::vector<std::string> doc_ids_;
  FieldIndex fields_[2];
  std::map<std::string, std::uint64_t> collection_tf_;
  std::uint64_t collection_total_ = 0;
  bool use_swr_ = false;
  bool use_lemma_ = false;
  std::string lexicon_digest_;
};

}  // namespace irkit
