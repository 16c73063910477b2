#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace irkit {

struct Query;

// NFC normalization of UTF-8 text. Invalid sequences become U+FFFD.
std::string nfc(std::string_view utf8);

// True for ASCII punctuation and the Urdu marks U+06D4 U+060C U+061F U+061B
// U+066A plus the curly quotes U+2018 U+2019 U+201C U+201D.
bool is_token_punctuation(char32_t cp);

// Whitespace split on Unicode white space, then every character from the
// punctuation set is removed and empty tokens are dropped. Output tokens are
// NFC. U+200C (ZWNJ) is an ordinary word character.
std::vector<std::string> tokenize(std::string_view text);

using Stoplist = std::unordered_set<std::string>;

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const Stoplist& stoplist);

class Lexicons {
 public:
  Lexicons() = default;

  // Stop-list: one word per line, '#' starts a comment line.
  static Stoplist parse_stoplist(std::string_view text);

  // Lemma map lines are "word<TAB>lemma". Lemma values get identity entries;
  // a lemma that is itself mapped to a different lemma is rejected.
  void load_stoplist(std::string_view text);
  void load_lemmas(std::string_view text);
  // Variant lines are "lemma<TAB>v1,v2,...". Must be loaded after lemmas.
  void load_variants(std::string_view text);

  void add_stopword(const std::string& word);
  void add_lemma(const std::string& word, const std::string& lemma);
  void add_variants(const std::string& lemma, const std::vector<std::string>& variants);

  const Stoplist& stoplist() const noexcept { return stoplist_; }
  const std::unordered_map<std::string, std::string>& lemma_map() const noexcept {
    return lemmas_;
  }
  const std::unordered_map<std::string, std::vector<std::string>>& variant_map() const noexcept {
    return variants_;
  }

  // SHA-256 over the sorted stop-list (when with_stoplist) and the sorted
  // lemma map (when with_lemmas). Identifies the lexicon state an index was
  // built with.
  std::string digest(bool with_stoplist, bool with_lemmas) const;

 private:
  Stoplist stoplist_;
  std::unordered_map<std::string, std::string> lemmas_;
  std::unordered_map<std::string, std::vector<std::string>> variants_;
};

std::string lemmatize(const std::string& token, const Lexicons& lexicons);

// [lemma, variants...] with the lemma first and duplicates removed.
std::vector<std::string> expand(const std::string& token, const Lexicons& lexicons);

enum class Model { Vsm, Bm25, LmDirichlet, LmJelinekMercer };

// The four preprocessing setups compared in the ablation report.
enum class Technique { Baseline, StopWords, LemmaStopWords, ExpansionStopWords };

struct PipelineConfig {
  bool use_swr = false;
  bool use_lemma = false;
  bool use_expansion = false;
  Model model = Model::Bm25;
  double k1 = 1.2;
  double b = 0.75;
  double mu = 2000.0;
  double lambda = 0.7;
  std::size_t pool_depth = 20;

  // Throws Validation when a parameter is out of range or expansion is
  // requested without stop-word removal.
  void validate() const;

  static PipelineConfig for_technique(Technique technique, Model model = Model::Bm25);
  // Empty for flag combinations outside the four named techniques.
  std::optional<Technique> technique() const;
};

const char* model_tag(Model m);          // "vsm", "bm25", "lmds", "lmjms"
const char* model_display(Model m);      // "VSM", "BM25", "LM-DS", "LM-JMS"
const char* technique_tag(Technique t);  // "base", "swr", "lemma", "qe"
const char* technique_display(Technique t);
Model parse_model(std::string_view s);
Technique parse_technique(std::string_view s);

// Technique tag for the config's flags; off-table combinations get
// "lemma-noswr" or "qe-lemma".
std::string technique_label(const PipelineConfig& config);

// "<model>-<technique>", e.g. "bm25-base".
std::string run_tag(const PipelineConfig& config);

inline constexpr Model kAllModels[] = {Model::Bm25, Model::Vsm, Model::LmDirichlet,
                                       Model::LmJelinekMercer};
inline constexpr Technique kAllTechniques[] = {Technique::Baseline, Technique::StopWords,
                                               Technique::LemmaStopWords,
                                               Technique::ExpansionStopWords};

// Index-side preprocessing: tokenize, then SWR and lemmatization as enabled.
std::vector<std::string> preprocess_text(std::string_view text, const PipelineConfig& config,
                                         const Lexicons& lexicons);

// Query-side preprocessing. Produces the flat OR-ed term list; expansion
// groups are concatenated in query order. Throws EmptyQuery if nothing is
// left.
std::vector<std::string> preprocess_query(const Query& query, const PipelineConfig& config,
                                          const Lexicons& lexicons);
std::vector<std::string> preprocess_query_text(std::string_view title,
                                               const PipelineConfig& config,
                                               const Lexicons& lexicons);

}  // namespace irkit
