#include "irkit/textproc.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cctype>
#include <string>
#include <unordered_set>

#include "irkit/corpus.hpp"
#include "irkit/errors.hpp"
#include "util.hpp"

namespace irkit {
namespace {

const icu::Normalizer2& nfc_instance() {
  static const icu::Normalizer2* instance = [] {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status) || n == nullptr) {
      throw Error(ErrorKind::InvalidArgument, "ICU NFC normalizer unavailable");
    }
    return n;
  }();
  return *instance;
}

bool is_ascii(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

std::string nfc_word(std::string word) {
  if (is_ascii(word)) return word;
  return nfc(word);
}

}  // namespace

std::string nfc(std::string_view utf8) {
  if (is_ascii(utf8)) return std::string(utf8);
  const auto& norm = nfc_instance();
  icu::UnicodeString src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  UErrorCode status = U_ZERO_ERROR;
  if (norm.isNormalized(src, status) && U_SUCCESS(status)) {
    std::string out;
    src.toUTF8String(out);
    return out;
  }
  status = U_ZERO_ERROR;
  icu::UnicodeString dst = norm.normalize(src, status);
  if (U_FAILURE(status)) throw Error(ErrorKind::InvalidArgument, "NFC normalization failed");
  std::string out;
  dst.toUTF8String(out);
  return out;
}

bool is_token_punctuation(char32_t cp) {
  if (cp < 0x80) return std::ispunct(static_cast<int>(cp)) != 0;
  switch (cp) {
    case 0x06D4:  // ۔ full stop
    case 0x060C:  // ، comma
    case 0x061F:  // ؟ question mark
    case 0x061B:  // ؛ semicolon
    case 0x066A:  // ٪ percent
    case 0x2018:
    case 0x2019:
    case 0x201C:
    case 0x201D:
      return true;
    default:
      return false;
  }
}

std::vector<std::string> tokenize(std::string_view text) {
  const std::string normalized = nfc(text);
  const char* s = normalized.data();
  const auto length = static_cast<int32_t>(normalized.size());

  std::vector<std::string> tokens;
  std::string current;
  bool dirty = false;  // a character was removed from the current token
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(dirty ? nfc_word(std::move(current)) : std::move(current));
    current.clear();
    dirty = false;
  };

  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 cp;
    U8_NEXT(s, i, length, cp);
    if (cp < 0) cp = 0xFFFD;
    if (u_isUWhiteSpace(cp)) {
      flush();
    } else if (is_token_punctuation(static_cast<char32_t>(cp))) {
      dirty = true;
    } else {
      current.append(s + start, static_cast<std::size_t>(i - start));
    }
  }
  flush();
  return tokens;
}

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const Stoplist& stoplist) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (stoplist.count(t) == 0) out.push_back(t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lexicons

Stoplist Lexicons::parse_stoplist(std::string_view text) {
  Stoplist out;
  for (auto line : detail::split_lines(text)) {
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    out.insert(nfc(line));
  }
  return out;
}

void Lexicons::load_stoplist(std::string_view text) {
  for (auto& w : parse_stoplist(text)) stoplist_.insert(w);
}

void Lexicons::add_stopword(const std::string& word) { stoplist_.insert(nfc(word)); }

void Lexicons::add_lemma(const std::string& raw_word, const std::string& raw_lemma) {
  const std::string word = nfc(raw_word);
  const std::string lemma = nfc(raw_lemma);
  if (word.empty() || lemma.empty()) {
    throw Error(ErrorKind::Validation, "empty lemma map entry");
  }
  if (auto it = lemmas_.find(lemma); it != lemmas_.end() && it->second != lemma) {
    throw Error(ErrorKind::Validation, "lemma '" + lemma + "' is itself mapped to '" +
                                           it->second + "'");
  }
  if (auto it = lemmas_.find(word); it != lemmas_.end() && it->second != lemma) {
    throw Error(ErrorKind::Validation, "word '" + word + "' already maps to '" + it->second +
                                           "', cannot remap to '" + lemma + "'");
  }
  if (word != lemma && variants_.count(word) != 0) {
    throw Error(ErrorKind::Validation,
                "word '" + word + "' has variants and must remain its own lemma");
  }
  lemmas_[word] = lemma;
  lemmas_[lemma] = lemma;
}

void Lexicons::add_variants(const std::string& raw_lemma, const std::vector<std::string>& raw) {
  const std::string lemma = nfc(raw_lemma);
  if (lemma.empty()) throw Error(ErrorKind::Validation, "empty variant map key");
  if (auto it = lemmas_.find(lemma); it != lemmas_.end() && it->second != lemma) {
    throw Error(ErrorKind::Validation, "variant key '" + lemma + "' is not a lemma (maps to '" +
                                           it->second + "')");
  }
  if (variants_.count(lemma) != 0) {
    throw Error(ErrorKind::Validation, "duplicate variant entry for '" + lemma + "'");
  }
  std::vector<std::string> list;
  std::unordered_set<std::string> seen;
  for (const auto& v : raw) {
    std::string w = nfc(detail::trim(v));
    if (w.empty()) continue;
    if (seen.insert(w).second) list.push_back(std::move(w));
  }
  if (list.empty()) throw Error(ErrorKind::Validation, "empty variant list for '" + lemma + "'");
  variants_.emplace(lemma, std::move(list));
}

void Lexicons::load_lemmas(std::string_view text) {
  std::size_t lineno = 0;
  for (auto line : detail::split_lines(text)) {
    ++lineno;
    auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto tab = trimmed.find('\t');
    if (tab == std::string_view::npos || trimmed.find('\t', tab + 1) != std::string_view::npos) {
      throw FormatError("lemma map expects 'word<TAB>lemma'", lineno);
    }
    try {
      add_lemma(std::string(detail::trim(trimmed.substr(0, tab))),
                std::string(detail::trim(trimmed.substr(tab + 1))));
    } catch (const FormatError&) {
      throw;
    } catch (const Error& e) {
      throw FormatError(e.what(), lineno);
    }
  }
}

void Lexicons::load_variants(std::string_view text) {
  std::size_t lineno = 0;
  for (auto line : detail::split_lines(text)) {
    ++lineno;
    auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto tab = trimmed.find('\t');
    if (tab == std::string_view::npos) {
      throw FormatError("variant map expects 'lemma<TAB>v1,v2,...'", lineno);
    }
    std::vector<std::string> variants;
    std::string_view rest = trimmed.substr(tab + 1);
    std::size_t start = 0;
    while (start <= rest.size()) {
      auto comma = rest.find(',', start);
      if (comma == std::string_view::npos) comma = rest.size();
      variants.emplace_back(rest.substr(start, comma - start));
      start = comma + 1;
    }
    try {
      add_variants(std::string(detail::trim(trimmed.substr(0, tab))), variants);
    } catch (const Error& e) {
      throw FormatError(e.what(), lineno);
    }
  }
}

std::string Lexicons::digest(bool with_stoplist, bool with_lemmas) const {
  std::string buf;
  if (with_stoplist) {
    std::vector<std::string> words(stoplist_.begin(), stoplist_.end());
    std::sort(words.begin(), words.end());
    buf += "stoplist\n";
    for (const auto& w : words) buf += w + "\n";
  }
  if (with_lemmas) {
    std::vector<std::pair<std::string, std::string>> pairs(lemmas_.begin(), lemmas_.end());
    std::sort(pairs.begin(), pairs.end());
    buf += "lemmas\n";
    for (const auto& [w, l] : pairs) buf += w + "\t" + l + "\n";
  }
  return detail::sha256_hex(buf);
}

std::string lemmatize(const std::string& token, const Lexicons& lexicons) {
  const auto& m = lexicons.lemma_map();
  auto it = m.find(token);
  return it == m.end() ? token : it->second;
}

std::vector<std::string> expand(const std::string& token, const Lexicons& lexicons) {
  std::vector<std::string> out{lemmatize(token, lexicons)};
  const auto& vm = lexicons.variant_map();
  auto it = vm.find(out.front());
  if (it == vm.end()) return out;
  for (const auto& v : it->second) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// PipelineConfig

void PipelineConfig::validate() const {
  if (use_expansion && !use_swr) {
    throw Error(ErrorKind::Validation, "query expansion requires stop-word removal");
  }
  if (!(k1 > 0.0)) throw Error(ErrorKind::Validation, "k1 must be > 0");
  if (!(b >= 0.0 && b <= 1.0)) throw Error(ErrorKind::Validation, "b must lie in [0, 1]");
  if (!(mu > 0.0)) throw Error(ErrorKind::Validation, "mu must be > 0");
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw Error(ErrorKind::Validation, "lambda must lie in (0, 1)");
  }
  if (pool_depth == 0) throw Error(ErrorKind::Validation, "pool depth must be >= 1");
}

PipelineConfig PipelineConfig::for_technique(Technique technique, Model model) {
  PipelineConfig c;
  c.model = model;
  switch (technique) {
    case Technique::Baseline:
      break;
    case Technique::StopWords:
      c.use_swr = true;
      break;
    case Technique::LemmaStopWords:
      c.use_swr = true;
      c.use_lemma = true;
      break;
    case Technique::ExpansionStopWords:
      c.use_swr = true;
      c.use_expansion = true;
      break;
  }
  return c;
}

std::optional<Technique> PipelineConfig::technique() const {
  if (!use_swr && !use_lemma && !use_expansion) return Technique::Baseline;
  if (use_swr && !use_lemma && !use_expansion) return Technique::StopWords;
  if (use_swr && use_lemma && !use_expansion) return Technique::LemmaStopWords;
  if (use_swr && !use_lemma && use_expansion) return Technique::ExpansionStopWords;
  return std::nullopt;
}

const char* model_tag(Model m) {
  switch (m) {
    case Model::Vsm: return "vsm";
    case Model::Bm25: return "bm25";
    case Model::LmDirichlet: return "lmds";
    case Model::LmJelinekMercer: return "lmjms";
  }
  return "?";
}

const char* model_display(Model m) {
  switch (m) {
    case Model::Vsm: return "VSM";
    case Model::Bm25: return "BM25";
    case Model::LmDirichlet: return "LM-DS";
    case Model::LmJelinekMercer: return "LM-JMS";
  }
  return "?";
}

const char* technique_tag(Technique t) {
  switch (t) {
    case Technique::Baseline: return "base";
    case Technique::StopWords: return "swr";
    case Technique::LemmaStopWords: return "lemma";
    case Technique::ExpansionStopWords: return "qe";
  }
  return "?";
}

const char* technique_display(Technique t) {
  switch (t) {
    case Technique::Baseline: return "Baseline";
    case Technique::StopWords: return "Stop-Words-Removal (SWR)";
    case Technique::LemmaStopWords: return "Lemmatization with SWR";
    case Technique::ExpansionStopWords: return "Query-Expansion with SWR";
  }
  return "?";
}

namespace {
std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  out.erase(std::remove(out.begin(), out.end(), '-'), out.end());
  out.erase(std::remove(out.begin(), out.end(), '_'), out.end());
  return out;
}
}  // namespace

Model parse_model(std::string_view s) {
  const std::string v = lower(s);
  if (v == "vsm" || v == "tfidf") return Model::Vsm;
  if (v == "bm25") return Model::Bm25;
  if (v == "lmds" || v == "dirichlet") return Model::LmDirichlet;
  if (v == "lmjms" || v == "jm" || v == "jelinekmercer") return Model::LmJelinekMercer;
  throw Error(ErrorKind::InvalidArgument, "unknown model '" + std::string(s) + "'");
}

Technique parse_technique(std::string_view s) {
  const std::string v = lower(s);
  if (v == "base" || v == "baseline") return Technique::Baseline;
  if (v == "swr") return Technique::StopWords;
  if (v == "lemma" || v == "lemmaswr") return Technique::LemmaStopWords;
  if (v == "qe" || v == "expansion" || v == "qeswr") return Technique::ExpansionStopWords;
  throw Error(ErrorKind::InvalidArgument, "unknown technique '" + std::string(s) + "'");
}

std::string technique_label(const PipelineConfig& config) {
  if (auto t = config.technique()) return technique_tag(*t);
  if (config.use_expansion) return "qe-lemma";
  return "lemma-noswr";
}

std::string run_tag(const PipelineConfig& config) {
  return std::string(model_tag(config.model)) + "-" + technique_label(config);
}

// ---------------------------------------------------------------------------
// Pipelines

std::vector<std::string> preprocess_text(std::string_view text, const PipelineConfig& config,
                                         const Lexicons& lexicons) {
  auto tokens = tokenize(text);
  if (config.use_swr) tokens = remove_stopwords(tokens, lexicons.stoplist());
  if (config.use_lemma) {
    for (auto& t : tokens) t = lemmatize(t, lexicons);
  }
  return tokens;
}

std::vector<std::string> preprocess_query_text(std::string_view title,
                                               const PipelineConfig& config,
                                               const Lexicons& lexicons) {
  auto tokens = preprocess_text(title, config, lexicons);
  if (config.use_expansion) {
    std::vector<std::string> expanded;
    for (const auto& t : tokens) {
      for (auto& v : expand(t, lexicons)) expanded.push_back(std::move(v));
    }
    tokens = std::move(expanded);
  }
  if (tokens.empty()) {
    throw Error(ErrorKind::EmptyQuery,
                config.use_swr ? "query is empty after stop-word removal" : "query has no tokens");
  }
  return tokens;
}

std::vector<std::string> preprocess_query(const Query& query, const PipelineConfig& config,
                                          const Lexicons& lexicons) {
  try {
    return preprocess_query_text(query.title, config, lexicons);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::EmptyQuery) throw;
    throw Error(ErrorKind::EmptyQuery, "query " + query.qid + ": " + e.what());
  }
}

}  // namespace irkit
