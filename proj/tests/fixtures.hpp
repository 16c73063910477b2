#pragma once
// Glue between the oracle's plain types and the library types.

#include <string>
#include <utility>
#include <vector>

#include "irkit/corpus.hpp"
#include "irkit/textproc.hpp"
#include "oracle.hpp"

namespace fixtures {

inline std::string data_path(const std::string& rel) { return std::string(IRKIT_DATA_DIR) + "/" + rel; }

inline std::vector<irkit::Document> to_documents(const std::vector<oracle::Doc>& docs) {
  std::vector<irkit::Document> out;
  for (const auto& d : docs) out.push_back(irkit::Document{d.id, d.title, d.body, std::nullopt});
  return out;
}

inline irkit::Lexicons to_lexicons(const oracle::Lex& lex) {
  irkit::Lexicons out;
  for (const auto& w : lex.stop) out.add_stopword(w);
  for (const auto& [w, l] : lex.lemma) out.add_lemma(w, l);
  for (const auto& [l, vs] : lex.variants) out.add_variants(l, vs);
  return out;
}

inline oracle::Model to_oracle(irkit::Model m) {
  switch (m) {
    case irkit::Model::Vsm: return oracle::Model::Vsm;
    case irkit::Model::Bm25: return oracle::Model::Bm25;
    case irkit::Model::LmDirichlet: return oracle::Model::LmDs;
    case irkit::Model::LmJelinekMercer: return oracle::Model::LmJms;
  }
  return oracle::Model::Bm25;
}

inline oracle::Config to_oracle(const irkit::PipelineConfig& c) {
  oracle::Config o;
  o.swr = c.use_swr;
  o.lemma = c.use_lemma;
  o.expansion = c.use_expansion;
  o.model = to_oracle(c.model);
  o.k1 = c.k1;
  o.b = c.b;
  o.mu = c.mu;
  o.lambda = c.lambda;
  return o;
}

}  // namespace fixtures
