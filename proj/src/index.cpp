#include "irkit/index.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <unordered_map>
#include <unordered_set>

#include "irkit/errors.hpp"
#include "irkit/retrieval.hpp"
#include "util.hpp"

namespace irkit {

const char* field_name(Field f) { return f == Field::Title ? "title" : "content"; }

const std::vector<Posting>* FieldIndex::postings(const std::string& term) const {
  auto it = postings_.find(term);
  return it == postings_.end() ? nullptr : &it->second;
}

std::uint32_t FieldIndex::df(const std::string& term) const {
  const auto* p = postings(term);
  return p == nullptr ? 0 : static_cast<std::uint32_t>(p->size());
}

class IndexBuilder {
 public:
  static void add_field(FieldIndex& field, DocNo doc, const std::vector<std::string>& tokens,
                        std::map<std::string, std::uint64_t>& collection_tf) {
    std::unordered_map<std::string, std::uint32_t> counts;
    for (const auto& t : tokens) ++counts[t];
    for (auto& [term, tf] : counts) {
      field.postings_[term].push_back(Posting{doc, tf});
      collection_tf[term] += tf;
    }
    field.doc_len_.push_back(static_cast<std::uint32_t>(tokens.size()));
  }
};

Index Index::build(const std::vector<Document>& docs, const PipelineConfig& config,
                   const Lexicons& lexicons) {
  config.validate();
  if (docs.empty()) throw Error(ErrorKind::EmptyCorpus, "cannot build an index over zero documents");

  std::vector<const Document*> order;
  order.reserve(docs.size());
  for (const auto& d : docs) order.push_back(&d);
  std::sort(order.begin(), order.end(),
            [](const Document* a, const Document* b) { return a->doc_id < b->doc_id; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (order[i]->doc_id == order[i - 1]->doc_id) {
      throw Error(ErrorKind::Validation, "duplicate doc_id '" + order[i]->doc_id + "'");
    }
  }
  if (order.size() > UINT32_MAX) throw Error(ErrorKind::InvalidArgument, "too many documents");

  Index index;
  index.use_swr_ = config.use_swr;
  index.use_lemma_ = config.use_lemma;
  index.lexicon_digest_ = lexicons.digest(config.use_swr, config.use_lemma);
  index.doc_ids_.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Document& d = *order[i];
    const auto doc = static_cast<DocNo>(i);
    index.doc_ids_.push_back(d.doc_id);
    IndexBuilder::add_field(index.fields_[0], doc, preprocess_text(d.title, config, lexicons),
                            index.collection_tf_);
    IndexBuilder::add_field(index.fields_[1], doc, preprocess_text(d.body, config, lexicons),
                            index.collection_tf_);
  }
  index.finalize();
  return index;
}

void Index::finalize() {
  const std::size_t nd = doc_ids_.size();
  collection_total_ = 0;
  for (const auto& [term, tf] : collection_tf_) collection_total_ += tf;
  for (auto& f : fields_) {
    f.total_tokens_ = 0;
    for (auto len : f.doc_len_) f.total_tokens_ += len;
    f.avg_len_ = nd == 0 ? 0.0 : static_cast<double>(f.total_tokens_) / static_cast<double>(nd);
    std::vector<double> norm2(nd, 0.0);
    for (const auto& [term, plist] : f.postings_) {
      const double df = static_cast<double>(plist.size());
      for (const auto& p : plist) {
        const double w = score_tfidf(p.tf, static_cast<double>(nd), df);
        norm2[p.doc] += w * w;
      }
    }
    f.vsm_norm_.assign(nd, 0.0);
    for (std::size_t d = 0; d < nd; ++d) f.vsm_norm_[d] = std::sqrt(norm2[d]);
  }
}

std::uint64_t Index::collection_tf(const std::string& term) const {
  auto it = collection_tf_.find(term);
  return it == collection_tf_.end() ? 0 : it->second;
}

double Index::collection_prob(const std::string& term) const {
  if (collection_total_ == 0) return 0.0;
  return static_cast<double>(collection_tf(term)) / static_cast<double>(collection_total_);
}

std::vector<DocNo> Index::candidate_set(const std::vector<std::string>& terms) const {
  std::vector<char> mark(doc_ids_.size(), 0);
  for (const auto& t : terms) {
    for (const auto& f : fields_) {
      if (const auto* plist = f.postings(t)) {
        for (const auto& p : *plist) mark[p.doc] = 1;
      }
    }
  }
  std::vector<DocNo> out;
  for (std::size_t d = 0; d < mark.size(); ++d) {
    if (mark[d]) out.push_back(static_cast<DocNo>(d));
  }
  return out;
}

std::vector<std::string> Index::candidate_ids(const std::vector<std::string>& terms) const {
  std::vector<std::string> out;
  for (auto d : candidate_set(terms)) out.push_back(doc_ids_[d]);
  return out;
}

void Index::check_compatible(const PipelineConfig& config, const Lexicons& lexicons) const {
  if (config.use_swr != use_swr_ || config.use_lemma != use_lemma_) {
    throw Error(ErrorKind::Validation,
                std::string("index was built with stop-word removal ") + (use_swr_ ? "on" : "off") +
                    " and lemmatization " + (use_lemma_ ? "on" : "off") +
                    "; the search configuration differs");
  }
  if (lexicons.digest(use_swr_, use_lemma_) != lexicon_digest_) {
    throw Error(ErrorKind::Validation,
                "lexicons differ from the ones the index was built with");
  }
}

// ---------------------------------------------------------------------------
// Snapshot

namespace {

constexpr char kMagic[4] = {'I', 'R', 'K', 'X'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_str(std::string& out, std::string_view s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.append(s);
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4, "u32");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  std::uint8_t u8() {
    need(1, "u8");
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }
  std::string str() {
    const auto len = u32();
    need(len, "string");
    std::string s(bytes_.substr(pos_, len));
    pos_ += len;
    return s;
  }
  std::string_view raw(std::size_t n) {
    need(n, "header");
    auto v = bytes_.substr(pos_, n);
    pos_ += n;
    return v;
  }
  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ == bytes_.size(); }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("index snapshot: " + what, pos_);
  }

 private:
  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) fail(std::string("truncated while reading ") + what);
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string Index::serialize() const {
  std::string out;
  out.append(kMagic, 4);
  put_u32(out, kVersion);
  out.push_back(use_swr_ ? 1 : 0);
  out.push_back(use_lemma_ ? 1 : 0);
  put_str(out, lexicon_digest_);
  put_u32(out, static_cast<std::uint32_t>(doc_ids_.size()));
  for (const auto& id : doc_ids_) put_str(out, id);
  for (const auto& f : fields_) {
    for (auto len : f.doc_len_) put_u32(out, len);
    put_u32(out, static_cast<std::uint32_t>(f.postings_.size()));
    for (const auto& [term, plist] : f.postings_) {
      put_str(out, term);
      put_u32(out, static_cast<std::uint32_t>(plist.size()));
      for (const auto& p : plist) {
        put_u32(out, p.doc);
        put_u32(out, p.tf);
      }
    }
  }
  return out;
}

Index Index::deserialize(std::string_view bytes) {
  Reader r(bytes);
  if (r.raw(4) != std::string_view(kMagic, 4)) r.fail("bad magic");
  if (const auto v = r.u32(); v != kVersion) r.fail("unsupported version " + std::to_string(v));
  Index index;
  index.use_swr_ = r.u8() != 0;
  index.use_lemma_ = r.u8() != 0;
  index.lexicon_digest_ = r.str();
  const auto nd = r.u32();
  if (nd == 0) r.fail("zero documents");
  index.doc_ids_.reserve(nd);
  for (std::uint32_t i = 0; i < nd; ++i) {
    index.doc_ids_.push_back(r.str());
    if (i > 0 && !(index.doc_ids_[i - 1] < index.doc_ids_[i])) r.fail("doc ids not strictly ascending");
  }
  for (auto& f : index.fields_) {
    f.doc_len_.resize(nd);
    for (std::uint32_t i = 0; i < nd; ++i) f.doc_len_[i] = r.u32();
    std::vector<std::uint64_t> len_check(nd, 0);
    const auto nterms = r.u32();
    std::string prev;
    for (std::uint32_t t = 0; t < nterms; ++t) {
      std::string term = r.str();
      if (t > 0 && !(prev < term)) r.fail("terms not strictly ascending");
      const auto n = r.u32();
      if (n == 0 || n > nd) r.fail("bad posting count for '" + term + "'");
      std::vector<Posting> plist;
      plist.reserve(n);
      for (std::uint32_t k = 0; k < n; ++k) {
        Posting p{r.u32(), r.u32()};
        if (p.doc >= nd || p.tf == 0 || (k > 0 && p.doc <= plist.back().doc)) {
          r.fail("bad posting for '" + term + "'");
        }
        len_check[p.doc] += p.tf;
        index.collection_tf_[term] += p.tf;
        plist.push_back(p);
      }
      prev = term;
      f.postings_.emplace_hint(f.postings_.end(), std::move(term), std::move(plist));
    }
    for (std::uint32_t i = 0; i < nd; ++i) {
      if (len_check[i] != f.doc_len_[i]) r.fail("document length disagrees with postings");
    }
  }
  if (!r.done()) r.fail("trailing bytes");
  index.finalize();
  return index;
}

std::string Index::stats_text() const {
  std::string out;
  out += "documents\t" + std::to_string(num_docs()) + "\n";
  out += "stopword_removal\t" + std::string(use_swr_ ? "on" : "off") + "\n";
  out += "lemmatization\t" + std::string(use_lemma_ ? "on" : "off") + "\n";
  for (Field f : kFields) {
    const auto& fi = field(f);
    const std::string name = field_name(f);
    out += name + ".terms\t" + std::to_string(fi.terms().size()) + "\n";
    out += name + ".tokens\t" + std::to_string(fi.total_tokens()) + "\n";
    out += name + ".avg_len\t" + detail::fixed(fi.avg_len(), 4) + "\n";
  }
  out += "collection.terms\t" + std::to_string(collection_tf_.size()) + "\n";
  out += "collection.tokens\t" + std::to_string(collection_total_) + "\n";
  return out;
}

}  // namespace irkit
