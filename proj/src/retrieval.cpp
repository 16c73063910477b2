#include "irkit/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "irkit/errors.hpp"
#include "util.hpp"

namespace irkit {

double score_tfidf(double tf, double nd, double df) {
  if (tf <= 0.0) return 0.0;
  return std::sqrt(tf) * (1.0 + std::log(nd / (df + 1.0)));
}

double score_bm25(double tf, double nd, double df, double dl, double avgdl, double k1, double b) {
  if (tf <= 0.0) return 0.0;
  const double idf = std::log((nd - df + 0.5) / (df + 0.5));
  return idf * (tf * (k1 + 1.0)) / (tf + k1 * (1.0 - b + b * dl / avgdl));
}

std::optional<double> score_lm_ds_factor(double tf, double dl, double mu, double p_tc) {
  if (tf <= 0.0 && p_tc <= 0.0) return std::nullopt;
  return (tf + mu * p_tc) / (dl + mu);
}

std::optional<double> score_lm_jms_factor(double tf, double dl, double lambda, double p_tc) {
  if (tf <= 0.0 && p_tc <= 0.0) return std::nullopt;
  const double ml = dl > 0.0 ? tf / dl : 0.0;
  return (1.0 - lambda) * ml + lambda * p_tc;
}

double dirichlet_lambda(double n, double mu) { return 1.0 - n / (n + mu); }

std::string QueryTrace::format() const {
  std::string out = "query " + qid + ": " + std::to_string(candidates) + " candidates\n";
  for (const auto& t : terms) {
    out += "  " + t.term + " x" + std::to_string(t.occurrences) +
           " p(t|c)=" + detail::fixed(t.collection_prob, 8);
    if (t.dropped) {
      out += " dropped (unseen in collection)\n";
      continue;
    }
    out += " title=" + std::to_string(t.title_wins) + " content=" + std::to_string(t.content_wins) +
           " tie=" + std::to_string(t.ties) + "\n";
  }
  return out;
}

namespace {

bool is_language_model(Model m) { return m == Model::LmDirichlet || m == Model::LmJelinekMercer; }

// Field-level score of one term for one document. Empty when a language
// model term must be dropped.
struct FieldScorer {
  const Index& index;
  const PipelineConfig& config;
  double nd;
  double query_norm;

  std::optional<double> operator()(Field f, DocNo doc, double tf, double df, double p_tc) const {
    const FieldIndex& fi = index.field(f);
    const double dl = fi.doc_len(doc);
    switch (config.model) {
      case Model::Vsm: {
        const double norm = fi.vsm_norm(doc);
        if (tf <= 0.0 || norm <= 0.0) return 0.0;
        return score_tfidf(tf, nd, df) / (query_norm * norm);
      }
      case Model::Bm25:
        return score_bm25(tf, nd, df, dl, fi.avg_len(), config.k1, config.b);
      case Model::LmDirichlet:
        return score_lm_ds_factor(tf, dl, config.mu, p_tc);
      case Model::LmJelinekMercer:
        return score_lm_jms_factor(tf, dl, config.lambda, p_tc);
    }
    return 0.0;
  }
};

}  // namespace

RankedList rank(const Index& index, const std::string& qid,
                const std::vector<std::string>& query_terms, const PipelineConfig& config,
                std::size_t k, QueryTrace* trace) {
  config.validate();
  RankedList list;
  list.qid = qid;
  list.model_tag = model_tag(config.model);
  list.pipeline_tag = technique_label(config);

  // Unique terms in first-seen order; slot[i] maps list position to term.
  std::vector<std::string> unique;
  std::vector<std::size_t> occurrences;
  std::vector<std::size_t> slot;
  {
    std::unordered_map<std::string, std::size_t> pos;
    for (const auto& t : query_terms) {
      auto [it, inserted] = pos.emplace(t, unique.size());
      if (inserted) {
        unique.push_back(t);
        occurrences.push_back(0);
      }
      ++occurrences[it->second];
      slot.push_back(it->second);
    }
  }

  const auto candidates = index.candidate_set(unique);
  if (trace != nullptr) {
    trace->qid = qid;
    trace->candidates = candidates.size();
    trace->terms.clear();
  }

  double qnorm2 = 0.0;
  for (auto c : occurrences) qnorm2 += static_cast<double>(c) * static_cast<double>(c);
  const FieldScorer scorer{index, config, static_cast<double>(index.num_docs()), std::sqrt(qnorm2)};
  const bool lm = is_language_model(config.model);

  // per_term[u][i]: field-max score of unique term u for candidate i.
  std::vector<std::vector<double>> per_term(unique.size());
  std::vector<char> dropped(unique.size(), 0);
  std::vector<std::uint32_t> tf_scratch(index.num_docs(), 0);
  for (std::size_t u = 0; u < unique.size(); ++u) {
    const std::string& term = unique[u];
    const double p_tc = index.collection_prob(term);
    TermTrace tt;
    tt.term = term;
    tt.occurrences = occurrences[u];
    tt.collection_prob = p_tc;
    if (lm && p_tc <= 0.0) {
      dropped[u] = 1;
      tt.dropped = true;
      if (trace != nullptr) trace->terms.push_back(std::move(tt));
      continue;
    }

    std::vector<double> field_scores[2];
    for (Field f : kFields) {
      const auto fidx = static_cast<int>(f);
      const FieldIndex& fi = index.field(f);
      const auto* plist = fi.postings(term);
      const double df = plist == nullptr ? 0.0 : static_cast<double>(plist->size());
      if (plist != nullptr) {
        for (const auto& p : *plist) tf_scratch[p.doc] = p.tf;
      }
      auto& out = field_scores[fidx];
      out.resize(candidates.size());
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        const DocNo d = candidates[i];
        auto s = scorer(f, d, static_cast<double>(tf_scratch[d]), df, p_tc);
        out[i] = s.value_or(0.0);
      }
      if (plist != nullptr) {
        for (const auto& p : *plist) tf_scratch[p.doc] = 0;
      }
    }

    auto& scores = per_term[u];
    scores.resize(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const double title = field_scores[0][i];
      const double content = field_scores[1][i];
      const double m = std::max(title, content);
      scores[i] = lm ? std::log(m) : m;
      if (title > content) {
        ++tt.title_wins;
      } else if (content > title) {
        ++tt.content_wins;
      } else {
        ++tt.ties;
      }
    }
    if (trace != nullptr) trace->terms.push_back(std::move(tt));
  }

  std::vector<std::pair<double, DocNo>> scored;
  scored.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    double total = 0.0;
    for (auto u : slot) {
      if (!dropped[u]) total += per_term[u][i];
    }
    scored.emplace_back(total, candidates[i]);
  }

  const auto better = [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  };
  const std::size_t n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(),
                    better);
  list.docs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    list.docs.push_back(ScoredDoc{index.doc_id(scored[i].second), scored[i].first});
  }
  return list;
}

std::vector<RunEntry> to_run_entries(const RankedList& list) {
  std::vector<RunEntry> out;
  out.reserve(list.docs.size());
  const std::string tag = list.tag();
  for (std::size_t i = 0; i < list.docs.size(); ++i) {
    out.push_back(RunEntry{list.qid, list.docs[i].doc_id, i + 1, list.docs[i].score, tag});
  }
  return out;
}

SearchResult search(const Index& index, const std::vector<Query>& queries,
                    const PipelineConfig& config, const Lexicons& lexicons, std::size_t k,
                    bool collect_traces) {
  config.validate();
  index.check_compatible(config, lexicons);
  SearchResult result;
  for (const auto& q : queries) {
    std::vector<std::string> terms;
    try {
      terms = preprocess_query(q, config, lexicons);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::EmptyQuery) throw;
      result.warnings.push_back(e.what());
      continue;
    }
    QueryTrace trace;
    auto list = rank(index, q.qid, terms, config, k, collect_traces ? &trace : nullptr);
    if (list.docs.empty()) result.warnings.push_back("query " + q.qid + ": no documents retrieved");
    for (auto& e : to_run_entries(list)) result.run.push_back(std::move(e));
    if (collect_traces) result.traces.push_back(std::move(trace));
  }
  return result;
}

}  // namespace irkit
