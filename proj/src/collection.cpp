#include "irkit/collection.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "irkit/errors.hpp"
#include "irkit/retrieval.hpp"
#include "util.hpp"

namespace irkit {

// ---------------------------------------------------------------------------
// Pool

void Pool::add_contributor(const std::string& tag) {
  if (std::find(contributors_.begin(), contributors_.end(), tag) == contributors_.end()) {
    contributors_.push_back(tag);
  }
}

void Pool::touch_query(const std::string& qid) { pool_[qid]; }

void Pool::add(const std::string& qid, const std::string& doc_id, const std::string& tag,
               std::size_t rank) {
  if (rank == 0 || rank > depth_) {
    throw Error(ErrorKind::Validation, "pool rank " + std::to_string(rank) + " outside 1.." +
                                           std::to_string(depth_));
  }
  add_contributor(tag);
  auto& prov = pool_[qid][doc_id];
  for (const auto& p : prov) {
    if (p.tag == tag) {
      throw Error(ErrorKind::Validation, "run '" + tag + "' pooled " + doc_id + " twice for " + qid);
    }
  }
  prov.push_back(Provenance{tag, rank});
}

std::size_t Pool::total_entries() const {
  std::size_t n = 0;
  for (const auto& [qid, docs] : pool_) {
    for (const auto& [doc, prov] : docs) n += prov.size();
  }
  return n;
}

std::size_t Pool::query_size(const std::string& qid) const {
  auto it = pool_.find(qid);
  return it == pool_.end() ? 0 : it->second.size();
}

std::string Pool::dump() const {
  std::string out;
  for (const auto& [qid, docs] : pool_) {
    for (const auto& [doc, prov] : docs) {
      std::size_t best = depth_;
      std::vector<std::string> tags;
      for (const auto& p : prov) {
        best = std::min(best, p.rank);
        tags.push_back(p.tag);
      }
      std::sort(tags.begin(), tags.end());
      std::string joined;
      for (const auto& t : tags) joined += (joined.empty() ? "" : ",") + t;
      out += qid + "\t" + doc + "\t" + joined + "\t" + std::to_string(best) + "\n";
    }
  }
  return out;
}

Pool build_pool(const Index& index, const std::vector<Query>& queries,
                const std::vector<PipelineConfig>& configs, const Lexicons& lexicons,
                std::size_t depth, std::vector<std::string>* warnings) {
  if (depth == 0) throw Error(ErrorKind::InvalidArgument, "pool depth must be >= 1");
  if (configs.empty()) throw Error(ErrorKind::InvalidArgument, "pooling needs at least one model");
  for (const auto& c : configs) {
    c.validate();
    index.check_compatible(c, lexicons);
  }
  Pool pool(depth);
  for (const auto& c : configs) pool.add_contributor(run_tag(c));
  for (const auto& q : queries) {
    pool.touch_query(q.qid);
    for (const auto& c : configs) {
      std::vector<std::string> terms;
      try {
        terms = preprocess_query(q, c, lexicons);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::EmptyQuery) throw;
        continue;
      }
      const auto list = rank(index, q.qid, terms, c, depth);
      for (std::size_t i = 0; i < list.docs.size(); ++i) {
        pool.add(q.qid, list.docs[i].doc_id, list.tag(), i + 1);
      }
    }
    if (warnings != nullptr && pool.query_size(q.qid) == 0) {
      warnings->push_back("query " + q.qid + ": no documents retrieved by any model");
    }
  }
  return pool;
}

// ---------------------------------------------------------------------------
// Deduplication

std::string content_fingerprint(const Document& doc) {
  std::string buf = nfc(doc.title);
  buf.push_back('\x1f');
  buf += nfc(doc.body);
  return detail::sha256_hex(buf);
}

DedupResult dedup(const Pool& pool, const std::vector<Document>& docs) {
  std::unordered_map<std::string, const Document*> by_id;
  for (const auto& d : docs) by_id.emplace(d.doc_id, &d);

  DedupResult result;
  result.input_entries = pool.total_entries();

  std::set<std::string> ids;
  for (const auto& [qid, pooled] : pool.queries()) {
    for (const auto& [doc, prov] : pooled) ids.insert(doc);
  }

  // Ids are visited in ascending order, so the first id of a fingerprint
  // class is its survivor.
  std::unordered_map<std::string, std::string> survivor_of_print;
  std::map<std::string, std::string> survivor;
  for (const auto& id : ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw Error(ErrorKind::Validation, "pooled document " + id + " is not in the collection");
    }
    auto [pit, inserted] = survivor_of_print.emplace(content_fingerprint(*it->second), id);
    survivor[id] = pit->second;
    if (inserted) {
      result.unique_docs.push_back(id);
    } else {
      result.replaced[id] = pit->second;
    }
  }

  Pool rewritten(pool.depth());
  for (const auto& tag : pool.contributors()) rewritten.add_contributor(tag);
  for (const auto& [qid, pooled] : pool.queries()) {
    rewritten.touch_query(qid);
    // Merge provenance of duplicates, keeping the best rank per tag.
    std::map<std::string, std::map<std::string, std::size_t>> merged;
    for (const auto& [doc, prov] : pooled) {
      auto& slot = merged[survivor.at(doc)];
      for (const auto& p : prov) {
        auto [it, inserted] = slot.emplace(p.tag, p.rank);
        if (!inserted) it->second = std::min(it->second, p.rank);
      }
    }
    for (const auto& [doc, tags] : merged) {
      for (const auto& [tag, rank] : tags) rewritten.add(qid, doc, tag, rank);
    }
  }
  result.pool = std::move(rewritten);
  return result;
}

// ---------------------------------------------------------------------------
// Agreement

namespace {

void require_same_keys(const JudgmentSet& first, const JudgmentSet& second) {
  std::vector<JudgmentKey> only_first;
  std::vector<JudgmentKey> only_second;
  auto a = first.entries().begin();
  auto b = second.entries().begin();
  const auto ae = first.entries().end();
  const auto be = second.entries().end();
  while (a != ae || b != be) {
    if (b == be || (a != ae && a->first < b->first)) {
      only_first.push_back((a++)->first);
    } else if (a == ae || b->first < a->first) {
      only_second.push_back((b++)->first);
    } else {
      ++a;
      ++b;
    }
  }
  if (only_first.empty() && only_second.empty()) return;

  auto list = [](const std::vector<JudgmentKey>& keys) {
    std::string s;
    const std::size_t shown = std::min<std::size_t>(keys.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) {
      s += (i ? ", " : "") + std::string("(") + keys[i].first + ", " + keys[i].second + ")";
    }
    if (keys.size() > shown) s += ", ... " + std::to_string(keys.size() - shown) + " more";
    return s;
  };
  std::string msg = "judgment key sets differ:";
  if (!only_first.empty()) {
    msg += " only in " + (first.judge_id().empty() ? std::string("first") : first.judge_id()) +
           ": " + list(only_first) + ";";
  }
  if (!only_second.empty()) {
    msg += " only in " + (second.judge_id().empty() ? std::string("second") : second.judge_id()) +
           ": " + list(only_second) + ";";
  }
  msg.pop_back();
  throw Error(ErrorKind::Mismatch, msg);
}

}  // namespace

ContingencyTable contingency(const JudgmentSet& first, const JudgmentSet& second) {
  require_same_keys(first, second);
  ContingencyTable t;
  auto b = second.entries().begin();
  for (const auto& [key, r1] : first.entries()) {
    const int r2 = (b++)->second;
    if (r1 == 1 && r2 == 1) {
      ++t.a;
    } else if (r1 == 0 && r2 == 1) {
      ++t.b;
    } else if (r1 == 1 && r2 == 0) {
      ++t.c;
    } else {
      ++t.d;
    }
  }
  return t;
}

KappaResult kappa(const ContingencyTable& table) {
  const double n = static_cast<double>(table.n());
  if (table.n() == 0) throw Error(ErrorKind::InvalidArgument, "kappa of an empty table");
  const double r1 = static_cast<double>(table.a + table.c);  // first judge relevant
  const double r2 = static_cast<double>(table.a + table.b);  // second judge relevant
  KappaResult k;
  k.observed = static_cast<double>(table.a + table.d) / n;
  k.chance = (r1 * r2 + (n - r1) * (n - r2)) / (n * n);
  if (k.chance < 1.0) k.kappa = (k.observed - k.chance) / (1.0 - k.chance);
  return k;
}

std::vector<JudgmentKey> conflicts(const JudgmentSet& first, const JudgmentSet& second) {
  require_same_keys(first, second);
  std::vector<JudgmentKey> out;
  auto b = second.entries().begin();
  for (const auto& [key, r1] : first.entries()) {
    if (r1 != (b++)->second) out.push_back(key);
  }
  return out;
}

std::string conflict_worksheet(const JudgmentSet& first, const JudgmentSet& second) {
  std::string out;
  for (const auto& key : conflicts(first, second)) {
    out += key.first + "\t" + key.second + "\t" + std::to_string(*first.get(key.first, key.second)) +
           "\t" + std::to_string(*second.get(key.first, key.second)) + "\t\n";
  }
  return out;
}

MergedJudgments resolve_conflicts(const JudgmentSet& first, const JudgmentSet& second,
                                  const JudgmentSet& third) {
  const auto conflict_keys = conflicts(first, second);
  JudgmentSet expected("conflicts");
  for (const auto& key : conflict_keys) expected.add(key.first, key.second, 0);

  std::vector<JudgmentKey> missing;
  std::vector<JudgmentKey> extra;
  for (const auto& key : conflict_keys) {
    if (!third.contains(key)) missing.push_back(key);
  }
  for (const auto& [key, rel] : third.entries()) {
    if (!expected.contains(key)) extra.push_back(key);
  }
  if (!missing.empty() || !extra.empty()) {
    std::string msg = "third-judge file does not match the " +
                      std::to_string(conflict_keys.size()) + " conflicting pairs:";
    auto append = [&msg](const char* what, const std::vector<JudgmentKey>& keys) {
      if (keys.empty()) return;
      msg += std::string(" ") + what + " " + std::to_string(keys.size()) + " (first: " +
             keys.front().first + " " + keys.front().second + ");";
    };
    append("missing", missing);
    append("not in conflict", extra);
    msg.pop_back();
    throw Error(ErrorKind::Coverage, msg);
  }

  MergedJudgments merged;
  merged.conflicts = conflict_keys.size();
  for (const auto& [key, r1] : first.entries()) {
    const int r2 = *second.get(key.first, key.second);
    if (r1 == r2) {
      merged.judgments.add(key.first, key.second, r1);
      merged.source[key] = JudgmentSource::Agreed;
      if (r1 == 1) ++merged.agreed_relevant;
    } else {
      const int r3 = *third.get(key.first, key.second);
      merged.judgments.add(key.first, key.second, r3);
      merged.source[key] = JudgmentSource::ThirdJudge;
      if (r3 == 1) ++merged.third_judge_relevant;
    }
  }
  return merged;
}

}  // namespace irkit
