#include "irkit/metrics.hpp"

#include <algorithm>
#include <set>

#include "irkit/errors.hpp"
#include "irkit/textproc.hpp"
#include "util.hpp"

namespace irkit {
namespace {

std::size_t hits_in_top(const std::vector<std::string>& ranked, const RelevantSet& relevant,
                        std::size_t k) {
  const std::size_t n = std::min(k, ranked.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) hits += relevant.count(ranked[i]);
  return hits;
}

}  // namespace

double precision_at_k(const std::vector<std::string>& ranked, const RelevantSet& relevant,
                      std::size_t k) {
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "precision cutoff must be >= 1");
  return static_cast<double>(hits_in_top(ranked, relevant, k)) / static_cast<double>(k);
}

std::optional<double> recall_at_k(const std::vector<std::string>& ranked,
                                  const RelevantSet& relevant, std::size_t k) {
  if (relevant.empty()) return std::nullopt;
  return static_cast<double>(hits_in_top(ranked, relevant, k)) /
         static_cast<double>(relevant.size());
}

std::optional<double> average_precision_at_k(const std::vector<std::string>& ranked,
                                             const RelevantSet& relevant, std::size_t k) {
  if (relevant.empty()) return std::nullopt;
  const std::size_t n = std::min(k, ranked.size());
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (relevant.count(ranked[i]) != 0) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(relevant.size());
}

std::vector<std::string> Cutoffs::column_names() const {
  std::vector<std::string> out;
  for (auto k : precision) out.push_back("Precision@" + std::to_string(k));
  for (auto k : recall) out.push_back("Recall@" + std::to_string(k));
  for (auto k : map) out.push_back("MAP@" + std::to_string(k));
  return out;
}

QueryEval evaluate_query(const std::string& qid, const std::vector<std::string>& ranked,
                         const RelevantSet& relevant, const Cutoffs& cutoffs) {
  QueryEval q;
  q.qid = qid;
  q.num_relevant = relevant.size();
  for (auto k : cutoffs.precision) q.p_at[k] = precision_at_k(ranked, relevant, k);
  for (auto k : cutoffs.recall) q.r_at[k] = recall_at_k(ranked, relevant, k).value_or(0.0);
  for (auto k : cutoffs.map) q.ap_at[k] = average_precision_at_k(ranked, relevant, k).value_or(0.0);
  return q;
}

namespace {

struct RowLabel {
  std::string technique;
  std::string model;
  int technique_order = 99;
  int model_order = 99;
};

RowLabel label_for(const std::string& tag) {
  RowLabel label{tag, "", 99, 99};
  const auto dash = tag.find('-');
  if (dash == std::string::npos) return label;
  try {
    const Model m = parse_model(tag.substr(0, dash));
    const Technique t = parse_technique(tag.substr(dash + 1));
    label.technique = technique_display(t);
    label.model = model_display(m);
    for (int i = 0; i < 4; ++i) {
      if (kAllTechniques[i] == t) label.technique_order = i;
      if (kAllModels[i] == m) label.model_order = i;
    }
  } catch (const Error&) {
  }
  return label;
}

}  // namespace

EvalReport evaluate_runs(const std::vector<RunEntry>& runs, const JudgmentSet& qrels,
                         const Cutoffs& cutoffs) {
  for (auto k : cutoffs.precision) {
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "cutoffs must be >= 1");
  }
  for (auto k : cutoffs.recall) {
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "cutoffs must be >= 1");
  }
  for (auto k : cutoffs.map) {
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "cutoffs must be >= 1");
  }
  validate_run(runs);

  const auto judged_qids = qrels.qids();
  const std::set<std::string> known(judged_qids.begin(), judged_qids.end());

  // tag -> qid -> ranked doc ids
  std::map<std::string, std::map<std::string, std::vector<std::string>>> by_tag;
  for (const auto& e : runs) {
    if (known.count(e.qid) == 0) {
      throw Error(ErrorKind::Validation,
                  "run '" + e.tag + "' has query " + e.qid + " which is absent from the qrels");
    }
    by_tag[e.tag][e.qid].push_back(e.doc_id);
  }

  EvalReport report;
  report.cutoffs = cutoffs;
  std::vector<std::pair<std::string, RelevantSet>> evaluated;
  for (const auto& qid : judged_qids) {
    auto rel = qrels.relevant(qid);
    if (rel.empty()) {
      report.skipped.push_back(qid);
    } else {
      evaluated.emplace_back(qid, std::move(rel));
    }
  }
  report.evaluated_queries = evaluated.size();

  std::vector<std::pair<RowLabel, EvalRow>> rows;
  const std::size_t ncols = cutoffs.column_names().size();
  for (const auto& [tag, per_qid] : by_tag) {
    EvalRow row;
    row.tag = tag;
    RowLabel label = label_for(tag);
    row.technique = label.technique;
    row.model = label.model;
    row.values.assign(ncols, 0.0);
    static const std::vector<std::string> kNone;
    for (const auto& [qid, rel] : evaluated) {
      auto it = per_qid.find(qid);
      const auto& ranked = it == per_qid.end() ? kNone : it->second;
      QueryEval q = evaluate_query(qid, ranked, rel, cutoffs);
      std::size_t c = 0;
      for (auto k : cutoffs.precision) row.values[c++] += q.p_at[k];
      for (auto k : cutoffs.recall) row.values[c++] += q.r_at[k];
      for (auto k : cutoffs.map) row.values[c++] += q.ap_at[k];
      row.per_query.push_back(std::move(q));
    }
    if (!evaluated.empty()) {
      for (auto& v : row.values) v /= static_cast<double>(evaluated.size());
    }
    rows.emplace_back(std::move(label), std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.first.technique_order != b.first.technique_order) {
      return a.first.technique_order < b.first.technique_order;
    }
    if (a.first.model_order != b.first.model_order) return a.first.model_order < b.first.model_order;
    return a.second.tag < b.second.tag;
  });
  for (auto& r : rows) report.rows.push_back(std::move(r.second));
  return report;
}

std::string EvalReport::format_table() const {
  std::vector<std::string> header{"Technique", "Model"};
  for (auto& c : cutoffs.column_names()) header.push_back(c);
  std::vector<std::vector<std::string>> cells{header};
  for (const auto& r : rows) {
    std::vector<std::string> line{r.technique, r.model};
    for (double v : r.values) line.push_back(detail::fixed(v, 4));
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  std::string out;
  std::string previous_technique;
  for (std::size_t li = 0; li < cells.size(); ++li) {
    auto line = cells[li];
    if (li > 0) {
      if (line[0] == previous_technique) {
        line[0].clear();
      } else {
        previous_technique = line[0];
      }
    }
    for (std::size_t i = 0; i < line.size(); ++i) {
      out += line[i];
      if (i + 1 < line.size()) out.append(width[i] - line[i].size() + 2, ' ');
    }
    out += '\n';
    if (li == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w + 2;
      out.append(total - 2, '-');
      out += '\n';
    }
  }
  out += "queries evaluated: " + std::to_string(evaluated_queries);
  if (!skipped.empty()) {
    out += ", skipped (no relevant documents):";
    for (const auto& q : skipped) out += " " + q;
  }
  out += '\n';
  return out;
}

std::string EvalReport::format_tsv() const {
  std::string out = "technique\tmodel\ttag";
  for (auto& c : cutoffs.column_names()) out += "\t" + c;
  out += '\n';
  for (const auto& r : rows) {
    out += r.technique + "\t" + r.model + "\t" + r.tag;
    for (double v : r.values) out += "\t" + detail::fixed(v, 4);
    out += '\n';
  }
  return out;
}

std::string EvalReport::format_per_query() const {
  std::string out = "tag\tqid\tnum_relevant";
  for (auto& c : cutoffs.column_names()) out += "\t" + c;
  out += '\n';
  for (const auto& r : rows) {
    for (const auto& q : r.per_query) {
      out += r.tag + "\t" + q.qid + "\t" + std::to_string(q.num_relevant);
      for (auto k : cutoffs.precision) out += "\t" + detail::fixed(q.p_at.at(k), 4);
      for (auto k : cutoffs.recall) out += "\t" + detail::fixed(q.r_at.at(k), 4);
      for (auto k : cutoffs.map) out += "\t" + detail::fixed(q.ap_at.at(k), 4);
      out += '\n';
    }
  }
  return out;
}

}  // namespace irkit
