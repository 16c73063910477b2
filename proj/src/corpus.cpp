#include "irkit/corpus.hpp"

#include <expat.h>

#include <algorithm>
#include <exception>
#include <functional>
#include <limits>
#include <memory>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "irkit/errors.hpp"
#include "irkit/textproc.hpp"
#include "util.hpp"

namespace irkit {
namespace {

// Collects <root><record><field>text</field>...</record>...</root> into flat
// field maps. Text inside nested elements below a field is kept.
struct RecordReader {
  struct Record {
    std::unordered_map<std::string, std::string> fields;
    std::size_t byte_offset = 0;
  };

  std::string root_name;
  std::string record_name;
  std::vector<Record> records;

  XML_Parser parser = nullptr;
  int depth = 0;
  std::string current_field;
  std::string text;
  std::exception_ptr error;

  void fail(std::exception_ptr e) {
    if (!error) error = std::move(e);
    XML_StopParser(parser, XML_FALSE);
  }

  static void on_start(void* self, const XML_Char* name, const XML_Char**) {
    auto& r = *static_cast<RecordReader*>(self);
    const std::string n(name);
    ++r.depth;
    const auto offset = static_cast<std::size_t>(XML_GetCurrentByteIndex(r.parser));
    if (r.depth == 1) {
      if (n != r.root_name) {
        r.fail(std::make_exception_ptr(
            ParseError("expected root element <" + r.root_name + ">, found <" + n + ">", offset)));
      }
    } else if (r.depth == 2) {
      if (n != r.record_name) {
        r.fail(std::make_exception_ptr(ParseError(
            "expected <" + r.record_name + "> inside <" + r.root_name + ">, found <" + n + ">",
            offset)));
        return;
      }
      r.records.push_back(Record{{}, offset});
    } else if (r.depth == 3) {
      r.current_field = n;
      r.text.clear();
    }
  }

  static void on_end(void* self, const XML_Char*) {
    auto& r = *static_cast<RecordReader*>(self);
    if (r.depth == 3 && !r.records.empty()) {
      auto& fields = r.records.back().fields;
      if (fields.count(r.current_field) != 0) {
        r.fail(std::make_exception_ptr(Error(
            ErrorKind::Record, "record " + std::to_string(r.records.size()) +
                                   " has a repeated <" + r.current_field + "> element")));
      }
      fields[r.current_field] = r.text;
      r.current_field.clear();
    }
    --r.depth;
  }

  static void on_text(void* self, const XML_Char* s, int len) {
    auto& r = *static_cast<RecordReader*>(self);
    if (r.depth >= 3) r.text.append(s, static_cast<std::size_t>(len));
  }

  void parse(std::string_view bytes) {
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> p(
        XML_ParserCreate("UTF-8"), XML_ParserFree);
    if (!p) throw Error(ErrorKind::InvalidArgument, "cannot create XML parser");
    parser = p.get();
    XML_SetUserData(parser, this);
    XML_SetElementHandler(parser, &RecordReader::on_start, &RecordReader::on_end);
    XML_SetCharacterDataHandler(parser, &RecordReader::on_text);
    if (bytes.size() > static_cast<std::size_t>(std::numeric_limits<int>::max())) {
      throw Error(ErrorKind::InvalidArgument, "XML input too large");
    }
    const auto status = XML_Parse(parser, bytes.data(), static_cast<int>(bytes.size()), XML_TRUE);
    if (error) std::rethrow_exception(error);
    if (status != XML_STATUS_OK) {
      throw ParseError(std::string("malformed XML: ") + XML_ErrorString(XML_GetErrorCode(parser)),
                       static_cast<std::size_t>(XML_GetCurrentByteIndex(parser)));
    }
  }
};

std::string record_where(std::size_t index, std::size_t offset) {
  return "record " + std::to_string(index + 1) + " (byte " + std::to_string(offset) + ")";
}

const std::string* find_field(const RecordReader::Record& rec, const std::string& name) {
  auto it = rec.fields.find(name);
  return it == rec.fields.end() ? nullptr : &it->second;
}

const std::string& require_field(const RecordReader::Record& rec, std::size_t index,
                                 const std::string& name) {
  const std::string* v = find_field(rec, name);
  if (v == nullptr) {
    throw Error(ErrorKind::Record,
                record_where(index, rec.byte_offset) + " is missing <" + name + ">");
  }
  return *v;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::vector<Document> parse_documents(std::string_view bytes) {
  RecordReader reader;
  reader.root_name = "documents";
  reader.record_name = "document";
  reader.parse(bytes);

  std::vector<Document> docs;
  docs.reserve(reader.records.size());
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < reader.records.size(); ++i) {
    const auto& rec = reader.records[i];
    Document d;
    d.doc_id = std::string(detail::trim(nfc(require_field(rec, i, "document_ID"))));
    if (d.doc_id.empty()) {
      throw Error(ErrorKind::Record, record_where(i, rec.byte_offset) + " has an empty <document_ID>");
    }
    if (const auto* t = find_field(rec, "title")) d.title = nfc(*t);
    if (const auto* b = find_field(rec, "body")) d.body = nfc(*b);
    if (const auto* s = find_field(rec, "source")) d.source = std::string(detail::trim(*s));
    if (find_field(rec, "title") == nullptr && find_field(rec, "body") == nullptr) {
      throw Error(ErrorKind::Record, record_where(i, rec.byte_offset) + " (" + d.doc_id +
                                         ") has neither <title> nor <body>");
    }
    if (detail::trim(d.title).empty() && detail::trim(d.body).empty()) {
      throw Error(ErrorKind::Validation, record_where(i, rec.byte_offset) + " (" + d.doc_id +
                                             ") has empty title and body");
    }
    auto [it, inserted] = seen.emplace(d.doc_id, i);
    if (!inserted) {
      const auto& first = reader.records[it->second];
      throw Error(ErrorKind::Validation, "duplicate document_ID '" + d.doc_id + "' in " +
                                             record_where(it->second, first.byte_offset) +
                                             " and " + record_where(i, rec.byte_offset));
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

std::vector<Query> parse_queries(std::string_view bytes, QueryParseOptions options) {
  RecordReader reader;
  reader.root_name = "queries";
  reader.record_name = "query";
  reader.parse(bytes);

  std::vector<Query> queries;
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < reader.records.size(); ++i) {
    const auto& rec = reader.records[i];
    const std::string where = record_where(i, rec.byte_offset);
    Query q;
    q.qid = std::string(detail::trim(nfc(require_field(rec, i, "QID"))));
    const auto& total = require_field(rec, i, "totalWords");
    const auto& after = require_field(rec, i, "noOfWordsWithSWR");
    q.title = nfc(require_field(rec, i, "title"));
    q.description = nfc(require_field(rec, i, "description"));
    if (q.qid.empty()) throw Error(ErrorKind::Record, where + " has an empty <QID>");
    if (!detail::parse_size(detail::trim(total), q.total_words)) {
      throw Error(ErrorKind::Record, where + ": <totalWords> is not a count: '" + total + "'");
    }
    if (!detail::parse_size(detail::trim(after), q.words_after_swr)) {
      throw Error(ErrorKind::Record, where + ": <noOfWordsWithSWR> is not a count: '" + after + "'");
    }
    if (q.words_after_swr > q.total_words) {
      throw Error(ErrorKind::Validation, "query " + q.qid + ": noOfWordsWithSWR (" +
                                             std::to_string(q.words_after_swr) +
                                             ") exceeds totalWords (" +
                                             std::to_string(q.total_words) + ")");
    }
    if (options.strict && (q.total_words < kMinQueryWords || q.total_words > kMaxQueryWords)) {
      throw Error(ErrorKind::Validation,
                  "query " + q.qid + ": totalWords=" + std::to_string(q.total_words) +
                      " outside the allowed range [" + std::to_string(kMinQueryWords) + ", " +
                      std::to_string(kMaxQueryWords) + "]");
    }
    auto [it, inserted] = seen.emplace(q.qid, i);
    if (!inserted) {
      throw Error(ErrorKind::Validation, "duplicate QID '" + q.qid + "' in records " +
                                             std::to_string(it->second + 1) + " and " +
                                             std::to_string(i + 1));
    }
    queries.push_back(std::move(q));
  }
  return queries;
}

std::string write_documents(const std::vector<Document>& docs) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<documents>\n";
  for (const auto& d : docs) {
    out += "  <document>\n";
    out += "    <document_ID>" + xml_escape(d.doc_id) + "</document_ID>\n";
    if (d.source) out += "    <source>" + xml_escape(*d.source) + "</source>\n";
    out += "    <title>" + xml_escape(d.title) + "</title>\n";
    out += "    <body>" + xml_escape(d.body) + "</body>\n";
    out += "  </document>\n";
  }
  out += "</documents>\n";
  return out;
}

std::string write_queries(const std::vector<Query>& queries) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<queries>\n";
  for (const auto& q : queries) {
    out += "  <query>\n";
    out += "    <QID>" + xml_escape(q.qid) + "</QID>\n";
    out += "    <totalWords>" + std::to_string(q.total_words) + "</totalWords>\n";
    out += "    <noOfWordsWithSWR>" + std::to_string(q.words_after_swr) + "</noOfWordsWithSWR>\n";
    out += "    <title>" + xml_escape(q.title) + "</title>\n";
    out += "    <description>" + xml_escape(q.description) + "</description>\n";
    out += "  </query>\n";
  }
  out += "</queries>\n";
  return out;
}

// ---------------------------------------------------------------------------
// Judgments

void JudgmentSet::add(const std::string& qid, const std::string& doc_id, int relevance) {
  if (relevance != 0 && relevance != 1) {
    throw Error(ErrorKind::Validation, "relevance for (" + qid + ", " + doc_id +
                                           ") must be 0 or 1, got " + std::to_string(relevance));
  }
  if (!entries_.emplace(JudgmentKey{qid, doc_id}, relevance).second) {
    throw Error(ErrorKind::Validation, "duplicate judgment for (" + qid + ", " + doc_id + ")");
  }
}

std::optional<int> JudgmentSet::get(const std::string& qid, const std::string& doc_id) const {
  auto it = entries_.find(JudgmentKey{qid, doc_id});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::unordered_set<std::string> JudgmentSet::relevant(const std::string& qid) const {
  std::unordered_set<std::string> out;
  for (auto it = entries_.lower_bound(JudgmentKey{qid, ""});
       it != entries_.end() && it->first.first == qid; ++it) {
    if (it->second == 1) out.insert(it->first.second);
  }
  return out;
}

std::size_t JudgmentSet::num_relevant(const std::string& qid) const {
  return relevant(qid).size();
}

std::size_t JudgmentSet::total_relevant() const {
  return static_cast<std::size_t>(std::count_if(
      entries_.begin(), entries_.end(), [](const auto& kv) { return kv.second == 1; }));
}

std::vector<std::string> JudgmentSet::qids() const {
  std::vector<std::string> out;
  for (const auto& [key, rel] : entries_) {
    if (out.empty() || out.back() != key.first) out.push_back(key.first);
  }
  return out;
}

JudgmentSet parse_qrels(std::string_view text, std::string judge_id) {
  JudgmentSet set(std::move(judge_id));
  std::size_t lineno = 0;
  for (auto line : detail::split_lines(text)) {
    ++lineno;
    auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto cols = detail::split_ws(trimmed);
    if (cols.size() != 3 && cols.size() != 4) {
      throw FormatError("expected 'qid doc_id relevance', got " + std::to_string(cols.size()) +
                            " columns",
                        lineno);
    }
    const auto rel = cols.back();
    if (rel != "0" && rel != "1") {
      throw FormatError("relevance must be 0 or 1, got '" + std::string(rel) + "'", lineno);
    }
    const std::string qid(cols[0]);
    const std::string doc(cols[cols.size() - 2]);
    try {
      set.add(qid, doc, rel == "1" ? 1 : 0);
    } catch (const Error& e) {
      throw FormatError(e.what(), lineno);
    }
  }
  return set;
}

std::string write_qrels(const JudgmentSet& judgments) {
  std::string out;
  for (const auto& [key, rel] : judgments.entries()) {
    out += key.first;
    out += ' ';
    out += key.second;
    out += rel == 1 ? " 1\n" : " 0\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Runs

namespace {

void validate_run_impl(const std::vector<RunEntry>& entries,
                       const std::function<void(std::size_t, const std::string&)>& fail) {
  struct GroupState {
    std::size_t last_rank = 0;
    double last_score = 0.0;
    std::unordered_set<std::string> docs;
  };
  std::map<std::pair<std::string, std::string>, GroupState> groups;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.qid.empty() || e.doc_id.empty() || e.tag.empty()) {
      fail(i, "empty qid, doc_id or tag");
    }
    auto& g = groups[{e.qid, e.tag}];
    if (e.rank != g.last_rank + 1) {
      fail(i, "rank " + std::to_string(e.rank) + " follows rank " + std::to_string(g.last_rank) +
                  " in group (" + e.qid + ", " + e.tag + ")");
    }
    if (g.last_rank > 0 && e.score > g.last_score) {
      fail(i, "score " + detail::fixed(e.score, 6) + " at rank " + std::to_string(e.rank) +
                  " exceeds the score at rank " + std::to_string(g.last_rank) + " in group (" +
                  e.qid + ", " + e.tag + ")");
    }
    if (!g.docs.insert(e.doc_id).second) {
      fail(i, "document " + e.doc_id + " appears twice in group (" + e.qid + ", " + e.tag + ")");
    }
    g.last_rank = e.rank;
    g.last_score = e.score;
  }
}

bool has_space(const std::string& s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n'; });
}

}  // namespace

void validate_run(const std::vector<RunEntry>& entries) {
  validate_run_impl(entries, [](std::size_t i, const std::string& msg) {
    throw Error(ErrorKind::Validation, "run entry " + std::to_string(i + 1) + ": " + msg);
  });
}

std::string write_run(const std::vector<RunEntry>& entries) {
  validate_run(entries);
  std::string out;
  for (const auto& e : entries) {
    if (has_space(e.qid) || has_space(e.doc_id) || has_space(e.tag)) {
      throw Error(ErrorKind::Validation, "run fields must not contain whitespace");
    }
    out += e.qid;
    out += " Q0 ";
    out += e.doc_id;
    out += ' ';
    out += std::to_string(e.rank);
    out += ' ';
    out += detail::fixed(e.score, 6);
    out += ' ';
    out += e.tag;
    out += '\n';
  }
  return out;
}

std::vector<RunEntry> parse_run(std::string_view text) {
  std::vector<RunEntry> entries;
  std::vector<std::size_t> lines;
  std::size_t lineno = 0;
  for (auto line : detail::split_lines(text)) {
    ++lineno;
    auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto cols = detail::split_ws(trimmed);
    if (cols.size() != 6) {
      throw FormatError("expected 6 columns 'qid Q0 doc_id rank score tag', got " +
                            std::to_string(cols.size()),
                        lineno);
    }
    RunEntry e;
    e.qid = std::string(cols[0]);
    e.doc_id = std::string(cols[2]);
    if (!detail::parse_size(cols[3], e.rank) || e.rank == 0) {
      throw FormatError("rank must be a positive integer, got '" + std::string(cols[3]) + "'",
                        lineno);
    }
    if (!detail::parse_double(cols[4], e.score)) {
      throw FormatError("score is not a number: '" + std::string(cols[4]) + "'", lineno);
    }
    e.tag = std::string(cols[5]);
    entries.push_back(std::move(e));
    lines.push_back(lineno);
  }
  validate_run_impl(entries, [&](std::size_t i, const std::string& msg) {
    throw FormatError(msg, lines[i]);
  });
  return entries;
}

// ---------------------------------------------------------------------------
// Statistics

StatsReport collection_stats(const std::vector<Document>& docs,
                             const std::vector<Query>& queries,
                             const std::unordered_set<std::string>& stoplist) {
  StatsReport s;
  s.total_documents = docs.size();
  std::unordered_set<std::string> unique;
  std::size_t byte_total = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto& d = docs[i];
    for (const auto* field : {&d.title, &d.body}) {
      for (auto& t : tokenize(*field)) {
        ++s.total_tokens;
        if (stoplist.count(t) == 0) ++s.tokens_after_swr;
        unique.insert(std::move(t));
      }
    }
    const std::size_t bytes = d.title.size() + d.body.size();
    byte_total += bytes;
    s.min_doc_bytes = i == 0 ? bytes : std::min(s.min_doc_bytes, bytes);
    s.max_doc_bytes = std::max(s.max_doc_bytes, bytes);
  }
  s.unique_tokens = unique.size();
  if (!docs.empty()) s.avg_doc_bytes = static_cast<double>(byte_total) / docs.size();

  s.total_queries = queries.size();
  std::unordered_set<std::string> query_unique;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    auto tokens = tokenize(queries[i].title);
    const std::size_t len = tokens.size();
    s.query_token_total += len;
    s.min_query_length = i == 0 ? len : std::min(s.min_query_length, len);
    s.max_query_length = std::max(s.max_query_length, len);
    for (auto& t : tokens) query_unique.insert(std::move(t));
  }
  s.query_unique_tokens = query_unique.size();
  if (!queries.empty()) {
    s.avg_query_length = static_cast<double>(s.query_token_total) / queries.size();
    s.avg_docs_per_query = static_cast<double>(docs.size()) / queries.size();
  }
  return s;
}

std::string format_stats_table(const StatsReport& s) {
  const std::vector<std::pair<std::string, std::string>> rows = {
      {"Total Documents", std::to_string(s.total_documents)},
      {"Total Tokens in Documents", std::to_string(s.total_tokens)},
      {"Tokens after Stop Words Removal", std::to_string(s.tokens_after_swr)},
      {"Unique Tokens in Documents", std::to_string(s.unique_tokens)},
      {"Smallest Document (bytes)", std::to_string(s.min_doc_bytes)},
      {"Largest Document (bytes)", std::to_string(s.max_doc_bytes)},
      {"Average Document (bytes)", detail::fixed(s.avg_doc_bytes, 2)},
      {"Total Queries", std::to_string(s.total_queries)},
      {"Total Tokens in Queries", std::to_string(s.query_token_total)},
      {"Unique Tokens in Queries", std::to_string(s.query_unique_tokens)},
      {"Minimum Query Length", std::to_string(s.min_query_length)},
      {"Maximum Query Length", std::to_string(s.max_query_length)},
      {"Average Query Length", detail::fixed(s.avg_query_length, 2)},
      {"Average Documents for each Query", detail::fixed(s.avg_docs_per_query, 2)},
  };
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  std::string out;
  for (const auto& [k, v] : rows) {
    out += k;
    out.append(width - k.size() + 2, ' ');
    out += v;
    out += '\n';
  }
  return out;
}

std::string format_stats_json(const StatsReport& s) {
  nlohmann::ordered_json j;
  j["total_documents"] = s.total_documents;
  j["total_tokens"] = s.total_tokens;
  j["tokens_after_swr"] = s.tokens_after_swr;
  j["unique_tokens"] = s.unique_tokens;
  j["total_queries"] = s.total_queries;
  j["query_token_total"] = s.query_token_total;
  j["query_unique_tokens"] = s.query_unique_tokens;
  j["avg_docs_per_query"] = s.avg_docs_per_query;
  j["min_doc_bytes"] = s.min_doc_bytes;
  j["max_doc_bytes"] = s.max_doc_bytes;
  j["avg_doc_bytes"] = s.avg_doc_bytes;
  j["min_query_length"] = s.min_query_length;
  j["max_query_length"] = s.max_query_length;
  j["avg_query_length"] = s.avg_query_length;
  return j.dump(2) + "\n";
}

}  // namespace irkit
