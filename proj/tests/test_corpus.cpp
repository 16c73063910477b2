#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "irkit/corpus.hpp"
#include "irkit/errors.hpp"
#include "irkit/textproc.hpp"
#include "util.hpp"

using irkit::Document;
using irkit::ErrorKind;
using irkit::JudgmentSet;
using irkit::RunEntry;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const irkit::Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

std::string query_xml(const std::string& qid, int total, int swr) {
  return "<queries><query><QID>" + qid + "</QID><totalWords>" + std::to_string(total) +
         "</totalWords><noOfWordsWithSWR>" + std::to_string(swr) +
         "</noOfWordsWithSWR><title>smog ky asrat lahore</title>"
         "<description>need</description></query></queries>";
}

}  // namespace

TEST_CASE("parse_documents examples") {
  const auto docs = irkit::parse_documents(
      "<documents><document><document_ID>URD-0070</document_ID><title>t</title><body>b</body>"
      "</document></documents>");
  REQUIRE(docs.size() == 1);
  CHECK(docs[0] == Document{"URD-0070", "t", "b", std::nullopt});

  CHECK(irkit::parse_documents("<documents/>").empty());
  CHECK(irkit::parse_documents("<documents>\n</documents>").empty());

  const std::string dup =
      "<documents>"
      "<document><document_ID>URD-0001</document_ID><title>a</title><body>b</body></document>"
      "<document><document_ID>URD-0001</document_ID><title>c</title><body>d</body></document>"
      "</documents>";
  CHECK(kind_of([&] { irkit::parse_documents(dup); }) == ErrorKind::Validation);
  try {
    irkit::parse_documents(dup);
  } catch (const irkit::Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("URD-0001") != std::string::npos);
    CHECK(msg.find("record 1") != std::string::npos);
    CHECK(msg.find("record 2") != std::string::npos);
  }
}

TEST_CASE("parse_documents errors") {
  try {
    irkit::parse_documents("<documents><document><title>x</title></documents>");
    FAIL("expected parse error");
  } catch (const irkit::ParseError& e) {
    CHECK(e.byte_offset() > 0);
  }
  const std::string missing =
      "<documents><document><title>t</title><body>b</body></document></documents>";
  try {
    irkit::parse_documents(missing);
    FAIL("expected record error");
  } catch (const irkit::Error& e) {
    CHECK(e.kind() == ErrorKind::Record);
    CHECK(std::string(e.what()).find("document_ID") != std::string::npos);
  }
}

TEST_CASE("parse_documents keeps order, source and normalizes text") {
  const auto docs = irkit::parse_documents(
      "<documents>"
      "<document><document_ID>B</document_ID><source>x.pk</source><title>e\xCC\x81</title>"
      "<body>1 &amp; 2</body></document>"
      "<document><document_ID>A</document_ID><title>t</title><body></body></document>"
      "</documents>");
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].doc_id == "B");
  CHECK(docs[0].source == std::optional<std::string>("x.pk"));
  CHECK(docs[0].title == "\xC3\xA9");
  CHECK(docs[0].body == "1 & 2");
  CHECK(docs[1].doc_id == "A");
  CHECK(irkit::parse_documents(irkit::write_documents(docs)) == docs);
}

TEST_CASE("parse_queries") {
  const auto qs = irkit::parse_queries(query_xml("Q03", 4, 3));
  REQUIRE(qs.size() == 1);
  CHECK(qs[0].qid == "Q03");
  CHECK(qs[0].total_words == 4);
  CHECK(qs[0].words_after_swr == 3);
  CHECK(qs[0].description == "need");

  irkit::QueryParseOptions strict{true};
  CHECK(kind_of([&] { irkit::parse_queries(query_xml("Q1", 8, 3), strict); }) ==
        ErrorKind::Validation);
  CHECK(kind_of([&] { irkit::parse_queries(query_xml("Q1", 1, 1), strict); }) ==
        ErrorKind::Validation);
  // Out-of-range lengths load when strict mode is off.
  CHECK(irkit::parse_queries(query_xml("Q1", 8, 3)).size() == 1);
  CHECK(kind_of([&] { irkit::parse_queries(query_xml("Q1", 3, 4)); }) == ErrorKind::Validation);
  CHECK(kind_of([&] {
          irkit::parse_queries("<queries><query><QID>Q1</QID><title>x</title></query></queries>");
        }) == ErrorKind::Record);

  const auto mini = irkit::parse_queries(irkit::detail::read_file(fixtures::data_path("mini/queries.xml")),
                                         strict);
  CHECK(mini.size() == 10);
  CHECK(irkit::parse_queries(irkit::write_queries(mini)) == mini);
}

TEST_CASE("qrels examples") {
  auto j = irkit::parse_qrels("Q03 URD-0070 1\n");
  CHECK(j.get("Q03", "URD-0070") == 1);
  j = irkit::parse_qrels("Q03 URD-0071 0\n");
  CHECK(j.get("Q03", "URD-0071") == 0);
  try {
    irkit::parse_qrels("Q03 URD-0070 1\nQ03 URD-0070 2\n");
    FAIL("expected format error");
  } catch (const irkit::FormatError& e) {
    CHECK(e.line() == 2);
  }
  // TREC four-column form, comments and blank lines.
  j = irkit::parse_qrels("# header\n\nQ1 0 D1 1\n");
  CHECK(j.get("Q1", "D1") == 1);
  CHECK_THROWS(irkit::parse_qrels("Q1 D1 1\nQ1 D1 0\n"));
}

TEST_CASE("qrels canonical order and round trip") {
  const auto j = irkit::parse_qrels("Q2 D1 1\nQ1 D9 0\nQ1 D10 1\n");
  CHECK(irkit::write_qrels(j) == "Q1 D10 1\nQ1 D9 0\nQ2 D1 1\n");

  std::mt19937 rng(11);
  for (int iter = 0; iter < 100; ++iter) {
    JudgmentSet js;
    const int n = static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      const std::string q = "Q" + std::to_string(rng() % 5);
      const std::string d = "URD-" + std::to_string(rng() % 50);
      if (!js.get(q, d)) js.add(q, d, static_cast<int>(rng() % 2));
    }
    const auto text = irkit::write_qrels(js);
    const auto back = irkit::parse_qrels(text);
    CHECK(back == js);
    CHECK(irkit::write_qrels(back) == text);
  }
}

TEST_CASE("run file examples") {
  const std::vector<RunEntry> one{{"Q01", "URD-0001", 1, 0.5, "bm25-base"}};
  CHECK(irkit::write_run(one) == "Q01 Q0 URD-0001 1 0.500000 bm25-base\n");
  CHECK(irkit::write_run({}).empty());
  const std::vector<RunEntry> gap{{"Q01", "A", 1, 0.5, "t"}, {"Q01", "B", 3, 0.4, "t"}};
  CHECK(kind_of([&] { irkit::write_run(gap); }) == ErrorKind::Validation);
  const std::vector<RunEntry> inversion{{"Q01", "A", 1, 0.5, "t"}, {"Q01", "B", 2, 0.6, "t"}};
  CHECK(kind_of([&] { irkit::validate_run(inversion); }) == ErrorKind::Validation);
  // Groups are per (qid, tag).
  const std::vector<RunEntry> two_tags{{"Q01", "A", 1, 0.5, "x"}, {"Q01", "A", 1, 0.9, "y"}};
  irkit::validate_run(two_tags);
  CHECK_THROWS(irkit::parse_run("Q01 Q0 A 1 0.5\n"));
}

TEST_CASE("run file round trip") {
  std::mt19937 rng(5);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<RunEntry> run;
    for (int q = 0; q < 3; ++q) {
      for (const std::string tag : {"bm25-base", "vsm-qe"}) {
        double score = static_cast<double>(rng() % 1000) / 7.0;
        const int n = static_cast<int>(rng() % 6);
        for (int r = 1; r <= n; ++r) {
          run.push_back(RunEntry{"Q" + std::to_string(q), "D" + std::to_string(r * 3), static_cast<std::size_t>(r),
                                 score, tag});
          score -= static_cast<double>(rng() % 100) / 13.0;
        }
      }
    }
    const auto text = irkit::write_run(run);
    const auto back = irkit::parse_run(text);
    CHECK(irkit::write_run(back) == text);
    REQUIRE(back.size() == run.size());
    for (std::size_t i = 0; i < run.size(); ++i) {
      CHECK(back[i].doc_id == run[i].doc_id);
      CHECK(back[i].rank == run[i].rank);
      CHECK(std::abs(back[i].score - run[i].score) <= 5e-7);
    }
  }
}

TEST_CASE("collection_stats small cases") {
  std::vector<Document> docs{{"A", "one two", "three", std::nullopt},
                             {"B", "", "four five six seven eight", std::nullopt}};
  const auto s = irkit::collection_stats(docs, {}, {});
  CHECK(s.total_documents == 2);
  CHECK(s.total_tokens == 8);
  CHECK(s.unique_tokens == 8);
  CHECK(s.min_doc_bytes == 12);
  CHECK(s.max_doc_bytes == 25);
  CHECK(s.avg_doc_bytes == doctest::Approx(18.5));
}

TEST_CASE("collection_stats query lengths mirror the published distribution") {
  // 50 queries whose lengths sum to 219: mean 4.38, range 2..7.
  std::vector<int> lengths;
  int sum = 0;
  for (int i = 0; i < 50; ++i) {
    lengths.push_back(2 + i % 6);
    sum += lengths.back();
  }
  for (int i = 0, excess = sum - 219; excess > 0; ++i) {
    if (lengths[i] > 2 && lengths[i] < 7) {
      --lengths[i];
      --excess;
    }
  }
  std::vector<irkit::Query> qs;
  for (int i = 0; i < 50; ++i) {
    std::string title;
    for (int w = 0; w < lengths[i]; ++w) title += "w" + std::to_string(w) + " ";
    qs.push_back(irkit::Query{"Q" + std::to_string(i), title, "", static_cast<std::size_t>(lengths[i]),
                              static_cast<std::size_t>(lengths[i])});
  }
  std::vector<Document> docs{{"A", "x", "y", std::nullopt}};
  const auto s = irkit::collection_stats(docs, qs, {});
  CHECK(s.avg_query_length == doctest::Approx(4.38).epsilon(1e-12));
  CHECK(s.min_query_length == 2);
  CHECK(s.max_query_length == 7);
}

TEST_CASE("collection_stats on the mini collection matches a standalone scanner") {
  const auto text = irkit::detail::read_file(fixtures::data_path("mini/docs.xml"));
  const auto docs = irkit::parse_documents(text);
  const auto stop = irkit::Lexicons::parse_stoplist(
      irkit::detail::read_file(fixtures::data_path("mini/stoplist.txt")));
  const auto s = irkit::collection_stats(docs, {}, stop);

  // Scanner over the raw XML: pull title and body text, split on spaces and
  // strip the punctuation used by the generator. Only the entity &amp; and
  // ASCII / Urdu sentence marks appear in the fixture.
  std::size_t total = 0;
  std::size_t kept = 0;
  std::set<std::string> unique;
  for (const std::string tag : {"title", "body"}) {
    const std::string open = "<" + tag + ">";
    const std::string close = "</" + tag + ">";
    for (std::size_t p = text.find(open); p != std::string::npos; p = text.find(open, p + 1)) {
      const std::size_t start = p + open.size();
      const std::string field = text.substr(start, text.find(close, start) - start);
      std::string word;
      auto flush = [&] {
        for (const std::string mark : {"۔", "،", "؟", "؛"}) {
          for (auto at = word.find(mark); at != std::string::npos; at = word.find(mark)) {
            word.erase(at, mark.size());
          }
        }
        word.erase(std::remove_if(word.begin(), word.end(),
                                  [](char c) { return c > 0 && std::ispunct(static_cast<unsigned char>(c)); }),
                   word.end());
        if (!word.empty()) {
          ++total;
          unique.insert(word);
          if (!stop.count(word)) ++kept;
        }
        word.clear();
      };
      for (char c : field) {
        if (c == ' ' || c == '\n' || c == '\t') {
          flush();
        } else {
          word.push_back(c);
        }
      }
      flush();
    }
  }
  CHECK(s.total_documents == 30);
  CHECK(s.total_tokens == total);
  CHECK(s.tokens_after_swr == kept);
  CHECK(s.unique_tokens == unique.size());
  CHECK(s.unique_tokens <= s.total_tokens);
}

TEST_CASE("stats renderings") {
  std::vector<Document> docs{{"A", "one two", "three", std::nullopt}};
  const auto s = irkit::collection_stats(docs, {}, {});
  const auto json = irkit::format_stats_json(s);
  CHECK(json.find("\"total_tokens\": 3") != std::string::npos);
  CHECK(irkit::format_stats_table(s).find("3") != std::string::npos);
}
