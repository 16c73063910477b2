#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "irkit/collection.hpp"
#include "irkit/errors.hpp"
#include "pool_fixture.hpp"
#include "util.hpp"

using irkit::ContingencyTable;
using irkit::Document;
using irkit::ErrorKind;
using irkit::JudgmentSet;
using irkit::Pool;

namespace {

Document doc(const std::string& id, const std::string& title, const std::string& body) {
  return Document{id, title, body, std::nullopt};
}

JudgmentSet load(const std::string& name) {
  return irkit::parse_qrels(irkit::detail::read_file(fixtures::data_path("agreement/" + name)), name);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const irkit::Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("build_pool: identical rankings pool to 20 per query") {
  std::vector<Document> docs;
  for (int i = 0; i < 20; ++i) {
    std::string body = "smog";
    for (int k = 0; k <= i % 4; ++k) body += " x";
    docs.push_back(doc("D" + std::to_string(100 + i), "smog", body));
  }
  const irkit::PipelineConfig bm25;
  irkit::PipelineConfig vsm;
  vsm.model = irkit::Model::Vsm;
  const auto index = irkit::Index::build(docs, bm25, irkit::Lexicons{});
  const std::vector<irkit::Query> qs{{"Q1", "smog", "", 1, 1}};
  const auto pool = irkit::build_pool(index, qs, {bm25, vsm}, irkit::Lexicons{}, 20);
  CHECK(pool.query_size("Q1") == 20);
  CHECK(pool.total_entries() == 40);
  CHECK(pool.contributors() == std::vector<std::string>{"bm25-base", "vsm-base"});
}

TEST_CASE("pool: disjoint runs give 40, provenance and dump") {
  Pool pool(20);
  for (int r = 1; r <= 20; ++r) {
    pool.add("Q1", "A" + std::to_string(r), "bm25-base", r);
    pool.add("Q1", "B" + std::to_string(r), "lmds-base", r);
  }
  CHECK(pool.query_size("Q1") == 40);
  pool.add("Q2", "X", "bm25-base", 3);
  pool.add("Q2", "X", "lmds-base", 1);
  CHECK(pool.dump().find("Q2\tX\tbm25-base,lmds-base\t1\n") != std::string::npos);
  CHECK(kind_of([&] { pool.add("Q2", "Y", "bm25-base", 21); }) == ErrorKind::Validation);
  CHECK(kind_of([&] { pool.add("Q2", "X", "bm25-base", 4); }) == ErrorKind::Validation);
}

TEST_CASE("build_pool: size bounds and monotonicity on the mini collection") {
  const auto docs = irkit::parse_documents(irkit::detail::read_file(fixtures::data_path("mini/docs.xml")));
  const auto qs = irkit::parse_queries(irkit::detail::read_file(fixtures::data_path("mini/queries.xml")));
  const irkit::PipelineConfig base;
  const auto index = irkit::Index::build(docs, base, irkit::Lexicons{});
  std::vector<irkit::PipelineConfig> configs;
  std::vector<Pool> pools;
  for (auto m : irkit::kAllModels) {
    auto c = base;
    c.model = m;
    configs.push_back(c);
    pools.push_back(irkit::build_pool(index, qs, configs, irkit::Lexicons{}, 5));
  }
  for (std::size_t i = 0; i < pools.size(); ++i) {
    for (const auto& q : qs) {
      CHECK(pools[i].query_size(q.qid) <= 5 * (i + 1));
      if (i > 0) CHECK(pools[i].query_size(q.qid) >= pools[i - 1].query_size(q.qid));
    }
  }
  std::vector<std::string> warnings;
  const std::vector<irkit::Query> none{{"QX", "nothing matches", "", 2, 2}};
  const auto empty = irkit::build_pool(index, none, configs, irkit::Lexicons{}, 5, &warnings);
  CHECK(empty.query_size("QX") == 0);
  CHECK(warnings.size() == 1);
}

TEST_CASE("dedup examples") {
  Pool pool(20);
  pool.add("Q1", "D1", "bm25-base", 1);
  pool.add("Q2", "D1", "bm25-base", 1);
  pool.add("Q2", "D3", "bm25-base", 2);
  pool.add("Q1", "D2", "lmds-base", 1);
  const std::vector<Document> docs{doc("D1", "t", "same"), doc("D2", "other", "text"), doc("D3", "other", "text")};
  const auto res = irkit::dedup(pool, docs);
  CHECK(res.unique_docs == std::vector<std::string>{"D1", "D2"});
  CHECK(res.replaced.at("D3") == "D2");
  CHECK(res.input_entries == 4);
  CHECK(res.pool.query_size("Q2") == 2);
  CHECK(res.pool.queries().at("Q2").count("D2") == 1);

  // Content is compared after NFC.
  const std::vector<Document> nfc_docs{doc("D1", "\xC3\xA9", "x"), doc("D2", "e\xCC\x81", "x"), doc("D3", "y", "z")};
  CHECK(irkit::content_fingerprint(nfc_docs[0]) == irkit::content_fingerprint(nfc_docs[1]));
  CHECK(irkit::dedup(pool, nfc_docs).unique_docs.size() == 2);

  Pool missing(20);
  missing.add("Q1", "nope", "t", 1);
  CHECK(kind_of([&] { irkit::dedup(missing, docs); }) == ErrorKind::Validation);
}

TEST_CASE("dedup of the planted 2000-entry pool") {
  const auto f = pool_fixture::build();
  CHECK(f.pool.total_entries() == 2000);
  const auto res = irkit::dedup(f.pool, f.docs);
  CHECK(res.unique_docs.size() == 1096);
  const auto again = irkit::dedup(res.pool, f.docs);
  CHECK(again.unique_docs == res.unique_docs);
  CHECK(again.pool.dump() == res.pool.dump());
}

TEST_CASE("dedup properties on random pools") {
  std::mt19937 rng(77);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<Document> docs;
    const int n = 1 + static_cast<int>(rng() % 60);
    for (int i = 0; i < n; ++i) {
      docs.push_back(doc("D" + std::to_string(i), "t" + std::to_string(rng() % 8), "b" + std::to_string(rng() % 3)));
    }
    Pool pool(10);
    for (int q = 0; q < 4; ++q) {
      for (const std::string tag : {"a", "b"}) {
        std::set<int> used;
        for (int r = 1; r <= 10; ++r) {
          const int d = static_cast<int>(rng() % n);
          if (!used.insert(d).second) continue;
          pool.add("Q" + std::to_string(q), "D" + std::to_string(d), tag, r);
        }
      }
    }
    const auto once = irkit::dedup(pool, docs);
    const auto twice = irkit::dedup(once.pool, docs);
    CHECK(twice.unique_docs == once.unique_docs);
    CHECK(twice.pool.dump() == once.pool.dump());
    CHECK(once.pool.total_entries() <= pool.total_entries());
    std::set<std::string> prints;
    for (const auto& id : once.unique_docs) {
      const auto& d = *std::find_if(docs.begin(), docs.end(), [&](const Document& x) { return x.doc_id == id; });
      CHECK(prints.insert(irkit::content_fingerprint(d)).second);
    }
  }
}

TEST_CASE("contingency on the agreement fixtures") {
  const auto s1 = load("s1.qrels");
  const auto s2 = load("s2.qrels");
  CHECK(irkit::contingency(s1, s2) == ContingencyTable{701, 31, 112, 252});
  CHECK(irkit::contingency(s1, s1) == ContingencyTable{813, 0, 0, 283});

  const auto other = irkit::parse_qrels("Q99 X 1\n", "s9");
  try {
    irkit::contingency(s1, other);
    FAIL("expected mismatch");
  } catch (const irkit::Error& e) {
    CHECK(e.kind() == ErrorKind::Mismatch);
    const std::string msg = e.what();
    CHECK(msg.find("Q99") != std::string::npos);
    CHECK(msg.find("more") != std::string::npos);
  }
}

TEST_CASE("kappa examples") {
  const auto k = irkit::kappa(ContingencyTable{701, 31, 112, 252});
  CHECK(k.observed == doctest::Approx(953.0 / 1096.0));
  CHECK(k.observed == doctest::Approx(0.87).epsilon(0.005));
  CHECK(*k.kappa > 0.68);
  CHECK(*k.kappa < 0.70);
  CHECK(*irkit::kappa(ContingencyTable{10, 0, 0, 10}).kappa == 1.0);
  // Chance-level: independent marginals.
  CHECK(*irkit::kappa(ContingencyTable{25, 25, 25, 25}).kappa == doctest::Approx(0.0));
  CHECK_FALSE(irkit::kappa(ContingencyTable{10, 0, 0, 0}).kappa.has_value());
  CHECK_THROWS(irkit::kappa(ContingencyTable{}));
}

TEST_CASE("kappa range and symmetry") {
  std::mt19937 rng(5);
  for (int iter = 0; iter < 2000; ++iter) {
    ContingencyTable t{rng() % 50, rng() % 50, rng() % 50, rng() % 50};
    if (t.n() == 0) continue;
    const auto k = irkit::kappa(t);
    const auto swapped = irkit::kappa(ContingencyTable{t.a, t.c, t.b, t.d});
    CHECK(k.kappa.has_value() == swapped.kappa.has_value());
    if (!k.kappa) continue;
    CHECK(*k.kappa >= -1.0 - 1e-12);
    CHECK(*k.kappa <= 1.0 + 1e-12);
    CHECK(*k.kappa == doctest::Approx(*swapped.kappa).epsilon(1e-12));
  }
}

TEST_CASE("resolve_conflicts on the agreement fixtures") {
  const auto s1 = load("s1.qrels");
  const auto s2 = load("s2.qrels");
  const auto s3 = load("s3.qrels");
  CHECK(irkit::conflicts(s1, s2).size() == 143);
  const auto merged = irkit::resolve_conflicts(s1, s2, s3);
  CHECK(merged.conflicts == 143);
  CHECK(merged.agreed_relevant == 701);
  CHECK(merged.third_judge_relevant == 92);
  CHECK(merged.judgments.total_relevant() == 793);
  CHECK(merged.judgments.size() == 1096);
  for (const auto& [key, rel] : merged.judgments.entries()) {
    if (merged.source.at(key) == irkit::JudgmentSource::Agreed) {
      CHECK(rel == *s1.get(key.first, key.second));
      CHECK(rel == *s2.get(key.first, key.second));
    } else {
      CHECK(rel == *s3.get(key.first, key.second));
    }
  }
  const auto sheet = irkit::conflict_worksheet(s1, s2);
  CHECK(std::count(sheet.begin(), sheet.end(), '\n') == 143);
}

TEST_CASE("resolve_conflicts coverage rules") {
  const auto j1 = irkit::parse_qrels("Q1 A 1\nQ1 B 0\nQ1 C 1\n");
  // Zero conflicts: the merge is the agreement and j3 must be empty.
  const auto merged = irkit::resolve_conflicts(j1, j1, JudgmentSet{});
  CHECK(merged.judgments == j1);
  CHECK(merged.conflicts == 0);
  CHECK(kind_of([&] { irkit::resolve_conflicts(j1, j1, irkit::parse_qrels("Q1 A 1\n")); }) ==
        ErrorKind::Coverage);

  const auto j2 = irkit::parse_qrels("Q1 A 1\nQ1 B 1\nQ1 C 1\n");
  CHECK(kind_of([&] { irkit::resolve_conflicts(j1, j2, JudgmentSet{}); }) == ErrorKind::Coverage);
  CHECK(kind_of([&] { irkit::resolve_conflicts(j1, j2, irkit::parse_qrels("Q1 B 1\nQ1 A 0\n")); }) ==
        ErrorKind::Coverage);
  const auto ok = irkit::resolve_conflicts(j1, j2, irkit::parse_qrels("Q1 B 1\n"));
  CHECK(ok.judgments.total_relevant() == ok.agreed_relevant + ok.third_judge_relevant);
  CHECK(ok.judgments.total_relevant() == 3);
}
