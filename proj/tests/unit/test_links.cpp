#include <cmath>
#include <fstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "issuelens/links.hpp"

using namespace issuelens;
using namespace issuelens::testing;

namespace {

DocumentVector sparse(std::vector<std::pair<std::size_t, double>> entries) {
  DocumentVector v;
  v.sparse = std::move(entries);
  v.norm = euclidean_norm(v);
  return v;
}

Issue with_text(std::string key, std::string summary, std::string description) {
  Issue x = make_issue(std::move(key), "T", make_utc(2021, 5, 5));
  x.summary = std::move(summary);
  x.description = std::move(description);
  return x;
}

}  // namespace

TEST_SUITE("links") {

TEST_CASE("tfidf formula") {
  const TfidfModel m = TfidfModel::fit({"a b", "a c"});
  CHECK(m.document_count() == 2);
  CHECK(m.terms() == std::vector<std::string>{"a", "b", "c"});
  CHECK(m.idf("a") == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.idf("b") == doctest::Approx(std::log(1.5) + 1.0).epsilon(1e-15));
  const DocumentVector v = m.embed("a b");
  REQUIRE(v.sparse.size() == 2);
  CHECK(v.sparse[1].second > v.sparse[0].second);
  CHECK(v.norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.document_frequency("a") == 2);
  CHECK(m.document_frequency("zzz") == 0);
  CHECK_THROWS_AS(m.idf("zzz"), std::out_of_range);
  CHECK_THROWS_AS(TfidfModel::fit({"", " . "}), std::invalid_argument);
}

TEST_CASE("embedding contracts") {
  const std::vector<std::string> docs = {"The login page hangs", "the login page hangs",
                                         "Export fails on large files"};
  const TfidfModel m = TfidfModel::fit(docs);
  CHECK(m == TfidfModel::fit(docs));
  CHECK(cosine_similarity(m.embed(docs[0]), m.embed(docs[1])) == doctest::Approx(1.0).epsilon(1e-12));
  const DocumentVector oov = m.embed("completely unseen words");
  CHECK(oov.sparse.empty());
  CHECK(oov.norm == 0.0);
  const DocumentVector base = m.embed(docs[2]);
  const DocumentVector plus = m.embed(docs[2] + " qwertyuiop");
  CHECK(base.sparse == plus.sparse);
  for (std::size_t i = 0; i < m.vocabulary_size(); ++i) {
    CHECK(m.document_frequency(m.terms()[i]) >= 1);
    CHECK(m.document_frequency(m.terms()[i]) <= m.document_count());
    CHECK(*m.term_id(m.terms()[i]) == i);
  }
}

TEST_CASE("cosine") {
  const DocumentVector a = DocumentVector::from_dense({1, 0});
  const DocumentVector b = DocumentVector::from_dense({1 / std::sqrt(2.0), 1 / std::sqrt(2.0)});
  CHECK(cosine_similarity(a, b) == doctest::Approx(0.70710678118654752).epsilon(1e-12));
  CHECK(cosine_similarity(sparse({{0, 1.0}}), sparse({{1, 2.0}})) == 0.0);
  CHECK(cosine_similarity(DocumentVector::from_dense({0, 0}), a) == 0.0);
  CHECK_THROWS_AS(cosine_similarity(a, DocumentVector::from_dense({1, 2, 3})), std::invalid_argument);
  CHECK_THROWS_AS(cosine_similarity(a, sparse({{0, 1.0}})), std::invalid_argument);

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> real(-5, 5);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> x(6), y(6);
    for (double& v : x) v = real(rng);
    for (double& v : y) v = real(rng);
    const auto vx = DocumentVector::from_dense(x);
    const auto vy = DocumentVector::from_dense(y);
    const double c = cosine_similarity(vx, vy);
    CHECK(c == cosine_similarity(vy, vx));
    CHECK(std::abs(c) <= 1.0);
    CHECK(cosine_similarity(vx, vx) == doctest::Approx(1.0).epsilon(1e-9));
    const double k = 0.01 + std::abs(real(rng)) * 100;
    std::vector<double> scaled = x;
    for (double& v : scaled) v *= k;
    CHECK(std::abs(cosine_similarity(DocumentVector::from_dense(scaled), vy) - c) <= 1e-9);
    CHECK(std::abs(vx.norm - euclidean_norm(vx)) <= 1e-9);
  }
}

TEST_CASE("quartiles and distributions") {
  std::vector<LinkSimilarityRecord> records = {{"Relate", "A", "B", 0.0}, {"Relate", "C", "D", 1.0}};
  const auto d = per_type_distributions(records);
  REQUIRE(d.size() == 1);
  CHECK(d[0].median == 0.5);
  CHECK(d[0].mean == 0.5);
  CHECK(d[0].q1 == 0.25);
  CHECK(per_type_distributions({}).empty());
  CHECK(quantile_sorted({1, 2, 3, 4}, 0.25) == doctest::Approx(1.75));
  CHECK_THROWS_AS(quantile_sorted({}, 0.5), std::invalid_argument);

  records.push_back({"Cloners", "E", "F", 1.0});
  records.push_back({"Block", "G", "H", 0.5});
  const auto sorted = per_type_distributions(records);
  CHECK(sorted[0].link_type == "Cloners");
  CHECK(sorted[1].link_type == "Block");
  CHECK(sorted[2].link_type == "Relate");
  for (const auto& t : sorted) {
    CHECK(t.min <= t.q1);
    CHECK(t.q1 <= t.median);
    CHECK(t.median <= t.q3);
    CHECK(t.q3 <= t.max);
  }
}

TEST_CASE("external embeddings") {
  TempDir dir;
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream(dir / name) << body;
    return dir / name;
  };
  const Corpus corpus(std::vector<Issue>{make_issue("K-1")});
  const auto ok = load_external_embeddings(write("ok.tsv", "K-1\t1 2 3 4\nK-9\t0 0 1 0\n"), &corpus);
  CHECK(ok.vectors.size() == 2);
  CHECK(ok.dimension == 4);
  CHECK(ok.unmatched == std::vector<std::string>{"K-9"});
  try {
    load_external_embeddings(write("mixed.tsv", "K-1\t1 2 3 4\nK-2\t1 2 3 4 5\n"));
    FAIL("mixed dimensions accepted");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("K-2") != std::string::npos);
  }
  CHECK_THROWS_AS(load_external_embeddings(write("bad.tsv", "K-1 1 2\n")), InputError);
  CHECK_THROWS_AS(load_external_embeddings(write("nan.tsv", "K-1\t1 x\n")), InputError);
  CHECK_THROWS_AS(load_external_embeddings(write("dup.tsv", "K-1\t1\nK-1\t2\n")), InputError);
}

TEST_CASE("analyze_links pipeline") {
  Issue a = with_text("T-1", "Crash on save", "Saving a file crashes the editor");
  Issue b = with_text("T-2", "Crash on save", "Saving a file crashes the editor");
  Issue c = with_text("T-3", "Slow search", "Search takes ten seconds on large projects");
  a.links = {{"Duplicate", LinkDirection::outward, "T-1", "T-2"},
             {"Relate", LinkDirection::outward, "T-1", "T-3"}};
  const Corpus corpus(std::vector<Issue>{a, b, c});

  LinkAnalysisOptions options;
  const LinkAnalysis tfidf = analyze_links(corpus, options);
  REQUIRE(tfidf.records.size() == 2);
  CHECK(tfidf.records[0].link_type == "Duplicate");
  CHECK(tfidf.records[0].similarity == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(tfidf.records[1].similarity >= 0.0);
  CHECK(tfidf.documents_fitted == 3);

  options.provider = EmbeddingProvider::external;
  CHECK_THROWS_AS(analyze_links(corpus, options), ConfigError);

  TempDir dir;
  std::ofstream(dir / "e.tsv") << "T-1\t1 0\nT-2\t1 1\n";
  options.embeddings = dir / "e.tsv";
  const LinkAnalysis external = analyze_links(corpus, options);
  REQUIRE(external.records.size() == 1);
  CHECK(external.skipped_missing_vector == 1);
  CHECK(external.records[0].similarity == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

  const std::string tsv = link_records_to_tsv(tfidf.records);
  CHECK(tsv.rfind("link_type\tsource\ttarget\tsimilarity\n", 0) == 0);
  CHECK(distributions_to_tsv(tfidf.distributions).rfind("link_type\tcount\tmin\tq1\tmedian\tq3\tmax\tmean\n", 0) == 0);
}

TEST_CASE("fit scope") {
  Issue a = with_text("T-1", "alpha", "beta");
  Issue b = with_text("T-2", "alpha", "gamma");
  Issue lone = with_text("T-3", "delta", "epsilon");
  a.links = {{"Relate", LinkDirection::outward, "T-1", "T-2"}};
  const Corpus corpus(std::vector<Issue>{a, b, lone});
  LinkAnalysisOptions options;
  CHECK(analyze_links(corpus, options).documents_fitted == 2);
  options.fit_scope = FitScope::tracker;
  CHECK(analyze_links(corpus, options).documents_fitted == 3);
}

}  // TEST_SUITE
