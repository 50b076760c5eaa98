#include <fstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "issuelens/sentiment.hpp"

using namespace issuelens;
using namespace issuelens::testing;

namespace {

SentimentLexicon small_lexicon() {
  SentimentLexicon lex;
  lex.add_entry("great", "JJ", 0.8);
  lex.add_entry("bad", "JJ", -0.7);
  lex.add_entry("specific", "JJ", 0.0);
  lex.add_negation("not");
  lex.add_negation("n't");
  lex.add_intensifier("very", 1.3);
  return lex;
}

Issue evolved(std::string key, std::string first, std::string last) {
  Issue issue = make_issue(std::move(key));
  issue.description = last;
  issue.changelog = {change("e1", make_utc(2021, 7, 1), "description", std::move(first), std::move(last))};
  return issue;
}

}  // namespace

TEST_SUITE("sentiment") {

TEST_CASE("score_polarity examples") {
  const SentimentLexicon lex = small_lexicon();
  CHECK(score_polarity("", lex) == 0.0);
  CHECK(score_polarity("great", lex) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(score_polarity("not great", lex) == doctest::Approx(-0.4).epsilon(1e-12));
  CHECK(score_polarity("isn't great", lex) == doctest::Approx(-0.4).epsilon(1e-12));
  CHECK(score_polarity("not a b great", lex) == doctest::Approx(-0.4).epsilon(1e-12));
  CHECK(score_polarity("not a b c great", lex) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(score_polarity("great bad", lex) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(score_polarity("specific great", lex) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(score_polarity("very great", lex) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(score_polarity("GREAT!", lex) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(score_polarity("nothing known here", lex) == 0.0);
}

TEST_CASE("negation rule is exact for every positive entry") {
  const SentimentLexicon& lex = shipped_sentiment();
  for (const char* word : {"great", "suitable", "good", "nice", "useful"}) {
    const auto p = lex.polarity(word);
    REQUIRE(p);
    CHECK(score_polarity(std::string("not ") + word, lex) == kNegationFactor * *p);
  }
}

TEST_CASE("boundedness and neutral-on-unknown") {
  const SentimentLexicon& lex = shipped_sentiment();
  const std::vector<std::string> vocab = {"very", "not", "great", "bad", "terrible", "extremely",
                                          "good", "never", "n't", "x", "!", "the", "awful", "best"};
  std::mt19937_64 rng(17);
  for (int i = 0; i < 2000; ++i) {
    std::string text;
    for (std::size_t k = pick(rng, 30); k > 0; --k) text += vocab[pick(rng, vocab.size())] + " ";
    const double s = score_polarity(text, lex);
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
  }
  CHECK(score_polarity("zzqx wibble 12345", lex) == 0.0);
}

TEST_CASE("URLs do not change the raw-text score") {
  const SentimentLexicon& lex = shipped_sentiment();
  const std::string text = "This is a great improvement.";
  CHECK(score_raw_text(text + " https://bad.example.org/terrible", lex) == score_raw_text(text, lex));
}

TEST_CASE("TSV lexicon loading") {
  TempDir dir;
  {
    std::ofstream out(dir / "lex.tsv");
    out << "# test\nfine\tJJ\t0.4\nfine\tNN\t0.2\n!negation\tnot\n!intensifier\treally\t1.5\n";
  }
  const SentimentLexicon lex = SentimentLexicon::load_tsv(dir / "lex.tsv");
  CHECK(*lex.polarity("fine") == doctest::Approx(0.3));
  CHECK(lex.is_negation("not"));
  CHECK(*lex.intensifier("really") == 1.5);

  {
    std::ofstream out(dir / "bad.tsv");
    out << "fine\tJJ\t1.5\n";
  }
  CHECK_THROWS_AS(SentimentLexicon::load_tsv(dir / "bad.tsv"), ConfigError);
  CHECK_THROWS_AS(SentimentLexicon().add_intensifier("x", 0.0), std::invalid_argument);
}

TEST_CASE("pattern XML lexicon loading") {
  TempDir dir;
  {
    std::ofstream out(dir / "lex.xml");
    out << R"(<sentiment>
<word form="great" pos="JJ" sense="a" polarity="1.0" subjectivity="1.0" intensity="1.0" />
<word form="great" pos="JJ" sense="b" polarity="0.6" subjectivity="1.0" intensity="1.0" />
<word form="very" pos="RB" polarity="0.2" subjectivity="0.3" intensity="1.3" />
</sentiment>)";
  }
  const SentimentLexicon lex = SentimentLexicon::load_pattern_xml(dir / "lex.xml");
  CHECK(*lex.polarity("great") == doctest::Approx(0.8));
  CHECK(*lex.intensifier("very") == doctest::Approx(1.3));
  CHECK(lex.is_negation("not"));
}

TEST_CASE("description trends") {
  const SentimentLexicon& lex = shipped_sentiment();
  const Issue same = evolved("T-1", "It is great.", "It is great.");
  const Issue dropped = evolved("T-2", "A suitable option.", "A option.");
  const auto a = description_trend(same, lex);
  REQUIRE(a.record);
  CHECK(a.record->trend == 0.0);
  const auto b = description_trend(dropped, lex);
  REQUIRE(b.record);
  CHECK(b.record->trend < 0);
  CHECK(b.record->trend == b.record->last_score - b.record->first_score);

  const auto none = description_trend(make_issue("T-3"), lex);
  REQUIRE(none.skip);
  CHECK(none.skip->reason == "no description change");

  const auto overlong = description_trend(evolved("T-4", std::string(50, 'a'), "short"), lex, 20);
  REQUIRE(overlong.skip);
}

TEST_CASE("trend antisymmetry") {
  const SentimentLexicon& lex = shipped_sentiment();
  const std::vector<std::string> texts = {"great", "bad idea", "not good", "", "very useful fix",
                                          "terrible crash"};
  for (const auto& x : texts) {
    for (const auto& y : texts) {
      CHECK(make_trend("k", x, y, lex).trend == -make_trend("k", y, x, lex).trend);
    }
  }
}

TEST_CASE("trend statistics") {
  CHECK_FALSE(trend_stats({}));
  std::vector<TrendRecord> records(3);
  const double trends[] = {-0.5, 0.0, 0.1};
  for (int i = 0; i < 3; ++i) records[i].trend = trends[i];
  records[0].first_score = 0.6;
  records[0].last_score = 0.1;
  const auto stats = trend_stats(records);
  REQUIRE(stats);
  CHECK(stats->mean == doctest::Approx(-0.4 / 3).epsilon(1e-12));
  CHECK(stats->median == 0.0);
  CHECK(stats->toward_neutral == doctest::Approx(1.0 / 3));

  const TrendReport empty = trend_report(Corpus{}, shipped_sentiment());
  CHECK(empty.records.empty());
  CHECK_FALSE(empty.stats);
  CHECK(trend_stats_to_tsv(std::nullopt, 0) == "statistic\tvalue\n");
}

}  // TEST_SUITE
