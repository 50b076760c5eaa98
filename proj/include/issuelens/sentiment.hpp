#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "issuelens/corpus.hpp"

namespace issuelens {

class SentimentLexicon {
 public:
  // TSV with three kinds of rows:
  //   word<TAB>POS-or-*<TAB>polarity
  //   !negation<TAB>word
  //   !intensifier<TAB>word<TAB>factor
  // Throws ConfigError on malformed rows or out-of-range values.
  static SentimentLexicon load_tsv(const std::filesystem::path& path);
  // The XML lexicon format used by pattern-style scorers (<word form= pos= polarity=
  // intensity= .../>). Senses of a form are averaged; zero-polarity forms with an
  // intensity other than 1 become intensifiers.
  static SentimentLexicon load_pattern_xml(const std::filesystem::path& path);

  void add_entry(std::string_view word, std::string_view pos, double polarity);
  void add_negation(std::string_view word);
  void add_intensifier(std::string_view word, double factor);

  // Polarity of a lowercase surface form, averaged over its POS variants.
  std::optional<double> polarity(std::string_view word) const;
  std::optional<double> intensifier(std::string_view word) const;
  bool is_negation(std::string_view word) const;

  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::map<std::string, double>, std::less<>> entries_;
  std::set<std::string, std::less<>> negations_;
  std::map<std::string, double, std::less<>> intensifiers_;
};

inline constexpr std::size_t kNegationWindow = 3;
inline constexpr double kNegationFactor = -0.5;

// Mean polarity of lexicon hits in an already markup-stripped text, in [-1, 1].
double score_polarity(std::string_view clean_text, const SentimentLexicon& lexicon);

// Strips markup first, then scores.
double score_raw_text(std::string_view raw_text, const SentimentLexicon& lexicon);

struct TrendRecord {
  std::string issue_key;
  double first_score = 0;
  double last_score = 0;
  double trend = 0;
  std::string first_text;
  std::string last_text;
};

TrendRecord make_trend(std::string key, std::string first_text, std::string last_text,
                       const SentimentLexicon& lexicon);

struct TrendSkip {
  std::string issue_key;
  std::string reason;
};

struct TrendOutcome {
  std::optional<TrendRecord> record;
  std::optional<TrendSkip> skip;
};

// Creation-time description against the current one. Issues without a
// description change, or with a version longer than `overlong_limit`
// characters after markup stripping, are skipped with a reason.
TrendOutcome description_trend(const Issue& issue, const SentimentLexicon& lexicon,
                               std::size_t overlong_limit = 10000);

struct TrendStats {
  std::size_t count = 0;
  double mean = 0;
  double median = 0;
  double toward_neutral = 0;  // fraction with |last| < |first|
};

struct TrendReport {
  std::vector<TrendRecord> records;  // sorted by (tracker, key)
  std::vector<TrendSkip> skipped;
  std::optional<TrendStats> stats;   // absent when there are no records
};

std::optional<TrendStats> trend_stats(const std::vector<TrendRecord>& records);

TrendReport trend_report(const Corpus& corpus, const SentimentLexicon& lexicon,
                         std::size_t overlong_limit = 10000);

// key, first_score, last_score, trend
std::string trends_to_tsv(const std::vector<TrendRecord>& records);
// statistic<TAB>value rows; header only when stats are absent.
std::string trend_stats_to_tsv(const std::optional<TrendStats>& stats, std::size_t skipped);

}  // namespace issuelens
