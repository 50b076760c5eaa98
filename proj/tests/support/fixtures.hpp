#pragma once

#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "issuelens/annotate.hpp"
#include "issuelens/config.hpp"
#include "issuelens/corpus.hpp"
#include "issuelens/hypernyms.hpp"
#include "issuelens/sentiment.hpp"
#include "issuelens/util.hpp"

namespace issuelens::testing {

inline std::filesystem::path test_data(const std::string& name) {
  return std::filesystem::path(ISSUELENS_TEST_DATA) / name;
}

inline std::filesystem::path shipped_data(const std::string& name) {
  return std::filesystem::path(ISSUELENS_SHIPPED_DATA) / name;
}

// Loaded once per process; the tagger weights take a moment to parse.
inline const Annotator& shipped_annotator() {
  static const Annotator annotator(
      std::make_shared<const PerceptronTagger>(
          PerceptronTagger::load(shipped_data("tagger/perceptron.txt"))),
      Lemmatizer::load(shipped_data("lexicon/lemmas.tsv")));
  return annotator;
}

inline const HypernymLexicon& shipped_hypernyms() {
  static const HypernymLexicon lexicon =
      HypernymLexicon::load_tsv(shipped_data("lexicon/hypernyms.tsv"));
  return lexicon;
}

inline const SentimentLexicon& shipped_sentiment() {
  static const SentimentLexicon lexicon =
      SentimentLexicon::load_tsv(shipped_data("lexicon/sentiment.tsv"));
  return lexicon;
}

// Removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = std::filesystem::temp_directory_path() / ("issuelens-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline Issue make_issue(std::string key, std::string tracker = "T",
                        Timestamp created = make_utc(2021, 6, 1)) {
  Issue issue;
  issue.key = std::move(key);
  issue.tracker = std::move(tracker);
  issue.project = "P";
  issue.issue_type = "Bug";
  issue.status = "Open";
  issue.created = created;
  return issue;
}

inline ChangeEvent change(std::string id, Timestamp at, std::string field,
                          std::optional<std::string> from, std::optional<std::string> to) {
  ChangeEvent e;
  e.id = std::move(id);
  e.author = "someone";
  e.created = at;
  e.items.push_back({std::move(field), std::move(from), std::move(to)});
  return e;
}

inline std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

// Token lists built to exercise the passive-voice grammar: be-forms, lemmas that
// merely start with "be", participles, intervening non-verbs, punctuation,
// hyphenated and non-ASCII words.
inline std::vector<TaggedToken> random_tagged_sentence(std::mt19937_64& rng) {
  static const std::vector<TaggedToken> pool = {
      {"the", "DT", "the"},         {"gate", "NN", "gate"},         {"was", "VBD", "be"},
      {"is", "VBZ", "be"},          {"been", "VBN", "be"},          {"be", "VB", "be"},
      {"are", "VBP", "be"},         {"being", "VBG", "be"},         {"Was", "VBD", "be"},
      {"opened", "VBN", "open"},    {"opened", "VBD", "open"},      {"deployed", "VBN", "deploy"},
      {"quickly", "RB", "quickly"}, {"not", "RB", "not"},           {"never", "RB", "never"},
      {"became", "VBD", "become"},  {"begun", "VBN", "begin"},      {"believed", "VBN", "believe"},
      {"user", "NN", "user"},       {"user-specific", "JJ", "user-specific"},
      {"re-opened", "VBN", "re-open"},                              {"café", "NN", "café"},
      {"fermé", "VBN", "fermer"},   {",", ",", ","},                {".", ".", "."},
      {"(", "-LRB-", "("},          {"10", "CD", "10"},             {"has", "VBZ", "have"},
      {"running", "VBG", "run"},    {"shall", "MD", "shall"},       {"by", "IN", "by"},
      {"it", "PRP", "it"},          {"'s", "VBZ", "be"},            {"don't", "VBP", "do"},
      {"be-all", "NN", "be-all"},   {"bee", "NN", "bee"},           {"v2.1", "NN", "v2.1"},
      {"managed", "VBN", "manage"}, {"x_y", "NN", "x_y"},           {"Being", "VBG", "be"},
  };
  const std::size_t n = 1 + pick(rng, 12);
  std::vector<TaggedToken> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(pool[pick(rng, pool.size())]);
  return out;
}

// Random scalar and set-field history with a consistent stored state.
inline Issue random_history_issue(std::mt19937_64& rng, std::size_t index) {
  static const std::vector<std::string> fields = {"description", "priority", "status",
                                                  "summary",     "assignee", "labels"};
  static const std::vector<std::string> values = {"Minor", "Major", "Critical", "Open",
                                                  "In Progress", "Closed", "alice", "bob",
                                                  "Some text", "Other text\nwith lines", ""};
  Issue issue = make_issue("H-" + std::to_string(index), "H",
                           make_utc(2020, 1, 1) + std::chrono::hours(pick(rng, 1000)));
  std::map<std::string, std::optional<std::string>> current;
  for (const std::string& f : fields) {
    if (f == "labels") continue;
    current[f] = pick(rng, 4) == 0 ? std::nullopt : std::optional(values[pick(rng, values.size())]);
  }
  std::set<std::string> labels;
  Timestamp t = *issue.created;
  const std::size_t events = pick(rng, 8);
  for (std::size_t e = 0; e < events; ++e) {
    // Some events share a timestamp with the previous one or with creation.
    if (pick(rng, 3) != 0) t += std::chrono::minutes(1 + pick(rng, 5000));
    ChangeEvent event;
    event.id = "e" + std::to_string(e);
    event.created = t;
    const std::size_t items = 1 + pick(rng, 2);
    for (std::size_t k = 0; k < items; ++k) {
      const std::string& f = fields[pick(rng, fields.size())];
      if (f == "labels") {
        const std::string from = join({labels.begin(), labels.end()}, " ");
        labels.insert("l" + std::to_string(pick(rng, 5)));
        event.items.push_back({f, from, join({labels.begin(), labels.end()}, " ")});
        continue;
      }
      std::optional<std::string> next =
          pick(rng, 5) == 0 ? std::nullopt : std::optional(values[pick(rng, values.size())]);
      if (next && next->empty()) next.reset();
      auto& cur = current[f];
      if (cur && cur->empty()) cur.reset();
      if (!cur && !next) next = "Closed";
      event.items.push_back({f, cur, next});
      cur = next;
    }
    issue.changelog.push_back(std::move(event));
  }
  for (auto& [f, v] : current) {
    if (v && v->empty()) v.reset();
  }
  issue.description = current["description"].value_or("");
  issue.summary = current["summary"].value_or("");
  issue.priority = current["priority"];
  issue.status = current["status"].value_or("");
  issue.assignee = current["assignee"];
  issue.labels = labels;
  return issue;
}

}  // namespace issuelens::testing
