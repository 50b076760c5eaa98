#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "issuelens/annotate.hpp"
#include "issuelens/corpus.hpp"
#include "issuelens/hypernyms.hpp"
#include "issuelens/textprep.hpp"

namespace issuelens {

enum class RuleId {
  dangerous_plural,
  inside_behaviour,
  unclear_inclusion,
  passive_voice,
  derived_nominal,
  gerundive_nominal
};

inline constexpr RuleId kAllRules[] = {RuleId::dangerous_plural, RuleId::inside_behaviour,
                                       RuleId::unclear_inclusion, RuleId::passive_voice,
                                       RuleId::derived_nominal,  RuleId::gerundive_nominal};

std::string_view to_string(RuleId rule);
std::optional<RuleId> rule_from_name(std::string_view name);

enum class SourceField { summary, description, comment };

std::string_view to_string(SourceField field);

struct Finding {
  RuleId rule = RuleId::dangerous_plural;
  std::string issue_key;
  SourceField field = SourceField::summary;
  std::string source_id;  // comment id; empty for summary/description
  Span span;              // byte offsets into the original field text
  std::string matched_text;
  std::string message;
  std::string confidence = "unscored";

  bool operator==(const Finding&) const = default;
};

struct RuleConfig {
  std::set<std::string> dangerous_plural_words = {"few",  "little", "many",    "much",   "every",
                                                  "all",  "some",   "most",    "several"};
  std::set<std::string> inside_behaviour_words = {"until", "during", "after", "before", "while"};
  std::vector<std::string> derived_suffixes = {"tion", "sion", "ment", "ism", "ty", "ance", "ence"};
  // Letters that must precede a derived suffix ("city" has only two before "ty").
  std::size_t min_stem_length = 3;
  std::set<std::string> action_labels = {"EVENT", "PROCESS", "ACT"};
  bool case_insensitive = true;
  std::set<RuleId> enabled = {std::begin(kAllRules), std::end(kAllRules)};
  bool include_comments = false;

  // Throws ConfigError on empty or non-lowercase word lists.
  void validate() const;
};

// One rule hit inside a clean text; spans are offsets into CleanText::text.
struct RuleHit {
  RuleId rule;
  Span span;
  std::string message;
};

struct AnalyzedSentence {
  Sentence sentence;
  std::vector<TaggedToken> tagged;  // aligned with sentence.tokens
};

std::vector<RuleHit> lint_dangerous_plurals(const std::vector<Sentence>& sentences,
                                            const RuleConfig& config);
std::vector<RuleHit> lint_inside_behaviour(const std::vector<Sentence>& sentences,
                                           const RuleConfig& config);
std::vector<RuleHit> lint_unclear_inclusion(const std::vector<Sentence>& sentences);
std::vector<RuleHit> lint_passive_voice(const std::vector<AnalyzedSentence>& sentences);
std::vector<RuleHit> lint_derived_nominals(const std::vector<AnalyzedSentence>& sentences,
                                           const HypernymLexicon& lexicon,
                                           const RuleConfig& config);
std::vector<RuleHit> lint_gerundive_nominals(const std::vector<AnalyzedSentence>& sentences);

// ---- passive voice ----------------------------------------------------------------

// The three parts of the passive-voice pattern: a form of "to be", any number of
// tokens whose tag is not VB*, and a VBN token. The printed form separates the
// parts with spaces; the compiled pattern concatenates them.
inline constexpr std::wstring_view kPassiveBe = L"\\b\\w+?°V[^°]*°be";
inline constexpr std::wstring_view kPassiveGap = L"(\\W[^°]+?°(?!VB.)[^°]*°[^ ]+?)*";
inline constexpr std::wstring_view kPassiveParticiple = L"\\W\\w+?°VBN°\\w+";

std::wstring passive_pattern_printed();
std::wstring passive_pattern_compiled();

// (first token, last token) of each passive construction, scanning left to right.
// The regex matcher runs the pattern over the rendered stream; the structured
// matcher applies the same three-part logic to the token list.
std::vector<std::pair<std::size_t, std::size_t>> passive_matches_regex(
    const std::vector<TaggedToken>& tagged);
std::vector<std::pair<std::size_t, std::size_t>> passive_matches_structured(
    const std::vector<TaggedToken>& tagged);

// ---- composition ------------------------------------------------------------------

class Linter {
 public:
  Linter(const Annotator& annotator, const HypernymLexicon& lexicon, RuleConfig config,
         SentenceConfig sentences = {});

  std::vector<AnalyzedSentence> analyze(const CleanText& clean) const;

  // Findings for one field text; spans refer to `raw`.
  std::vector<Finding> lint_text(std::string_view raw, std::string_view issue_key,
                                 SourceField field, std::string_view source_id = {}) const;

  // Summary and description (plus comments when configured), sorted by
  // (field, source id, span, rule).
  std::vector<Finding> lint_issue(const Issue& issue) const;

  const RuleConfig& config() const { return config_; }

 private:
  const Annotator& annotator_;
  const HypernymLexicon& lexicon_;
  RuleConfig config_;
  SentenceConfig sentence_config_;
};

void sort_findings(std::vector<Finding>& findings);

// key, rule, field, start, end, matched_text, source_id, message (TSV-escaped), with header.
std::string findings_to_tsv(const std::vector<Finding>& findings);

}  // namespace issuelens
