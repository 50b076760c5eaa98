#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "issuelens/corpus.hpp"
#include "issuelens/util.hpp"

namespace issuelens {

// tracker -> field name -> every value the field has held in that tracker.
struct FieldStateDictionary {
  std::map<std::string, std::map<std::string, std::set<std::string>>> trackers;

  // Distinct field names over all trackers, compared case-insensitively.
  std::size_t distinct_field_count() const;
  const std::map<std::string, std::set<std::string>>* fields_of(std::string_view tracker) const;

  bool operator==(const FieldStateDictionary&) const = default;
};

// Field names: every ChangeItem.field in the tracker. States: every trimmed,
// non-empty from/to value of those items plus the current stored values of the
// tracker's issues for fields that map to a stored field.
FieldStateDictionary build_state_dictionary(const Corpus& corpus);

std::string dictionary_to_json(const FieldStateDictionary& dictionary);

enum class MentionSource { comment, description_evolution };

std::string_view to_string(MentionSource source);

struct MentionConfig {
  std::size_t min_state_length = 3;  // shorter states never match
  bool exclude_numeric = true;       // "1.0", "2021" and the like never match
  bool same_sentence = false;        // require field and state in one sentence
  std::size_t excerpt_context = 60;  // bytes of context either side of the matches
};

// True when the state takes part in matching under `config`.
bool state_is_matchable(std::string_view state, const MentionConfig& config);

struct StateMatch {
  std::string state;
  Span span;
};

struct MentionCandidate {
  std::string tracker;
  std::string issue_key;
  MentionSource source = MentionSource::comment;
  std::string source_id;  // comment id, or "v<k>" for description version k
  std::string field;
  std::set<std::string> states_matched;
  std::string excerpt;
  std::vector<Span> field_spans;  // byte offsets into the source text
  std::vector<StateMatch> state_spans;
};

// Candidates in a single text: one per dictionary field whose name and at least
// one of whose states occur as case-insensitive token sequences.
std::vector<MentionCandidate> mine_text(std::string_view text,
                                        const std::map<std::string, std::set<std::string>>& fields,
                                        const MentionConfig& config = {});

// All comments and all description versions (for issues whose description
// changed), each matched against its own tracker's dictionary.
std::vector<MentionCandidate> mine_mentions(const Corpus& corpus,
                                            const FieldStateDictionary& dictionary,
                                            const MentionConfig& config = {});

// tracker, key, source, source_id, field, states, excerpt, label (left empty).
std::string review_sheet_tsv(const std::vector<MentionCandidate>& candidates);
void export_review_sheet(const std::vector<MentionCandidate>& candidates,
                         const std::filesystem::path& path);

}  // namespace issuelens
