#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "issuelens/tagger.hpp"

namespace issuelens {

struct TaggedToken {
  std::string word;
  std::string pos;
  std::string lemma;

  bool operator==(const TaggedToken&) const = default;
};

// Lowercase base forms. Built-in tables cover "be", "have", "do" and common
// irregular verbs and nouns; an optional base-form list (one "V<TAB>word" or
// "N<TAB>word" per line) lets suffix candidates be checked against real words.
class Lemmatizer {
 public:
  Lemmatizer() = default;
  static Lemmatizer load(const std::filesystem::path& base_forms);

  std::string lemma(std::string_view word, std::string_view pos) const;
  bool has_base_forms() const { return !verbs_.empty() || !nouns_.empty(); }
  bool is_verb_base(std::string_view word) const;

 private:
  std::optional<std::string> pick(const std::string& w, bool verb,
                                  const std::vector<std::pair<std::string_view, std::string_view>>&
                                      rules) const;
  bool known(const std::string& w, bool verb) const;

  std::unordered_set<std::string> verbs_;
  std::unordered_set<std::string> nouns_;
};

// Externally produced tags: blocks of "token<TAB>TAG" lines separated by blank
// lines. A block applies to any sentence with exactly that token sequence.
class SidecarAnnotations {
 public:
  static SidecarAnnotations load(const std::filesystem::path& path);
  void add(std::vector<std::string> tokens, std::vector<std::string> tags);
  const std::vector<std::string>* find(const std::vector<std::string>& tokens) const;
  std::size_t size() const { return blocks_.size(); }

 private:
  std::map<std::vector<std::string>, std::vector<std::string>> blocks_;
};

class Annotator {
 public:
  Annotator(std::shared_ptr<const PerceptronTagger> tagger, Lemmatizer lemmatizer,
            std::shared_ptr<const SidecarAnnotations> sidecar = nullptr);

  // One TaggedToken per input token. Throws std::invalid_argument on empty input.
  std::vector<TaggedToken> pos_tag(const std::vector<std::string>& tokens) const;

  const Lemmatizer& lemmatizer() const { return lemmatizer_; }

 private:
  std::shared_ptr<const PerceptronTagger> tagger_;
  Lemmatizer lemmatizer_;
  std::shared_ptr<const SidecarAnnotations> sidecar_;
};

// Delimiter used by the tagged stream: U+00B0 DEGREE SIGN.
inline constexpr std::string_view kStreamDelimiter = "\xC2\xB0";

// "word°TAG°lemma" per token, single spaces between tokens. Throws
// std::invalid_argument when a field is empty or contains the delimiter or
// whitespace.
std::string render_tagged_stream(const std::vector<TaggedToken>& tagged);
std::vector<TaggedToken> parse_tagged_stream(std::string_view rendered);

// Replaces characters that the stream encoding cannot carry.
std::string sanitize_stream_word(std::string_view word);

enum class VbgRole {
  root_verb,
  auxiliary,
  adverbial_modifier,
  compound,
  clausal_modifier_of_noun,
  nominal
};

std::string_view to_string(VbgRole role);

// POS-context approximation of the dependency role of a VBG token:
//  a) a form of "be" before it (adverbs skipped): auxiliary when a participle
//     follows, else root_verb; "being"/"having" + participle: auxiliary
//  b) determiner or possessive before it (adjectives skipped) and a noun after
//     it: compound; a noun right before it: clausal_modifier_of_noun
//  c) a comma or subordinator (while, when, by, ...) before it: adverbial_modifier
//  d) otherwise: nominal
// Throws std::out_of_range / std::invalid_argument on a bad index or non-VBG token.
VbgRole classify_vbg_role(const std::vector<TaggedToken>& tagged, std::size_t index);

}  // namespace issuelens
