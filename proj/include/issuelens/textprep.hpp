#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "issuelens/util.hpp"

namespace issuelens {

enum class RegionKind { code_block, noformat_block, url, image_ref, header_markup, table_markup };

std::string_view to_string(RegionKind kind);

struct RemovedRegion {
  RegionKind kind = RegionKind::code_block;
  Span span;  // byte offsets into the original text

  bool operator==(const RemovedRegion&) const = default;
};

struct CleanText {
  std::string text;
  std::vector<RemovedRegion> removed_regions;  // sorted, non-overlapping
  // origin[i] = original offset of text[i]; origin[text.size()] = original size.
  std::vector<std::size_t> origin;

  // Maps a span of `text` back onto the original text. The mapped span starts at
  // the first kept byte and ends after the last one, so a span that straddles a
  // removed region also covers it.
  Span original_span(Span clean) const;
};

// Plain prose with an identity offset map; for text that is already clean.
CleanText as_clean_text(std::string_view text);

// Removes Jira wiki code/noformat blocks, ``` fences, bare URLs, image and
// attachment references, hN. header sigils and table pipes. Unterminated blocks
// are left as prose. Applied until no more markup is found, so the result is
// stable under a second application.
CleanText strip_markup(std::string_view raw);

struct Token {
  std::string text;
  Span span;  // offsets into the text that was tokenized (plus any base offset)
};

// Runs of word characters (ASCII alphanumerics, '_', non-ASCII letters) joined by
// internal '-', apostrophes, and '.' between alphanumerics ("v2.1", "don't").
// Every other punctuation mark is a token of its own.
std::vector<Token> tokenize(std::string_view text, std::size_t base_offset = 0);

// True for the single-character punctuation tokens produced by tokenize().
bool is_punctuation_token(std::string_view token);

struct Sentence {
  std::string text;
  Span span;  // offsets into CleanText::text
  std::vector<Token> tokens;
};

struct SentenceConfig {
  // Lowercase words, including their final period, after which a period does not end a sentence.
  std::set<std::string> abbreviations = default_abbreviations();

  static std::set<std::string> default_abbreviations();
};

// Boundaries: '.', '!' or '?' (plus trailing quotes/brackets) followed by
// whitespace or end of text, unless the word is a guarded abbreviation; and
// every line break.
std::vector<Sentence> split_sentences(const CleanText& clean, const SentenceConfig& config = {});

inline constexpr std::size_t kDefaultOverlongLimit = 10000;

// True iff the clean text has more than `limit` code points. Throws
// std::invalid_argument when limit is 0.
bool flag_overlong(const CleanText& clean, std::size_t limit = kDefaultOverlongLimit);

}  // namespace issuelens
