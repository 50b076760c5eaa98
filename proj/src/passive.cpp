#include <algorithm>
#include <regex>
#include <stdexcept>

#include "issuelens/lints.hpp"

namespace issuelens {
namespace {

// Lenient UTF-8 decode; invalid bytes become U+FFFD.
std::wstring widen(std::string_view s) {
  std::wstring out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    int len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > s.size()) {
      out.push_back(L'\uFFFD');
      ++i;
      continue;
    }
    char32_t cp = len == 1 ? c : len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
    bool ok = true;
    for (int k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) ok = false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      out.push_back(L'\uFFFD');
      ++i;
      continue;
    }
    out.push_back(static_cast<wchar_t>(cp));
    i += len;
  }
  return out;
}

const std::wregex& compiled_regex() {
  static const std::wregex re(passive_pattern_compiled(),
                              std::regex::ECMAScript | std::regex::icase);
  return re;
}

// Same character class the regex engine uses for \w.
bool is_word_char(wchar_t c) {
  static const std::regex_traits<wchar_t> traits;
  static const auto w = [] {
    const wchar_t name[] = L"w";
    return traits.lookup_classname(name, name + 1);
  }();
  return traits.isctype(c, w);
}

bool all_word(const std::wstring& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_word_char);
}

bool starts_with_icase(const std::string& s, std::string_view prefix) {
  return istarts_with_ascii(s, prefix);
}

}  // namespace

std::wstring passive_pattern_printed() {
  return std::wstring(kPassiveBe) + L" " + std::wstring(kPassiveGap) + L" " +
         std::wstring(kPassiveParticiple);
}

std::wstring passive_pattern_compiled() {
  return std::wstring(kPassiveBe) + std::wstring(kPassiveGap) + std::wstring(kPassiveParticiple);
}

std::vector<std::pair<std::size_t, std::size_t>> passive_matches_regex(
    const std::vector<TaggedToken>& tagged) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (tagged.empty()) return out;
  const std::wstring stream = widen(render_tagged_stream(tagged));
  // Start offset of every token in the wide stream.
  std::vector<std::size_t> starts;
  std::size_t pos = 0;
  for (const TaggedToken& t : tagged) {
    starts.push_back(pos);
    pos += widen(t.word).size() + widen(t.pos).size() + widen(t.lemma).size() + 3;
  }
  const auto token_at = [&starts](std::size_t offset) {
    return static_cast<std::size_t>(std::upper_bound(starts.begin(), starts.end(), offset) -
                                    starts.begin()) -
           1;
  };
  for (auto it = std::wsregex_iterator(stream.begin(), stream.end(), compiled_regex());
       it != std::wsregex_iterator(); ++it) {
    const auto begin = static_cast<std::size_t>(it->position(0));
    const auto end = begin + static_cast<std::size_t>(it->length(0));
    out.emplace_back(token_at(begin), token_at(end - 1));
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> passive_matches_structured(
    const std::vector<TaggedToken>& tagged) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t n = tagged.size();
  std::size_t i = 0;
  while (i < n) {
    const TaggedToken& be = tagged[i];
    const std::wstring word = widen(be.word);
    const std::wstring lemma = widen(be.lemma);
    const bool start_ok = starts_with_icase(be.pos, "V") && starts_with_icase(be.lemma, "be") &&
                          !word.empty() && is_word_char(word.back()) &&
                          (lemma.size() == 2 || !is_word_char(lemma[2]));
    if (start_ok) {
      std::size_t k = i + 1;
      while (k < n && !starts_with_icase(tagged[k].pos, "VB")) ++k;
      if (k < n && iequals_ascii(tagged[k].pos, "VBN") && all_word(widen(tagged[k].word)) &&
          !tagged[k].lemma.empty() && is_word_char(widen(tagged[k].lemma).front()) &&
          (lemma.size() == 2 || k >= i + 2)) {
        out.emplace_back(i, k);
        i = k + 1;
        continue;
      }
    }
    ++i;
  }
  return out;
}

}  // namespace issuelens
