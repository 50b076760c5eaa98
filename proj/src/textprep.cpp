#include "issuelens/textprep.hpp"

#include <algorithm>
#include <stdexcept>

namespace issuelens {

std::string_view to_string(RegionKind kind) {
  switch (kind) {
    case RegionKind::code_block: return "code_block";
    case RegionKind::noformat_block: return "noformat_block";
    case RegionKind::url: return "url";
    case RegionKind::image_ref: return "image_ref";
    case RegionKind::header_markup: return "header_markup";
    case RegionKind::table_markup: return "table_markup";
  }
  return "unknown";
}

Span CleanText::original_span(Span clean) const {
  if (clean.begin >= clean.end) {
    const std::size_t at = origin.at(clean.begin);
    return {at, at};
  }
  return {origin.at(clean.begin), origin.at(clean.end - 1) + 1};
}

CleanText as_clean_text(std::string_view text) {
  CleanText clean;
  clean.text = std::string(text);
  clean.origin.resize(text.size() + 1);
  for (std::size_t i = 0; i <= text.size(); ++i) clean.origin[i] = i;
  return clean;
}

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

bool at_icase(std::string_view s, std::size_t i, std::string_view what) {
  return i + what.size() <= s.size() && iequals_ascii(s.substr(i, what.size()), what);
}

std::size_t find_icase(std::string_view s, std::string_view what, std::size_t from) {
  for (std::size_t i = from; i + what.size() <= s.size(); ++i) {
    if (at_icase(s, i, what)) return i;
  }
  return std::string_view::npos;
}

bool url_start(std::string_view s, std::size_t i) {
  for (std::string_view scheme : {"http://", "https://", "ftp://", "file:/"}) {
    if (at_icase(s, i, scheme)) return i + scheme.size() < s.size() && !is_space(s[i + scheme.size()]);
  }
  return at_icase(s, i, "www.") && i + 4 < s.size() && is_alnum(s[i + 4]);
}

bool url_char(char c) {
  if (is_space(c) || static_cast<unsigned char>(c) < 0x20) return false;
  switch (c) {
    case '<': case '>': case '"': case '\'': case '|': case '[': case ']': case '{': case '}':
      return false;
    default: return true;
  }
}

// End of a bare URL starting at i; trailing sentence punctuation stays prose.
std::size_t url_end(std::string_view s, std::size_t i) {
  std::size_t j = i;
  while (j < s.size() && url_char(s[j])) ++j;
  const std::string_view url = s.substr(i, j - i);
  const bool has_open = url.find('(') != std::string_view::npos;
  while (j > i) {
    const char c = s[j - 1];
    if (c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?' ||
        (c == ')' && !has_open)) {
      --j;
    } else {
      break;
    }
  }
  return j;
}

bool looks_like_link_target(std::string_view target) {
  target = trim(target);
  if (target.empty()) return false;
  if (target.front() == '^') return true;
  return url_start(target, 0) || istarts_with_ascii(target, "mailto:");
}

bool image_name(std::string_view content) {
  if (content.empty()) return false;
  for (char c : content) {
    if (is_space(c)) return false;
  }
  const std::string_view main = content.substr(0, content.find('|'));
  if (url_start(main, 0)) return true;
  const auto dot = main.rfind('.');
  if (dot == std::string_view::npos || dot == 0) return false;
  const std::string ext = to_lower_ascii(main.substr(dot + 1));
  static const std::set<std::string> kExt = {"png", "jpg", "jpeg", "gif", "bmp",
                                             "svg", "webp", "tif", "tiff"};
  return kExt.count(ext) > 0;
}

struct Pass {
  std::string out;
  std::vector<std::size_t> origin;  // into the pass input
  std::vector<RemovedRegion> regions;

  void keep(std::string_view s, std::size_t at) {
    for (std::size_t k = 0; k < s.size(); ++k) {
      out += s[k];
      origin.push_back(at + k);
    }
  }
  void drop(RegionKind kind, std::size_t b, std::size_t e) { regions.push_back({kind, {b, e}}); }
};

// Closing brace of a "{code}" / "{code:lang}" opener at i, or npos.
std::size_t macro_open_end(std::string_view s, std::size_t i, std::string_view name) {
  const std::size_t after = i + 1 + name.size();
  if (!at_icase(s, i + 1, name) || after >= s.size()) return std::string_view::npos;
  if (s[after] == '}') return after + 1;
  if (s[after] != ':') return std::string_view::npos;
  const std::size_t close = s.find('}', after);
  const std::size_t nl = s.find('\n', after);
  if (close == std::string_view::npos || (nl != std::string_view::npos && nl < close)) {
    return std::string_view::npos;
  }
  return close + 1;
}

Pass strip_once(std::string_view s) {
  Pass p;
  bool line_blank_so_far = true;
  bool table_line = false;
  auto start_line = [&](std::size_t at) {
    std::size_t k = at;
    while (k < s.size() && (s[k] == ' ' || s[k] == '\t')) ++k;
    table_line = k < s.size() && s[k] == '|';
    line_blank_so_far = true;
  };
  start_line(0);

  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '\n') {
      p.keep(s.substr(i, 1), i);
      ++i;
      start_line(i);
      continue;
    }

    if (c == '{') {
      bool matched = false;
      for (auto [name, kind] : {std::pair{std::string_view("code"), RegionKind::code_block},
                                std::pair{std::string_view("noformat"), RegionKind::noformat_block}}) {
        const std::size_t open_end = macro_open_end(s, i, name);
        if (open_end == std::string_view::npos) continue;
        const std::string closer = "{" + std::string(name) + "}";
        const std::size_t close = find_icase(s, closer, open_end);
        if (close == std::string_view::npos) continue;
        p.drop(kind, i, close + closer.size());
        i = close + closer.size();
        matched = true;
        break;
      }
      if (matched) {
        line_blank_so_far = false;
        continue;
      }
    }

    if (c == '`' && s.substr(i, 3) == "```") {
      const std::size_t close = s.find("```", i + 3);
      if (close != std::string_view::npos) {
        p.drop(RegionKind::code_block, i, close + 3);
        i = close + 3;
        line_blank_so_far = false;
        continue;
      }
    }

    if (line_blank_so_far && (c == 'h' || c == 'H') && i + 3 < s.size() && s[i + 1] >= '1' &&
        s[i + 1] <= '6' && s[i + 2] == '.' && (s[i + 3] == ' ' || s[i + 3] == '\t')) {
      p.drop(RegionKind::header_markup, i, i + 4);
      i += 4;
      line_blank_so_far = false;
      continue;
    }

    if (c == '|' && table_line) {
      std::size_t j = i;
      while (j < s.size() && s[j] == '|') ++j;
      p.drop(RegionKind::table_markup, i, j);
      i = j;
      continue;
    }

    if (c == '[') {
      const std::size_t close = s.find_first_of("[]\n", i + 1);
      if (close != std::string_view::npos && s[close] == ']') {
        const std::string_view inner = s.substr(i + 1, close - i - 1);
        const std::size_t bar = inner.rfind('|');
        if (!inner.empty() && inner.front() == '^') {
          p.drop(RegionKind::image_ref, i, close + 1);
          i = close + 1;
          line_blank_so_far = false;
          continue;
        }
        if (bar != std::string_view::npos && looks_like_link_target(inner.substr(bar + 1))) {
          const bool attachment = trim(inner.substr(bar + 1)).front() == '^';
          const RegionKind kind = attachment ? RegionKind::image_ref : RegionKind::url;
          p.drop(kind, i, i + 1);
          p.keep(inner.substr(0, bar), i + 1);
          p.drop(kind, i + 1 + bar, close + 1);
          i = close + 1;
          line_blank_so_far = false;
          continue;
        }
        if (bar == std::string_view::npos && url_start(inner, 0) &&
            url_end(inner, 0) == inner.size()) {
          p.drop(RegionKind::url, i, close + 1);
          i = close + 1;
          line_blank_so_far = false;
          continue;
        }
      }
    }

    if (c == '!' && (i == 0 || !is_alnum(s[i - 1]))) {
      const std::size_t close = s.find('!', i + 1);
      if (close != std::string_view::npos && image_name(s.substr(i + 1, close - i - 1))) {
        p.drop(RegionKind::image_ref, i, close + 1);
        i = close + 1;
        line_blank_so_far = false;
        continue;
      }
    }

    if ((i == 0 || !(is_alnum(s[i - 1]) || s[i - 1] == '/' || s[i - 1] == '.' ||
                     s[i - 1] == '@' || s[i - 1] == '-')) &&
        url_start(s, i)) {
      const std::size_t end = url_end(s, i);
      if (end > i) {
        p.drop(RegionKind::url, i, end);
        i = end;
        line_blank_so_far = false;
        continue;
      }
    }

    p.keep(s.substr(i, 1), i);
    if (c != ' ' && c != '\t') line_blank_so_far = false;
    ++i;
  }
  p.origin.push_back(s.size());
  return p;
}

}  // namespace

CleanText strip_markup(std::string_view raw) {
  CleanText clean = as_clean_text(raw);
  while (true) {
    Pass pass = strip_once(clean.text);
    if (pass.regions.empty()) break;
    for (const RemovedRegion& r : pass.regions) {
      const Span mapped = clean.original_span(r.span);
      std::erase_if(clean.removed_regions,
                    [&](const RemovedRegion& old) { return mapped.contains(old.span); });
      clean.removed_regions.push_back({r.kind, mapped});
    }
    std::vector<std::size_t> origin(pass.origin.size());
    for (std::size_t k = 0; k < pass.origin.size(); ++k) origin[k] = clean.origin[pass.origin[k]];
    clean.text = std::move(pass.out);
    clean.origin = std::move(origin);
  }
  std::sort(clean.removed_regions.begin(), clean.removed_regions.end(),
            [](const RemovedRegion& a, const RemovedRegion& b) { return a.span < b.span; });
  return clean;
}

// ---- tokenizer -------------------------------------------------------------------

namespace {

struct CodePoint {
  char32_t value;
  std::size_t length;
};

CodePoint decode(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {0xFFFD, 1};
  }
  if (i + len > s.size()) return {0xFFFD, 1};
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {0xFFFD, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

enum class CharClass { space, word, punct };

CharClass classify(char32_t cp) {
  if (cp < 0x80) {
    const char c = static_cast<char>(cp);
    if (is_space(c) || cp < 0x20 || cp == 0x7F) return CharClass::space;
    if (is_alnum(c) || c == '_') return CharClass::word;
    return CharClass::punct;
  }
  if (cp == 0xA0 || (cp >= 0x2000 && cp <= 0x200B) || cp == 0x202F || cp == 0x205F ||
      cp == 0x3000 || cp == 0xFEFF) {
    return CharClass::space;
  }
  if (cp >= 0xA1 && cp <= 0xBF && cp != 0xAA && cp != 0xB2 && cp != 0xB3 && cp != 0xB5 &&
      cp != 0xB9 && cp != 0xBA) {
    return CharClass::punct;
  }
  if (cp == 0xD7 || cp == 0xF7 || (cp >= 0x2010 && cp <= 0x205E) ||
      (cp >= 0x2190 && cp <= 0x22FF) || (cp >= 0x3001 && cp <= 0x303F)) {
    return CharClass::punct;
  }
  return CharClass::word;
}

bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == 0x2019; }

bool ascii_alnum(char32_t cp) { return cp < 0x80 && is_alnum(static_cast<char>(cp)); }

}  // namespace

std::vector<Token> tokenize(std::string_view text, std::size_t base_offset) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const CodePoint cp = decode(text, i);
    const CharClass cls = classify(cp.value);
    if (cls == CharClass::space) {
      i += cp.length;
      continue;
    }
    if (cls == CharClass::punct) {
      tokens.push_back({std::string(text.substr(i, cp.length)),
                        {base_offset + i, base_offset + i + cp.length}});
      i += cp.length;
      continue;
    }
    const std::size_t start = i;
    char32_t prev = cp.value;
    i += cp.length;
    while (i < text.size()) {
      const CodePoint cur = decode(text, i);
      if (classify(cur.value) == CharClass::word) {
        prev = cur.value;
        i += cur.length;
        continue;
      }
      if (i + cur.length >= text.size()) break;
      const CodePoint next = decode(text, i + cur.length);
      const bool joins =
          (cur.value == U'-' && classify(next.value) == CharClass::word) ||
          (is_apostrophe(cur.value) && classify(next.value) == CharClass::word) ||
          (cur.value == U'.' && ascii_alnum(prev) && ascii_alnum(next.value));
      if (!joins) break;
      prev = next.value;
      i += cur.length + next.length;
    }
    tokens.push_back({std::string(text.substr(start, i - start)),
                      {base_offset + start, base_offset + i}});
  }
  return tokens;
}

bool is_punctuation_token(std::string_view token) {
  return !token.empty() && classify(decode(token, 0).value) == CharClass::punct;
}

// ---- sentences -------------------------------------------------------------------

std::set<std::string> SentenceConfig::default_abbreviations() {
  return {"e.g.",  "i.e.",  "cf.",  "vs.",  "approx.", "incl.", "excl.", "no.", "nr.",
          "fig.",  "resp.", "ca.",  "mr.",  "mrs.",    "ms.",   "dr.",   "prof.", "sr.",
          "jr.",   "st.",   "al.",  "esp.", "viz.",    "w.r.t.", "a.k.a.", "min.", "max."};
}

namespace {

bool closing_char(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

bool guarded(std::string_view text, std::size_t period, const SentenceConfig& config) {
  std::size_t b = period;
  while (b > 0 && !is_space(text[b - 1])) --b;
  std::string_view word = text.substr(b, period + 1 - b);
  while (!word.empty() && (word.front() == '(' || word.front() == '"' || word.front() == '\'' ||
                           word.front() == '[')) {
    word.remove_prefix(1);
  }
  return config.abbreviations.count(to_lower_ascii(word)) > 0;
}

}  // namespace

std::vector<Sentence> split_sentences(const CleanText& clean, const SentenceConfig& config) {
  const std::string_view text = clean.text;
  std::vector<Sentence> sentences;
  auto emit = [&](std::size_t b, std::size_t e) {
    while (e > b && is_space(text[e - 1])) --e;
    if (e <= b) return;
    Sentence s;
    s.text = std::string(text.substr(b, e - b));
    s.span = {b, e};
    s.tokens = tokenize(s.text, b);
    sentences.push_back(std::move(s));
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && is_space(text[pos])) ++pos;
    if (pos >= text.size()) break;
    const std::size_t start = pos;
    std::size_t end = text.size();
    std::size_t k = pos;
    while (k < text.size()) {
      const char c = text[k];
      if (c == '\n') {
        end = k;
        break;
      }
      if (c == '.' || c == '!' || c == '?') {
        std::size_t m = k;
        while (m < text.size() && (text[m] == '.' || text[m] == '!' || text[m] == '?')) ++m;
        const bool single_period = c == '.' && m == k + 1;
        while (m < text.size() && closing_char(text[m])) ++m;
        if (m == text.size() || is_space(text[m])) {
          if (!(single_period && guarded(text, k, config))) {
            end = m;
            break;
          }
        }
        k = m;
        continue;
      }
      ++k;
    }
    emit(start, end);
    pos = end;
  }
  return sentences;
}

bool flag_overlong(const CleanText& clean, std::size_t limit) {
  if (limit == 0) throw std::invalid_argument("overlong limit must be positive");
  return utf8_length(clean.text) > limit;
}

}  // namespace issuelens
