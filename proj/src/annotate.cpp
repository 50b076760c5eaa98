#include "issuelens/annotate.hpp"

#include <fstream>
#include <stdexcept>

#include "issuelens/util.hpp"

namespace issuelens {
namespace {

const std::unordered_map<std::string, std::string>& irregular_verbs() {
  static const std::unordered_map<std::string, std::string> kTable = [] {
    std::unordered_map<std::string, std::string> t = {
        {"am", "be"},    {"is", "be"},     {"are", "be"},    {"was", "be"},    {"were", "be"},
        {"been", "be"},  {"being", "be"},  {"'m", "be"},     {"'re", "be"},    {"art", "be"},
        {"has", "have"}, {"had", "have"},  {"having", "have"}, {"'ve", "have"}, {"'d", "have"},
        {"does", "do"},  {"did", "do"},    {"done", "do"},   {"doing", "do"},  {"goes", "go"},
        {"went", "go"},  {"gone", "go"},   {"ca", "can"},    {"wo", "will"},   {"n't", "not"},
    };
    // base, past, participle
    static const char* kForms[][3] = {
        {"arise", "arose", "arisen"},     {"awake", "awoke", "awoken"},
        {"bear", "bore", "borne"},        {"beat", "beat", "beaten"},
        {"become", "became", "become"},   {"begin", "began", "begun"},
        {"bend", "bent", "bent"},         {"bind", "bound", "bound"},
        {"bite", "bit", "bitten"},        {"bleed", "bled", "bled"},
        {"blow", "blew", "blown"},        {"break", "broke", "broken"},
        {"breed", "bred", "bred"},        {"bring", "brought", "brought"},
        {"build", "built", "built"},      {"burn", "burnt", "burnt"},
        {"buy", "bought", "bought"},      {"catch", "caught", "caught"},
        {"choose", "chose", "chosen"},    {"cling", "clung", "clung"},
        {"come", "came", "come"},         {"creep", "crept", "crept"},
        {"deal", "dealt", "dealt"},       {"dig", "dug", "dug"},
        {"draw", "drew", "drawn"},        {"dream", "dreamt", "dreamt"},
        {"drink", "drank", "drunk"},      {"drive", "drove", "driven"},
        {"eat", "ate", "eaten"},          {"fall", "fell", "fallen"},
        {"feed", "fed", "fed"},           {"feel", "felt", "felt"},
        {"fight", "fought", "fought"},    {"find", "found", "found"},
        {"flee", "fled", "fled"},         {"fling", "flung", "flung"},
        {"fly", "flew", "flown"},         {"forbid", "forbade", "forbidden"},
        {"forget", "forgot", "forgotten"}, {"forgive", "forgave", "forgiven"},
        {"freeze", "froze", "frozen"},    {"get", "got", "gotten"},
        {"give", "gave", "given"},        {"grind", "ground", "ground"},
        {"grow", "grew", "grown"},        {"hang", "hung", "hung"},
        {"hear", "heard", "heard"},       {"hide", "hid", "hidden"},
        {"hold", "held", "held"},         {"keep", "kept", "kept"},
        {"kneel", "knelt", "knelt"},      {"know", "knew", "known"},
        {"lay", "laid", "laid"},          {"lead", "led", "led"},
        {"lean", "leant", "leant"},       {"leap", "leapt", "leapt"},
        {"learn", "learnt", "learnt"},    {"leave", "left", "left"},
        {"lend", "lent", "lent"},         {"lie", "lay", "lain"},
        {"light", "lit", "lit"},          {"lose", "lost", "lost"},
        {"make", "made", "made"},         {"mean", "meant", "meant"},
        {"meet", "met", "met"},           {"mislead", "misled", "misled"},
        {"overcome", "overcame", "overcome"}, {"override", "overrode", "overridden"},
        {"overwrite", "overwrote", "overwritten"}, {"pay", "paid", "paid"},
        {"prove", "proved", "proven"},    {"rebuild", "rebuilt", "rebuilt"},
        {"redo", "redid", "redone"},      {"rerun", "reran", "rerun"},
        {"rewrite", "rewrote", "rewritten"}, {"ride", "rode", "ridden"},
        {"ring", "rang", "rung"},         {"rise", "rose", "risen"},
        {"run", "ran", "run"},            {"say", "said", "said"},
        {"see", "saw", "seen"},           {"seek", "sought", "sought"},
        {"sell", "sold", "sold"},         {"send", "sent", "sent"},
        {"shake", "shook", "shaken"},     {"shine", "shone", "shone"},
        {"shoot", "shot", "shot"},        {"show", "showed", "shown"},
        {"shrink", "shrank", "shrunk"},   {"sing", "sang", "sung"},
        {"sink", "sank", "sunk"},         {"sit", "sat", "sat"},
        {"sleep", "slept", "slept"},      {"slide", "slid", "slid"},
        {"speak", "spoke", "spoken"},     {"spend", "spent", "spent"},
        {"spin", "spun", "spun"},         {"spit", "spat", "spat"},
        {"stand", "stood", "stood"},      {"steal", "stole", "stolen"},
        {"stick", "stuck", "stuck"},      {"sting", "stung", "stung"},
        {"strike", "struck", "struck"},   {"strive", "strove", "striven"},
        {"swear", "swore", "sworn"},      {"sweep", "swept", "swept"},
        {"swim", "swam", "swum"},         {"swing", "swung", "swung"},
        {"take", "took", "taken"},        {"teach", "taught", "taught"},
        {"tear", "tore", "torn"},         {"tell", "told", "told"},
        {"think", "thought", "thought"},  {"throw", "threw", "thrown"},
        {"undergo", "underwent", "undergone"}, {"understand", "understood", "understood"},
        {"undo", "undid", "undone"},      {"uphold", "upheld", "upheld"},
        {"wake", "woke", "woken"},        {"wear", "wore", "worn"},
        {"weave", "wove", "woven"},       {"weep", "wept", "wept"},
        {"win", "won", "won"},            {"wind", "wound", "wound"},
        {"withdraw", "withdrew", "withdrawn"}, {"withhold", "withheld", "withheld"},
        {"write", "wrote", "written"},
    };
    for (const auto& f : kForms) {
      t.emplace(f[1], f[0]);
      t.emplace(f[2], f[0]);
    }
    return t;
  }();
  return kTable;
}

const std::unordered_map<std::string, std::string>& irregular_nouns() {
  static const std::unordered_map<std::string, std::string> kTable = {
      {"children", "child"},     {"men", "man"},           {"women", "woman"},
      {"feet", "foot"},          {"teeth", "tooth"},       {"mice", "mouse"},
      {"geese", "goose"},        {"indices", "index"},     {"matrices", "matrix"},
      {"vertices", "vertex"},    {"appendices", "appendix"}, {"analyses", "analysis"},
      {"bases", "basis"},        {"crises", "crisis"},     {"theses", "thesis"},
      {"hypotheses", "hypothesis"}, {"diagnoses", "diagnosis"}, {"criteria", "criterion"},
      {"phenomena", "phenomenon"}, {"caches", "cache"},    {"niches", "niche"},
      {"statuses", "status"},    {"aliases", "alias"},     {"buses", "bus"},
      {"viruses", "virus"},      {"lives", "life"},        {"knives", "knife"},
      {"halves", "half"},        {"leaves", "leaf"},       {"selves", "self"},
  };
  return kTable;
}

bool is_noun_tag(std::string_view pos) { return pos == "NNS" || pos == "NNPS"; }

bool is_verb_tag(std::string_view pos) {
  return pos == "VB" || pos == "VBD" || pos == "VBG" || pos == "VBN" || pos == "VBP" ||
         pos == "VBZ" || pos == "MD";
}

bool ends(const std::string& w, std::string_view suffix) { return ends_with(w, suffix); }

std::string strip_suffix(const std::string& w, std::string_view suffix, std::string_view add) {
  return w.substr(0, w.size() - suffix.size()) + std::string(add);
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

// Rule-only fallback when no base-form list confirms a candidate.
std::string heuristic_verb(const std::string& w, std::string_view pos) {
  if (pos == "VBZ") {
    if (w.size() > 4 && ends(w, "ies")) return strip_suffix(w, "ies", "y");
    if (ends(w, "sses") || ends(w, "xes") || ends(w, "ches") || ends(w, "shes") ||
        ends(w, "zzes")) {
      return strip_suffix(w, "es", "");
    }
    if (w.size() > 2 && ends(w, "s") && !ends(w, "ss")) return strip_suffix(w, "s", "");
    return w;
  }
  if (pos == "VBD" || pos == "VBN") {
    if (w.size() > 4 && ends(w, "ied")) return strip_suffix(w, "ied", "y");
    if (w.size() > 4 && ends(w, "ed")) {
      std::string stem = strip_suffix(w, "ed", "");
      const std::size_t n = stem.size();
      if (n >= 3 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) && stem[n - 1] != 'l' &&
          stem[n - 1] != 's' && stem[n - 1] != 'f' && stem[n - 1] != 'z' && stem[n - 1] != 'd') {
        stem.pop_back();
      }
      return stem;
    }
    return w;
  }
  if (pos == "VBG") {
    if (w.size() > 5 && ends(w, "ing")) {
      std::string stem = strip_suffix(w, "ing", "");
      const std::size_t n = stem.size();
      if (n >= 3 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) && stem[n - 1] != 'l' &&
          stem[n - 1] != 's' && stem[n - 1] != 'f' && stem[n - 1] != 'z' && stem[n - 1] != 'd') {
        stem.pop_back();
      }
      return stem;
    }
    return w;
  }
  return w;
}

std::string heuristic_noun(const std::string& w) {
  if (w.size() > 4 && ends(w, "ies")) return strip_suffix(w, "ies", "y");
  if (ends(w, "sses") || ends(w, "xes") || ends(w, "ches") || ends(w, "shes") || ends(w, "zzes")) {
    return strip_suffix(w, "es", "");
  }
  if (w.size() > 3 && ends(w, "s") && !ends(w, "ss") && !ends(w, "us") && !ends(w, "is")) {
    return strip_suffix(w, "s", "");
  }
  return w;
}

}  // namespace

Lemmatizer Lemmatizer::load(const std::filesystem::path& base_forms) {
  std::ifstream in(base_forms);
  if (!in) throw ConfigError("cannot open lemma base forms " + base_forms.string());
  Lemmatizer lem;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto f = split(line, '\t');
    if (f.size() != 2 || f[1].empty() || (f[0] != "V" && f[0] != "N")) {
      throw ConfigError(base_forms.string() + ":" + std::to_string(line_no) +
                        ": expected V|N<TAB>word");
    }
    (f[0] == "V" ? lem.verbs_ : lem.nouns_).insert(to_lower_ascii(f[1]));
  }
  return lem;
}

bool Lemmatizer::known(const std::string& w, bool verb) const {
  return !w.empty() && (verb ? verbs_ : nouns_).count(w) > 0;
}

std::optional<std::string> Lemmatizer::pick(
    const std::string& w, bool verb,
    const std::vector<std::pair<std::string_view, std::string_view>>& rules) const {
  for (const auto& [suffix, add] : rules) {
    if (w.size() <= suffix.size() || !ends_with(w, suffix)) continue;
    const std::string candidate = strip_suffix(w, suffix, add);
    if (known(candidate, verb)) return candidate;
  }
  return std::nullopt;
}

bool Lemmatizer::is_verb_base(std::string_view word) const {
  return known(to_lower_ascii(word), true);
}

std::string Lemmatizer::lemma(std::string_view word, std::string_view pos) const {
  std::string w = to_lower_ascii(word);
  if (w.empty()) return w;
  // Curly apostrophes in contractions behave like ASCII ones.
  if (const auto p = w.find("\xE2\x80\x99"); p != std::string::npos) w.replace(p, 3, "'");

  if (is_verb_tag(pos)) {
    if (const auto it = irregular_verbs().find(w); it != irregular_verbs().end()) {
      return it->second;
    }
    if (w == "'s" && pos == "VBZ") return "be";
    if (pos == "VB" || pos == "VBP" || pos == "MD") return w;
    if (known(w, true) && pos != "VBZ") return w;
    std::optional<std::string> hit;
    if (pos == "VBZ") {
      hit = pick(w, true, {{"s", ""}, {"es", ""}, {"ies", "y"}});
    } else if (pos == "VBD" || pos == "VBN") {
      hit = pick(w, true, {{"ed", ""}, {"ed", "e"}, {"ied", "y"}});
      if (!hit && w.size() > 4 && ends_with(w, "ed") && w[w.size() - 3] == w[w.size() - 4]) {
        const std::string undoubled = w.substr(0, w.size() - 3);
        if (known(undoubled, true)) hit = undoubled;
      }
    } else if (pos == "VBG") {
      hit = pick(w, true, {{"ing", ""}, {"ing", "e"}});
      if (!hit && w.size() > 5 && ends_with(w, "ing") && w[w.size() - 4] == w[w.size() - 5]) {
        const std::string undoubled = w.substr(0, w.size() - 4);
        if (known(undoubled, true)) hit = undoubled;
      }
    }
    if (hit) return *hit;
    if (has_base_forms() && pos == "VBZ" && known(w, true)) return w;
    return heuristic_verb(w, pos);
  }

  if (is_noun_tag(pos)) {
    if (const auto it = irregular_nouns().find(w); it != irregular_nouns().end()) {
      return it->second;
    }
    if (ends_with(w, "ss")) return w;
    const auto hit = pick(w, false,
                          {{"s", ""}, {"ses", "s"}, {"xes", "x"}, {"zes", "z"}, {"ches", "ch"},
                           {"shes", "sh"}, {"men", "man"}, {"ies", "y"}});
    if (hit) return *hit;
    if (known(w, false)) return w;
    return heuristic_noun(w);
  }
  return w;
}

// ---- sidecar ------------------------------------------------------------------

SidecarAnnotations SidecarAnnotations::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open annotation file " + path.string());
  SidecarAnnotations sidecar;
  std::vector<std::string> tokens, tags;
  std::string line;
  std::size_t line_no = 0;
  auto flush = [&] {
    if (!tokens.empty()) sidecar.add(std::move(tokens), std::move(tags));
    tokens.clear();
    tags.clear();
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) {
      flush();
      continue;
    }
    const auto f = split(line, '\t');
    if (f.size() != 2 || f[0].empty() || !is_penn_tag(f[1])) {
      throw InputError(path.string() + ":" + std::to_string(line_no) +
                       ": expected token<TAB>Penn tag");
    }
    tokens.push_back(f[0]);
    tags.push_back(f[1]);
  }
  flush();
  return sidecar;
}

void SidecarAnnotations::add(std::vector<std::string> tokens, std::vector<std::string> tags) {
  if (tokens.size() != tags.size()) throw std::invalid_argument("token/tag count mismatch");
  blocks_[std::move(tokens)] = std::move(tags);
}

const std::vector<std::string>* SidecarAnnotations::find(
    const std::vector<std::string>& tokens) const {
  const auto it = blocks_.find(tokens);
  return it == blocks_.end() ? nullptr : &it->second;
}

// ---- annotator ----------------------------------------------------------------

Annotator::Annotator(std::shared_ptr<const PerceptronTagger> tagger, Lemmatizer lemmatizer,
                     std::shared_ptr<const SidecarAnnotations> sidecar)
    : tagger_(std::move(tagger)), lemmatizer_(std::move(lemmatizer)), sidecar_(std::move(sidecar)) {
  if (!tagger_ || tagger_->empty()) throw std::invalid_argument("annotator needs a trained tagger");
}

std::vector<TaggedToken> Annotator::pos_tag(const std::vector<std::string>& tokens) const {
  if (tokens.empty()) throw std::invalid_argument("pos_tag needs at least one token");
  std::vector<std::string> tags;
  if (const auto* external = sidecar_ ? sidecar_->find(tokens) : nullptr) {
    tags = *external;
  } else {
    tags = tagger_->tag(tokens);
    // The tagger reads a capitalised first word as a proper noun far too often;
    // "Deleting" at the start of a sentence is a gerund when "delete" is a verb.
    const std::string& first = tokens.front();
    if (tags.front() == "NNP" && first.size() > 5 && first[0] >= 'A' && first[0] <= 'Z' &&
        ends_with(first, "ing") && first.substr(1) == to_lower_ascii(first.substr(1))) {
      const std::string base = lemmatizer_.lemma(first, "VBG");
      if (base != to_lower_ascii(first) && lemmatizer_.is_verb_base(base)) tags.front() = "VBG";
    }
  }
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string lemma = lemmatizer_.lemma(tokens[i], tags[i]);
    if (lemma.empty()) lemma = tokens[i];
    out.push_back({tokens[i], tags[i], std::move(lemma)});
  }
  return out;
}

// ---- tagged stream ------------------------------------------------------------

namespace {

void check_stream_field(const std::string& field, const char* what) {
  if (field.empty()) throw std::invalid_argument(std::string("empty ") + what + " in tagged token");
  if (field.find(kStreamDelimiter) != std::string::npos) {
    throw std::invalid_argument(std::string(what) + " contains the stream delimiter: " + field);
  }
  for (char c : field) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      throw std::invalid_argument(std::string(what) + " contains whitespace: " + field);
    }
  }
}

}  // namespace

std::string render_tagged_stream(const std::vector<TaggedToken>& tagged) {
  std::string out;
  for (std::size_t i = 0; i < tagged.size(); ++i) {
    const TaggedToken& t = tagged[i];
    check_stream_field(t.word, "word");
    check_stream_field(t.pos, "tag");
    check_stream_field(t.lemma, "lemma");
    if (i > 0) out += ' ';
    out += t.word;
    out += kStreamDelimiter;
    out += t.pos;
    out += kStreamDelimiter;
    out += t.lemma;
  }
  return out;
}

std::vector<TaggedToken> parse_tagged_stream(std::string_view rendered) {
  std::vector<TaggedToken> out;
  if (rendered.empty()) return out;
  for (const std::string& item : split(rendered, ' ')) {
    const auto a = item.find(kStreamDelimiter);
    const auto b = a == std::string::npos ? a : item.find(kStreamDelimiter, a + 2);
    if (a == std::string::npos || b == std::string::npos ||
        item.find(kStreamDelimiter, b + 2) != std::string::npos) {
      throw std::invalid_argument("malformed tagged token: " + item);
    }
    TaggedToken t{item.substr(0, a), item.substr(a + 2, b - a - 2), item.substr(b + 2)};
    if (t.word.empty() || t.pos.empty() || t.lemma.empty()) {
      throw std::invalid_argument("malformed tagged token: " + item);
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::string sanitize_stream_word(std::string_view word) {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word.substr(i, 2) == kStreamDelimiter) {
      out += "deg";
      ++i;
    } else if (word[i] == ' ' || word[i] == '\t' || word[i] == '\n' || word[i] == '\r') {
      out += '_';
    } else {
      out += word[i];
    }
  }
  return out.empty() ? std::string("_") : out;
}

// ---- VBG roles ----------------------------------------------------------------

std::string_view to_string(VbgRole role) {
  switch (role) {
    case VbgRole::root_verb: return "root_verb";
    case VbgRole::auxiliary: return "auxiliary";
    case VbgRole::adverbial_modifier: return "adverbial_modifier";
    case VbgRole::compound: return "compound";
    case VbgRole::clausal_modifier_of_noun: return "clausal_modifier_of_noun";
    case VbgRole::nominal: return "nominal";
  }
  return "unknown";
}

namespace {

bool is_adverb(const TaggedToken& t) { return t.pos == "RB" || t.pos == "RBR" || t.pos == "RBS"; }
bool is_noun(const TaggedToken& t) {
  return t.pos == "NN" || t.pos == "NNS" || t.pos == "NNP" || t.pos == "NNPS";
}
bool is_common_noun(const TaggedToken& t) { return t.pos == "NN" || t.pos == "NNS"; }

bool is_subordinator(const TaggedToken& t) {
  static const std::unordered_set<std::string> kWords = {
      "while", "when", "by", "whilst", "whenever", "before", "after", "without", "upon", "since"};
  return kWords.count(to_lower_ascii(t.word)) > 0;
}

}  // namespace

VbgRole classify_vbg_role(const std::vector<TaggedToken>& tagged, std::size_t index) {
  if (index >= tagged.size()) throw std::out_of_range("VBG index out of range");
  const TaggedToken& self = tagged[index];
  if (self.pos != "VBG") throw std::invalid_argument("token is not tagged VBG: " + self.word);

  std::size_t after = index + 1;
  while (after < tagged.size() && is_adverb(tagged[after])) ++after;
  const bool participle_follows = after < tagged.size() && tagged[after].pos == "VBN";

  // (a)
  std::size_t before = index;
  while (before > 0 && is_adverb(tagged[before - 1])) --before;
  if (before > 0 && tagged[before - 1].lemma == "be" && tagged[before - 1].pos[0] == 'V') {
    return participle_follows ? VbgRole::auxiliary : VbgRole::root_verb;
  }
  if ((self.lemma == "be" || self.lemma == "have") && participle_follows) {
    return VbgRole::auxiliary;
  }

  // (b)
  const bool noun_follows = index + 1 < tagged.size() && is_common_noun(tagged[index + 1]);
  std::size_t det = index;
  while (det > 0 && (tagged[det - 1].pos == "JJ" || is_adverb(tagged[det - 1]))) --det;
  if (noun_follows && det > 0) {
    const std::string& p = tagged[det - 1].pos;
    if (p == "DT" || p == "PRP$" || p == "POS" || p == "CD" || p == "WP$") {
      return VbgRole::compound;
    }
  }
  if (index > 0 && is_noun(tagged[index - 1])) return VbgRole::clausal_modifier_of_noun;

  // (c)
  if (index > 0 && (tagged[index - 1].word == "," || is_subordinator(tagged[index - 1]))) {
    return VbgRole::adverbial_modifier;
  }
  return VbgRole::nominal;
}

}  // namespace issuelens
