#include "issuelens/lints.hpp"

#include <algorithm>
#include <regex>
#include <tuple>

namespace issuelens {

std::string_view to_string(RuleId rule) {
  switch (rule) {
    case RuleId::dangerous_plural: return "dangerous_plural";
    case RuleId::inside_behaviour: return "inside_behaviour";
    case RuleId::unclear_inclusion: return "unclear_inclusion";
    case RuleId::passive_voice: return "passive_voice";
    case RuleId::derived_nominal: return "derived_nominal";
    case RuleId::gerundive_nominal: return "gerundive_nominal";
  }
  return "unknown";
}

std::optional<RuleId> rule_from_name(std::string_view name) {
  for (RuleId r : kAllRules) {
    if (to_string(r) == name) return r;
  }
  return std::nullopt;
}

std::string_view to_string(SourceField field) {
  switch (field) {
    case SourceField::summary: return "summary";
    case SourceField::description: return "description";
    case SourceField::comment: return "comment";
  }
  return "unknown";
}

void RuleConfig::validate() const {
  auto check_words = [](const std::set<std::string>& words, const char* name) {
    if (words.empty()) throw ConfigError(std::string(name) + " must not be empty");
    for (const std::string& w : words) {
      if (w.empty() || w != to_lower_ascii(w)) {
        throw ConfigError(std::string(name) + " entries must be lowercase words: '" + w + "'");
      }
    }
  };
  check_words(dangerous_plural_words, "dangerous_plural_words");
  check_words(inside_behaviour_words, "inside_behaviour_words");
  if (derived_suffixes.empty()) throw ConfigError("derived_suffixes must not be empty");
  for (const std::string& s : derived_suffixes) {
    if (s.empty() || s != to_lower_ascii(s)) {
      throw ConfigError("derived_suffixes entries must be lowercase: '" + s + "'");
    }
  }
  if (action_labels.empty()) throw ConfigError("action_labels must not be empty");
}

namespace {

std::vector<RuleHit> word_list_rule(const std::vector<Sentence>& sentences,
                                    const std::set<std::string>& words, bool case_insensitive,
                                    RuleId rule, std::string_view what) {
  std::vector<RuleHit> hits;
  for (const Sentence& s : sentences) {
    for (const Token& t : s.tokens) {
      const std::string key = case_insensitive ? to_lower_ascii(t.text) : t.text;
      if (words.count(key)) {
        hits.push_back({rule, t.span, "'" + t.text + "' " + std::string(what)});
      }
    }
  }
  return hits;
}

bool trailing_trim(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '.' || c == ',' || c == ';' ||
         c == ':' || c == '!' || c == '?' || c == ')' || c == '"' || c == '\'';
}

}  // namespace

std::vector<RuleHit> lint_dangerous_plurals(const std::vector<Sentence>& sentences,
                                            const RuleConfig& config) {
  return word_list_rule(sentences, config.dangerous_plural_words, config.case_insensitive,
                        RuleId::dangerous_plural, "quantifies without a boundary condition");
}

std::vector<RuleHit> lint_inside_behaviour(const std::vector<Sentence>& sentences,
                                           const RuleConfig& config) {
  return word_list_rule(sentences, config.inside_behaviour_words, config.case_insensitive,
                        RuleId::inside_behaviour, "leaves the outside behaviour unstated");
}

std::vector<RuleHit> lint_unclear_inclusion(const std::vector<Sentence>& sentences) {
  static const std::regex kUpTo("up\\sto\\s(?!.*(?:including|excluding))",
                                std::regex::ECMAScript | std::regex::icase);
  std::vector<RuleHit> hits;
  for (const Sentence& s : sentences) {
    for (auto it = std::sregex_iterator(s.text.begin(), s.text.end(), kUpTo);
         it != std::sregex_iterator(); ++it) {
      const auto begin = static_cast<std::size_t>(it->position(0));
      std::size_t end = s.text.size();
      while (end > begin + 5 && trailing_trim(s.text[end - 1])) --end;
      hits.push_back({RuleId::unclear_inclusion,
                      {s.span.begin + begin, s.span.begin + end},
                      "'up to' without stating whether the bound is included"});
    }
  }
  return hits;
}

std::vector<RuleHit> lint_passive_voice(const std::vector<AnalyzedSentence>& sentences) {
  std::vector<RuleHit> hits;
  for (const AnalyzedSentence& a : sentences) {
    if (a.tagged.empty()) continue;
    for (const auto& [first, last] : passive_matches_regex(a.tagged)) {
      hits.push_back({RuleId::passive_voice,
                      {a.sentence.tokens[first].span.begin, a.sentence.tokens[last].span.end},
                      "passive construction omits the actor"});
    }
  }
  return hits;
}

std::vector<RuleHit> lint_derived_nominals(const std::vector<AnalyzedSentence>& sentences,
                                           const HypernymLexicon& lexicon,
                                           const RuleConfig& config) {
  if (!lexicon.loaded()) throw std::logic_error("hypernym lexicon not loaded");
  std::vector<RuleHit> hits;
  for (const AnalyzedSentence& a : sentences) {
    for (std::size_t i = 0; i < a.tagged.size(); ++i) {
      const TaggedToken& t = a.tagged[i];
      if (t.pos != "NN" && t.pos != "NNS") continue;
      const std::string lemma = to_lower_ascii(t.lemma);
      const bool suffix = std::any_of(
          config.derived_suffixes.begin(), config.derived_suffixes.end(),
          [&](const std::string& s) {
            return ends_with(lemma, s) && lemma.size() >= s.size() + config.min_stem_length;
          });
      if (!suffix || !lexicon.has_label(lemma, config.action_labels)) continue;
      hits.push_back({RuleId::derived_nominal, a.sentence.tokens[i].span,
                      "'" + t.word + "' is a derived nominal hiding a process"});
    }
  }
  return hits;
}

std::vector<RuleHit> lint_gerundive_nominals(const std::vector<AnalyzedSentence>& sentences) {
  std::vector<RuleHit> hits;
  for (const AnalyzedSentence& a : sentences) {
    for (std::size_t i = 0; i < a.tagged.size(); ++i) {
      if (a.tagged[i].pos != "VBG") continue;
      if (classify_vbg_role(a.tagged, i) != VbgRole::nominal) continue;
      hits.push_back({RuleId::gerundive_nominal, a.sentence.tokens[i].span,
                      "'" + a.tagged[i].word + "' is a gerundive nominal hiding a process"});
    }
  }
  return hits;
}

// ---- Linter ---------------------------------------------------------------------

Linter::Linter(const Annotator& annotator, const HypernymLexicon& lexicon, RuleConfig config,
               SentenceConfig sentences)
    : annotator_(annotator),
      lexicon_(lexicon),
      config_(std::move(config)),
      sentence_config_(std::move(sentences)) {
  config_.validate();
}

std::vector<AnalyzedSentence> Linter::analyze(const CleanText& clean) const {
  std::vector<AnalyzedSentence> out;
  for (Sentence& s : split_sentences(clean, sentence_config_)) {
    AnalyzedSentence a;
    if (!s.tokens.empty()) {
      std::vector<std::string> words;
      words.reserve(s.tokens.size());
      for (const Token& t : s.tokens) words.push_back(sanitize_stream_word(t.text));
      a.tagged = annotator_.pos_tag(words);
    }
    a.sentence = std::move(s);
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<Finding> Linter::lint_text(std::string_view raw, std::string_view issue_key,
                                       SourceField field, std::string_view source_id) const {
  const CleanText clean = strip_markup(raw);
  const auto on = [this](RuleId r) { return config_.enabled.count(r) > 0; };
  std::vector<RuleHit> hits;
  auto append = [&hits](std::vector<RuleHit> more) {
    hits.insert(hits.end(), std::make_move_iterator(more.begin()),
                std::make_move_iterator(more.end()));
  };
  const bool needs_tags =
      on(RuleId::passive_voice) || on(RuleId::derived_nominal) || on(RuleId::gerundive_nominal);
  std::vector<AnalyzedSentence> analyzed;
  std::vector<Sentence> sentences;
  if (needs_tags) {
    analyzed = analyze(clean);
    for (const AnalyzedSentence& a : analyzed) sentences.push_back(a.sentence);
  } else {
    sentences = split_sentences(clean, sentence_config_);
  }
  if (on(RuleId::dangerous_plural)) append(lint_dangerous_plurals(sentences, config_));
  if (on(RuleId::inside_behaviour)) append(lint_inside_behaviour(sentences, config_));
  if (on(RuleId::unclear_inclusion)) append(lint_unclear_inclusion(sentences));
  if (on(RuleId::passive_voice)) append(lint_passive_voice(analyzed));
  if (on(RuleId::derived_nominal)) append(lint_derived_nominals(analyzed, lexicon_, config_));
  if (on(RuleId::gerundive_nominal)) append(lint_gerundive_nominals(analyzed));

  std::vector<Finding> findings;
  for (RuleHit& h : hits) {
    Finding f;
    f.rule = h.rule;
    f.issue_key = std::string(issue_key);
    f.field = field;
    f.source_id = std::string(source_id);
    f.span = clean.original_span(h.span);
    f.matched_text = std::string(raw.substr(f.span.begin, f.span.size()));
    f.message = std::move(h.message);
    findings.push_back(std::move(f));
  }
  sort_findings(findings);
  return findings;
}

std::vector<Finding> Linter::lint_issue(const Issue& issue) const {
  std::vector<Finding> all = lint_text(issue.summary, issue.key, SourceField::summary);
  auto add = [&all](std::vector<Finding> more) {
    all.insert(all.end(), std::make_move_iterator(more.begin()),
               std::make_move_iterator(more.end()));
  };
  add(lint_text(issue.description, issue.key, SourceField::description));
  if (config_.include_comments) {
    for (std::size_t i = 0; i < issue.comments.size(); ++i) {
      const Comment& c = issue.comments[i];
      add(lint_text(c.body, issue.key, SourceField::comment,
                    c.id.empty() ? "#" + std::to_string(i) : c.id));
    }
  }
  sort_findings(all);
  return all;
}

void sort_findings(std::vector<Finding>& findings) {
  std::stable_sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
    return std::tie(a.issue_key, a.field, a.source_id, a.span, a.rule) <
           std::tie(b.issue_key, b.field, b.source_id, b.span, b.rule);
  });
}

std::string findings_to_tsv(const std::vector<Finding>& findings) {
  std::string out = "key\trule\tfield\tstart\tend\tmatched_text\tsource_id\tmessage\n";
  for (const Finding& f : findings) {
    out += tsv_escape(f.issue_key);
    out += '\t';
    out += to_string(f.rule);
    out += '\t';
    out += to_string(f.field);
    out += '\t' + std::to_string(f.span.begin) + '\t' + std::to_string(f.span.end) + '\t';
    out += tsv_escape(f.matched_text);
    out += '\t';
    out += tsv_escape(f.source_id);
    out += '\t';
    out += tsv_escape(f.message);
    out += '\n';
  }
  return out;
}

}  // namespace issuelens
