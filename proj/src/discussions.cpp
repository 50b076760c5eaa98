#include "issuelens/discussions.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "issuelens/textprep.hpp"
#include "json.hpp"

namespace issuelens {
namespace {

void add_state(std::set<std::string>& states, const std::optional<std::string>& value) {
  if (!value) return;
  const std::string_view v = trim(*value);
  if (!v.empty()) states.emplace(v);
}

void add_stored(std::set<std::string>& states, const Issue& issue, TrackedField f) {
  if (is_scalar(f)) {
    add_state(states, stored_value(issue, f));
    return;
  }
  const std::set<std::string>* values = nullptr;
  switch (f) {
    case TrackedField::labels: values = &issue.labels; break;
    case TrackedField::components: values = &issue.components; break;
    case TrackedField::versions_affected: values = &issue.versions_affected; break;
    case TrackedField::versions_fixed: values = &issue.versions_fixed; break;
    default: return;
  }
  for (const std::string& v : *values) add_state(states, v);
}

using TokenSeq = std::vector<std::string>;

TokenSeq lower_tokens(std::string_view text) {
  TokenSeq out;
  for (const Token& t : tokenize(text)) out.push_back(to_lower_ascii(t.text));
  return out;
}

struct CompiledField {
  std::string name;
  TokenSeq name_tokens;
  std::vector<std::pair<std::string, TokenSeq>> states;
};

std::vector<CompiledField> compile(const std::map<std::string, std::set<std::string>>& fields,
                                   const MentionConfig& config) {
  std::vector<CompiledField> out;
  for (const auto& [name, states] : fields) {
    CompiledField cf{name, lower_tokens(name), {}};
    if (cf.name_tokens.empty()) continue;
    for (const std::string& s : states) {
      if (!state_is_matchable(s, config)) continue;
      TokenSeq seq = lower_tokens(s);
      if (!seq.empty()) cf.states.emplace_back(s, std::move(seq));
    }
    if (!cf.states.empty()) out.push_back(std::move(cf));
  }
  return out;
}

struct IndexedText {
  std::vector<Token> tokens;
  TokenSeq lower;
  std::unordered_map<std::string, std::vector<std::size_t>> positions;
  std::vector<Span> sentences;

  IndexedText(std::string_view text, bool with_sentences) : tokens(tokenize(text)) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      lower.push_back(to_lower_ascii(tokens[i].text));
      positions[lower.back()].push_back(i);
    }
    if (with_sentences) {
      for (const Sentence& s : split_sentences(as_clean_text(text))) sentences.push_back(s.span);
    }
  }

  std::vector<Span> find(const TokenSeq& seq) const {
    std::vector<Span> out;
    const auto it = positions.find(seq.front());
    if (it == positions.end()) return out;
    for (std::size_t start : it->second) {
      if (start + seq.size() > lower.size()) break;
      if (std::equal(seq.begin(), seq.end(), lower.begin() + static_cast<std::ptrdiff_t>(start))) {
        out.push_back({tokens[start].span.begin, tokens[start + seq.size() - 1].span.end});
      }
    }
    return out;
  }

  std::size_t sentence_of(const Span& span) const {
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      if (sentences[i].contains(span)) return i;
    }
    return sentences.size();
  }
};

// Moves an offset back to the start of a UTF-8 sequence.
std::size_t char_boundary(std::string_view text, std::size_t pos) {
  while (pos > 0 && pos < text.size() && (static_cast<unsigned char>(text[pos]) & 0xC0) == 0x80) {
    --pos;
  }
  return pos;
}

std::string excerpt_of(std::string_view text, Span a, Span b, std::size_t context) {
  const std::size_t lo = std::min(a.begin, b.begin);
  const std::size_t hi = std::max(a.end, b.end);
  std::size_t from = char_boundary(text, lo > context ? lo - context : 0);
  std::size_t to = char_boundary(text, std::min(text.size(), hi + context));
  // Trim partial words at the cut edges.
  auto space = [&text](std::size_t i) { return std::isspace(static_cast<unsigned char>(text[i])) != 0; };
  if (from > 0 && !space(from - 1)) {
    while (from < lo && !space(from)) ++from;
    while (from < lo && space(from)) ++from;
  }
  if (to < text.size() && !space(to)) {
    while (to > hi && !space(to - 1)) --to;
    while (to > hi && space(to - 1)) --to;
  }
  std::string out(text.substr(from, to - from));
  for (char& c : out) {
    if (c == '\n' || c == '\r' || c == '\t') c = ' ';
  }
  return out;
}

std::vector<MentionCandidate> mine_compiled(std::string_view text,
                                            const std::vector<CompiledField>& fields,
                                            const MentionConfig& config) {
  std::vector<MentionCandidate> out;
  if (fields.empty()) return out;
  const IndexedText indexed(text, config.same_sentence);
  for (const CompiledField& field : fields) {
    std::vector<Span> field_spans = indexed.find(field.name_tokens);
    if (field_spans.empty()) continue;
    std::vector<StateMatch> state_spans;
    for (const auto& [state, seq] : field.states) {
      for (const Span& s : indexed.find(seq)) state_spans.push_back({state, s});
    }
    if (config.same_sentence) {
      std::set<std::size_t> field_sentences;
      for (const Span& f : field_spans) field_sentences.insert(indexed.sentence_of(f));
      std::erase_if(state_spans, [&](const StateMatch& m) {
        return !field_sentences.count(indexed.sentence_of(m.span));
      });
      std::set<std::size_t> state_sentences;
      for (const StateMatch& m : state_spans) state_sentences.insert(indexed.sentence_of(m.span));
      std::erase_if(field_spans,
                    [&](const Span& f) { return !state_sentences.count(indexed.sentence_of(f)); });
    }
    if (state_spans.empty()) continue;
    std::sort(state_spans.begin(), state_spans.end(), [](const auto& x, const auto& y) {
      return std::tie(x.span, x.state) < std::tie(y.span, y.state);
    });
    MentionCandidate c;
    c.field = field.name;
    for (const StateMatch& m : state_spans) c.states_matched.insert(m.state);
    c.excerpt = excerpt_of(text, field_spans.front(), state_spans.front().span,
                           config.excerpt_context);
    c.field_spans = std::move(field_spans);
    c.state_spans = std::move(state_spans);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::size_t FieldStateDictionary::distinct_field_count() const {
  std::set<std::string> names;
  for (const auto& [tracker, fields] : trackers) {
    for (const auto& [name, states] : fields) names.insert(to_lower_ascii(name));
  }
  return names.size();
}

const std::map<std::string, std::set<std::string>>* FieldStateDictionary::fields_of(
    std::string_view tracker) const {
  const auto it = trackers.find(std::string(tracker));
  return it == trackers.end() ? nullptr : &it->second;
}

FieldStateDictionary build_state_dictionary(const Corpus& corpus) {
  FieldStateDictionary dict;
  for (const std::string& tracker : corpus.trackers()) {
    auto& fields = dict.trackers[tracker];
    const auto issues = corpus.tracker_issues(tracker);
    for (const Issue& issue : issues) {
      for (const ChangeEvent& e : issue.changelog) {
        for (const ChangeItem& item : e.items) {
          const std::string name(trim(item.field));
          if (name.empty()) continue;
          auto& states = fields[name];
          add_state(states, item.from_value);
          add_state(states, item.to_value);
        }
      }
    }
    for (auto& [name, states] : fields) {
      const auto f = tracked_field_from_name(name);
      if (!f) continue;
      for (const Issue& issue : issues) add_stored(states, issue, *f);
    }
    if (fields.empty()) dict.trackers.erase(tracker);
  }
  return dict;
}

std::string dictionary_to_json(const FieldStateDictionary& dictionary) {
  nlohmann::ordered_json j;
  j["distinct_field_count"] = dictionary.distinct_field_count();
  nlohmann::ordered_json trackers = nlohmann::ordered_json::object();
  for (const auto& [tracker, fields] : dictionary.trackers) {
    nlohmann::ordered_json f = nlohmann::ordered_json::object();
    for (const auto& [name, states] : fields) f[name] = states;
    trackers[tracker] = std::move(f);
  }
  j["trackers"] = std::move(trackers);
  return j.dump(2) + "\n";
}

std::string_view to_string(MentionSource source) {
  return source == MentionSource::comment ? "comment" : "description_evolution";
}

bool state_is_matchable(std::string_view state, const MentionConfig& config) {
  const std::string_view s = trim(state);
  if (s.empty() || utf8_length(s) < config.min_state_length) return false;
  if (config.exclude_numeric) {
    bool digit = false;
    bool other = false;
    for (char c : s) {
      if (c >= '0' && c <= '9') {
        digit = true;
      } else if (c != '.' && c != ',' && c != '-' && c != '_' && c != ' ') {
        other = true;
      }
    }
    if (digit && !other) return false;
  }
  return true;
}

std::vector<MentionCandidate> mine_text(std::string_view text,
                                        const std::map<std::string, std::set<std::string>>& fields,
                                        const MentionConfig& config) {
  return mine_compiled(text, compile(fields, config), config);
}

std::vector<MentionCandidate> mine_mentions(const Corpus& corpus,
                                            const FieldStateDictionary& dictionary,
                                            const MentionConfig& config) {
  std::vector<MentionCandidate> out;
  for (const std::string& tracker : corpus.trackers()) {
    const auto* fields = dictionary.fields_of(tracker);
    if (!fields) continue;
    const std::vector<CompiledField> compiled = compile(*fields, config);
    if (compiled.empty()) continue;
    for (const Issue& issue : corpus.tracker_issues(tracker)) {
      auto emit = [&](std::string_view text, MentionSource source, const std::string& id) {
        for (MentionCandidate& c : mine_compiled(text, compiled, config)) {
          c.tracker = issue.tracker;
          c.issue_key = issue.key;
          c.source = source;
          c.source_id = id;
          out.push_back(std::move(c));
        }
      };
      for (std::size_t i = 0; i < issue.comments.size(); ++i) {
        const Comment& cm = issue.comments[i];
        emit(cm.body, MentionSource::comment, cm.id.empty() ? "#" + std::to_string(i) : cm.id);
      }
      if (!issue.created) continue;
      const FieldHistory h = reconstruct_field_history(issue, TrackedField::description);
      if (h.change_count() == 0) continue;
      for (std::size_t v = 0; v < h.versions.size(); ++v) {
        emit(h.versions[v].value.value_or(""), MentionSource::description_evolution,
             "v" + std::to_string(v));
      }
    }
  }
  return out;
}

std::string review_sheet_tsv(const std::vector<MentionCandidate>& candidates) {
  std::vector<const MentionCandidate*> rows;
  for (const MentionCandidate& c : candidates) rows.push_back(&c);
  // Row order depends only on the candidate set; shorter ids first keeps v2 before v10.
  std::sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
    const std::size_t la = a->source_id.size(), lb = b->source_id.size();
    return std::tie(a->tracker, a->issue_key, a->source, la, a->source_id, a->field, a->excerpt) <
           std::tie(b->tracker, b->issue_key, b->source, lb, b->source_id, b->field, b->excerpt);
  });
  std::string out = "tracker\tkey\tsource\tsource_id\tfield\tstates\texcerpt\tlabel\n";
  for (const MentionCandidate* c : rows) {
    out += tsv_escape(c->tracker) + '\t' + tsv_escape(c->issue_key) + '\t';
    out += to_string(c->source);
    out += '\t' + tsv_escape(c->source_id) + '\t' + tsv_escape(c->field) + '\t';
    out += tsv_escape(join({c->states_matched.begin(), c->states_matched.end()}, " | "));
    out += '\t' + tsv_escape(c->excerpt) + "\t\n";
  }
  return out;
}

void export_review_sheet(const std::vector<MentionCandidate>& candidates,
                         const std::filesystem::path& path) {
  write_file_atomic(path, review_sheet_tsv(candidates));
}

}  // namespace issuelens
