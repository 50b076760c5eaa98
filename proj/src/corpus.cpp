#include "issuelens/corpus.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace issuelens {

std::string_view to_string(LinkDirection d) {
  return d == LinkDirection::outward ? "outward" : "inward";
}

namespace {

std::string normalized_field_name(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (c == ' ' || c == '_' || c == '-') continue;
    out += static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
  }
  return out;
}

std::optional<std::string> non_empty(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s;
}

std::optional<std::string> non_empty(const std::optional<std::string>& s) {
  if (!s || s->empty()) return std::nullopt;
  return s;
}

bool same_value(const std::optional<std::string>& a, const std::optional<std::string>& b) {
  return non_empty(a) == non_empty(b);
}

void set_scalar(IssueFields& issue, TrackedField f, const std::optional<std::string>& v) {
  switch (f) {
    case TrackedField::summary: issue.summary = v.value_or(""); break;
    case TrackedField::description: issue.description = v.value_or(""); break;
    case TrackedField::environment: issue.environment = non_empty(v); break;
    case TrackedField::status: issue.status = v.value_or(""); break;
    case TrackedField::priority: issue.priority = non_empty(v); break;
    case TrackedField::resolution: issue.resolution = non_empty(v); break;
    case TrackedField::issue_type: issue.issue_type = v.value_or(""); break;
    case TrackedField::assignee: issue.assignee = non_empty(v); break;
    case TrackedField::reporter: issue.reporter = v.value_or(""); break;
    default: throw std::logic_error("set_scalar on a set-valued field");
  }
}

std::set<std::string>& set_field(IssueFields& issue, TrackedField f) {
  switch (f) {
    case TrackedField::labels: return issue.labels;
    case TrackedField::components: return issue.components;
    case TrackedField::versions_affected: return issue.versions_affected;
    case TrackedField::versions_fixed: return issue.versions_fixed;
    default: throw std::logic_error("set_field on a scalar field");
  }
}

std::set<std::string> split_words(const std::optional<std::string>& s) {
  std::set<std::string> out;
  if (!s) return out;
  std::size_t i = 0;
  const std::string& v = *s;
  while (i < v.size()) {
    while (i < v.size() && v[i] == ' ') ++i;
    std::size_t j = i;
    while (j < v.size() && v[j] != ' ') ++j;
    if (j > i) out.insert(v.substr(i, j - i));
    i = j;
  }
  return out;
}

enum class CleanReason { none, missing_created, impossible_dates, empty_description };

CleanReason clean_reason(const Issue& issue) {
  if (!issue.created) return CleanReason::missing_created;
  if (issue.resolved && *issue.resolved < *issue.created) return CleanReason::impossible_dates;
  if (trim(issue.description).empty()) return CleanReason::empty_description;
  return CleanReason::none;
}

void count_reason(CleaningCounts& counts, CleanReason reason) {
  switch (reason) {
    case CleanReason::missing_created: ++counts.missing_created; break;
    case CleanReason::impossible_dates: ++counts.impossible_dates; break;
    case CleanReason::empty_description: ++counts.empty_description; break;
    case CleanReason::none: break;
  }
}

}  // namespace

std::optional<TrackedField> tracked_field_from_name(std::string_view name) {
  const std::string n = normalized_field_name(name);
  if (n == "summary" || n == "title") return TrackedField::summary;
  if (n == "description") return TrackedField::description;
  if (n == "environment") return TrackedField::environment;
  if (n == "status") return TrackedField::status;
  if (n == "priority") return TrackedField::priority;
  if (n == "resolution") return TrackedField::resolution;
  if (n == "issuetype" || n == "type") return TrackedField::issue_type;
  if (n == "assignee") return TrackedField::assignee;
  if (n == "reporter") return TrackedField::reporter;
  if (n == "labels" || n == "label") return TrackedField::labels;
  if (n == "component" || n == "components") return TrackedField::components;
  if (n == "version" || n == "versions" || n == "affectsversion" || n == "affectsversions" ||
      n == "versionsaffected") {
    return TrackedField::versions_affected;
  }
  if (n == "fixversion" || n == "fixversions" || n == "versionsfixed") {
    return TrackedField::versions_fixed;
  }
  return std::nullopt;
}

std::string_view to_string(TrackedField f) {
  switch (f) {
    case TrackedField::summary: return "summary";
    case TrackedField::description: return "description";
    case TrackedField::environment: return "environment";
    case TrackedField::status: return "status";
    case TrackedField::priority: return "priority";
    case TrackedField::resolution: return "resolution";
    case TrackedField::issue_type: return "issue_type";
    case TrackedField::assignee: return "assignee";
    case TrackedField::reporter: return "reporter";
    case TrackedField::labels: return "labels";
    case TrackedField::components: return "components";
    case TrackedField::versions_affected: return "versions_affected";
    case TrackedField::versions_fixed: return "versions_fixed";
  }
  return "unknown";
}

bool is_scalar(TrackedField f) {
  switch (f) {
    case TrackedField::labels:
    case TrackedField::components:
    case TrackedField::versions_affected:
    case TrackedField::versions_fixed: return false;
    default: return true;
  }
}

std::optional<std::string> stored_value(const IssueFields& issue, TrackedField f) {
  switch (f) {
    case TrackedField::summary: return non_empty(issue.summary);
    case TrackedField::description: return non_empty(issue.description);
    case TrackedField::environment: return non_empty(issue.environment);
    case TrackedField::status: return non_empty(issue.status);
    case TrackedField::priority: return non_empty(issue.priority);
    case TrackedField::resolution: return non_empty(issue.resolution);
    case TrackedField::issue_type: return non_empty(issue.issue_type);
    case TrackedField::assignee: return non_empty(issue.assignee);
    case TrackedField::reporter: return non_empty(issue.reporter);
    default: throw std::invalid_argument("field is not scalar: " + std::string(to_string(f)));
  }
}

// ---- Corpus --------------------------------------------------------------------

Corpus::Corpus(std::vector<Issue> issues) : issues_(std::move(issues)) {
  for (Issue& issue : issues_) {
    std::stable_sort(issue.comments.begin(), issue.comments.end(),
                     [](const Comment& a, const Comment& b) { return a.created < b.created; });
    std::stable_sort(
        issue.changelog.begin(), issue.changelog.end(),
        [](const ChangeEvent& a, const ChangeEvent& b) { return a.created < b.created; });
  }
  std::sort(issues_.begin(), issues_.end(), [](const Issue& a, const Issue& b) {
    return std::tie(a.tracker, a.key) < std::tie(b.tracker, b.key);
  });
  for (std::size_t i = 0; i < issues_.size(); ++i) {
    const auto [it, inserted] = index_.emplace(issues_[i].key, i);
    if (!inserted) throw InputError("duplicate issue key " + issues_[i].key);
    auto range = tracker_ranges_.find(issues_[i].tracker);
    if (range == tracker_ranges_.end()) {
      tracker_ranges_.emplace(issues_[i].tracker, std::make_pair(i, i + 1));
    } else {
      range->second.second = i + 1;
    }
  }
}

std::vector<std::string> Corpus::trackers() const {
  std::vector<std::string> out;
  for (const auto& [name, range] : tracker_ranges_) out.push_back(name);
  return out;
}

bool Corpus::has_tracker(std::string_view tracker) const {
  return tracker_ranges_.find(tracker) != tracker_ranges_.end();
}

std::span<const Issue> Corpus::tracker_issues(std::string_view tracker) const {
  const auto it = tracker_ranges_.find(tracker);
  if (it == tracker_ranges_.end()) return {};
  return std::span<const Issue>(issues_).subspan(it->second.first,
                                                 it->second.second - it->second.first);
}

const Issue* Corpus::find(std::string_view key) const {
  const auto it = index_.find(key);
  return it == index_.end() ? nullptr : &issues_[it->second];
}

// ---- history -------------------------------------------------------------------

FieldHistory reconstruct_field_history(const Issue& issue, std::string_view field) {
  const auto f = tracked_field_from_name(field);
  if (!f) throw std::invalid_argument("unknown field: " + std::string(field));
  return reconstruct_field_history(issue, *f);
}

FieldHistory reconstruct_field_history(const Issue& issue, TrackedField field) {
  if (!is_scalar(field)) {
    throw std::invalid_argument("field has no scalar history: " + std::string(to_string(field)));
  }
  if (!issue.created) throw std::invalid_argument("issue " + issue.key + " has no creation date");

  struct Change {
    const ChangeEvent* event;
    const ChangeItem* item;
  };
  std::vector<Change> changes;
  for (const ChangeEvent& event : issue.changelog) {
    for (const ChangeItem& item : event.items) {
      if (tracked_field_from_name(item.field) == field) changes.push_back({&event, &item});
    }
  }

  FieldHistory history;
  history.field = field;
  const auto stored = stored_value(issue, field);
  if (changes.empty()) {
    history.versions.push_back({*issue.created, stored, {}});
    return history;
  }
  history.versions.push_back({*issue.created, changes.front().item->from_value, {}});
  for (std::size_t i = 0; i < changes.size(); ++i) {
    const Change& c = changes[i];
    if (i > 0 && !same_value(c.item->from_value, changes[i - 1].item->to_value)) {
      history.consistent = false;
      history.diagnostics.push_back("change " + c.event->id +
                                    " does not start from the previous value of " +
                                    std::string(to_string(field)));
    }
    history.versions.push_back({c.event->created, c.item->to_value, c.event->id});
  }
  if (!same_value(history.versions.back().value, stored)) {
    history.consistent = false;
    history.diagnostics.push_back("final changelog value of " + std::string(to_string(field)) +
                                  " differs from stored value on " + issue.key);
  }
  return history;
}

IssueSnapshot snapshot_at(const Issue& issue, Timestamp t) {
  if (!issue.created) throw std::invalid_argument("issue " + issue.key + " has no creation date");
  if (t < *issue.created) {
    throw std::invalid_argument("snapshot time precedes creation of " + issue.key);
  }
  IssueSnapshot snap;
  static_cast<IssueFields&>(snap) = static_cast<const IssueFields&>(issue);
  snap.as_of = t;

  static constexpr TrackedField kScalars[] = {
      TrackedField::summary,    TrackedField::description, TrackedField::environment,
      TrackedField::status,     TrackedField::priority,    TrackedField::resolution,
      TrackedField::issue_type, TrackedField::assignee,    TrackedField::reporter};
  for (TrackedField f : kScalars) {
    const FieldHistory h = reconstruct_field_history(issue, f);
    if (h.change_count() == 0) continue;
    const FieldVersion* current = &h.versions.front();
    for (const FieldVersion& v : h.versions) {
      if (v.at <= t) current = &v;
    }
    set_scalar(snap, f, current->value);
  }

  // Set-valued fields are rolled back from the stored state by undoing later changes.
  for (auto event = issue.changelog.rbegin(); event != issue.changelog.rend(); ++event) {
    if (event->created <= t) break;
    for (auto item = event->items.rbegin(); item != event->items.rend(); ++item) {
      const auto f = tracked_field_from_name(item->field);
      if (!f || is_scalar(*f)) continue;
      std::set<std::string>& values = set_field(snap, *f);
      if (*f == TrackedField::labels) {
        values = split_words(item->from_value);
        continue;
      }
      if (item->to_value) values.erase(*item->to_value);
      if (item->from_value) values.insert(*item->from_value);
    }
  }

  std::erase_if(snap.comments, [t](const Comment& c) { return c.created > t; });
  return snap;
}

// ---- selections ----------------------------------------------------------------

std::vector<UserStoryRow> select_user_stories(const Corpus& corpus, std::string_view tracker,
                                              bool case_sensitive) {
  if (!corpus.has_tracker(tracker)) {
    throw std::invalid_argument("unknown tracker: " + std::string(tracker));
  }
  std::vector<UserStoryRow> rows;
  for (const Issue& issue : corpus.tracker_issues(tracker)) {
    if (!iequals_ascii(issue.issue_type, "Story")) continue;
    const bool has_role = case_sensitive
                              ? issue.description.find("as a") != std::string::npos
                              : to_lower_ascii(issue.description).find("as a") != std::string::npos;
    if (has_role) rows.push_back({issue.key, issue.description});
  }
  return rows;
}

CleanResult clean_corpus(const Corpus& corpus) {
  CleanResult result;
  std::vector<Issue> kept;
  for (const Issue& issue : corpus.issues()) {
    const CleanReason reason = clean_reason(issue);
    if (reason == CleanReason::none) {
      kept.push_back(issue);
    } else {
      count_reason(result.removed, reason);
    }
  }
  result.corpus = Corpus(std::move(kept));
  return result;
}

SampleResult sample_and_clean(const Corpus& corpus, std::size_t n_per_tracker,
                              std::uint64_t seed) {
  if (n_per_tracker < 1) throw std::invalid_argument("sample size must be at least 1");
  SampleResult result;
  std::vector<Issue> sampled;
  for (const std::string& tracker : corpus.trackers()) {
    std::vector<std::string> keys;
    for (const Issue& issue : corpus.tracker_issues(tracker)) keys.push_back(issue.key);
    std::sort(keys.begin(), keys.end());
    deterministic_shuffle(keys, seed);
    if (keys.size() > n_per_tracker) keys.resize(n_per_tracker);
    result.sampled_per_tracker[tracker] = keys.size();
    for (const std::string& key : keys) sampled.push_back(*corpus.find(key));
  }
  CleanResult cleaned = clean_corpus(Corpus(std::move(sampled)));
  result.corpus = std::move(cleaned.corpus);
  result.removed = cleaned.removed;
  return result;
}

std::vector<DescriptionVersionRow> select_evolved_descriptions(const Corpus& corpus) {
  std::vector<DescriptionVersionRow> rows;
  for (const Issue& issue : corpus.issues()) {
    if (!issue.created) continue;
    const FieldHistory h = reconstruct_field_history(issue, TrackedField::description);
    if (h.change_count() == 0) continue;
    for (std::size_t v = 0; v < h.versions.size(); ++v) {
      rows.push_back({issue.key, v, h.versions[v].at, h.versions[v].value.value_or("")});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.key, a.version) < std::tie(b.key, b.version);
  });
  return rows;
}

LinkSelection select_linked_issues(const Corpus& corpus, int year) {
  LinkSelection selection;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (const Issue& issue : corpus.issues()) {
    for (const IssueLink& link : issue.links) {
      if (!seen.emplace(link.link_type, link.source_key, link.target_key).second) continue;
      const Issue* source = corpus.find(link.source_key);
      const Issue* target = corpus.find(link.target_key);
      if (!source || !target) {
        ++selection.dangling;
        continue;
      }
      if (!source->created || utc_year(*source->created) != year) continue;
      IssueLink canonical = link;
      canonical.direction = LinkDirection::outward;
      selection.pairs.push_back({std::move(canonical), source, target});
    }
  }
  std::sort(selection.pairs.begin(), selection.pairs.end(),
            [](const LinkedPair& a, const LinkedPair& b) {
              return std::tie(a.link.link_type, a.link.source_key, a.link.target_key) <
                     std::tie(b.link.link_type, b.link.source_key, b.link.target_key);
            });
  return selection;
}

CorpusStats compute_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.total_issues = corpus.size();
  for (const Issue& issue : corpus.issues()) {
    TrackerStats& t = stats.trackers[issue.tracker];
    ++t.issues;
    ++t.per_issue_type[issue.issue_type.empty() ? "(none)" : issue.issue_type];
    t.comments += issue.comments.size();
    t.change_events += issue.changelog.size();
    t.links += issue.links.size();
    count_reason(t.would_remove, clean_reason(issue));
  }
  return stats;
}

}  // namespace issuelens
