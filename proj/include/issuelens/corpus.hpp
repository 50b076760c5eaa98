#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "issuelens/timestamp.hpp"
#include "issuelens/util.hpp"

namespace issuelens {

struct Comment {
  std::string id;
  std::string author;
  Timestamp created{};
  std::string body;

  bool operator==(const Comment&) const = default;
};

// One field's before/after pair inside a change event ("fromString"/"toString").
struct ChangeItem {
  std::string field;
  std::optional<std::string> from_value;
  std::optional<std::string> to_value;

  bool operator==(const ChangeItem&) const = default;
};

struct ChangeEvent {
  std::string id;
  std::string author;
  Timestamp created{};
  std::vector<ChangeItem> items;
};

enum class LinkDirection { outward, inward };

std::string_view to_string(LinkDirection d);

// source/target are resolved at load time: an outward link stored on A to B is
// A -> B, an inward one is B -> A. Mirrored copies therefore compare equal.
struct IssueLink {
  std::string link_type;
  LinkDirection direction = LinkDirection::outward;
  std::string source_key;
  std::string target_key;

  bool operator==(const IssueLink&) const = default;
};

// Everything about an issue except its changelog; shared by Issue and IssueSnapshot.
struct IssueFields {
  std::string key;
  std::string tracker;
  std::string project;
  std::string summary;
  std::string description;
  std::string issue_type;
  std::string status;
  std::optional<std::string> priority;
  std::optional<std::string> resolution;
  std::optional<Timestamp> created;  // only absent in unclean exports
  std::optional<Timestamp> resolved;
  std::set<std::string> labels;
  std::optional<std::string> environment;
  std::set<std::string> versions_affected;
  std::set<std::string> versions_fixed;
  std::string creator;
  std::string reporter;
  std::optional<std::string> assignee;
  std::set<std::string> components;
  std::optional<std::string> parent;
  std::vector<Comment> comments;
  std::vector<IssueLink> links;

  bool operator==(const IssueFields&) const = default;
};

struct Issue : IssueFields {
  std::vector<ChangeEvent> changelog;
};

struct IssueSnapshot : IssueFields {
  Timestamp as_of{};
};

// Fields whose history can be replayed from the changelog.
enum class TrackedField {
  summary,
  description,
  environment,
  status,
  priority,
  resolution,
  issue_type,
  assignee,
  reporter,
  labels,
  components,
  versions_affected,
  versions_fixed,
};

// Maps changelog/display names ("issuetype", "Fix Version", "Component", ...) to a field.
std::optional<TrackedField> tracked_field_from_name(std::string_view name);
std::string_view to_string(TrackedField f);
bool is_scalar(TrackedField f);

// Current value of a scalar field; empty strings read as absent.
std::optional<std::string> stored_value(const IssueFields& issue, TrackedField f);

class Corpus {
 public:
  Corpus() = default;
  // Sorts by (tracker, key) and sorts each issue's comments and changelog by time.
  // Throws InputError on a duplicate key.
  explicit Corpus(std::vector<Issue> issues);

  const std::vector<Issue>& issues() const { return issues_; }
  std::size_t size() const { return issues_.size(); }
  bool empty() const { return issues_.empty(); }

  std::vector<std::string> trackers() const;
  bool has_tracker(std::string_view tracker) const;
  std::span<const Issue> tracker_issues(std::string_view tracker) const;
  const Issue* find(std::string_view key) const;

 private:
  std::vector<Issue> issues_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::map<std::string, std::pair<std::size_t, std::size_t>, std::less<>> tracker_ranges_;
};

// ---- loading ---------------------------------------------------------------

struct LoadWarning {
  std::string file;
  std::size_t line = 0;
  std::string message;
};

struct LoadResult {
  Corpus corpus;
  std::vector<LoadWarning> warnings;
  std::vector<std::filesystem::path> files;
  std::size_t records_read = 0;
  std::string input_digest;  // sha256 over the input files in load order
};

// Reads one newline-delimited JSON file, or every *.jsonl / *.ndjson / *.json file
// in a directory (sorted by name). Invalid records are skipped with a warning, or
// abort the load when `strict` is set.
LoadResult load_corpus(const std::filesystem::path& path, bool strict);

// Parses a single record; throws InputError describing the schema violation.
Issue parse_issue_json(std::string_view line);
std::string issue_to_json(const Issue& issue);

// ---- history and snapshots ---------------------------------------------------

struct FieldVersion {
  Timestamp at{};
  std::optional<std::string> value;
  std::string event_id;  // empty for the inferred creation-time version
};

struct FieldHistory {
  TrackedField field = TrackedField::description;
  std::vector<FieldVersion> versions;
  bool consistent = true;
  std::vector<std::string> diagnostics;

  std::size_t change_count() const { return versions.empty() ? 0 : versions.size() - 1; }
};

// Entry 0 is the creation-time value: from_value of the earliest change, or the
// stored value if the field never changed. Throws std::invalid_argument for an
// unknown or non-scalar field, or an issue without a creation date.
FieldHistory reconstruct_field_history(const Issue& issue, std::string_view field);
FieldHistory reconstruct_field_history(const Issue& issue, TrackedField field);

// State of the issue as of `t` (changes at exactly t are applied). Resolved date is
// not tracked by trackers and is copied unchanged. Throws std::invalid_argument
// when t precedes creation.
IssueSnapshot snapshot_at(const Issue& issue, Timestamp t);

// ---- selections ----------------------------------------------------------------

struct UserStoryRow {
  std::string key;
  std::string description;
};

// Stories (type compared case-insensitively) whose description contains "as a".
std::vector<UserStoryRow> select_user_stories(const Corpus& corpus, std::string_view tracker,
                                              bool case_sensitive = false);

struct CleaningCounts {
  std::size_t missing_created = 0;
  std::size_t impossible_dates = 0;
  std::size_t empty_description = 0;

  std::size_t total() const { return missing_created + impossible_dates + empty_description; }
  bool operator==(const CleaningCounts&) const = default;
};

struct CleanResult {
  Corpus corpus;
  CleaningCounts removed;
};

// Drops issues with no creation date, a resolution before creation, or a blank
// description. Each issue is counted under the first reason that applies.
CleanResult clean_corpus(const Corpus& corpus);

struct SampleResult {
  Corpus corpus;
  CleaningCounts removed;
  std::map<std::string, std::size_t> sampled_per_tracker;
};

// Per tracker: keys sorted, shuffled under `seed`, first n kept; then cleaned.
SampleResult sample_and_clean(const Corpus& corpus, std::size_t n_per_tracker, std::uint64_t seed);

struct DescriptionVersionRow {
  std::string key;
  std::size_t version = 0;
  Timestamp at{};
  std::string text;
};

std::vector<DescriptionVersionRow> select_evolved_descriptions(const Corpus& corpus);

struct LinkedPair {
  IssueLink link;
  const Issue* source = nullptr;
  const Issue* target = nullptr;
};

struct LinkSelection {
  std::vector<LinkedPair> pairs;  // sorted by (type, source, target)
  std::size_t dangling = 0;
};

LinkSelection select_linked_issues(const Corpus& corpus, int year);

// ---- statistics ------------------------------------------------------------------

struct TrackerStats {
  std::size_t issues = 0;
  std::map<std::string, std::size_t> per_issue_type;
  std::size_t comments = 0;
  std::size_t change_events = 0;
  std::size_t links = 0;
  CleaningCounts would_remove;
};

struct CorpusStats {
  std::map<std::string, TrackerStats> trackers;
  std::size_t total_issues = 0;
};

CorpusStats compute_stats(const Corpus& corpus);

}  // namespace issuelens
