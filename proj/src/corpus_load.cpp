#include <algorithm>

#include "issuelens/corpus.hpp"
#include "json.hpp"

namespace issuelens {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void schema_error(const std::string& what) { throw InputError(what); }

const json* member(const json& obj, const char* name) {
  const auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string required_string(const json& obj, const char* name, const std::string& where) {
  const json* v = member(obj, name);
  if (!v) schema_error(where + "missing required field '" + name + "'");
  if (!v->is_string()) schema_error(where + "field '" + name + "' must be a string");
  std::string s = v->get<std::string>();
  if (trim(s).empty()) schema_error(where + "field '" + name + "' is empty");
  return s;
}

std::string string_or_empty(const json& obj, const char* name, const std::string& where) {
  const json* v = member(obj, name);
  if (!v) return {};
  if (!v->is_string()) schema_error(where + "field '" + name + "' must be a string");
  return v->get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* name,
                                           const std::string& where) {
  const json* v = member(obj, name);
  if (!v) return std::nullopt;
  if (!v->is_string()) schema_error(where + "field '" + name + "' must be a string or null");
  return v->get<std::string>();
}

// Empty strings are treated like null for optional scalar fields.
std::optional<std::string> optional_nonempty(const json& obj, const char* name,
                                             const std::string& where) {
  auto v = optional_string(obj, name, where);
  if (v && trim(*v).empty()) return std::nullopt;
  return v;
}

std::optional<Timestamp> optional_timestamp(const json& obj, const char* name,
                                            const std::string& where) {
  const auto s = optional_string(obj, name, where);
  if (!s || s->empty()) return std::nullopt;
  const auto t = parse_timestamp(*s);
  if (!t) schema_error(where + "field '" + name + "' is not an ISO-8601 timestamp: " + *s);
  return t;
}

Timestamp required_timestamp(const json& obj, const char* name, const std::string& where) {
  const auto t = optional_timestamp(obj, name, where);
  if (!t) schema_error(where + "missing required field '" + name + "'");
  return *t;
}

std::set<std::string> string_set(const json& obj, const char* name, const std::string& where) {
  std::set<std::string> out;
  const json* v = member(obj, name);
  if (!v) return out;
  if (!v->is_array()) schema_error(where + "field '" + name + "' must be an array of strings");
  for (const json& e : *v) {
    if (!e.is_string()) schema_error(where + "field '" + name + "' must be an array of strings");
    const std::string s(trim(e.get<std::string>()));
    if (!s.empty()) out.insert(s);
  }
  return out;
}

const json* optional_array(const json& obj, const char* name, const std::string& where) {
  const json* v = member(obj, name);
  if (v && !v->is_array()) schema_error(where + "field '" + name + "' must be an array");
  return v;
}

std::string id_string(const json& obj, const std::string& where) {
  const json* v = member(obj, "id");
  if (!v) return {};
  if (v->is_string()) return v->get<std::string>();
  if (v->is_number_integer()) return std::to_string(v->get<long long>());
  schema_error(where + "field 'id' must be a string or integer");
}

Issue parse_record(const json& j, std::vector<std::string>* notes) {
  if (!j.is_object()) schema_error("record is not a JSON object");
  Issue issue;
  issue.key = required_string(j, "key", "");
  const std::string at = issue.key + ": ";
  issue.tracker = required_string(j, "tracker", at);
  issue.project = string_or_empty(j, "project", at);
  issue.summary = string_or_empty(j, "summary", at);
  issue.description = string_or_empty(j, "description", at);
  issue.issue_type = string_or_empty(j, "issue_type", at);
  issue.status = string_or_empty(j, "status", at);
  issue.priority = optional_nonempty(j, "priority", at);
  issue.resolution = optional_nonempty(j, "resolution", at);
  issue.created = optional_timestamp(j, "created", at);
  issue.resolved = optional_timestamp(j, "resolved", at);
  issue.labels = string_set(j, "labels", at);
  issue.environment = optional_nonempty(j, "environment", at);
  issue.versions_affected = string_set(j, "versions_affected", at);
  issue.versions_fixed = string_set(j, "versions_fixed", at);
  issue.creator = string_or_empty(j, "creator", at);
  issue.reporter = string_or_empty(j, "reporter", at);
  issue.assignee = optional_nonempty(j, "assignee", at);
  issue.components = string_set(j, "components", at);
  issue.parent = optional_nonempty(j, "parent", at);

  if (const json* comments = optional_array(j, "comments", at)) {
    std::size_t n = 0;
    for (const json& c : *comments) {
      const std::string where = at + "comment " + std::to_string(n++) + ": ";
      if (!c.is_object()) schema_error(where + "not an object");
      Comment comment;
      comment.id = id_string(c, where);
      comment.author = string_or_empty(c, "author", where);
      comment.created = required_timestamp(c, "created", where);
      const json* body = member(c, "body");
      if (!body || !body->is_string()) schema_error(where + "missing comment body");
      comment.body = body->get<std::string>();
      issue.comments.push_back(std::move(comment));
    }
  }

  if (const json* changelog = optional_array(j, "changelog", at)) {
    std::size_t n = 0;
    for (const json& e : *changelog) {
      const std::string where = at + "change event " + std::to_string(n++) + ": ";
      if (!e.is_object()) schema_error(where + "not an object");
      ChangeEvent event;
      event.id = id_string(e, where);
      event.author = string_or_empty(e, "author", where);
      event.created = required_timestamp(e, "created", where);
      const json* items = optional_array(e, "items", where);
      if (!items || items->empty()) schema_error(where + "has no items");
      for (const json& it : *items) {
        if (!it.is_object()) schema_error(where + "item is not an object");
        ChangeItem item;
        item.field = required_string(it, "field", where);
        item.from_value = optional_string(it, "fromString", where);
        item.to_value = optional_string(it, "toString", where);
        if (!item.from_value && !item.to_value) {
          schema_error(where + "item for '" + item.field + "' has neither fromString nor toString");
        }
        event.items.push_back(std::move(item));
      }
      issue.changelog.push_back(std::move(event));
    }
  }

  if (const json* links = optional_array(j, "links", at)) {
    std::size_t n = 0;
    for (const json& l : *links) {
      const std::string where = at + "link " + std::to_string(n++) + ": ";
      if (!l.is_object()) schema_error(where + "not an object");
      IssueLink link;
      link.link_type = required_string(l, "type", where);
      const std::string direction = required_string(l, "direction", where);
      const std::string other = required_string(l, "otherKey", where);
      if (direction == "outward") {
        link.direction = LinkDirection::outward;
        link.source_key = issue.key;
        link.target_key = other;
      } else if (direction == "inward") {
        link.direction = LinkDirection::inward;
        link.source_key = other;
        link.target_key = issue.key;
      } else {
        schema_error(where + "direction must be 'outward' or 'inward'");
      }
      if (other == issue.key) {
        if (notes) notes->push_back(where + "self link dropped");
        continue;
      }
      issue.links.push_back(std::move(link));
    }
  }
  return issue;
}

std::vector<fs::path> input_files(const fs::path& path) {
  std::error_code ec;
  if (fs::is_regular_file(path, ec)) return {path};
  if (!fs::is_directory(path, ec)) throw InputError("input path not found: " + path.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path, ec)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = to_lower_ascii(entry.path().extension().string());
    if (ext == ".jsonl" || ext == ".ndjson" || ext == ".json") files.push_back(entry.path());
  }
  if (ec) throw InputError("cannot list " + path.string());
  std::sort(files.begin(), files.end());
  return files;
}

json optional_to_json(const std::optional<std::string>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

Issue parse_issue_json(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  return parse_record(j, nullptr);
}

LoadResult load_corpus(const fs::path& path, bool strict) {
  LoadResult result;
  result.files = input_files(path);
  std::vector<Issue> issues;
  std::set<std::string> keys;
  std::string all_bytes;
  std::size_t record = 0;
  for (const fs::path& file : result.files) {
    const std::string content = read_file(file);
    all_bytes += content;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < content.size()) {
      std::size_t end = content.find('\n', pos);
      if (end == std::string::npos) end = content.size();
      std::string_view line(content.data() + pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (trim(line).empty()) continue;
      ++record;
      ++result.records_read;
      const std::string where = file.filename().string() + ":" + std::to_string(line_no) +
                                ": record " + std::to_string(record) + ": ";
      std::vector<std::string> notes;
      try {
        json j;
        try {
          j = json::parse(line);
        } catch (const json::parse_error&) {
          throw InputError("malformed JSON");
        }
        Issue issue = parse_record(j, &notes);
        if (!keys.insert(issue.key).second) throw InputError("duplicate key " + issue.key);
        if (strict && !notes.empty()) throw InputError(notes.front());
        for (const std::string& note : notes) {
          result.warnings.push_back({file.string(), line_no, where + note});
        }
        issues.push_back(std::move(issue));
      } catch (const InputError& e) {
        if (strict) throw InputError(where + e.what());
        result.warnings.push_back({file.string(), line_no, where + e.what()});
      }
    }
  }
  result.corpus = Corpus(std::move(issues));
  result.input_digest = sha256_hex(all_bytes);
  return result;
}

std::string issue_to_json(const Issue& issue) {
  json j;
  j["key"] = issue.key;
  j["tracker"] = issue.tracker;
  j["project"] = issue.project;
  j["summary"] = issue.summary;
  j["description"] = issue.description;
  j["issue_type"] = issue.issue_type;
  j["status"] = issue.status;
  j["priority"] = optional_to_json(issue.priority);
  j["resolution"] = optional_to_json(issue.resolution);
  j["created"] = issue.created ? json(format_timestamp(*issue.created)) : json(nullptr);
  j["resolved"] = issue.resolved ? json(format_timestamp(*issue.resolved)) : json(nullptr);
  j["labels"] = issue.labels;
  j["environment"] = optional_to_json(issue.environment);
  j["versions_affected"] = issue.versions_affected;
  j["versions_fixed"] = issue.versions_fixed;
  j["creator"] = issue.creator;
  j["reporter"] = issue.reporter;
  j["assignee"] = optional_to_json(issue.assignee);
  j["components"] = issue.components;
  j["parent"] = optional_to_json(issue.parent);
  j["comments"] = json::array();
  for (const Comment& c : issue.comments) {
    j["comments"].push_back({{"id", c.id},
                             {"author", c.author},
                             {"created", format_timestamp(c.created)},
                             {"body", c.body}});
  }
  j["changelog"] = json::array();
  for (const ChangeEvent& e : issue.changelog) {
    json items = json::array();
    for (const ChangeItem& it : e.items) {
      items.push_back({{"field", it.field},
                       {"fromString", optional_to_json(it.from_value)},
                       {"toString", optional_to_json(it.to_value)}});
    }
    j["changelog"].push_back({{"id", e.id},
                              {"author", e.author},
                              {"created", format_timestamp(e.created)},
                              {"items", std::move(items)}});
  }
  j["links"] = json::array();
  for (const IssueLink& l : issue.links) {
    const bool outward = l.source_key == issue.key;
    j["links"].push_back({{"type", l.link_type},
                          {"direction", outward ? "outward" : "inward"},
                          {"otherKey", outward ? l.target_key : l.source_key}});
  }
  return j.dump();
}

}  // namespace issuelens
