#include "issuelens/jira_convert.hpp"

#include <algorithm>

#include "json.hpp"

namespace issuelens {
namespace {

using nlohmann::json;

const json* get(const json& obj, const char* name) {
  if (!obj.is_object()) return nullptr;
  const auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string text(const json* v) {
  if (!v) return {};
  if (v->is_string()) return v->get<std::string>();
  if (v->is_number_integer()) return std::to_string(v->get<long long>());
  return {};
}

std::optional<std::string> opt_text(const json* v) {
  std::string s = text(v);
  if (trim(s).empty()) return std::nullopt;
  return s;
}

// Named Jira objects ({name: ...}), users ({name|key|accountId|displayName}) or plain strings.
std::string name_of(const json* v) {
  if (!v) return {};
  if (v->is_string()) return v->get<std::string>();
  for (const char* k : {"name", "value", "key", "accountId", "displayName"}) {
    if (const json* n = get(*v, k); n && n->is_string()) return n->get<std::string>();
  }
  return {};
}

std::optional<Timestamp> date_of(const json* v) {
  if (!v) return std::nullopt;
  if (const json* d = get(*v, "$date")) return date_of(d);
  if (v->is_number_integer()) return Timestamp(std::chrono::milliseconds(v->get<long long>()));
  if (v->is_string()) return parse_timestamp(v->get<std::string>());
  if (const json* n = get(*v, "$numberLong")) {
    return Timestamp(std::chrono::milliseconds(std::stoll(n->get<std::string>())));
  }
  return std::nullopt;
}

std::vector<std::string> names(const json* v) {
  std::vector<std::string> out;
  if (!v || !v->is_array()) return out;
  for (const json& e : *v) {
    std::string n = name_of(&e);
    if (!n.empty()) out.push_back(std::move(n));
  }
  return out;
}

json optional_json(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

json date_json(const std::optional<Timestamp>& t) {
  return t ? json(format_timestamp(*t)) : json(nullptr);
}

json convert(const json& raw, std::string_view tracker) {
  const json* fields_ptr = get(raw, "fields");
  const json empty = json::object();
  const json& f = fields_ptr ? *fields_ptr : empty;
  const std::string key = text(get(raw, "key"));
  if (key.empty()) throw InputError("record has no key");

  json out;
  out["key"] = key;
  out["tracker"] = std::string(tracker);
  std::string project = name_of(get(f, "project"));
  if (const json* p = get(f, "project"); p && get(*p, "key")) project = text(get(*p, "key"));
  out["project"] = project;
  out["summary"] = text(get(f, "summary"));
  out["description"] = text(get(f, "description"));
  out["issue_type"] = name_of(get(f, "issuetype"));
  out["status"] = name_of(get(f, "status"));
  const std::string priority = name_of(get(f, "priority"));
  out["priority"] = priority.empty() ? json(nullptr) : json(priority);
  const std::string resolution = name_of(get(f, "resolution"));
  out["resolution"] = resolution.empty() ? json(nullptr) : json(resolution);
  out["created"] = date_json(date_of(get(f, "created")));
  out["resolved"] = date_json(date_of(get(f, "resolutiondate")));
  out["labels"] = names(get(f, "labels"));
  out["environment"] = optional_json(opt_text(get(f, "environment")));
  out["versions_affected"] = names(get(f, "versions"));
  out["versions_fixed"] = names(get(f, "fixVersions"));
  out["creator"] = name_of(get(f, "creator"));
  out["reporter"] = name_of(get(f, "reporter"));
  const std::string assignee = name_of(get(f, "assignee"));
  out["assignee"] = assignee.empty() ? json(nullptr) : json(assignee);
  out["components"] = names(get(f, "components"));
  const json* parent = get(f, "parent");
  out["parent"] = parent ? json(text(get(*parent, "key"))) : json(nullptr);

  out["comments"] = json::array();
  const json* comment_block = get(f, "comment");
  const json* comments = comment_block ? get(*comment_block, "comments") : nullptr;
  if (comments && comments->is_array()) {
    for (const json& c : *comments) {
      const auto created = date_of(get(c, "created"));
      if (!created) continue;
      out["comments"].push_back({{"id", text(get(c, "id"))},
                                 {"author", name_of(get(c, "author"))},
                                 {"created", format_timestamp(*created)},
                                 {"body", text(get(c, "body"))}});
    }
  }

  out["changelog"] = json::array();
  const json* changelog = get(raw, "changelog");
  const json* histories = changelog ? get(*changelog, "histories") : nullptr;
  if (histories && histories->is_array()) {
    for (const json& h : *histories) {
      const auto created = date_of(get(h, "created"));
      const json* items = get(h, "items");
      if (!created || !items || !items->is_array()) continue;
      json converted = json::array();
      for (const json& it : *items) {
        const std::string field = text(get(it, "field"));
        const json* from = get(it, "fromString");
        const json* to = get(it, "toString");
        if (field.empty() || (!from && !to)) continue;
        converted.push_back({{"field", field},
                             {"fromString", from ? json(text(from)) : json(nullptr)},
                             {"toString", to ? json(text(to)) : json(nullptr)}});
      }
      if (converted.empty()) continue;
      out["changelog"].push_back({{"id", text(get(h, "id"))},
                                  {"author", name_of(get(h, "author"))},
                                  {"created", format_timestamp(*created)},
                                  {"items", std::move(converted)}});
    }
  }

  out["links"] = json::array();
  if (const json* links = get(f, "issuelinks"); links && links->is_array()) {
    for (const json& l : *links) {
      const std::string type = name_of(get(l, "type"));
      if (type.empty()) continue;
      if (const json* o = get(l, "outwardIssue")) {
        out["links"].push_back(
            {{"type", type}, {"direction", "outward"}, {"otherKey", text(get(*o, "key"))}});
      } else if (const json* i = get(l, "inwardIssue")) {
        out["links"].push_back(
            {{"type", type}, {"direction", "inward"}, {"otherKey", text(get(*i, "key"))}});
      }
    }
  }
  return out;
}

}  // namespace

Issue convert_jira_issue(std::string_view json_text, std::string_view tracker) {
  json raw;
  try {
    raw = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  return parse_issue_json(convert(raw, tracker).dump());
}

ConvertStats convert_jira_export(const std::filesystem::path& in, const std::filesystem::path& out,
                                 std::string_view tracker) {
  const std::string content = read_file(in);
  std::vector<json> records;
  const std::string_view head = trim(content);
  bool whole = false;
  if (!head.empty() && (head.front() == '[' || head.front() == '{')) {
    try {
      json doc = json::parse(head);
      whole = true;
      if (doc.is_array()) {
        for (json& r : doc) records.push_back(std::move(r));
      } else if (const json* issues = get(doc, "issues"); issues && issues->is_array()) {
        for (const json& r : *issues) records.push_back(r);
      } else {
        records.push_back(std::move(doc));
      }
    } catch (const json::parse_error&) {
      whole = false;  // newline-delimited documents
    }
  }

  ConvertStats stats;
  std::string output;
  auto emit = [&](const json& raw, std::size_t n) {
    try {
      const Issue issue = parse_issue_json(convert(raw, tracker).dump());
      output += issue_to_json(issue);
      output += '\n';
      ++stats.converted;
    } catch (const InputError& e) {
      stats.skipped.push_back("record " + std::to_string(n) + ": " + e.what());
    }
  };

  if (whole) {
    for (std::size_t i = 0; i < records.size(); ++i) emit(records[i], i + 1);
  } else {
    std::size_t n = 0;
    for (const std::string& line : split(content, '\n')) {
      if (trim(line).empty()) continue;
      ++n;
      try {
        emit(json::parse(line), n);
      } catch (const json::parse_error&) {
        stats.skipped.push_back("record " + std::to_string(n) + ": malformed JSON");
      }
    }
  }
  write_file_atomic(out, output);
  return stats;
}

}  // namespace issuelens
