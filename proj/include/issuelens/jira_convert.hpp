#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "issuelens/corpus.hpp"

namespace issuelens {

// Maps one raw Jira issue (REST "issue" object or a document from the public
// MongoDB dump: {key, fields:{...}, changelog:{histories:[...]}}) into the
// toolkit schema. Mongo extended JSON dates ({"$date": ...}) are accepted.
Issue convert_jira_issue(std::string_view json_text, std::string_view tracker);

struct ConvertStats {
  std::size_t converted = 0;
  std::vector<std::string> skipped;  // "<record>: <reason>"
};

// Input may be newline-delimited documents, a JSON array, or a REST search
// response ({"issues": [...]}). Output is one schema record per line.
ConvertStats convert_jira_export(const std::filesystem::path& in, const std::filesystem::path& out,
                                 std::string_view tracker);

}  // namespace issuelens
