#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

namespace issuelens {

std::string_view tool_version();

struct Report {
  std::string command;
  nlohmann::ordered_json config;
  std::string input_digest;
  nlohmann::ordered_json stats = nlohmann::ordered_json::object();
};

// Pretty-printed JSON with a trailing newline. No timestamps, so identical runs
// give identical bytes.
std::string render_report(const Report& report);
void write_report(const Report& report, const std::filesystem::path& out_dir);

}  // namespace issuelens
