#include "issuelens/report.hpp"

#include "issuelens/util.hpp"

#ifndef ISSUELENS_VERSION
#define ISSUELENS_VERSION "0.0.0"
#endif

namespace issuelens {

std::string_view tool_version() { return ISSUELENS_VERSION; }

std::string render_report(const Report& report) {
  nlohmann::ordered_json j;
  j["command"] = report.command;
  j["version"] = std::string(tool_version());
  j["input_digest"] = report.input_digest;
  j["config"] = report.config;
  j["stats"] = report.stats;
  return j.dump(2) + "\n";
}

void write_report(const Report& report, const std::filesystem::path& out_dir) {
  write_file_atomic(out_dir / "report.json", render_report(report));
}

}  // namespace issuelens
