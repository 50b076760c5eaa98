#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "issuelens/discussions.hpp"
#include "issuelens/links.hpp"
#include "issuelens/lints.hpp"
#include "json.hpp"

namespace issuelens {

// ISSUELENS_DATA_DIR when set, else the data directory of the source tree.
std::filesystem::path data_dir();

struct RunConfig {
  std::filesystem::path input;
  std::filesystem::path out = "issuelens-out";
  std::uint64_t seed = 42;
  std::optional<std::string> tracker;
  bool strict = false;

  // lint
  RuleConfig rules;
  bool all_issues = false;
  bool user_story_case_sensitive = false;
  std::filesystem::path tagger_model;
  std::optional<std::filesystem::path> tagger_sidecar;
  std::filesystem::path lemmas;
  std::filesystem::path hypernyms;
  std::optional<std::filesystem::path> wordnet_dict;  // replaces `hypernyms` when set

  // evolve
  std::filesystem::path sentiment_lexicon;
  std::optional<std::filesystem::path> sentiment_xml;  // replaces the TSV lexicon when set
  std::size_t sample_size = 10000;
  std::size_t overlong_limit = 10000;

  // discuss
  MentionConfig mention;

  // links
  LinkAnalysisOptions links;
};

// Defaults with lexicon and model paths under data_dir().
RunConfig default_run_config();

// Overlays a JSON config document onto `config`. Relative paths resolve against
// data_dir(). Throws ConfigError on unknown keys or values of the wrong type.
void apply_config(RunConfig& config, const nlohmann::json& doc);
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

// Everything that influences results, for the report. Leaves out the output directory.
nlohmann::ordered_json config_echo(const RunConfig& config);

}  // namespace issuelens
