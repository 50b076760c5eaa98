#include "issuelens/config.hpp"

#include <cstdlib>
#include <set>

#include "issuelens/util.hpp"

#ifndef ISSUELENS_DEFAULT_DATA_DIR
#define ISSUELENS_DEFAULT_DATA_DIR "data"
#endif

namespace issuelens {
namespace {

using nlohmann::json;

void check_keys(const json& obj, std::string_view section, std::set<std::string> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(section) + " must be an object");
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) throw ConfigError("unknown config key " + std::string(section) + "." + k);
  }
}

template <typename T>
T get_as(const json& v, std::string_view name) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config value " + std::string(name) + " has the wrong type");
  }
}

std::size_t get_count(const json& v, std::string_view name) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError("config value " + std::string(name) + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::set<std::string> get_words(const json& v, std::string_view name) {
  const auto list = get_as<std::vector<std::string>>(v, name);
  return {list.begin(), list.end()};
}

std::filesystem::path resolve(const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_relative() ? data_dir() / path : path;
}

std::optional<std::filesystem::path> optional_path(const json& v, std::string_view name) {
  if (v.is_null()) return std::nullopt;
  return resolve(get_as<std::string>(v, name));
}

json path_or_null(const std::optional<std::filesystem::path>& p) {
  return p ? json(p->generic_string()) : json(nullptr);
}

}  // namespace

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("ISSUELENS_DATA_DIR"); env && *env) return env;
  return ISSUELENS_DEFAULT_DATA_DIR;
}

RunConfig default_run_config() {
  RunConfig c;
  const auto dir = data_dir();
  c.tagger_model = dir / "tagger" / "perceptron.txt";
  c.lemmas = dir / "lexicon" / "lemmas.tsv";
  c.hypernyms = dir / "lexicon" / "hypernyms.tsv";
  c.sentiment_lexicon = dir / "lexicon" / "sentiment.tsv";
  return c;
}

void apply_config(RunConfig& c, const json& doc) {
  check_keys(doc, "config", {"seed", "tracker", "lint", "lexicon", "evolve", "discuss", "links"});
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("tracker")) {
    c.tracker = doc["tracker"].is_null() ? std::nullopt
                                         : std::optional(get_as<std::string>(doc["tracker"], "tracker"));
  }
  if (doc.contains("lint")) {
    const json& l = doc["lint"];
    check_keys(l, "lint",
               {"rules", "dangerous_plural_words", "inside_behaviour_words", "derived_suffixes",
                "min_stem_length", "action_labels", "case_insensitive", "include_comments",
                "all_issues", "user_story_case_sensitive"});
    if (l.contains("rules")) {
      c.rules.enabled.clear();
      for (const std::string& name : get_as<std::vector<std::string>>(l["rules"], "lint.rules")) {
        const auto r = rule_from_name(name);
        if (!r) throw ConfigError("unknown rule '" + name + "'");
        c.rules.enabled.insert(*r);
      }
    }
    if (l.contains("dangerous_plural_words")) {
      c.rules.dangerous_plural_words = get_words(l["dangerous_plural_words"], "lint.dangerous_plural_words");
    }
    if (l.contains("inside_behaviour_words")) {
      c.rules.inside_behaviour_words = get_words(l["inside_behaviour_words"], "lint.inside_behaviour_words");
    }
    if (l.contains("derived_suffixes")) {
      c.rules.derived_suffixes = get_as<std::vector<std::string>>(l["derived_suffixes"], "lint.derived_suffixes");
    }
    if (l.contains("min_stem_length")) c.rules.min_stem_length = get_count(l["min_stem_length"], "lint.min_stem_length");
    if (l.contains("action_labels")) c.rules.action_labels = get_words(l["action_labels"], "lint.action_labels");
    if (l.contains("case_insensitive")) c.rules.case_insensitive = get_as<bool>(l["case_insensitive"], "lint.case_insensitive");
    if (l.contains("include_comments")) c.rules.include_comments = get_as<bool>(l["include_comments"], "lint.include_comments");
    if (l.contains("all_issues")) c.all_issues = get_as<bool>(l["all_issues"], "lint.all_issues");
    if (l.contains("user_story_case_sensitive")) {
      c.user_story_case_sensitive = get_as<bool>(l["user_story_case_sensitive"], "lint.user_story_case_sensitive");
    }
    c.rules.validate();
  }
  if (doc.contains("lexicon")) {
    const json& x = doc["lexicon"];
    check_keys(x, "lexicon",
               {"tagger_model", "tagger_sidecar", "lemmas", "hypernyms", "wordnet_dict", "sentiment",
                "sentiment_xml"});
    if (x.contains("tagger_model")) c.tagger_model = resolve(get_as<std::string>(x["tagger_model"], "lexicon.tagger_model"));
    if (x.contains("tagger_sidecar")) c.tagger_sidecar = optional_path(x["tagger_sidecar"], "lexicon.tagger_sidecar");
    if (x.contains("lemmas")) c.lemmas = resolve(get_as<std::string>(x["lemmas"], "lexicon.lemmas"));
    if (x.contains("hypernyms")) c.hypernyms = resolve(get_as<std::string>(x["hypernyms"], "lexicon.hypernyms"));
    if (x.contains("wordnet_dict")) c.wordnet_dict = optional_path(x["wordnet_dict"], "lexicon.wordnet_dict");
    if (x.contains("sentiment")) c.sentiment_lexicon = resolve(get_as<std::string>(x["sentiment"], "lexicon.sentiment"));
    if (x.contains("sentiment_xml")) c.sentiment_xml = optional_path(x["sentiment_xml"], "lexicon.sentiment_xml");
  }
  if (doc.contains("evolve")) {
    const json& e = doc["evolve"];
    check_keys(e, "evolve", {"sample_size", "overlong_limit"});
    if (e.contains("sample_size")) c.sample_size = get_count(e["sample_size"], "evolve.sample_size");
    if (e.contains("overlong_limit")) c.overlong_limit = get_count(e["overlong_limit"], "evolve.overlong_limit");
    if (c.sample_size == 0) throw ConfigError("evolve.sample_size must be at least 1");
    if (c.overlong_limit == 0) throw ConfigError("evolve.overlong_limit must be at least 1");
  }
  if (doc.contains("discuss")) {
    const json& d = doc["discuss"];
    check_keys(d, "discuss", {"min_state_length", "exclude_numeric", "same_sentence", "excerpt_context"});
    if (d.contains("min_state_length")) c.mention.min_state_length = get_count(d["min_state_length"], "discuss.min_state_length");
    if (d.contains("exclude_numeric")) c.mention.exclude_numeric = get_as<bool>(d["exclude_numeric"], "discuss.exclude_numeric");
    if (d.contains("same_sentence")) c.mention.same_sentence = get_as<bool>(d["same_sentence"], "discuss.same_sentence");
    if (d.contains("excerpt_context")) c.mention.excerpt_context = get_count(d["excerpt_context"], "discuss.excerpt_context");
  }
  if (doc.contains("links")) {
    const json& k = doc["links"];
    check_keys(k, "links", {"year", "provider", "embeddings", "fit_scope"});
    if (k.contains("year")) c.links.year = get_as<int>(k["year"], "links.year");
    if (k.contains("provider")) {
      const auto p = get_as<std::string>(k["provider"], "links.provider");
      if (p == "tfidf") {
        c.links.provider = EmbeddingProvider::tfidf;
      } else if (p == "external") {
        c.links.provider = EmbeddingProvider::external;
      } else {
        throw ConfigError("links.provider must be tfidf or external");
      }
    }
    if (k.contains("embeddings")) {
      c.links.embeddings = k["embeddings"].is_null()
                               ? std::nullopt
                               : std::optional<std::filesystem::path>(
                                     get_as<std::string>(k["embeddings"], "links.embeddings"));
    }
    if (k.contains("fit_scope")) {
      const auto s = get_as<std::string>(k["fit_scope"], "links.fit_scope");
      if (s == "linked") {
        c.links.fit_scope = FitScope::linked;
      } else if (s == "tracker") {
        c.links.fit_scope = FitScope::tracker;
      } else {
        throw ConfigError("links.fit_scope must be linked or tracker");
      }
    }
  }
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  apply_config(config, doc);
}

nlohmann::ordered_json config_echo(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["input"] = c.input.generic_string();
  j["seed"] = c.seed;
  j["tracker"] = c.tracker ? json(*c.tracker) : json(nullptr);
  j["strict"] = c.strict;
  std::vector<std::string> rules;
  for (RuleId r : c.rules.enabled) rules.emplace_back(to_string(r));
  j["lint"] = {
      {"rules", rules},
      {"dangerous_plural_words", c.rules.dangerous_plural_words},
      {"inside_behaviour_words", c.rules.inside_behaviour_words},
      {"derived_suffixes", c.rules.derived_suffixes},
      {"min_stem_length", c.rules.min_stem_length},
      {"action_labels", c.rules.action_labels},
      {"case_insensitive", c.rules.case_insensitive},
      {"include_comments", c.rules.include_comments},
      {"all_issues", c.all_issues},
      {"user_story_case_sensitive", c.user_story_case_sensitive},
  };
  j["lexicon"] = {
      {"tagger_model", c.tagger_model.filename().generic_string()},
      {"tagger_sidecar", path_or_null(c.tagger_sidecar)},
      {"lemmas", c.lemmas.filename().generic_string()},
      {"hypernyms", c.hypernyms.filename().generic_string()},
      {"wordnet_dict", path_or_null(c.wordnet_dict)},
      {"sentiment", c.sentiment_lexicon.filename().generic_string()},
      {"sentiment_xml", path_or_null(c.sentiment_xml)},
  };
  j["evolve"] = {{"sample_size", c.sample_size}, {"overlong_limit", c.overlong_limit}};
  j["discuss"] = {{"min_state_length", c.mention.min_state_length},
                  {"exclude_numeric", c.mention.exclude_numeric},
                  {"same_sentence", c.mention.same_sentence},
                  {"excerpt_context", c.mention.excerpt_context}};
  j["links"] = {{"year", c.links.year},
                {"provider", std::string(to_string(c.links.provider))},
                {"embeddings", path_or_null(c.links.embeddings)},
                {"fit_scope", std::string(to_string(c.links.fit_scope))}};
  return j;
}

}  // namespace issuelens
