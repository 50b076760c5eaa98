// issuelens command-line entry point: ingest, lint, evolve, discuss, links.
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "issuelens/config.hpp"
#include "issuelens/corpus.hpp"
#include "issuelens/discussions.hpp"
#include "issuelens/hypernyms.hpp"
#include "issuelens/links.hpp"
#include "issuelens/lints.hpp"
#include "issuelens/report.hpp"
#include "issuelens/sentiment.hpp"

using namespace issuelens;
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kInputError = 2, kConfigError = 3, kInternalError = 4 };

struct Loaded {
  Corpus corpus;
  std::string digest;
  std::size_t warnings = 0;
};

Loaded load(const RunConfig& c) {
  if (c.input.empty()) throw InputError("--input is required");
  if (!fs::exists(c.input)) throw InputError("input not found: " + c.input.string());
  LoadResult r = load_corpus(c.input, c.strict);
  for (const LoadWarning& w : r.warnings) {
    std::cerr << "warning: " << w.file << ":" << w.line << ": " << w.message << "\n";
  }
  Loaded out{std::move(r.corpus), std::move(r.input_digest), r.warnings.size()};
  if (c.tracker) {
    if (!out.corpus.has_tracker(*c.tracker)) throw InputError("unknown tracker: " + *c.tracker);
    const auto span = out.corpus.tracker_issues(*c.tracker);
    out.corpus = Corpus(std::vector<Issue>(span.begin(), span.end()));
  }
  return out;
}

Report start_report(const std::string& command, const RunConfig& c, const Loaded& data) {
  Report r;
  r.command = command;
  r.config = config_echo(c);
  r.input_digest = data.digest;
  r.stats["issues"] = data.corpus.size();
  r.stats["load_warnings"] = data.warnings;
  return r;
}

void write(const RunConfig& c, const std::string& name, const std::string& contents) {
  write_file_atomic(c.out / name, contents);
}

ordered_json cleaning_json(const CleaningCounts& k) {
  return {{"missing_created", k.missing_created},
          {"impossible_dates", k.impossible_dates},
          {"empty_description", k.empty_description}};
}

int cmd_ingest(const RunConfig& c) {
  const Loaded data = load(c);
  const CorpusStats stats = compute_stats(data.corpus);
  Report report = start_report("ingest", c, data);
  std::string table = "tracker\tissues\tcomments\tchange_events\tlinks\tmissing_created\timpossible_dates\tempty_description\n";
  ordered_json trackers = ordered_json::object();
  for (const auto& [name, t] : stats.trackers) {
    trackers[name] = {{"issues", t.issues},
                      {"issue_types", t.per_issue_type},
                      {"comments", t.comments},
                      {"change_events", t.change_events},
                      {"links", t.links},
                      {"would_remove", cleaning_json(t.would_remove)}};
    table += tsv_escape(name) + '\t' + std::to_string(t.issues) + '\t' + std::to_string(t.comments) +
             '\t' + std::to_string(t.change_events) + '\t' + std::to_string(t.links) + '\t' +
             std::to_string(t.would_remove.missing_created) + '\t' +
             std::to_string(t.would_remove.impossible_dates) + '\t' +
             std::to_string(t.would_remove.empty_description) + '\n';
    std::cout << name << ": " << t.issues << " issues, " << t.comments << " comments, "
              << t.change_events << " change events, " << t.links << " links\n";
  }
  report.stats["trackers"] = trackers;
  write(c, "corpus_stats.tsv", table);
  write_report(report, c.out);
  std::cout << stats.total_issues << " issues, " << data.warnings << " warnings\n";
  return kOk;
}

int cmd_lint(const RunConfig& c) {
  const Loaded data = load(c);
  auto tagger = std::make_shared<const PerceptronTagger>(PerceptronTagger::load(c.tagger_model));
  std::shared_ptr<const SidecarAnnotations> sidecar;
  if (c.tagger_sidecar) {
    sidecar = std::make_shared<const SidecarAnnotations>(SidecarAnnotations::load(*c.tagger_sidecar));
  }
  const Annotator annotator(tagger, Lemmatizer::load(c.lemmas), sidecar);
  HypernymLexicon lexicon;
  if (c.rules.enabled.count(RuleId::derived_nominal)) {
    lexicon = c.wordnet_dict ? HypernymLexicon::load_wordnet(*c.wordnet_dict)
                             : HypernymLexicon::load_tsv(c.hypernyms);
  }
  const Linter linter(annotator, lexicon, c.rules);

  std::vector<const Issue*> selected;
  if (c.all_issues) {
    for (const Issue& issue : data.corpus.issues()) selected.push_back(&issue);
  } else {
    for (const std::string& tracker : data.corpus.trackers()) {
      for (const UserStoryRow& row :
           select_user_stories(data.corpus, tracker, c.user_story_case_sensitive)) {
        selected.push_back(data.corpus.find(row.key));
      }
    }
  }
  std::vector<Finding> findings;
  for (const Issue* issue : selected) {
    auto more = linter.lint_issue(*issue);
    findings.insert(findings.end(), more.begin(), more.end());
  }
  std::map<std::string, std::size_t> per_rule;
  for (RuleId r : c.rules.enabled) per_rule[std::string(to_string(r))] = 0;
  for (const Finding& f : findings) ++per_rule[std::string(to_string(f.rule))];

  Report report = start_report("lint", c, data);
  report.stats["issues_linted"] = selected.size();
  report.stats["findings"] = findings.size();
  report.stats["per_rule"] = per_rule;
  write(c, "findings.tsv", findings_to_tsv(findings));
  write_report(report, c.out);
  std::cout << selected.size() << " issues linted, " << findings.size() << " findings\n";
  for (const auto& [rule, n] : per_rule) std::cout << "  " << rule << ": " << n << "\n";
  return kOk;
}

int cmd_evolve(const RunConfig& c) {
  const Loaded data = load(c);
  const SentimentLexicon lexicon = c.sentiment_xml ? SentimentLexicon::load_pattern_xml(*c.sentiment_xml)
                                                   : SentimentLexicon::load_tsv(c.sentiment_lexicon);
  const SampleResult sample = sample_and_clean(data.corpus, c.sample_size, c.seed);
  const TrendReport trends = trend_report(sample.corpus, lexicon, c.overlong_limit);

  std::string skipped = "key\treason\n";
  for (const TrendSkip& s : trends.skipped) skipped += tsv_escape(s.issue_key) + '\t' + tsv_escape(s.reason) + '\n';

  Report report = start_report("evolve", c, data);
  report.stats["sampled_per_tracker"] = sample.sampled_per_tracker;
  report.stats["removed"] = cleaning_json(sample.removed);
  report.stats["kept"] = sample.corpus.size();
  report.stats["records"] = trends.records.size();
  report.stats["skipped"] = trends.skipped.size();
  if (trends.stats) {
    report.stats["trend"] = {{"mean", trends.stats->mean},
                             {"median", trends.stats->median},
                             {"toward_neutral", trends.stats->toward_neutral}};
  }
  write(c, "trends.tsv", trends_to_tsv(trends.records));
  write(c, "trend_stats.tsv", trend_stats_to_tsv(trends.stats, trends.skipped.size()));
  write(c, "trend_skipped.tsv", skipped);
  write_report(report, c.out);
  std::cout << sample.corpus.size() << " issues after sampling and cleaning, "
            << trends.records.size() << " description trends";
  if (trends.stats) std::cout << ", mean trend " << format_fixed(trends.stats->mean, 4);
  std::cout << "\n";
  return kOk;
}

int cmd_discuss(const RunConfig& c) {
  const Loaded data = load(c);
  const FieldStateDictionary dict = build_state_dictionary(data.corpus);
  const std::vector<MentionCandidate> candidates = mine_mentions(data.corpus, dict, c.mention);
  std::map<std::string, std::size_t> per_field;
  for (const MentionCandidate& m : candidates) ++per_field[m.field];

  Report report = start_report("discuss", c, data);
  report.stats["distinct_fields"] = dict.distinct_field_count();
  report.stats["candidates"] = candidates.size();
  report.stats["per_field"] = per_field;
  write(c, "state_dictionary.json", dictionary_to_json(dict));
  export_review_sheet(candidates, c.out / "review_sheet.tsv");
  write_report(report, c.out);
  std::cout << dict.distinct_field_count() << " distinct fields, " << candidates.size()
            << " candidates\n";
  for (const auto& [field, n] : per_field) std::cout << "  " << field << ": " << n << "\n";
  return kOk;
}

int cmd_links(const RunConfig& c) {
  const Loaded data = load(c);
  if (c.links.provider == EmbeddingProvider::external) {
    if (!c.links.embeddings) throw ConfigError("--provider external needs --embeddings");
    if (!fs::exists(*c.links.embeddings)) {
      throw InputError("embeddings file not found: " + c.links.embeddings->string());
    }
  }
  const LinkAnalysis result = analyze_links(data.corpus, c.links);
  Report report = start_report("links", c, data);
  report.stats["pairs"] = result.records.size();
  report.stats["dangling_links"] = result.dangling;
  report.stats["skipped_missing_vector"] = result.skipped_missing_vector;
  report.stats["documents_fitted"] = result.documents_fitted;
  report.stats["unmatched_embedding_keys"] = result.unmatched_keys;
  ordered_json dist = ordered_json::array();
  for (const TypeDistribution& d : result.distributions) {
    dist.push_back({{"link_type", d.link_type}, {"count", d.count}, {"median", d.median}, {"mean", d.mean}});
  }
  report.stats["distributions"] = dist;
  write(c, "link_records.tsv", link_records_to_tsv(result.records));
  write(c, "link_distributions.tsv", distributions_to_tsv(result.distributions));
  write_report(report, c.out);
  std::cout << result.records.size() << " linked pairs scored\n";
  for (const TypeDistribution& d : result.distributions) {
    std::cout << "  " << d.link_type << ": n=" << d.count << " median=" << format_fixed(d.median, 4)
              << " mean=" << format_fixed(d.mean, 4) << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"issuelens: mining pipelines for issue-tracker exports"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version()));

  std::string input, out, config_path, tracker;
  std::uint64_t seed = 42;
  bool strict = false;
  auto* o_input = app.add_option("-i,--input", input, "issue file or directory")->group("Global");
  auto* o_out = app.add_option("-o,--out", out, "output directory")->group("Global");
  auto* o_seed = app.add_option("--seed", seed, "seed for sampling (default 42)")->group("Global");
  auto* o_tracker = app.add_option("--tracker", tracker, "restrict to one tracker")->group("Global");
  auto* o_strict = app.add_flag("--strict", strict, "fail on the first invalid record")->group("Global");
  auto* o_config = app.add_option("--config", config_path, "JSON config file")->group("Global");

  auto* ingest = app.add_subcommand("ingest", "load, validate and count issues");
  auto* lint = app.add_subcommand("lint", "requirements-quality findings for user stories");
  auto* evolve = app.add_subcommand("evolve", "description sentiment trends");
  auto* discuss = app.add_subcommand("discuss", "field-change suggestions in comments");
  auto* links = app.add_subcommand("links", "text similarity of linked issues per link type");
  for (auto* sub : {ingest, lint, evolve, discuss, links}) sub->fallthrough();

  std::vector<std::string> rules;
  bool all_issues = false, include_comments = false, same_sentence = false;
  auto* o_rules = lint->add_option("--rules", rules, "comma-separated rule ids")->delimiter(',');
  auto* o_all = lint->add_flag("--all-issues", all_issues, "lint every issue, not just user stories");
  auto* o_comments = lint->add_flag("--include-comments", include_comments, "lint comments as well");

  std::size_t sample_size = 10000;
  auto* o_sample = evolve->add_option("--sample-size", sample_size, "issues sampled per tracker")
                       ->check(CLI::PositiveNumber);

  auto* o_same = discuss->add_flag("--same-sentence", same_sentence,
                                   "require field and state in the same sentence");

  int year = 2021;
  std::string provider = "tfidf", embeddings, fit_scope = "linked";
  auto* o_year = links->add_option("--year", year, "creation year of the link source");
  auto* o_provider = links->add_option("--provider", provider)->check(CLI::IsMember({"tfidf", "external"}));
  auto* o_emb = links->add_option("--embeddings", embeddings, "key<TAB>vector sidecar file");
  auto* o_scope = links->add_option("--fit-scope", fit_scope, "TF-IDF documents: linked or tracker")
                      ->check(CLI::IsMember({"linked", "tracker"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    RunConfig c = default_run_config();
    if (o_config->count()) apply_config_file(c, config_path);
    if (o_input->count()) c.input = input;
    if (o_out->count()) c.out = out;
    if (o_seed->count()) c.seed = seed;
    if (o_tracker->count()) c.tracker = tracker;
    if (o_strict->count()) c.strict = strict;
    if (o_rules->count()) {
      c.rules.enabled.clear();
      for (const std::string& name : rules) {
        const auto r = rule_from_name(std::string(trim(name)));
        if (!r) throw ConfigError("unknown rule '" + name + "'");
        c.rules.enabled.insert(*r);
      }
    }
    if (o_all->count()) c.all_issues = all_issues;
    if (o_comments->count()) c.rules.include_comments = include_comments;
    if (o_sample->count()) c.sample_size = sample_size;
    if (o_same->count()) c.mention.same_sentence = same_sentence;
    if (o_year->count()) c.links.year = year;
    if (o_provider->count()) {
      c.links.provider = provider == "external" ? EmbeddingProvider::external : EmbeddingProvider::tfidf;
    }
    if (o_emb->count()) c.links.embeddings = fs::path(embeddings);
    if (o_scope->count()) c.links.fit_scope = fit_scope == "tracker" ? FitScope::tracker : FitScope::linked;

    fs::create_directories(c.out);
    if (*ingest) return cmd_ingest(c);
    if (*lint) return cmd_lint(c);
    if (*evolve) return cmd_evolve(c);
    if (*discuss) return cmd_discuss(c);
    return cmd_links(c);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}
