// Acceptance suite: one PASS/FAIL/SKIP line per criterion; exit status 1 when any
// required criterion fails.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <sys/wait.h>

#include "fixtures.hpp"
#include "issuelens/discussions.hpp"
#include "issuelens/links.hpp"
#include "issuelens/lints.hpp"
#include "issuelens/sentiment.hpp"

using namespace issuelens;
using namespace issuelens::testing;

namespace {

// ---- pinned tolerances and sizes ------------------------------------------------
constexpr double kLintSuiteSeconds = 1.0;
constexpr std::size_t kPassiveCases = 2000;
constexpr double kPassiveSeconds = 10.0;
constexpr double kVbgMinAgreement = 0.80;
constexpr std::size_t kHistoryCases = 1000;
constexpr std::size_t kSentimentFuzzTexts = 10000;
constexpr double kMagnitudeTolerance = 0.15;
constexpr double kMathTolerance = 1e-9;
constexpr double kDatasetMeanLow = 0.05;
constexpr double kDatasetMeanHigh = 0.35;

enum class Outcome { pass, fail, skip };

struct Result {
  Outcome outcome;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int decimals = 4) { return format_fixed(v, decimals); }

// ---- 1: example lint suite --------------------------------------------------------

struct Expectation {
  std::string text;
  std::set<std::pair<std::string, std::string>> findings;  // (rule, matched text)
  std::optional<RuleId> scope;  // negatives are stated for one rule; positives check all
};

Result lint_examples() {
  const auto start = Clock::now();
  const std::vector<Expectation> cases = {
      {"of course there's no need to provide every single detail of the proposed architecture in "
       "the design document",
       {{"dangerous_plural", "every"}}},
      {"specific releases experience reliability issues during regular Motions",
       {{"inside_behaviour", "during"}}},
      {"the engine returns up to 10 fired events", {{"unclear_inclusion", "up to 10 fired events"}}},
      {"the gate was opened", {{"passive_voice", "was opened"}}},
      {"Powering down the cab radio shall cause the disconnection from the mobile network",
       {{"gerundive_nominal", "Powering"}, {"derived_nominal", "disconnection"}}},
      {"During default deployments (without user-specific configuration) TLS termination is "
       "managed by the Route",
       {{"inside_behaviour", "During"},
        {"derived_nominal", "deployments"},
        {"derived_nominal", "termination"},
        {"passive_voice", "is managed"}}},
      {"the fix was quickly deployed", {{"passive_voice", "was quickly deployed"}}},
      {"logging should be enabled by editing the file",
       {{"gerundive_nominal", "logging"}, {"passive_voice", "be enabled"}}},
      // Negative examples, each for the rule it was stated for.
      {"exactly 3 retries", {}, RuleId::dangerous_plural},
      {"FEWER resources", {}, RuleId::dangerous_plural},
      {"press OK", {}, RuleId::inside_behaviour},
      {"afterwards", {}, RuleId::inside_behaviour},
      {"up to 10 events, including the 10th", {}, RuleId::unclear_inclusion},
      {"scroll up to see more\u2026 excluding nothing", {}, RuleId::unclear_inclusion},
      {"the user opened the gate", {}, RuleId::passive_voice},
      {"the city of London", {}, RuleId::derived_nominal},
      {"the service is running", {}, RuleId::gerundive_nominal},
  };
  const Linter linter(shipped_annotator(), shipped_hypernyms(), RuleConfig{});
  std::size_t expected = 0, found = 0, unexpected = 0;
  std::ostringstream problems;
  for (const Expectation& c : cases) {
    std::set<std::pair<std::string, std::string>> got;
    for (const Finding& f : linter.lint_text(c.text, "EX", SourceField::description)) {
      if (c.scope && f.rule != *c.scope) continue;
      got.emplace(std::string(to_string(f.rule)), f.matched_text);
    }
    expected += c.findings.size();
    for (const auto& e : c.findings) {
      if (got.count(e)) {
        ++found;
      } else {
        problems << " missing " << e.first << ":'" << e.second << "'";
      }
    }
    for (const auto& g : got) {
      if (!c.findings.count(g)) {
        ++unexpected;
        problems << " unexpected " << g.first << ":'" << g.second << "'";
      }
    }
  }
  const double elapsed = seconds_since(start);
  const bool ok = found == expected && unexpected == 0 && elapsed < kLintSuiteSeconds;
  return {ok ? Outcome::pass : Outcome::fail,
          std::to_string(found) + "/" + std::to_string(expected) + " expected spans, " +
              std::to_string(unexpected) + " unexpected, " + fmt(elapsed, 3) + " s (limit " +
              fmt(kLintSuiteSeconds, 1) + ")" + problems.str()};
}

// ---- 2: passive regex vs structured matcher ------------------------------------------

Result passive_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  std::vector<std::vector<TaggedToken>> cases;
  for (std::size_t i = 0; i < kPassiveCases; ++i) cases.push_back(random_tagged_sentence(rng));
  // Real tagger output over the fixture corpus as well.
  const LoadResult loaded = load_corpus(test_data("corpus"), false);
  const Linter linter(shipped_annotator(), shipped_hypernyms(), RuleConfig{});
  for (const Issue& issue : loaded.corpus.issues()) {
    for (const std::string* text : {&issue.summary, &issue.description}) {
      for (const AnalyzedSentence& s : linter.analyze(strip_markup(*text))) {
        if (!s.tagged.empty()) cases.push_back(s.tagged);
      }
    }
  }
  std::size_t agree = 0, with_match = 0;
  std::string first_disagreement;
  for (const auto& tokens : cases) {
    const auto a = passive_matches_regex(tokens);
    const auto b = passive_matches_structured(tokens);
    with_match += !a.empty();
    if (a == b) {
      ++agree;
    } else if (first_disagreement.empty()) {
      first_disagreement = " first disagreement: " + render_tagged_stream(tokens);
    }
  }
  const double elapsed = seconds_since(start);
  const bool ok = agree == cases.size() && cases.size() >= 1000 && elapsed < kPassiveSeconds;
  return {ok ? Outcome::pass : Outcome::fail,
          std::to_string(agree) + "/" + std::to_string(cases.size()) + " sentences agree (" +
              std::to_string(with_match) + " with a passive), " + fmt(elapsed, 2) + " s" +
              first_disagreement};
}

// ---- 3: VBG role approximation ---------------------------------------------------------

struct VbgCase {
  std::string sentence, word, label, dep;
};

std::vector<VbgCase> read_vbg_fixture() {
  std::vector<VbgCase> out;
  for (const std::string& line : split(read_file(test_data("vbg_roles.tsv")), '\n')) {
    if (line.empty() || line[0] == '#') continue;
    const auto cols = split(line, '\t');
    if (cols.size() != 4) throw std::runtime_error("bad fixture line: " + line);
    out.push_back({cols[0], cols[1], cols[2], cols[3]});
  }
  return out;
}

Result vbg_roles() {
  const auto cases = read_vbg_fixture();
  std::size_t agree = 0;
  std::vector<std::string> disagreements;
  for (const VbgCase& c : cases) {
    std::vector<std::string> words;
    for (const Token& t : tokenize(c.sentence)) words.push_back(t.text);
    const auto tagged = shipped_annotator().pos_tag(words);
    const auto it = std::find(words.begin(), words.end(), c.word);
    if (it == words.end()) throw std::runtime_error("target not in sentence: " + c.word);
    const std::size_t i = static_cast<std::size_t>(it - words.begin());
    std::string predicted = "other";
    std::string role = "tagged " + tagged[i].pos;
    if (tagged[i].pos == "VBG") {
      const VbgRole r = classify_vbg_role(tagged, i);
      role = std::string(to_string(r));
      if (r == VbgRole::nominal) predicted = "nominal";
    }
    if (predicted == c.label) {
      ++agree;
    } else {
      disagreements.push_back(c.sentence + "\t" + c.word + "\t" + c.label + "\t" + role);
    }
  }
  const double rate = static_cast<double>(agree) / static_cast<double>(cases.size());

  // The committed known-limitations file must list exactly these disagreements.
  const std::filesystem::path doc = std::filesystem::path(ISSUELENS_DOCS) / "known_limitations_vbg.md";
  std::set<std::string> listed;
  if (std::filesystem::exists(doc)) {
    for (const std::string& line : split(read_file(doc), '\n')) {
      if (std::count(line.begin(), line.end(), '\t') == 3) listed.insert(line);
    }
  }
  const bool documented =
      listed == std::set<std::string>(disagreements.begin(), disagreements.end());
  std::string detail = std::to_string(agree) + "/" + std::to_string(cases.size()) +
                       " targets agree (" + fmt(100 * rate, 1) + "%, minimum " +
                       fmt(100 * kVbgMinAgreement, 0) + "%), " +
                       std::to_string(disagreements.size()) + " disagreements";
  detail += documented ? ", all listed in docs/known_limitations_vbg.md"
                       : ", known-limitations file out of date";
  if (!documented) {
    for (const auto& d : disagreements) detail += "\n      " + d;
  }
  return {rate >= kVbgMinAgreement && documented ? Outcome::pass : Outcome::fail, detail};
}

// ---- 4: evolution round trip ---------------------------------------------------------------

using FieldValues = std::map<TrackedField, std::optional<std::string>>;

constexpr TrackedField kReplayFields[] = {TrackedField::description, TrackedField::summary,
                                          TrackedField::priority, TrackedField::status,
                                          TrackedField::assignee};

// Brute force: initial values from the earliest change of each field (stored value
// when untouched), then every item with a timestamp <= t applied in order.
FieldValues replay_until(const Issue& issue, std::optional<Timestamp> t,
                         std::set<std::string>* labels) {
  FieldValues values;
  std::optional<std::string> first_labels;
  bool labels_changed = false;
  for (TrackedField f : kReplayFields) values[f] = stored_value(issue, f);
  std::set<TrackedField> seen;
  for (const ChangeEvent& e : issue.changelog) {
    for (const ChangeItem& item : e.items) {
      const auto f = tracked_field_from_name(item.field);
      if (!f) continue;
      if (*f == TrackedField::labels) {
        if (!labels_changed) first_labels = item.from_value;
        labels_changed = true;
        continue;
      }
      if (seen.insert(*f).second) values[*f] = item.from_value;
    }
  }
  std::optional<std::string> label_text = first_labels;
  for (const ChangeEvent& e : issue.changelog) {
    if (t && e.created > *t) break;
    for (const ChangeItem& item : e.items) {
      const auto f = tracked_field_from_name(item.field);
      if (!f) continue;
      if (*f == TrackedField::labels) {
        label_text = item.to_value;
      } else {
        values[*f] = item.to_value;
      }
    }
  }
  if (labels) {
    labels->clear();
    if (!labels_changed) {
      *labels = issue.labels;
    } else if (label_text) {
      for (const std::string& w : split(*label_text, ' ')) {
        if (!w.empty()) labels->insert(w);
      }
    }
  }
  for (auto& [f, v] : values) {
    if (v && v->empty()) v.reset();
  }
  return values;
}

Result evolution_round_trip() {
  std::mt19937_64 rng(4242);
  std::size_t histories = 0, history_ok = 0, snapshots = 0, snapshot_ok = 0;
  std::string first_problem;
  for (std::size_t n = 0; n < kHistoryCases; ++n) {
    const Issue generated = random_history_issue(rng, n);
    const Corpus corpus(std::vector<Issue>{generated});
    const Issue& issue = corpus.issues().front();
    const FieldValues final_values = replay_until(issue, std::nullopt, nullptr);
    for (TrackedField f : kReplayFields) {
      ++histories;
      const FieldHistory h = reconstruct_field_history(issue, f);
      // Forward replay of the reconstructed history.
      std::optional<std::string> value = h.versions.front().value;
      for (std::size_t k = 1; k < h.versions.size(); ++k) value = h.versions[k].value;
      if (value && value->empty()) value.reset();
      const bool ok = h.consistent && value == stored_value(issue, f) && value == final_values.at(f);
      history_ok += ok;
      if (!ok && first_problem.empty()) first_problem = " history mismatch on " + issue.key;
    }
    std::vector<Timestamp> boundaries = {*issue.created};
    for (const ChangeEvent& e : issue.changelog) {
      boundaries.push_back(e.created);
      if (e.created > *issue.created) boundaries.push_back(e.created - std::chrono::milliseconds(1));
    }
    for (Timestamp t : boundaries) {
      ++snapshots;
      std::set<std::string> labels;
      const FieldValues expected = replay_until(issue, t, &labels);
      const IssueSnapshot snap = snapshot_at(issue, t);
      bool ok = snap.labels == labels;
      for (TrackedField f : kReplayFields) ok = ok && stored_value(snap, f) == expected.at(f);
      snapshot_ok += ok;
      if (!ok && first_problem.empty()) {
        first_problem = " snapshot mismatch on " + issue.key + " at " + format_timestamp(t);
      }
    }
  }
  const bool ok = history_ok == histories && snapshot_ok == snapshots;
  return {ok ? Outcome::pass : Outcome::fail,
          std::to_string(kHistoryCases) + " issues: " + std::to_string(history_ok) + "/" +
              std::to_string(histories) + " field histories replay, " + std::to_string(snapshot_ok) +
              "/" + std::to_string(snapshots) + " boundary snapshots match" + first_problem};
}

// ---- 5: sentiment contracts ------------------------------------------------------------------

const std::string kSuitableBefore =
    "Chef has been identified as a suitable option to create the automatic deployment mechanism. "
    "The architecture of the mechanism needs to be specified, and then implement in Chef";
const std::string kSuitableAfter =
    "Chef has been identified as a option to create the automatic deployment mechanism. "
    "The architecture of the mechanism needs to be specified, and then implement in Chef";
const std::string kGreatBefore =
    "The Wss4jSecurityInterceptor has no X509 Binary security token support yet. It would be "
    "great if we could add it.";
const std::string kGreatAfter = "Document the X509 Binary security token support for Wss4j.";

Result sentiment_contracts() {
  const SentimentLexicon& lex = shipped_sentiment();
  std::mt19937_64 rng(555);
  // Words from the shipped lexicon file itself, plus noise.
  std::vector<std::string> vocab = {"not", "never", "n't", "very", "!", "?", "é", "\n", "the", "x"};
  std::vector<std::pair<std::string, double>> positives;
  for (const std::string& line : split(read_file(shipped_data("lexicon/sentiment.tsv")), '\n')) {
    if (line.empty() || line[0] == '#') continue;
    const auto cols = split(line, '\t');
    if (cols.size() == 3 && cols[0][0] != '!') {
      vocab.push_back(cols[0]);
      const double p = *lex.polarity(cols[0]);
      if (p > 0 && !lex.intensifier(cols[0]) && !lex.is_negation(cols[0])) positives.emplace_back(cols[0], p);
    } else if (cols.size() >= 2) {
      vocab.push_back(cols[1]);
    }
  }
  std::size_t bounded = 0;
  for (std::size_t i = 0; i < kSentimentFuzzTexts; ++i) {
    std::string text;
    for (std::size_t k = pick(rng, 40); k > 0; --k) {
      text += vocab[pick(rng, vocab.size())];
      text += pick(rng, 4) ? " " : "";
    }
    const double s = score_raw_text(text, lex);
    bounded += (s >= -1.0 && s <= 1.0);
  }
  std::size_t exact = 0;
  for (const auto& [word, p] : positives) exact += score_polarity("not " + word, lex) == kNegationFactor * p;

  const double suitable = make_trend("S", kSuitableBefore, kSuitableAfter, lex).trend;
  const double great = make_trend("G", kGreatBefore, kGreatAfter, lex).trend;
  bool ok = bounded == kSentimentFuzzTexts && exact == positives.size() && !positives.empty() &&
            suitable < 0 && great < 0;
  std::string detail = std::to_string(bounded) + "/" + std::to_string(kSentimentFuzzTexts) +
                       " fuzz scores bounded, negation exact for " + std::to_string(exact) + "/" +
                       std::to_string(positives.size()) + " positive entries, trends " +
                       fmt(suitable) + " and " + fmt(great) + " (shipped lexicon)";
  if (const char* ref = std::getenv("ISSUELENS_REFERENCE_LEXICON"); ref && *ref) {
    const SentimentLexicon reference = SentimentLexicon::load_pattern_xml(ref);
    const double a = make_trend("S", kSuitableBefore, kSuitableAfter, reference).trend;
    const double b = make_trend("G", kGreatBefore, kGreatAfter, reference).trend;
    const bool close = std::abs(-a - 0.55) <= kMagnitudeTolerance && std::abs(-b - 0.8) <= kMagnitudeTolerance;
    ok = ok && close;
    detail += "; reference lexicon drops " + fmt(-a) + " and " + fmt(-b) + " (targets 0.55, 0.8 ±" +
              fmt(kMagnitudeTolerance, 2) + ")";
  } else {
    detail += "; magnitude check not run (ISSUELENS_REFERENCE_LEXICON unset)";
  }
  return {ok ? Outcome::pass : Outcome::fail, detail};
}

// ---- 6: discussion recall ------------------------------------------------------------------

Result discussion_recall() {
  const Corpus corpus = load_corpus(test_data("corpus"), false).corpus;
  const FieldStateDictionary dict = build_state_dictionary(corpus);
  MentionConfig permissive;
  permissive.min_state_length = 1;
  permissive.exclude_numeric = false;
  std::size_t pairs = 0, hits = 0;
  std::string missed;
  for (const auto& [tracker, fields] : dict.trackers) {
    for (const auto& [field, states] : fields) {
      for (const std::string& state : states) {
        ++pairs;
        const std::string text = field + " should be " + state;
        bool hit = false;
        for (const MentionCandidate& c : mine_text(text, fields, permissive)) {
          hit = hit || (c.field == field && c.states_matched.count(state));
        }
        hits += hit;
        if (!hit && missed.empty()) missed = " missed: " + text;
      }
    }
  }
  std::set<std::string> comment_ids;
  for (const MentionCandidate& c : mine_mentions(corpus, dict)) {
    if (c.issue_key == "DEMO-20") comment_ids.insert(c.source_id);
  }
  const bool examples = comment_ids.count("m1") && comment_ids.count("m2") && comment_ids.count("m3");
  const bool ok = pairs > 0 && hits == pairs && examples;
  return {ok ? Outcome::pass : Outcome::fail,
          std::to_string(hits) + "/" + std::to_string(pairs) +
              " dictionary pairs recalled; example comments " +
              (examples ? "all mined" : "NOT all mined") + missed};
}

// ---- 7: TF-IDF and cosine math ------------------------------------------------------------

Result tfidf_math() {
  // Hand computation for {"a b b", "b c", "a c d"}: N = 3, df(a,b,c) = 2, df(d) = 1.
  const double idf_common = 1.2876820724517808;  // ln(4/3) + 1
  const double idf_d = 1.6931471805599454;       // ln(2) + 1
  const std::map<std::string, double> d1 = {{"a", 0.4472135954999579}, {"b", 0.8944271909999159}};
  const std::map<std::string, double> d3 = {
      {"a", 0.5178561161676974}, {"c", 0.5178561161676974}, {"d", 0.680918560398684}};
  const double cos12 = 0.6324555320336759, cos13 = 0.23159229566299988, cos23 = 0.3661795714211074;

  const std::vector<std::string> docs = {"a b b", "b c", "a c d"};
  const TfidfModel m = TfidfModel::fit(docs);
  std::vector<DocumentVector> v;
  for (const auto& d : docs) v.push_back(m.embed(d));
  double worst = 0;
  auto track = [&worst](double got, double want) { worst = std::max(worst, std::abs(got - want)); };
  track(m.idf("a"), idf_common);
  track(m.idf("c"), idf_common);
  track(m.idf("d"), idf_d);
  for (const auto& [term, w] : d1) {
    for (const auto& [id, x] : v[0].sparse) {
      if (m.terms()[id] == term) track(x, w);
    }
  }
  for (const auto& [term, w] : d3) {
    for (const auto& [id, x] : v[2].sparse) {
      if (m.terms()[id] == term) track(x, w);
    }
  }
  track(cosine_similarity(v[0], v[1]), cos12);
  track(cosine_similarity(v[0], v[2]), cos13);
  track(cosine_similarity(v[1], v[2]), cos23);
  const bool hand = worst <= kMathTolerance && v[0].sparse.size() == 2 && v[2].sparse.size() == 3;

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> real(-10, 10);
  double sym = 0, self = 0, ortho = 0, scale = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> x(8), y(8);
    for (double& e : x) e = real(rng);
    for (double& e : y) e = real(rng);
    const auto vx = DocumentVector::from_dense(x), vy = DocumentVector::from_dense(y);
    sym = std::max(sym, std::abs(cosine_similarity(vx, vy) - cosine_similarity(vy, vx)));
    self = std::max(self, std::abs(cosine_similarity(vx, vx) - 1.0));
    const double k = std::exp(real(rng) / 2);
    std::vector<double> sx = x;
    for (double& e : sx) e *= k;
    scale = std::max(scale, std::abs(cosine_similarity(DocumentVector::from_dense(sx), vy) -
                                     cosine_similarity(vx, vy)));
    // Disjoint supports.
    std::vector<double> p(8, 0.0), q(8, 0.0);
    for (int j = 0; j < 4; ++j) {
      p[j] = x[j];
      q[j + 4] = y[j + 4];
    }
    ortho = std::max(ortho, std::abs(cosine_similarity(DocumentVector::from_dense(p),
                                                       DocumentVector::from_dense(q))));
  }
  const bool props = sym <= kMathTolerance && self <= kMathTolerance && ortho <= kMathTolerance &&
                     scale <= kMathTolerance;
  return {hand && props ? Outcome::pass : Outcome::fail,
          "hand fixture max error " + format_fixed(worst, 12) + "; symmetry " + format_fixed(sym, 12) +
              ", self " + format_fixed(self, 12) + ", orthogonality " + format_fixed(ortho, 12) +
              ", scale " + format_fixed(scale, 12) + " (tolerance 1e-9)"};
}

// ---- 8: clone ordering -------------------------------------------------------------------------

Result clone_ordering() {
  static const std::vector<std::string> vocab = {
      "login", "page", "server", "crash", "timeout", "cache", "user", "export", "file", "button",
      "error", "thread", "memory", "queue", "report", "network", "session", "upload", "search",
      "index", "token", "config", "build", "release", "plugin", "driver", "widget", "schema"};
  std::mt19937_64 rng(8);
  auto text = [&rng](std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += vocab[pick(rng, vocab.size())] + " ";
    return s;
  };
  std::vector<Issue> issues;
  std::size_t next = 0;
  auto add_pair = [&](const std::string& type, bool clone) {
    Issue a = make_issue("SYN-" + std::to_string(next++), "SYN", make_utc(2021, 4, 1));
    Issue b = make_issue("SYN-" + std::to_string(next++), "SYN", make_utc(2021, 4, 2));
    a.summary = text(5);
    a.description = text(25);
    b.summary = clone ? a.summary : text(5);
    b.description = clone ? a.description : text(25);
    a.links.push_back({type, LinkDirection::outward, a.key, b.key});
    issues.push_back(a);
    issues.push_back(b);
  };
  for (int i = 0; i < 30; ++i) add_pair("Cloners", true);
  for (const char* type : {"Duplicate", "Relate", "Block", "Subtask"}) {
    for (int i = 0; i < 30; ++i) add_pair(type, false);
  }
  const LinkAnalysis result = analyze_links(Corpus(issues), LinkAnalysisOptions{});
  const TypeDistribution* cloners = nullptr;
  double best_other = -1;
  for (const TypeDistribution& d : result.distributions) {
    if (d.link_type == "Cloners") {
      cloners = &d;
    } else {
      best_other = std::max(best_other, d.median);
    }
  }
  const bool ok = cloners && std::abs(cloners->median - 1.0) <= kMathTolerance &&
                  cloners->median > best_other && result.distributions.front().link_type == "Cloners";
  return {ok ? Outcome::pass : Outcome::fail,
          "Cloners median " + (cloners ? fmt(cloners->median, 9) : std::string("absent")) +
              ", best other median " + fmt(best_other) + ", " +
              std::to_string(result.records.size()) + " pairs"};
}

// ---- 9: public dataset (optional) -------------------------------------------------------------

Result dataset_conditional() {
  const char* dump = std::getenv("ISSUELENS_JIRA_DUMP");
  if (!dump || !*dump) {
    return {Outcome::skip, "optional; set ISSUELENS_JIRA_DUMP to the converted Hyperledger export"};
  }
  const auto start = Clock::now();
  const LoadResult loaded = load_corpus(dump, false);
  const std::string tracker = std::getenv("ISSUELENS_JIRA_TRACKER") ? std::getenv("ISSUELENS_JIRA_TRACKER")
                                                                    : "Hyperledger";
  if (!loaded.corpus.has_tracker(tracker)) return {Outcome::fail, "tracker " + tracker + " not in dump"};
  const auto span = loaded.corpus.tracker_issues(tracker);
  const Corpus corpus(std::vector<Issue>(span.begin(), span.end()));
  const LinkAnalysis result = analyze_links(corpus, LinkAnalysisOptions{});
  bool in_range = !result.distributions.empty();
  std::string means;
  for (const TypeDistribution& d : result.distributions) {
    means += " " + d.link_type + "=" + fmt(d.mean, 3);
    if (d.link_type != "Cloners") in_range = in_range && d.mean >= kDatasetMeanLow && d.mean <= kDatasetMeanHigh;
  }
  const bool first = !result.distributions.empty() && result.distributions.front().link_type == "Cloners";
  return {in_range && first ? Outcome::pass : Outcome::fail,
          "means" + means + "; Cloners first by median: " + (first ? "yes" : "no") + ", " +
              fmt(seconds_since(start), 1) + " s"};
}

// ---- 10: end-to-end determinism ----------------------------------------------------------------

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ISSUELENS_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Result cli_determinism() {
  TempDir tmp;
  {
    std::ofstream out(tmp / "vectors.tsv");
    const Corpus corpus = load_corpus(test_data("corpus"), false).corpus;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> real(-1, 1);
    for (const Issue& issue : corpus.issues()) {
      out << issue.key << '\t';
      for (int k = 0; k < 8; ++k) out << (k ? " " : "") << format_fixed(real(rng), 6);
      out << '\n';
    }
  }
  const std::string input = " --input " + test_data("corpus").string();
  const std::vector<std::string> commands = {
      "ingest", "lint --all-issues", "lint --include-comments", "evolve --sample-size 5 --seed 7",
      "discuss", "links", "links --fit-scope tracker",
      "links --provider external --embeddings " + (tmp / "vectors.tsv").string()};
  std::size_t identical = 0, files = 0;
  std::string problem;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    const auto a = tmp / ("a" + std::to_string(c));
    const auto b = tmp / ("b" + std::to_string(c));
    if (run_cli(commands[c] + input + " --out " + a.string()) != 0 ||
        run_cli(commands[c] + input + " --out " + b.string()) != 0) {
      if (problem.empty()) problem = " command failed: " + commands[c];
      continue;
    }
    for (const auto& entry : std::filesystem::directory_iterator(a)) {
      ++files;
      const auto other = b / entry.path().filename();
      if (std::filesystem::exists(other) && read_file(entry.path()) == read_file(other)) {
        ++identical;
      } else if (problem.empty()) {
        problem = " differs: " + commands[c] + " " + entry.path().filename().string();
      }
    }
  }
  const bool ok = problem.empty() && files > 0 && identical == files;
  return {ok ? Outcome::pass : Outcome::fail,
          std::to_string(commands.size()) + " command lines, " + std::to_string(identical) + "/" +
              std::to_string(files) + " output files byte-identical across runs" + problem};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"example lint suite", lint_examples},
      {"passive regex/structured equivalence", passive_equivalence},
      {"VBG role approximation", vbg_roles},
      {"evolution round trip", evolution_round_trip},
      {"sentiment contracts", sentiment_contracts},
      {"discussion recall", discussion_recall},
      {"TF-IDF/cosine math", tfidf_math},
      {"clone ordering", clone_ordering},
      {"public dataset link similarity", dataset_conditional},
      {"end-to-end determinism", cli_determinism},
  };
  std::size_t passed = 0, failed = 0, skipped = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {Outcome::fail, std::string("exception: ") + e.what()};
    }
    const char* label = r.outcome == Outcome::pass ? "PASS" : r.outcome == Outcome::fail ? "FAIL" : "SKIP";
    (r.outcome == Outcome::pass ? passed : r.outcome == Outcome::fail ? failed : skipped)++;
    std::cout << label << " " << (i + 1 < 10 ? " " : "") << i + 1 << "  " << criteria[i].first
              << ": " << r.detail << std::endl;
  }
  std::cout << "acceptance: " << passed << " passed, " << failed << " failed, " << skipped
            << " skipped" << std::endl;
  return failed == 0 ? 0 : 1;
}
