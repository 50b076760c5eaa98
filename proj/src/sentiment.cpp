#include "issuelens/sentiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <regex>
#include <sstream>

#include "issuelens/textprep.hpp"
#include "issuelens/util.hpp"

namespace issuelens {
namespace {

constexpr std::string_view kNoChange = "no description change";

double parse_number(std::string_view text, const std::string& where) {
  const std::string s(trim(text));
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError(where + ": not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw ConfigError(where + ": not a number: '" + s + "'");
  return v;
}

std::string xml_unescape(std::string s) {
  static const std::pair<std::string_view, std::string_view> kEntities[] = {
      {"&quot;", "\""}, {"&apos;", "'"}, {"&lt;", "<"}, {"&gt;", ">"}, {"&amp;", "&"}};
  for (const auto& [from, to] : kEntities) {
    for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size())) {
      s.replace(p, from.size(), to);
    }
  }
  return s;
}

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

SentimentLexicon SentimentLexicon::load_tsv(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  SentimentLexicon lex;
  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const auto f = split(line, '\t');
    try {
      if (f[0] == "!negation") {
        if (f.size() != 2) throw ConfigError(where + ": expected !negation<TAB>word");
        lex.add_negation(f[1]);
      } else if (f[0] == "!intensifier") {
        if (f.size() != 3) throw ConfigError(where + ": expected !intensifier<TAB>word<TAB>factor");
        lex.add_intensifier(f[1], parse_number(f[2], where));
      } else {
        if (f.size() != 3) throw ConfigError(where + ": expected word<TAB>pos<TAB>polarity");
        lex.add_entry(f[0], f[1], parse_number(f[2], where));
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return lex;
}

SentimentLexicon SentimentLexicon::load_pattern_xml(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  static const std::regex kElement("<word\\s([^>]*)/>");
  static const std::regex kAttr("([A-Za-z_]+)=\"([^\"]*)\"");
  struct Acc {
    double polarity = 0;
    double intensity = 0;
    std::size_t n = 0;
    bool adverb_only = true;
  };
  std::map<std::string, Acc> forms;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kElement);
       it != std::sregex_iterator(); ++it) {
    const std::string attrs = (*it)[1].str();
    std::map<std::string, std::string> a;
    for (auto at = std::sregex_iterator(attrs.begin(), attrs.end(), kAttr);
         at != std::sregex_iterator(); ++at) {
      a[(*at)[1].str()] = xml_unescape((*at)[2].str());
    }
    if (!a.count("form") || !a.count("polarity")) continue;
    const std::string where = path.string() + ": form '" + a["form"] + "'";
    Acc& acc = forms[to_lower_ascii(a["form"])];
    acc.polarity += parse_number(a["polarity"], where);
    acc.intensity += a.count("intensity") ? parse_number(a["intensity"], where) : 1.0;
    acc.adverb_only = acc.adverb_only && a["pos"] == "RB";
    ++acc.n;
  }
  if (forms.empty()) throw ConfigError("no <word> entries in " + path.string());
  SentimentLexicon lex;
  for (const auto& [form, acc] : forms) {
    const auto n = static_cast<double>(acc.n);
    lex.add_entry(form, "*", clamp_unit(acc.polarity / n));
    const double intensity = acc.intensity / n;
    if (acc.adverb_only && intensity > 0 && intensity != 1.0) lex.add_intensifier(form, intensity);
  }
  for (const char* w : {"no", "not", "never", "n't"}) lex.add_negation(w);
  return lex;
}

void SentimentLexicon::add_entry(std::string_view word, std::string_view pos, double polarity) {
  if (trim(word).empty()) throw std::invalid_argument("empty lexicon word");
  if (!(polarity >= -1.0 && polarity <= 1.0)) {
    throw std::invalid_argument("polarity out of [-1, 1] for '" + std::string(word) + "'");
  }
  const std::string p = trim(pos).empty() ? "*" : std::string(trim(pos));
  entries_[to_lower_ascii(trim(word))][p] = polarity;
}

void SentimentLexicon::add_negation(std::string_view word) {
  if (trim(word).empty()) throw std::invalid_argument("empty negation word");
  negations_.insert(to_lower_ascii(trim(word)));
}

void SentimentLexicon::add_intensifier(std::string_view word, double factor) {
  if (trim(word).empty()) throw std::invalid_argument("empty intensifier word");
  if (!(factor > 0) || !std::isfinite(factor)) {
    throw std::invalid_argument("intensifier factor must be > 0 for '" + std::string(word) + "'");
  }
  intensifiers_[to_lower_ascii(trim(word))] = factor;
}

std::optional<double> SentimentLexicon::polarity(std::string_view word) const {
  const auto it = entries_.find(word);
  if (it == entries_.end()) return std::nullopt;
  double sum = 0;
  for (const auto& [pos, v] : it->second) sum += v;
  return sum / static_cast<double>(it->second.size());
}

std::optional<double> SentimentLexicon::intensifier(std::string_view word) const {
  const auto it = intensifiers_.find(word);
  if (it == intensifiers_.end()) return std::nullopt;
  return it->second;
}

bool SentimentLexicon::is_negation(std::string_view word) const {
  if (negations_.count(word)) return true;
  // Contractions stay one token ("don't", "isn’t").
  if (negations_.count("n't")) return ends_with(word, "n't") || ends_with(word, "n\xE2\x80\x99t");
  return false;
}

double score_polarity(std::string_view clean_text, const SentimentLexicon& lexicon) {
  std::vector<std::string> words;
  for (const Token& t : tokenize(clean_text)) {
    if (!is_punctuation_token(t.text)) words.push_back(to_lower_ascii(t.text));
  }
  double sum = 0;
  std::size_t hits = 0;
  double pending = 1.0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto factor = lexicon.intensifier(words[i]);
    if (factor && i + 1 < words.size() &&
        (lexicon.polarity(words[i + 1]) || lexicon.intensifier(words[i + 1]))) {
      pending *= *factor;
      continue;
    }
    const auto p = lexicon.polarity(words[i]);
    if (!p) continue;
    double v = *p * pending;
    pending = 1.0;
    for (std::size_t back = 1; back <= kNegationWindow && back <= i; ++back) {
      if (lexicon.is_negation(words[i - back])) {
        v *= kNegationFactor;
        break;
      }
    }
    sum += clamp_unit(v);
    ++hits;
  }
  if (hits == 0) return 0.0;
  return clamp_unit(sum / static_cast<double>(hits));
}

double score_raw_text(std::string_view raw_text, const SentimentLexicon& lexicon) {
  return score_polarity(strip_markup(raw_text).text, lexicon);
}

TrendRecord make_trend(std::string key, std::string first_text, std::string last_text,
                       const SentimentLexicon& lexicon) {
  TrendRecord r;
  r.issue_key = std::move(key);
  r.first_score = score_raw_text(first_text, lexicon);
  r.last_score = score_raw_text(last_text, lexicon);
  r.trend = r.last_score - r.first_score;
  r.first_text = std::move(first_text);
  r.last_text = std::move(last_text);
  return r;
}

TrendOutcome description_trend(const Issue& issue, const SentimentLexicon& lexicon,
                               std::size_t overlong_limit) {
  TrendOutcome out;
  if (!issue.created) {
    out.skip = TrendSkip{issue.key, "missing creation date"};
    return out;
  }
  const FieldHistory h = reconstruct_field_history(issue, TrackedField::description);
  if (h.change_count() == 0) {
    out.skip = TrendSkip{issue.key, std::string(kNoChange)};
    return out;
  }
  std::string first = h.versions.front().value.value_or("");
  std::string last = h.versions.back().value.value_or("");
  if (flag_overlong(strip_markup(first), overlong_limit)) {
    out.skip = TrendSkip{issue.key, "first version exceeds " + std::to_string(overlong_limit) +
                                        " characters"};
    return out;
  }
  if (flag_overlong(strip_markup(last), overlong_limit)) {
    out.skip = TrendSkip{issue.key, "last version exceeds " + std::to_string(overlong_limit) +
                                        " characters"};
    return out;
  }
  out.record = make_trend(issue.key, std::move(first), std::move(last), lexicon);
  return out;
}

std::optional<TrendStats> trend_stats(const std::vector<TrendRecord>& records) {
  if (records.empty()) return std::nullopt;
  TrendStats s;
  s.count = records.size();
  std::vector<double> trends;
  std::size_t toward = 0;
  for (const TrendRecord& r : records) {
    trends.push_back(r.trend);
    if (std::abs(r.last_score) < std::abs(r.first_score)) ++toward;
  }
  s.mean = std::accumulate(trends.begin(), trends.end(), 0.0) / static_cast<double>(s.count);
  std::sort(trends.begin(), trends.end());
  const std::size_t mid = s.count / 2;
  s.median = s.count % 2 ? trends[mid] : (trends[mid - 1] + trends[mid]) / 2.0;
  s.toward_neutral = static_cast<double>(toward) / static_cast<double>(s.count);
  return s;
}

TrendReport trend_report(const Corpus& corpus, const SentimentLexicon& lexicon,
                         std::size_t overlong_limit) {
  TrendReport report;
  for (const Issue& issue : corpus.issues()) {
    if (!issue.created) continue;
    TrendOutcome o = description_trend(issue, lexicon, overlong_limit);
    if (o.record) {
      report.records.push_back(std::move(*o.record));
    } else if (o.skip && o.skip->reason != kNoChange) {
      report.skipped.push_back(std::move(*o.skip));
    }
  }
  report.stats = trend_stats(report.records);
  return report;
}

std::string trends_to_tsv(const std::vector<TrendRecord>& records) {
  std::string out = "key\tfirst_score\tlast_score\ttrend\n";
  for (const TrendRecord& r : records) {
    out += tsv_escape(r.issue_key) + '\t' + format_fixed(r.first_score) + '\t' +
           format_fixed(r.last_score) + '\t' + format_fixed(r.trend) + '\n';
  }
  return out;
}

std::string trend_stats_to_tsv(const std::optional<TrendStats>& stats, std::size_t skipped) {
  std::string out = "statistic\tvalue\n";
  if (!stats) return out;
  out += "count\t" + std::to_string(stats->count) + '\n';
  out += "mean_trend\t" + format_fixed(stats->mean) + '\n';
  out += "median_trend\t" + format_fixed(stats->median) + '\n';
  out += "toward_neutral\t" + format_fixed(stats->toward_neutral) + '\n';
  out += "skipped\t" + std::to_string(skipped) + '\n';
  return out;
}

}  // namespace issuelens
