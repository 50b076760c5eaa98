#include "issuelens/tagger.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "issuelens/util.hpp"

namespace issuelens {

const std::vector<std::string>& penn_tags() {
  static const std::vector<std::string> kTags = {
      "#",   "$",   "''",  ",",   "-LRB-", "-RRB-", ".",   ":",   "CC",  "CD",   "DT",  "EX",
      "FW",  "IN",  "JJ",  "JJR", "JJS",   "LS",    "MD",  "NN",  "NNP", "NNPS", "NNS", "PDT",
      "POS", "PRP", "PRP$", "RB", "RBR",   "RBS",   "RP",  "SYM", "TO",  "UH",   "VB",  "VBD",
      "VBG", "VBN", "VBP", "VBZ", "WDT",   "WP",    "WP$", "WRB", "``"};
  return kTags;
}

bool is_penn_tag(std::string_view tag) {
  const auto& tags = penn_tags();
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

namespace {

std::string map_corpus_tag(std::string tag) {
  if (const auto bar = tag.find('|'); bar != std::string::npos) tag.resize(bar);
  if (tag == "(") return "-LRB-";
  if (tag == ")") return "-RRB-";
  if (tag == "\"") return "''";
  return tag;
}

std::string suffix3(std::string_view w) {
  return std::string(w.size() > 3 ? w.substr(w.size() - 3) : w);
}

std::string normalize(std::string_view word) {
  if (word.find('-') != std::string_view::npos && word.front() != '-') return "!HYPHEN";
  const bool all_digits =
      std::all_of(word.begin(), word.end(), [](char c) { return c >= '0' && c <= '9'; });
  if (all_digits && word.size() == 4) return "!YEAR";
  if (word.front() >= '0' && word.front() <= '9') return "!DIGITS";
  return to_lower_ascii(word);
}

std::string shape(std::string_view w) {
  bool upper_first = false, any_upper_rest = false, any_lower = false, any_digit = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const char c = w[i];
    if (c >= 'A' && c <= 'Z') {
      if (i == 0) {
        upper_first = true;
      } else {
        any_upper_rest = true;
      }
    } else if (c >= 'a' && c <= 'z') {
      any_lower = true;
    } else if (c >= '0' && c <= '9') {
      any_digit = true;
    }
  }
  std::string s;
  if (upper_first && !any_lower) {
    s = "XX";
  } else if (upper_first) {
    s = any_upper_rest ? "XxX" : "Xx";
  } else if (any_upper_rest) {
    s = "xX";
  } else if (any_lower) {
    s = "x";
  } else {
    s = "-";
  }
  if (any_digit) s += "d";
  return s;
}

std::vector<std::string> make_context(const std::vector<std::string>& words) {
  std::vector<std::string> context = {"-START-", "-START2-"};
  for (const std::string& w : words) context.push_back(normalize(w));
  context.push_back("-END-");
  context.push_back("-END2-");
  return context;
}

struct Param {
  double weight = 0.0;
  double total = 0.0;
  long long stamp = 0;
};

}  // namespace

std::vector<std::string> tagger_features(const std::vector<std::string>& context, std::size_t i,
                                         std::string_view word, std::string_view prev,
                                         std::string_view prev2) {
  i += 2;
  std::vector<std::string> f;
  f.reserve(16);
  auto add = [&f](std::string_view name, std::string_view a = {}, std::string_view b = {}) {
    std::string key(name);
    if (!a.empty()) (key += ' ') += a;
    if (!b.empty()) (key += ' ') += b;
    f.push_back(std::move(key));
  };
  add("bias");
  add("i suffix", suffix3(word));
  add("i pref1", word.substr(0, 1));
  add("i shape", shape(word));
  add("i-1 tag", prev);
  add("i-2 tag", prev2);
  add("i tag+i-2 tag", prev, prev2);
  add("i word", context[i]);
  add("i-1 tag+i word", prev, context[i]);
  add("i-1 word", context[i - 1]);
  add("i-1 suffix", suffix3(context[i - 1]));
  add("i-2 word", context[i - 2]);
  add("i+1 word", context[i + 1]);
  add("i+1 suffix", suffix3(context[i + 1]));
  add("i+2 word", context[i + 2]);
  return f;
}

std::vector<TaggedSentence> read_slash_tagged(const std::filesystem::path& path,
                                              std::size_t* skipped) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<TaggedSentence> out;
  std::string line;
  std::size_t bad = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty() || line.front() == '#') continue;
    TaggedSentence sentence;
    bool ok = true;
    std::istringstream ss(line);
    std::string item;
    while (ss >> item) {
      const auto slash = item.rfind('/');
      if (slash == std::string::npos || slash == 0 || slash + 1 == item.size()) {
        ok = false;
        break;
      }
      std::string tag = map_corpus_tag(item.substr(slash + 1));
      if (!is_penn_tag(tag)) {
        ok = false;
        break;
      }
      sentence.emplace_back(item.substr(0, slash), std::move(tag));
    }
    if (ok && !sentence.empty()) {
      out.push_back(std::move(sentence));
    } else {
      ++bad;
    }
  }
  if (skipped) *skipped = bad;
  return out;
}

PerceptronTagger PerceptronTagger::train(const std::vector<TaggedSentence>& sentences,
                                         const TrainOptions& options) {
  PerceptronTagger tagger;
  std::set<std::string> class_set;
  std::unordered_map<std::string, std::map<std::string, int>> counts;
  for (const auto& s : sentences) {
    for (const auto& [w, t] : s) {
      class_set.insert(t);
      ++counts[w][t];
    }
  }
  tagger.classes_.assign(class_set.begin(), class_set.end());
  std::unordered_map<std::string, int> class_index;
  for (std::size_t c = 0; c < tagger.classes_.size(); ++c) {
    class_index[tagger.classes_[c]] = static_cast<int>(c);
  }
  for (const auto& [word, tags] : counts) {
    int total = 0, best = 0;
    std::string best_tag;
    for (const auto& [t, n] : tags) {
      total += n;
      if (n > best) {
        best = n;
        best_tag = t;
      }
    }
    if (total >= 20 && static_cast<double>(best) / total >= 0.97) tagger.tagdict_[word] = best_tag;
  }

  std::unordered_map<std::string, std::unordered_map<int, Param>> params;
  long long instances = 0;
  const std::size_t n_classes = tagger.classes_.size();
  auto predict_raw = [&](const std::vector<std::string>& feats) {
    std::vector<double> scores(n_classes, 0.0);
    for (const std::string& f : feats) {
      const auto it = params.find(f);
      if (it == params.end()) continue;
      for (const auto& [c, p] : it->second) scores[static_cast<std::size_t>(c)] += p.weight;
    }
    return static_cast<int>(std::max_element(scores.begin(), scores.end()) - scores.begin());
  };
  auto bump = [&](const std::string& f, int c, double v) {
    Param& p = params[f][c];
    p.total += static_cast<double>(instances - p.stamp) * p.weight;
    p.stamp = instances;
    p.weight += v;
  };

  std::vector<std::size_t> order(sentences.size());
  std::iota(order.begin(), order.end(), 0);
  for (int iter = 0; iter < options.iterations; ++iter) {
    deterministic_shuffle(order, options.seed + static_cast<std::uint64_t>(iter));
    for (std::size_t idx : order) {
      const TaggedSentence& s = sentences[idx];
      std::vector<std::string> words;
      for (const auto& [w, t] : s) words.push_back(w);
      const std::vector<std::string> context = make_context(words);
      std::string prev = "-START-", prev2 = "-START2-";
      for (std::size_t i = 0; i < words.size(); ++i) {
        std::string guess;
        if (const auto it = tagger.tagdict_.find(words[i]); it != tagger.tagdict_.end()) {
          guess = it->second;
        } else {
          const auto feats = tagger_features(context, i, words[i], prev, prev2);
          const int g = predict_raw(feats);
          const int truth = class_index.at(s[i].second);
          ++instances;
          if (g != truth) {
            for (const std::string& f : feats) {
              bump(f, truth, 1.0);
              bump(f, g, -1.0);
            }
          }
          guess = tagger.classes_[static_cast<std::size_t>(g)];
        }
        prev2 = std::move(prev);
        prev = std::move(guess);
      }
    }
  }

  for (auto& [feature, by_class] : params) {
    ClassWeights averaged;
    for (auto& [c, p] : by_class) {
      p.total += static_cast<double>(instances - p.stamp) * p.weight;
      const double avg = instances > 0 ? p.total / static_cast<double>(instances) : 0.0;
      // Round through the on-disk representation so trained and reloaded taggers agree.
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.5g", avg);
      const double stored = std::strtod(buf, nullptr);
      if (stored != 0.0 && std::abs(stored) >= options.prune_below) averaged.emplace_back(c, stored);
    }
    if (averaged.empty()) continue;
    std::sort(averaged.begin(), averaged.end());
    tagger.weights_.emplace(feature, std::move(averaged));
  }
  return tagger;
}

int PerceptronTagger::predict(const std::vector<std::string>& features) const {
  std::vector<double> scores(classes_.size(), 0.0);
  for (const std::string& f : features) {
    const auto it = weights_.find(f);
    if (it == weights_.end()) continue;
    for (const auto& [c, w] : it->second) scores[static_cast<std::size_t>(c)] += w;
  }
  return static_cast<int>(std::max_element(scores.begin(), scores.end()) - scores.begin());
}

std::vector<std::string> PerceptronTagger::tag(const std::vector<std::string>& words) const {
  if (classes_.empty()) throw std::logic_error("tagger has no model");
  std::vector<std::string> tags;
  tags.reserve(words.size());
  const std::vector<std::string> context = make_context(words);
  std::string prev = "-START-", prev2 = "-START2-";
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::string t;
    if (const auto it = tagdict_.find(words[i]); it != tagdict_.end()) {
      t = it->second;
    } else {
      t = classes_[static_cast<std::size_t>(
          predict(tagger_features(context, i, words[i], prev, prev2)))];
    }
    tags.push_back(t);
    prev2 = std::move(prev);
    prev = std::move(t);
  }
  return tags;
}

void PerceptronTagger::save(const std::filesystem::path& path) const {
  std::string out = "issuelens-perceptron\t" + std::to_string(kFormatVersion) + "\n";
  out += "classes\t" + std::to_string(classes_.size()) + "\t" + join(classes_, " ") + "\n";
  std::vector<std::pair<std::string, std::string>> dict(tagdict_.begin(), tagdict_.end());
  std::sort(dict.begin(), dict.end());
  out += "tagdict\t" + std::to_string(dict.size()) + "\n";
  for (const auto& [w, t] : dict) out += w + "\t" + t + "\n";
  std::vector<const std::pair<const std::string, ClassWeights>*> rows;
  for (const auto& row : weights_) rows.push_back(&row);
  std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->first < b->first; });
  out += "weights\t" + std::to_string(rows.size()) + "\n";
  char buf[48];
  for (const auto* row : rows) {
    out += row->first;
    out += '\t';
    bool first = true;
    for (const auto& [c, w] : row->second) {
      std::snprintf(buf, sizeof(buf), "%s%d:%.5g", first ? "" : " ", c, w);
      out += buf;
      first = false;
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

PerceptronTagger PerceptronTagger::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open tagger weights " + path.string());
  auto fail = [&path](const std::string& what) {
    throw ConfigError("bad tagger weight file " + path.string() + ": " + what);
  };
  std::string line;
  auto next_fields = [&]() {
    if (!std::getline(in, line)) fail("unexpected end of file");
    return split(line, '\t');
  };
  auto header = next_fields();
  if (header.size() != 2 || header[0] != "issuelens-perceptron") fail("missing header");
  if (header[1] != std::to_string(kFormatVersion)) fail("unsupported version " + header[1]);

  PerceptronTagger tagger;
  auto classes = next_fields();
  if (classes.size() != 3 || classes[0] != "classes") fail("missing class list");
  tagger.classes_ = split(classes[2], ' ');
  if (tagger.classes_.size() != std::stoul(classes[1])) fail("class count mismatch");
  for (const std::string& c : tagger.classes_) {
    if (!is_penn_tag(c)) fail("unknown tag " + c);
  }
  auto dict = next_fields();
  if (dict.size() != 2 || dict[0] != "tagdict") fail("missing tag dictionary");
  const std::size_t n_dict = std::stoul(dict[1]);
  for (std::size_t k = 0; k < n_dict; ++k) {
    auto f = next_fields();
    if (f.size() != 2 || !is_penn_tag(f[1])) fail("bad tag dictionary entry: " + line);
    tagger.tagdict_[f[0]] = f[1];
  }
  auto weights = next_fields();
  if (weights.size() != 2 || weights[0] != "weights") fail("missing weights");
  const std::size_t n_weights = std::stoul(weights[1]);
  tagger.weights_.reserve(n_weights);
  for (std::size_t k = 0; k < n_weights; ++k) {
    auto f = next_fields();
    if (f.size() != 2) fail("bad weight row: " + line);
    ClassWeights cw;
    for (const std::string& item : split(f[1], ' ')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) fail("bad weight: " + item);
      const int c = std::stoi(item.substr(0, colon));
      if (c < 0 || static_cast<std::size_t>(c) >= tagger.classes_.size()) fail("bad class index");
      cw.emplace_back(c, std::strtod(item.c_str() + colon + 1, nullptr));
    }
    tagger.weights_.emplace(f[0], std::move(cw));
  }
  return tagger;
}

}  // namespace issuelens
