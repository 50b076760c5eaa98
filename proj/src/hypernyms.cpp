#include "issuelens/hypernyms.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "issuelens/util.hpp"

namespace issuelens {
namespace {

std::string key_of(std::string_view lemma) {
  std::string k = to_lower_ascii(trim(lemma));
  std::replace(k.begin(), k.end(), ' ', '_');
  return k;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(std::move(line));
  return lines;
}

}  // namespace

HypernymLexicon HypernymLexicon::load_tsv(const std::filesystem::path& path) {
  HypernymLexicon lex;
  std::size_t line_no = 0;
  for (std::string& line : read_lines(path)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    const auto fields = split(line, '\t');
    auto fail = [&](const std::string& what) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + what);
    };
    if (fields.size() != 2 || trim(fields[0]).empty()) fail("expected lemma<TAB>path");
    Path p;
    for (const std::string& label : split(fields[1], '>')) {
      const std::string_view l = trim(label);
      if (l.empty()) fail("empty label in path");
      p.push_back(upper(l));
    }
    lex.add_path(fields[0], std::move(p));
  }
  // A root never has a hypernym of its own, so it cannot appear mid-path.
  std::set<std::string> inner;
  for (const auto& [lemma, paths] : lex.table_) {
    for (const Path& p : paths) inner.insert(p.begin(), p.end() - 1);
  }
  for (const auto& [lemma, paths] : lex.table_) {
    for (const Path& p : paths) {
      if (inner.count(p.back())) {
        throw ConfigError(path.string() + ": path of '" + lemma + "' ends at " + p.back() +
                          ", which is not a root concept");
      }
    }
  }
  lex.loaded_ = true;
  return lex;
}

HypernymLexicon HypernymLexicon::load_wordnet(const std::filesystem::path& dict_dir) {
  namespace fs = std::filesystem;
  HypernymLexicon lex;

  std::vector<fs::path> data_files;
  if (fs::exists(dict_dir / "data.noun")) {
    data_files.push_back(dict_dir / "data.noun");
  } else {
    for (int part = 1; fs::exists(dict_dir / ("data.noun" + std::to_string(part))); ++part) {
      data_files.push_back(dict_dir / ("data.noun" + std::to_string(part)));
    }
  }
  if (data_files.empty()) throw ConfigError("no data.noun file in " + dict_dir.string());

  for (const fs::path& file : data_files) {
    for (const std::string& line : read_lines(file)) {
      if (line.empty() || line.front() == ' ') continue;  // license header
      std::istringstream ss(line);
      std::size_t offset = 0;
      std::string lex_filenum, ss_type, w_cnt_hex;
      ss >> offset >> lex_filenum >> ss_type >> w_cnt_hex;
      const auto w_cnt = std::stoul(w_cnt_hex, nullptr, 16);
      Synset synset;
      for (unsigned long k = 0; k < w_cnt; ++k) {
        std::string word, lex_id;
        ss >> word >> lex_id;
        if (k == 0) {
          // Adjective markers such as "(p)" never occur on nouns, but strip defensively.
          if (const auto paren = word.find('('); paren != std::string::npos) word.resize(paren);
          synset.label = upper(word);
        }
      }
      std::size_t p_cnt = 0;
      ss >> p_cnt;
      for (std::size_t k = 0; k < p_cnt; ++k) {
        std::string symbol, pos, source_target;
        std::size_t target = 0;
        ss >> symbol >> target >> pos >> source_target;
        if ((symbol == "@" || symbol == "@i") && pos == "n") synset.hypernyms.push_back(target);
      }
      if (!ss) throw ConfigError("malformed synset line in " + file.string());
      lex.synsets_.emplace(offset, std::move(synset));
    }
  }

  for (const std::string& line : read_lines(dict_dir / "index.noun")) {
    if (line.empty() || line.front() == ' ') continue;
    std::istringstream ss(line);
    std::string lemma, pos;
    std::size_t synset_cnt = 0, p_cnt = 0;
    ss >> lemma >> pos >> synset_cnt >> p_cnt;
    for (std::size_t k = 0; k < p_cnt; ++k) {
      std::string symbol;
      ss >> symbol;
    }
    std::size_t sense_cnt = 0, tagsense_cnt = 0;
    ss >> sense_cnt >> tagsense_cnt;
    std::vector<std::size_t> offsets;
    for (std::size_t k = 0; k < synset_cnt; ++k) {
      std::size_t off = 0;
      ss >> off;
      if (!lex.synsets_.count(off)) {
        throw ConfigError("index.noun refers to missing synset " + std::to_string(off));
      }
      offsets.push_back(off);
    }
    if (!ss) throw ConfigError("malformed index.noun line: " + lemma);
    lex.senses_.emplace(lemma, std::move(offsets));
  }
  lex.loaded_ = true;
  return lex;
}

void HypernymLexicon::add_path(std::string_view lemma, Path path) {
  if (path.empty()) throw std::invalid_argument("empty hypernym path");
  for (std::string& label : path) label = upper(label);
  table_[key_of(lemma)].insert(std::move(path));
  loaded_ = true;
}

std::size_t HypernymLexicon::size() const { return table_.size() + senses_.size(); }

void HypernymLexicon::collect(std::size_t offset, Path& prefix, std::set<Path>& out,
                              int depth) const {
  const auto it = synsets_.find(offset);
  if (it == synsets_.end() || depth > 64) return;
  prefix.push_back(it->second.label);
  if (it->second.hypernyms.empty()) {
    out.insert(prefix);
  } else {
    for (std::size_t h : it->second.hypernyms) collect(h, prefix, out, depth + 1);
  }
  prefix.pop_back();
}

std::set<HypernymLexicon::Path> HypernymLexicon::paths(std::string_view lemma) const {
  if (!loaded_) throw std::logic_error("hypernym lexicon not loaded");
  const std::string key = key_of(lemma);
  std::set<Path> out;
  if (const auto it = table_.find(key); it != table_.end()) out = it->second;
  if (const auto it = senses_.find(key); it != senses_.end()) {
    for (std::size_t offset : it->second) {
      Path prefix;
      collect(offset, prefix, out, 0);
    }
  }
  return out;
}

bool HypernymLexicon::has_label(std::string_view lemma, const std::set<std::string>& labels) const {
  std::set<std::string> wanted;
  for (const std::string& l : labels) wanted.insert(upper(l));
  for (const Path& p : paths(lemma)) {
    for (const std::string& label : p) {
      if (wanted.count(label)) return true;
    }
  }
  return false;
}

std::vector<std::string> HypernymLexicon::lemmas() const {
  std::set<std::string> all;
  for (const auto& [k, v] : table_) all.insert(k);
  for (const auto& [k, v] : senses_) all.insert(k);
  return {all.begin(), all.end()};
}

void HypernymLexicon::write_tsv(const std::filesystem::path& path,
                                const std::function<bool(const std::string&)>& keep,
                                std::string_view header_comment) const {
  std::string out;
  for (const std::string& line : split(header_comment, '\n')) {
    if (!line.empty()) out += "# " + line + "\n";
  }
  for (const std::string& lemma : lemmas()) {
    if (!keep(lemma)) continue;
    for (const Path& p : paths(lemma)) out += lemma + "\t" + join(p, ">") + "\n";
  }
  write_file_atomic(path, out);
}

}  // namespace issuelens
