// Exports the lexicon files in data/lexicon/ from a WordNet-format dict directory.
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "issuelens/hypernyms.hpp"
#include "issuelens/lints.hpp"
#include "issuelens/util.hpp"

using namespace issuelens;

namespace {

std::set<std::string> single_word_lemmas(const std::filesystem::path& index) {
  std::ifstream in(index);
  if (!in) throw ConfigError("cannot open " + index.string());
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == ' ') continue;
    const std::string lemma = line.substr(0, line.find(' '));
    if (lemma.find_first_of("_-.'") == std::string::npos) out.insert(lemma);
  }
  return out;
}

std::string notice(const std::filesystem::path& dict) {
  std::ifstream in(dict / "LICENSE.txt");
  std::string text = "Derived from WordNet 3.0 noun and verb indexes and hypernym pointers.\n";
  if (in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    for (const std::string& l : split(ss.str(), '\n')) text += std::string(trim(l)) + "\n";
  }
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Export issuelens lexicon files from a WordNet dict directory"};
  std::string dict, out_dir;
  std::vector<std::string> suffixes = RuleConfig{}.derived_suffixes;
  std::vector<std::string> extra;
  app.add_option("dict", dict, "directory with index.noun, index.verb, data.noun*")->required();
  app.add_option("-o,--out", out_dir, "output directory")->required();
  app.add_option("--suffix", suffixes, "noun endings to keep in hypernyms.tsv");
  app.add_option("--extra", extra, "additional nouns to keep in hypernyms.tsv");
  CLI11_PARSE(app, argc, argv);
  try {
    const std::filesystem::path d(dict), out(out_dir);
    std::filesystem::create_directories(out);
    const std::string header = notice(d);

    const auto verbs = single_word_lemmas(d / "index.verb");
    const auto nouns = single_word_lemmas(d / "index.noun");
    std::string lemmas;
    for (const std::string& l : split(header, '\n')) {
      if (!l.empty()) lemmas += "# " + l + "\n";
    }
    for (const std::string& v : verbs) lemmas += "V\t" + v + "\n";
    for (const std::string& n : nouns) lemmas += "N\t" + n + "\n";
    write_file_atomic(out / "lemmas.tsv", lemmas);

    const HypernymLexicon lex = HypernymLexicon::load_wordnet(d);
    const std::set<std::string> extras(extra.begin(), extra.end());
    std::size_t kept = 0;
    lex.write_tsv(
        out / "hypernyms.tsv",
        [&](const std::string& lemma) {
          if (!nouns.count(lemma)) return false;
          bool keep = extras.count(lemma) > 0;
          for (const std::string& s : suffixes) {
            keep = keep || (ends_with(lemma, s) && lemma.size() > s.size());
          }
          kept += keep;
          return keep;
        },
        header);
    std::cerr << verbs.size() << " verbs, " << nouns.size() << " nouns, " << kept
              << " nouns with hypernym paths\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
