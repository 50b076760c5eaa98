// Prints word/TAG/lemma for each sentence read from stdin.
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "issuelens/annotate.hpp"
#include "issuelens/config.hpp"
#include "issuelens/textprep.hpp"

using namespace issuelens;

int main(int argc, char** argv) {
  CLI::App app{"Tag text with the issuelens part-of-speech model"};
  const RunConfig defaults = default_run_config();
  std::string model = defaults.tagger_model.string();
  std::string lemmas = defaults.lemmas.string();
  app.add_option("--model", model);
  app.add_option("--lemmas", lemmas);
  CLI11_PARSE(app, argc, argv);
  try {
    auto tagger = std::make_shared<const PerceptronTagger>(PerceptronTagger::load(model));
    const Annotator annotator(tagger, Lemmatizer::load(lemmas));
    std::string line;
    while (std::getline(std::cin, line)) {
      for (const Sentence& s : split_sentences(strip_markup(line))) {
        std::vector<std::string> words;
        for (const Token& t : s.tokens) words.push_back(sanitize_stream_word(t.text));
        if (words.empty()) continue;
        const auto tagged = annotator.pos_tag(words);
        for (std::size_t i = 0; i < tagged.size(); ++i) {
          std::cout << (i ? " " : "") << tagged[i].word << '/' << tagged[i].pos << '/'
                    << tagged[i].lemma;
        }
        std::cout << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
