// Trains the averaged-perceptron POS model shipped in data/tagger/.
#include <iostream>

#include "CLI11.hpp"
#include "issuelens/tagger.hpp"
#include "issuelens/util.hpp"

using namespace issuelens;

int main(int argc, char** argv) {
  CLI::App app{"Train the issuelens part-of-speech model"};
  std::vector<std::string> corpora;
  std::string out;
  TrainOptions opts;
  std::size_t holdout_every = 0;
  app.add_option("corpora", corpora, "word/TAG files, one sentence per line")->required();
  app.add_option("-o,--out", out, "model file to write")->required();
  app.add_option("--iterations", opts.iterations)->check(CLI::PositiveNumber);
  app.add_option("--seed", opts.seed);
  app.add_option("--prune-below", opts.prune_below, "drop weights with smaller magnitude");
  app.add_option("--holdout-every", holdout_every,
                 "keep every Nth sentence out of training and report accuracy on it");
  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<TaggedSentence> train, held;
    for (const std::string& path : corpora) {
      std::size_t skipped = 0;
      auto sentences = read_slash_tagged(path, &skipped);
      std::cerr << path << ": " << sentences.size() << " sentences, " << skipped << " skipped\n";
      for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (holdout_every && i % holdout_every == holdout_every - 1) {
          held.push_back(std::move(sentences[i]));
        } else {
          train.push_back(std::move(sentences[i]));
        }
      }
    }
    const PerceptronTagger tagger = PerceptronTagger::train(train, opts);
    std::cerr << "features: " << tagger.feature_count() << "\n";
    if (!held.empty()) {
      std::size_t right = 0, total = 0;
      for (const TaggedSentence& s : held) {
        std::vector<std::string> words;
        for (const auto& [w, t] : s) words.push_back(w);
        const auto tags = tagger.tag(words);
        for (std::size_t i = 0; i < s.size(); ++i, ++total) right += tags[i] == s[i].second;
      }
      std::cerr << "held-out accuracy: " << format_fixed(double(right) / double(total), 4) << " ("
                << total << " tokens)\n";
    }
    tagger.save(out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
