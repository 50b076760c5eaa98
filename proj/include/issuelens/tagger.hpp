#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace issuelens {

// The closed Penn Treebank tag set, including -LRB-/-RRB- and the quote tags.
const std::vector<std::string>& penn_tags();
bool is_penn_tag(std::string_view tag);

using TaggedSentence = std::vector<std::pair<std::string, std::string>>;  // (word, tag)

// Reads "word/TAG word/TAG ..." lines, one sentence per line. Bracket tags
// "(" and ")" are mapped to -LRB-/-RRB-, '"' to '', and ambiguous tags such as
// "VBG|NN" keep their first alternative. Lines carrying non-Penn tags are skipped.
std::vector<TaggedSentence> read_slash_tagged(const std::filesystem::path& path,
                                              std::size_t* skipped = nullptr);

struct TrainOptions {
  int iterations = 5;
  std::uint64_t seed = 42;
  double prune_below = 0.0;  // drop averaged weights with smaller magnitude
};

// Greedy left-to-right averaged perceptron over word-shape and context features.
class PerceptronTagger {
 public:
  static constexpr int kFormatVersion = 1;

  static PerceptronTagger train(const std::vector<TaggedSentence>& sentences,
                                const TrainOptions& options = {});
  static PerceptronTagger load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::vector<std::string> tag(const std::vector<std::string>& words) const;

  bool empty() const { return classes_.empty(); }
  std::size_t feature_count() const { return weights_.size(); }

 private:
  using ClassWeights = std::vector<std::pair<int, double>>;  // sorted by class index

  int predict(const std::vector<std::string>& features) const;

  std::vector<std::string> classes_;  // sorted
  std::unordered_map<std::string, std::string> tagdict_;
  std::unordered_map<std::string, ClassWeights> weights_;
};

// Token-context features for position i (also used by the trainer).
std::vector<std::string> tagger_features(const std::vector<std::string>& context, std::size_t i,
                                         std::string_view word, std::string_view prev,
                                         std::string_view prev2);

}  // namespace issuelens
