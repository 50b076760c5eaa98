#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace issuelens {

// Noun lemma -> hypernym paths, each ordered from the sense itself up to a root
// concept, with uppercase labels ("DISCONNECTION > SEPARATION > ... > ENTITY").
class HypernymLexicon {
 public:
  using Path = std::vector<std::string>;

  HypernymLexicon() = default;

  // "lemma<TAB>LABEL>LABEL>...>ROOT", one path per line; '#' starts a comment.
  static HypernymLexicon load_tsv(const std::filesystem::path& path);
  // A lexical-database dict directory: index.noun plus data.noun (or the split
  // data.noun1, data.noun2, ... parts). Follows hypernym and instance-hypernym pointers.
  static HypernymLexicon load_wordnet(const std::filesystem::path& dict_dir);

  void add_path(std::string_view lemma, Path path);

  bool loaded() const { return loaded_; }
  std::size_t size() const;

  // All paths over all noun senses; empty when the lemma is unknown.
  // Throws std::logic_error when nothing has been loaded.
  std::set<Path> paths(std::string_view lemma) const;

  // True if any path of any sense contains one of `labels` (compared case-insensitively).
  bool has_label(std::string_view lemma, const std::set<std::string>& labels) const;

  std::vector<std::string> lemmas() const;

  // Writes lemmas accepted by `keep` in TSV form, sorted.
  void write_tsv(const std::filesystem::path& path,
                 const std::function<bool(const std::string&)>& keep,
                 std::string_view header_comment = {}) const;

 private:
  struct Synset {
    std::string label;
    std::vector<std::size_t> hypernyms;  // offsets
  };

  void collect(std::size_t offset, Path& prefix, std::set<Path>& out, int depth) const;

  bool loaded_ = false;
  std::map<std::string, std::set<Path>, std::less<>> table_;
  std::unordered_map<std::size_t, Synset> synsets_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> senses_;
};

}  // namespace issuelens
