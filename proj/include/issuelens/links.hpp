#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "issuelens/corpus.hpp"

namespace issuelens {

struct DocumentVector {
  // Sparse TF-IDF weights sorted by term id, or a dense sidecar vector.
  std::vector<std::pair<std::size_t, double>> sparse;
  std::vector<double> dense;
  bool is_dense = false;
  double norm = 0;

  static DocumentVector from_dense(std::vector<double> values);
};

double euclidean_norm(const DocumentVector& v);

// dot(a, b) / (|a| |b|), clamped to [-1, 1]; 0 when either norm is 0.
// Throws std::invalid_argument for dense vectors of different size or a
// sparse/dense mix.
double cosine_similarity(const DocumentVector& a, const DocumentVector& b);

// Lowercased tokens with pure punctuation removed.
std::vector<std::string> tfidf_tokens(std::string_view text);

// summary + " " + description, markup-stripped.
std::string issue_document(const IssueFields& issue);

class TfidfModel {
 public:
  // Throws std::invalid_argument when there is no document with a token.
  static TfidfModel fit(const std::vector<std::string>& documents);

  // Raw term counts times ln((1 + N) / (1 + df)) + 1, L2-normalized; unknown
  // terms are ignored.
  DocumentVector embed(std::string_view text) const;

  std::size_t document_count() const { return n_docs_; }
  std::size_t vocabulary_size() const { return terms_.size(); }
  std::optional<std::size_t> term_id(std::string_view term) const;
  std::size_t document_frequency(std::string_view term) const;  // 0 when unknown
  double idf(std::string_view term) const;                       // throws when unknown
  const std::vector<std::string>& terms() const { return terms_; }

  bool operator==(const TfidfModel&) const = default;

 private:
  std::size_t n_docs_ = 0;
  std::vector<std::string> terms_;  // id -> term, sorted
  std::vector<std::size_t> df_;     // id -> document frequency
  std::vector<double> idf_;
  std::map<std::string, std::size_t, std::less<>> ids_;
};

struct ExternalEmbeddings {
  std::map<std::string, std::vector<double>> vectors;
  std::size_t dimension = 0;
  std::vector<std::string> unmatched;  // keys absent from the corpus, when one was given
};

// "issue_key<TAB>v1 v2 ...", one per line; blank lines and '#' comments skipped.
// Throws InputError on malformed lines, duplicate keys or mixed dimensionality.
ExternalEmbeddings load_external_embeddings(const std::filesystem::path& path,
                                            const Corpus* corpus = nullptr);

struct LinkSimilarityRecord {
  std::string link_type;
  std::string source_key;
  std::string target_key;
  double similarity = 0;
};

struct TypeDistribution {
  std::string link_type;
  std::size_t count = 0;
  double min = 0;
  double q1 = 0;
  double median = 0;
  double q3 = 0;
  double max = 0;
  double mean = 0;
};

// Quantile with linear interpolation at position q * (n - 1) of the sorted values.
double quantile_sorted(const std::vector<double>& sorted, double q);

// Grouped by link type, sorted by descending median, then by type name.
std::vector<TypeDistribution> per_type_distributions(
    const std::vector<LinkSimilarityRecord>& records);

enum class EmbeddingProvider { tfidf, external };
enum class FitScope { linked, tracker };

std::string_view to_string(EmbeddingProvider p);
std::string_view to_string(FitScope s);

struct LinkAnalysisOptions {
  int year = 2021;
  EmbeddingProvider provider = EmbeddingProvider::tfidf;
  std::optional<std::filesystem::path> embeddings;
  // linked: fit on the issues that take part in a selected link;
  // tracker: fit on every issue of the trackers those links belong to.
  FitScope fit_scope = FitScope::linked;
};

struct LinkAnalysis {
  std::vector<LinkSimilarityRecord> records;  // sorted by (type, source, target)
  std::vector<TypeDistribution> distributions;
  std::size_t dangling = 0;
  std::size_t skipped_missing_vector = 0;
  std::size_t documents_fitted = 0;
  std::vector<std::string> unmatched_keys;
};

// Throws ConfigError when the external provider has no embeddings file.
LinkAnalysis analyze_links(const Corpus& corpus, const LinkAnalysisOptions& options);

// link_type, source, target, similarity
std::string link_records_to_tsv(const std::vector<LinkSimilarityRecord>& records);
// link_type, count, min, q1, median, q3, max, mean
std::string distributions_to_tsv(const std::vector<TypeDistribution>& distributions);

}  // namespace issuelens
