#include "issuelens/links.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "issuelens/textprep.hpp"
#include "issuelens/util.hpp"

namespace issuelens {

DocumentVector DocumentVector::from_dense(std::vector<double> values) {
  DocumentVector v;
  v.is_dense = true;
  v.dense = std::move(values);
  v.norm = euclidean_norm(v);
  return v;
}

double euclidean_norm(const DocumentVector& v) {
  double sum = 0;
  if (v.is_dense) {
    for (double x : v.dense) sum += x * x;
  } else {
    for (const auto& [id, w] : v.sparse) sum += w * w;
  }
  return std::sqrt(sum);
}

double cosine_similarity(const DocumentVector& a, const DocumentVector& b) {
  if (a.is_dense != b.is_dense) throw std::invalid_argument("cannot compare sparse and dense vectors");
  if (a.is_dense && a.dense.size() != b.dense.size()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a.dense.size()) + " vs " +
                                std::to_string(b.dense.size()));
  }
  if (a.norm == 0 || b.norm == 0) return 0.0;
  double dot = 0;
  if (a.is_dense) {
    for (std::size_t i = 0; i < a.dense.size(); ++i) dot += a.dense[i] * b.dense[i];
  } else {
    auto i = a.sparse.begin();
    auto j = b.sparse.begin();
    while (i != a.sparse.end() && j != b.sparse.end()) {
      if (i->first < j->first) {
        ++i;
      } else if (j->first < i->first) {
        ++j;
      } else {
        dot += i->second * j->second;
        ++i;
        ++j;
      }
    }
  }
  return std::clamp(dot / (a.norm * b.norm), -1.0, 1.0);
}

std::vector<std::string> tfidf_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (const Token& t : tokenize(text)) {
    if (!is_punctuation_token(t.text)) out.push_back(to_lower_ascii(t.text));
  }
  return out;
}

std::string issue_document(const IssueFields& issue) {
  return strip_markup(issue.summary + " " + issue.description).text;
}

TfidfModel TfidfModel::fit(const std::vector<std::string>& documents) {
  std::map<std::string, std::size_t> df;
  bool any = false;
  for (const std::string& doc : documents) {
    const auto tokens = tfidf_tokens(doc);
    any = any || !tokens.empty();
    for (const std::string& t : std::set<std::string>(tokens.begin(), tokens.end())) ++df[t];
  }
  if (!any) throw std::invalid_argument("TF-IDF needs at least one non-empty document");
  TfidfModel m;
  m.n_docs_ = documents.size();
  const auto n = static_cast<double>(m.n_docs_);
  for (const auto& [term, count] : df) {
    m.ids_.emplace(term, m.terms_.size());
    m.terms_.push_back(term);
    m.df_.push_back(count);
    m.idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  return m;
}

DocumentVector TfidfModel::embed(std::string_view text) const {
  std::map<std::size_t, double> counts;
  for (const std::string& t : tfidf_tokens(text)) {
    if (const auto it = ids_.find(t); it != ids_.end()) counts[it->second] += 1.0;
  }
  DocumentVector v;
  for (const auto& [id, tf] : counts) v.sparse.emplace_back(id, tf * idf_[id]);
  const double norm = euclidean_norm(v);
  if (norm > 0) {
    for (auto& [id, w] : v.sparse) w /= norm;
  }
  v.norm = euclidean_norm(v);
  return v;
}

std::optional<std::size_t> TfidfModel::term_id(std::string_view term) const {
  const auto it = ids_.find(term);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::size_t TfidfModel::document_frequency(std::string_view term) const {
  const auto id = term_id(term);
  return id ? df_[*id] : 0;
}

double TfidfModel::idf(std::string_view term) const {
  const auto id = term_id(term);
  if (!id) throw std::out_of_range("term not in vocabulary: " + std::string(term));
  return idf_[*id];
}

ExternalEmbeddings load_external_embeddings(const std::filesystem::path& path,
                                            const Corpus* corpus) {
  const std::string text = read_file(path);
  ExternalEmbeddings out;
  std::string first_key;
  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw InputError(where + ": expected key<TAB>values");
    const std::string key(trim(line.substr(0, tab)));
    if (key.empty()) throw InputError(where + ": empty key");
    std::istringstream ss{std::string(line.substr(tab + 1))};
    ss.imbue(std::locale::classic());
    std::vector<double> values;
    std::string item;
    while (ss >> item) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != item.size() || !std::isfinite(v)) {
        throw InputError(where + ": bad value '" + item + "' for key " + key);
      }
      values.push_back(v);
    }
    if (values.empty()) throw InputError(where + ": no values for key " + key);
    if (out.vectors.empty()) {
      out.dimension = values.size();
      first_key = key;
    } else if (values.size() != out.dimension) {
      throw InputError(where + ": key " + key + " has dimension " + std::to_string(values.size()) +
                       " but " + first_key + " has " + std::to_string(out.dimension));
    }
    if (!out.vectors.emplace(key, std::move(values)).second) {
      throw InputError(where + ": duplicate key " + key);
    }
  }
  if (corpus) {
    for (const auto& [key, v] : out.vectors) {
      if (!corpus->find(key)) out.unmatched.push_back(key);
    }
  }
  return out;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<TypeDistribution> per_type_distributions(
    const std::vector<LinkSimilarityRecord>& records) {
  std::map<std::string, std::vector<double>> groups;
  for (const LinkSimilarityRecord& r : records) groups[r.link_type].push_back(r.similarity);
  std::vector<TypeDistribution> out;
  for (auto& [type, values] : groups) {
    std::sort(values.begin(), values.end());
    TypeDistribution d;
    d.link_type = type;
    d.count = values.size();
    d.min = values.front();
    d.q1 = quantile_sorted(values, 0.25);
    d.median = quantile_sorted(values, 0.5);
    d.q3 = quantile_sorted(values, 0.75);
    d.max = values.back();
    d.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(d.count);
    out.push_back(std::move(d));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.median != b.median) return a.median > b.median;
    return a.link_type < b.link_type;
  });
  return out;
}

std::string_view to_string(EmbeddingProvider p) {
  return p == EmbeddingProvider::tfidf ? "tfidf" : "external";
}

std::string_view to_string(FitScope s) { return s == FitScope::linked ? "linked" : "tracker"; }

LinkAnalysis analyze_links(const Corpus& corpus, const LinkAnalysisOptions& options) {
  if (options.provider == EmbeddingProvider::external && !options.embeddings) {
    throw ConfigError("the external provider needs an embeddings file");
  }
  LinkAnalysis result;
  const LinkSelection selection = select_linked_issues(corpus, options.year);
  result.dangling = selection.dangling;

  std::map<std::string, DocumentVector> vectors;
  if (options.provider == EmbeddingProvider::tfidf) {
    std::set<const Issue*, bool (*)(const Issue*, const Issue*)> members(
        [](const Issue* a, const Issue* b) { return a->key < b->key; });
    std::set<std::string> trackers;
    for (const LinkedPair& p : selection.pairs) {
      members.insert(p.source);
      members.insert(p.target);
      trackers.insert(p.source->tracker);
      trackers.insert(p.target->tracker);
    }
    if (members.empty()) return result;
    std::vector<std::string> documents;
    if (options.fit_scope == FitScope::linked) {
      for (const Issue* issue : members) documents.push_back(issue_document(*issue));
    } else {
      for (const std::string& t : trackers) {
        for (const Issue& issue : corpus.tracker_issues(t)) documents.push_back(issue_document(issue));
      }
    }
    result.documents_fitted = documents.size();
    const TfidfModel model = TfidfModel::fit(documents);
    for (const Issue* issue : members) vectors[issue->key] = model.embed(issue_document(*issue));
  } else {
    ExternalEmbeddings ext = load_external_embeddings(*options.embeddings, &corpus);
    result.unmatched_keys = std::move(ext.unmatched);
    for (auto& [key, v] : ext.vectors) vectors[key] = DocumentVector::from_dense(std::move(v));
  }

  for (const LinkedPair& p : selection.pairs) {
    const auto a = vectors.find(p.link.source_key);
    const auto b = vectors.find(p.link.target_key);
    if (a == vectors.end() || b == vectors.end()) {
      ++result.skipped_missing_vector;
      continue;
    }
    result.records.push_back({p.link.link_type, p.link.source_key, p.link.target_key,
                              cosine_similarity(a->second, b->second)});
  }
  result.distributions = per_type_distributions(result.records);
  return result;
}

std::string link_records_to_tsv(const std::vector<LinkSimilarityRecord>& records) {
  std::string out = "link_type\tsource\ttarget\tsimilarity\n";
  for (const LinkSimilarityRecord& r : records) {
    out += tsv_escape(r.link_type) + '\t' + tsv_escape(r.source_key) + '\t' +
           tsv_escape(r.target_key) + '\t' + format_fixed(r.similarity) + '\n';
  }
  return out;
}

std::string distributions_to_tsv(const std::vector<TypeDistribution>& distributions) {
  std::string out = "link_type\tcount\tmin\tq1\tmedian\tq3\tmax\tmean\n";
  for (const TypeDistribution& d : distributions) {
    out += tsv_escape(d.link_type) + '\t' + std::to_string(d.count);
    for (double v : {d.min, d.q1, d.median, d.q3, d.max, d.mean}) out += '\t' + format_fixed(v);
    out += '\n';
  }
  return out;
}

}  // namespace issuelens
