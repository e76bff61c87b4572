#include "dsel/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dsel/error.hpp"

namespace dsel {

namespace {

void l2_normalize(SparseVector& v) {
  const double n = v.norm();
  if (n > 0.0)
    for (double& x : v.value) x /= n;
}

}  // namespace

TfidfVectorizer::TfidfVectorizer(int ngram_max, const Vocabulary* vocabulary)
    : ngram_max_(ngram_max), vocabulary_(vocabulary) {
  if (ngram_max != 1 && ngram_max != 2) throw ParameterError("ngram_max must be 1 or 2");
}

std::vector<std::string> TfidfVectorizer::ngrams(std::span<const std::string> tokens) const {
  std::vector<std::string> out;
  auto keep = [&](const std::string& t) { return vocabulary_ == nullptr || vocabulary_->contains(t); };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!keep(tokens[i])) continue;
    out.push_back(tokens[i]);
    if (ngram_max_ == 2 && i + 1 < tokens.size() && keep(tokens[i + 1]))
      out.push_back(tokens[i] + ' ' + tokens[i + 1]);
  }
  return out;
}

void TfidfVectorizer::fit(std::span<const std::vector<std::string>> documents) {
  if (documents.empty()) throw ParameterError("cannot fit tf-idf on an empty document list");
  std::map<std::string, std::uint64_t> df;
  for (const auto& doc : documents) {
    auto grams = ngrams(doc);
    std::sort(grams.begin(), grams.end());
    grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
    for (auto& g : grams) ++df[std::move(g)];
  }
  const double n = static_cast<double>(documents.size());
  features_.clear();
  idf_.clear();
  index_.clear();
  features_.reserve(df.size());
  idf_.reserve(df.size());
  for (auto& [gram, count] : df) {
    index_.emplace(gram, static_cast<std::uint32_t>(features_.size()));
    features_.push_back(gram);
    idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
}

std::optional<std::uint32_t> TfidfVectorizer::feature_index(const std::string& ngram) const {
  auto it = index_.find(ngram);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SparseVector TfidfVectorizer::transform(std::span<const std::string> tokens) const {
  std::vector<std::uint32_t> ids;
  for (const auto& g : ngrams(tokens))
    if (auto it = index_.find(g); it != index_.end()) ids.push_back(it->second);
  std::sort(ids.begin(), ids.end());
  SparseVector v;
  for (std::size_t i = 0; i < ids.size();) {
    std::size_t j = i;
    while (j < ids.size() && ids[j] == ids[i]) ++j;
    v.index.push_back(ids[i]);
    v.value.push_back(static_cast<double>(j - i) * idf_[ids[i]]);
    i = j;
  }
  l2_normalize(v);
  return v;
}

std::vector<SparseVector> TfidfVectorizer::transform(std::span<const std::vector<std::string>> documents) const {
  std::vector<SparseVector> out(documents.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t i = 0; i < documents.size(); ++i) out[i] = transform(documents[i]);
  return out;
}

std::vector<SparseVector> tfidf_features(const TokenLists& tokens, std::span<const std::size_t> docs,
                                         int ngram_max, const Vocabulary* vocabulary) {
  if (docs.empty()) throw ParameterError("cannot fit tf-idf on an empty document list");
  std::vector<std::vector<std::string>> selected;
  selected.reserve(docs.size());
  for (std::size_t i : docs) selected.push_back(tokens.at(i));
  TfidfVectorizer vectorizer(ngram_max, vocabulary);
  vectorizer.fit(selected);
  return vectorizer.transform(selected);
}

std::vector<SparseVector> vocabulary_tfidf(std::span<const SparseCounts> counts, std::size_t vocab_size) {
  std::vector<std::uint64_t> df(vocab_size, 0);
  for (const auto& c : counts)
    for (const auto& [idx, n] : c.entries) ++df[idx];
  const double total = static_cast<double>(counts.size());
  std::vector<double> idf(vocab_size);
  for (std::size_t i = 0; i < vocab_size; ++i)
    idf[i] = std::log((1.0 + total) / (1.0 + static_cast<double>(df[i]))) + 1.0;
  std::vector<SparseVector> out(counts.size());
  for (std::size_t d = 0; d < counts.size(); ++d) {
    SparseVector& v = out[d];
    for (const auto& [idx, n] : counts[d].entries) {
      v.index.push_back(idx);
      v.value.push_back(static_cast<double>(n) * idf[idx]);
    }
    l2_normalize(v);
  }
  return out;
}

}  // namespace dsel
