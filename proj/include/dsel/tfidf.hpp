#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dsel/corpus.hpp"
#include "dsel/sparse.hpp"

namespace dsel {

/// Bag-of-n-grams tf-idf: tf is the raw count, idf = ln((1 + N) / (1 + df)) + 1,
/// rows L2-normalized. Fit on a training selection; unseen n-grams are dropped
/// at transform time. Feature indices follow lexicographic n-gram order.
class TfidfVectorizer {
 public:
  /// `ngram_max` in {1, 2}. When `vocabulary` is given, only n-grams whose
  /// tokens are all in it become features.
  explicit TfidfVectorizer(int ngram_max = 2, const Vocabulary* vocabulary = nullptr);

  /// Throws ParameterError on an empty training set.
  void fit(std::span<const std::vector<std::string>> documents);
  SparseVector transform(std::span<const std::string> tokens) const;
  std::vector<SparseVector> transform(std::span<const std::vector<std::string>> documents) const;

  std::size_t dimension() const { return features_.size(); }
  const std::vector<std::string>& features() const { return features_; }
  const std::vector<double>& idf() const { return idf_; }
  std::optional<std::uint32_t> feature_index(const std::string& ngram) const;

 private:
  std::vector<std::string> ngrams(std::span<const std::string> tokens) const;

  int ngram_max_;
  const Vocabulary* vocabulary_;
  std::vector<std::string> features_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// Per-document tf-idf over the given ids (corpus positions), fit on those
/// same documents. Convenience wrapper for one-shot use.
std::vector<SparseVector> tfidf_features(const TokenLists& tokens, std::span<const std::size_t> docs,
                                         int ngram_max, const Vocabulary* vocabulary = nullptr);

/// Unigram tf-idf over the shared vocabulary (feature index = vocabulary
/// index), idf computed over all given documents. Used as autoencoder input.
std::vector<SparseVector> vocabulary_tfidf(std::span<const SparseCounts> counts, std::size_t vocab_size);

}  // namespace dsel
