#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dsel/autoencoder.hpp"
#include "dsel/corpus.hpp"
#include "dsel/embeddings.hpp"
#include "dsel/evaluation.hpp"
#include "dsel/representations.hpp"
#include "dsel/scoring.hpp"
#include "dsel/selection.hpp"
#include "dsel/similarity.hpp"

namespace dsel {

struct ExperimentSettings {
  Task task = Task::binary;
  std::size_t vocab_size = 10000;
  PreprocessOptions preprocess;
  int ngram_max = 2;
  double sif_a = kDefaultSifSmoothing;
  std::optional<std::filesystem::path> embeddings_path;
  AETrainConfig ae;               // seed is derived from base_seed
  ClassifierConfig classifier;    // seed is derived from base_seed
  LogisticConfig discriminator;
  bool allow_proxy_subset = false;
  std::uint64_t base_seed = 0;
};

/// Corpus plus everything derived from it that does not depend on the run:
/// tokens, vocabulary, counts, and (lazily) embedding and autoencoder
/// representations. Not thread-safe.
class ExperimentContext {
 public:
  ExperimentContext(Corpus corpus, ExperimentSettings settings);

  const Corpus& corpus() const { return corpus_; }
  const ExperimentSettings& settings() const { return settings_; }
  const TokenLists& tokens() const { return tokens_; }
  const Vocabulary& vocabulary() const { return vocab_; }
  const std::vector<SparseCounts>& counts() const { return counts_; }

  /// Replaces any embeddings file named in the settings.
  void set_embeddings(EmbeddingTable table);
  const EmbeddingTable& embeddings();

  /// SIF vectors with p(w) taken from each document's own domain.
  const std::vector<DenseRepresentation>& embedding_reps();
  /// Codes of an autoencoder trained once on every document.
  const std::vector<DenseRepresentation>& autoencoder_reps();
  const AEModel& autoencoder();

  /// Labeled documents outside the target. ValidationError on an unknown target.
  Pool pool(const std::string& target) const;
  /// Labeled target documents.
  std::vector<std::size_t> evaluation_set(const std::string& target) const;

  /// Scorer for a similarity-guided strategy. `seed` only matters for proxy-A.
  std::unique_ptr<PoolScorer> scorer(const std::string& target, Representation rep, Metric metric,
                                     std::uint64_t seed);

  /// Runs the strategy in `config` against `target`.
  SelectionResult select(const std::string& target, const SelectionConfig& config);

  /// Fits tf-idf on the chosen documents, trains the classifier, and returns
  /// accuracy on the labeled target documents.
  double train_and_evaluate(const std::string& target, std::span<const std::size_t> chosen);

 private:
  void require_target(const std::string& target) const;
  std::vector<SparseVector> sparse_reps(std::span<const std::size_t> items, Representation rep);

  Corpus corpus_;
  ExperimentSettings settings_;
  TokenLists tokens_;
  Vocabulary vocab_;
  std::vector<SparseCounts> counts_;
  std::optional<EmbeddingTable> embeddings_;
  std::optional<std::vector<DenseRepresentation>> embedding_reps_;
  std::optional<AEModel> ae_model_;
  std::optional<std::vector<DenseRepresentation>> ae_reps_;
};

struct ExperimentResult {
  std::string target;
  SelectionConfig config;  // seed is the base seed
  std::vector<double> accuracies;
  std::vector<std::uint64_t> seeds;
  double mean = 0.0;
  double std = 0.0;
  std::size_t selected = 0;   // per-run selection size (same in every run)
  std::size_t shortfall = 0;  // largest shortfall over runs
  std::vector<std::string> chosen_domains;  // domain strategy only
};

/// Run i uses seed base_seed + i for selection and proxy-A; the classifier
/// stream is fixed by the context's base seed.
ExperimentResult run_experiment(ExperimentContext& context, const std::string& target, const SelectionConfig& config,
                                int runs, std::uint64_t base_seed);

}  // namespace dsel
