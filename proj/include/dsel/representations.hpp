#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dsel/corpus.hpp"
#include "dsel/embeddings.hpp"
#include "dsel/sparse.hpp"

namespace dsel {

class AEModel;

enum class Representation { term_dist, embedding, autoencoder };

std::string_view to_string(Representation r);
Representation parse_representation(std::string_view text);

/// Normalized term probabilities over the vocabulary. `empty` is set when the
/// source had no in-vocabulary tokens; probs is then all zeros.
struct TermDistribution {
  std::vector<double> probs;
  bool empty = true;

  std::size_t size() const { return probs.size(); }
};

enum class DenseSource { embedding, autoencoder };

struct DenseRepresentation {
  std::vector<double> vec;
  DenseSource source = DenseSource::embedding;

  std::size_t dim() const { return vec.size(); }
};

/// p(w) within a reference domain, over its in-vocabulary token mass.
/// Tokens never seen in the domain get the floor 1 / (N + 1).
class UnigramProbabilities {
 public:
  UnigramProbabilities() = default;
  UnigramProbabilities(std::span<const SparseCounts> domain_counts, const Vocabulary& vocab);

  double probability(std::string_view token) const;
  double floor() const { return 1.0 / (static_cast<double>(reference_tokens_) + 1.0); }
  std::uint64_t reference_tokens() const { return reference_tokens_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::unordered_map<std::string, double, Hash, std::equal_to<>> probs_;
  std::uint64_t reference_tokens_ = 0;
};

/// Sum the counts, then normalize over `vocab_size` entries.
TermDistribution term_distribution(std::span<const SparseCounts> counts, std::size_t vocab_size);
TermDistribution term_distribution(const SparseCounts& counts, std::size_t vocab_size);

inline constexpr double kDefaultSifSmoothing = 1e-5;

/// Average of sqrt(a / p(w)) v_w over the tokens that have a vector; zero
/// vector when none do. ParameterError when a <= 0.
DenseRepresentation sif_embedding(std::span<const std::string> tokens, const EmbeddingTable& table,
                                  const UnigramProbabilities& p, double a = kDefaultSifSmoothing);

/// Componentwise mean. ParameterError on an empty list or mixed dims/sources.
DenseRepresentation domain_representation(std::span<const DenseRepresentation> reps);

/// Hidden code of the uncorrupted input. ParameterError on a feature-space mismatch.
DenseRepresentation ae_representation(const SparseVector& features, const AEModel& model);

}  // namespace dsel
