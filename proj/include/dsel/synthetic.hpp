#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dsel/corpus.hpp"
#include "dsel/embeddings.hpp"

namespace dsel {

/// Recipe for one generated domain. Token streams mix shared topical words,
/// domain-private topical words and a per-label sentiment lexicon. `overlap`
/// is the fraction of the target's private-topic and sentiment vocabularies
/// that this domain reuses; the rest is its own.
struct DomainSpec {
  std::string name;
  std::size_t shared_vocab_size = 300;
  std::size_t private_vocab_size = 300;
  std::size_t lexicon_size = 40;  // sentiment words per label
  double overlap = 0.0;
  std::size_t docs_per_label = 500;
  std::size_t min_length = 8;
  std::size_t max_length = 24;
  double sentiment_rate = 0.25;  // share of tokens drawn from the label's lexicon
  double shared_rate = 0.5;      // share of topical tokens drawn from the shared pool
  double label_noise = 0.0;
  /// Share of private-topic tokens borrowed from other source domains.
  double blend = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GeneratorOptions {
  Task task = Task::binary;
};

/// Documents of the target followed by each source domain, in spec order.
/// ValidationError on duplicate names. Deterministic per spec seeds.
Corpus generate(std::span<const DomainSpec> sources, const DomainSpec& target, const GeneratorOptions& options = {});

/// The label a document's sentiment tokens imply, before label noise.
/// Exposed so noise rates can be audited.
std::vector<Label> implied_labels(const Corpus& corpus);

struct Scenario {
  std::string name;
  std::string description;
  GeneratorOptions options;
  DomainSpec target;
  std::vector<DomainSpec> sources;

  Corpus build() const { return generate(sources, target, options); }
};

/// (a) "distinct": 5 source domains with overlaps 0.9, 0.6, 0.4, 0.2, 0.0;
/// (b) "blended": 8 source domains with heavy topical mixing.
std::vector<Scenario> benchmark_suite(std::uint64_t seed);

/// Random Gaussian vectors for every token a corpus can contain. Sentiment
/// words of one polarity share a common direction so embeddings carry signal.
EmbeddingTable synthetic_embeddings(const Corpus& corpus, std::size_t dim, std::uint64_t seed);
void write_embeddings(const std::filesystem::path& path, const Corpus& corpus, std::size_t dim, std::uint64_t seed);

}  // namespace dsel
