#include "dsel/representations.hpp"

#include <cmath>

#include "dsel/autoencoder.hpp"
#include "dsel/error.hpp"

namespace dsel {

std::string_view to_string(Representation r) {
  switch (r) {
    case Representation::term_dist: return "term_dist";
    case Representation::embedding: return "embedding";
    case Representation::autoencoder: return "autoencoder";
  }
  return "term_dist";
}

Representation parse_representation(std::string_view text) {
  if (text == "term_dist" || text == "term" || text == "td") return Representation::term_dist;
  if (text == "embedding" || text == "emb") return Representation::embedding;
  if (text == "autoencoder" || text == "ae") return Representation::autoencoder;
  throw ParameterError("unknown representation '" + std::string(text) + "'");
}

UnigramProbabilities::UnigramProbabilities(std::span<const SparseCounts> domain_counts, const Vocabulary& vocab) {
  std::vector<std::uint64_t> totals(vocab.size(), 0);
  for (const auto& c : domain_counts) {
    for (const auto& [idx, n] : c.entries) {
      totals[idx] += n;
      reference_tokens_ += n;
    }
  }
  if (reference_tokens_ == 0) return;
  const double inv = 1.0 / static_cast<double>(reference_tokens_);
  for (std::size_t i = 0; i < totals.size(); ++i)
    if (totals[i] > 0) probs_.emplace(vocab.tokens()[i], static_cast<double>(totals[i]) * inv);
}

double UnigramProbabilities::probability(std::string_view token) const {
  auto it = probs_.find(token);
  return it == probs_.end() ? 0.0 : it->second;
}

TermDistribution term_distribution(std::span<const SparseCounts> counts, std::size_t vocab_size) {
  TermDistribution t;
  t.probs.assign(vocab_size, 0.0);
  std::vector<std::uint64_t> sums(vocab_size, 0);
  std::uint64_t total = 0;
  for (const auto& c : counts) {
    for (const auto& [idx, n] : c.entries) {
      if (idx >= vocab_size) throw ParameterError("term index outside the vocabulary");
      sums[idx] += n;
      total += n;
    }
  }
  if (total == 0) return t;
  t.empty = false;
  const double inv = 1.0 / static_cast<double>(total);
  for (std::size_t i = 0; i < vocab_size; ++i) t.probs[i] = static_cast<double>(sums[i]) * inv;
  return t;
}

TermDistribution term_distribution(const SparseCounts& counts, std::size_t vocab_size) {
  return term_distribution(std::span<const SparseCounts>(&counts, 1), vocab_size);
}

DenseRepresentation sif_embedding(std::span<const std::string> tokens, const EmbeddingTable& table,
                                  const UnigramProbabilities& p, double a) {
  if (!(a > 0.0)) throw ParameterError("SIF smoothing factor a must be > 0");
  DenseRepresentation rep;
  rep.source = DenseSource::embedding;
  rep.vec.assign(table.dim(), 0.0);
  std::size_t used = 0;
  for (const auto& tok : tokens) {
    auto v = table.lookup(tok);
    if (!v) continue;
    double prob = p.probability(tok);
    if (prob <= 0.0) prob = p.floor();
    const double w = std::sqrt(a / prob);
    for (std::size_t k = 0; k < rep.vec.size(); ++k) rep.vec[k] += w * (*v)[k];
    ++used;
  }
  if (used > 0)
    for (double& x : rep.vec) x /= static_cast<double>(used);
  return rep;
}

DenseRepresentation domain_representation(std::span<const DenseRepresentation> reps) {
  if (reps.empty()) throw ParameterError("cannot average an empty list of representations");
  DenseRepresentation out;
  out.source = reps.front().source;
  out.vec.assign(reps.front().dim(), 0.0);
  for (const auto& r : reps) {
    if (r.dim() != out.dim()) throw ParameterError("mixed representation dimensions");
    if (r.source != out.source) throw ParameterError("mixed representation sources");
    for (std::size_t k = 0; k < r.vec.size(); ++k) out.vec[k] += r.vec[k];
  }
  const double n = static_cast<double>(reps.size());
  for (double& x : out.vec) x /= n;
  return out;
}

DenseRepresentation ae_representation(const SparseVector& features, const AEModel& model) {
  if (!features.index.empty() && features.index.back() >= model.input_dim())
    throw ParameterError("feature index outside the autoencoder's input space");
  DenseRepresentation rep;
  rep.source = DenseSource::autoencoder;
  rep.vec = encode(model, features);
  return rep;
}

}  // namespace dsel
