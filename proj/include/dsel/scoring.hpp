#pragma once

#include <span>
#include <vector>

#include "dsel/corpus.hpp"
#include "dsel/representations.hpp"
#include "dsel/similarity.hpp"

namespace dsel {

/// Scores groups of documents (addressed by corpus position) against a fixed
/// target. Implementations are immutable and safe to call concurrently. The
/// referenced per-document data must outlive the scorer.
class PoolScorer {
 public:
  virtual ~PoolScorer() = default;

  virtual Metric metric() const = 0;
  Orientation orientation() const { return orientation_of(metric()); }

  /// False for items with no usable representation (excluded from rankings).
  virtual bool usable(std::size_t item) const = 0;

  /// Similarity of the group's aggregate representation to the target; NaN
  /// when the group has no usable content.
  virtual double score_group(std::span<const std::size_t> items) const = 0;

  double score_item(std::size_t item) const { return score_group(std::span<const std::size_t>(&item, 1)); }
};

/// Jensen-Shannon over term distributions; groups pool their counts before normalizing.
class TermDistributionScorer final : public PoolScorer {
 public:
  TermDistributionScorer(std::span<const SparseCounts> counts, TermDistribution target);

  Metric metric() const override { return Metric::jensen_shannon; }
  bool usable(std::size_t item) const override { return !counts_[item].entries.empty(); }
  double score_group(std::span<const std::size_t> items) const override;

  const TermDistribution& target() const { return target_; }

 private:
  std::span<const SparseCounts> counts_;
  TermDistribution target_;
  double target_mass_ = 0.0;
};

/// Cosine over dense vectors; groups use the mean of their members.
class CosineScorer final : public PoolScorer {
 public:
  CosineScorer(std::span<const DenseRepresentation> reps, DenseRepresentation target);

  Metric metric() const override { return Metric::cosine; }
  bool usable(std::size_t) const override { return true; }
  double score_group(std::span<const std::size_t> items) const override;

 private:
  std::span<const DenseRepresentation> reps_;
  DenseRepresentation target_;
};

/// Precomputed per-item scores (proxy-A probabilities); groups use the mean.
/// Items without a score (NaN) are unusable.
class ItemScoreScorer final : public PoolScorer {
 public:
  ItemScoreScorer(std::vector<double> scores, Metric metric);

  Metric metric() const override { return metric_; }
  bool usable(std::size_t item) const override;
  double score_group(std::span<const std::size_t> items) const override;

 private:
  std::vector<double> scores_;
  Metric metric_;
};

}  // namespace dsel
