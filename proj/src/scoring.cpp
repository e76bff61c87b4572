#include "dsel/scoring.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "dsel/error.hpp"
#include "dsel/kernels.hpp"

namespace dsel {

TermDistributionScorer::TermDistributionScorer(std::span<const SparseCounts> counts, TermDistribution target)
    : counts_(counts), target_(std::move(target)) {
  if (target_.empty) throw ParameterError("target term distribution is empty");
  target_mass_ = std::accumulate(target_.probs.begin(), target_.probs.end(), 0.0);
}

double TermDistributionScorer::score_group(std::span<const std::size_t> items) const {
  return kernels::pooled_js(counts_, items, target_.probs, target_mass_);
}

CosineScorer::CosineScorer(std::span<const DenseRepresentation> reps, DenseRepresentation target)
    : reps_(reps), target_(std::move(target)) {
  for (const auto& r : reps_)
    if (r.dim() != target_.dim()) throw ParameterError("representation dimension differs from target");
}

double CosineScorer::score_group(std::span<const std::size_t> items) const {
  if (items.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (items.size() == 1) return cosine_values(reps_[items[0]].vec, target_.vec);
  thread_local std::vector<double> mean;
  mean.assign(target_.dim(), 0.0);
  for (std::size_t i : items) {
    const auto& v = reps_[i].vec;
    for (std::size_t k = 0; k < v.size(); ++k) mean[k] += v[k];
  }
  // The 1/|group| factor does not change the cosine but keeps the mean exact.
  const double inv = 1.0 / static_cast<double>(items.size());
  for (double& x : mean) x *= inv;
  return cosine_values(mean, target_.vec);
}

ItemScoreScorer::ItemScoreScorer(std::vector<double> scores, Metric metric) : scores_(std::move(scores)), metric_(metric) {}

bool ItemScoreScorer::usable(std::size_t item) const { return item < scores_.size() && !std::isnan(scores_[item]); }

double ItemScoreScorer::score_group(std::span<const std::size_t> items) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i : items) {
    if (!usable(i)) continue;
    sum += scores_[i];
    ++n;
  }
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(n);
}

}  // namespace dsel
