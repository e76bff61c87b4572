#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsel/representations.hpp"
#include "dsel/sparse.hpp"

namespace dsel {

enum class Metric { jensen_shannon, cosine, proxy_a };
enum class Orientation { higher_is_more_similar, lower_is_more_similar };

std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view text);
std::string_view to_string(Orientation orientation);
Orientation orientation_of(Metric metric);

/// A similarity value with its direction. An "empty" score marks an item
/// without a usable representation; callers exclude it from rankings.
struct SimilarityScore {
  double value = 0.0;
  Metric metric = Metric::jensen_shannon;
  Orientation orientation = Orientation::lower_is_more_similar;
  bool empty = false;

  /// Larger is always better, regardless of orientation.
  double utility() const { return orientation == Orientation::higher_is_more_similar ? value : -value; }
};

/// Orientation-aware comparison: true when `a` is strictly more similar than `b`.
inline bool more_similar(double a, double b, Orientation o) {
  return o == Orientation::higher_is_more_similar ? a > b : a < b;
}

/// KL(P || Q) in nats over the support of P. Returns +infinity (and logs a
/// warning) when some p_i > 0 has q_i = 0.
double kl_divergence(std::span<const double> p, std::span<const double> q);
double kl_divergence(const TermDistribution& p, const TermDistribution& q);

/// Jensen-Shannon divergence in nats, in [0, ln 2]. Exactly symmetric.
double js_divergence_values(std::span<const double> p, std::span<const double> q);
SimilarityScore js_divergence(const TermDistribution& p, const TermDistribution& q);

/// a.b / (|a| |b|); 0 if either norm is 0. ParameterError on dim mismatch.
double cosine_values(std::span<const double> a, std::span<const double> b);
SimilarityScore cosine(const DenseRepresentation& a, const DenseRepresentation& b);

// -- domain discriminator -----------------------------------------------------

struct LogisticConfig {
  double l2 = 1.0;              // on weights only; the bias is unregularized
  double gradient_tol = 1e-8;
  int max_iterations = 500;
};

/// L2-regularized logistic regression: minimizes
///   sum_i log(1 + exp(-y_i (w.x_i + b))) + l2/2 |w|^2
/// by full-batch gradient descent with Armijo backtracking. Features are
/// scaled column-wise by their max absolute training value (sparsity-preserving).
class DomainDiscriminator {
 public:
  DomainDiscriminator() = default;

  /// `labels[i]` is 1 (target) or 0 (source).
  void fit(std::span<const SparseVector> rows, std::span<const int> labels, std::size_t dim,
           const LogisticConfig& config = {});

  /// P(target | x).
  double probability(const SparseVector& x) const;
  std::vector<double> probabilities(std::span<const SparseVector> rows) const;

  const std::vector<double>& weights() const { return weights_; }  // in scaled feature space
  double bias() const { return bias_; }
  const std::vector<double>& scale() const { return scale_; }
  /// Regularized objective after each accepted step (first entry: initial point).
  const std::vector<double>& objective_history() const { return history_; }
  int iterations() const { return iterations_; }

  // Metadata echoed into reports.
  std::string representation;
  std::uint64_t seed = 0;

 private:
  std::vector<double> weights_;
  std::vector<double> scale_;
  double bias_ = 0.0;
  std::vector<double> history_;
  int iterations_ = 0;
};

struct ProxyAResult {
  std::vector<double> scores;  // one per source example, in input order
  DomainDiscriminator discriminator;
  bool subsampled = true;      // false when the source pool was smaller than the target
};

/// Per-example proxy-A scores: subsample sources to |target|, fit the
/// discriminator on the balanced set (source = 0, target = 1), and return
/// P(target) for every source example, sampled or not.
ProxyAResult proxy_a_scores(std::span<const SparseVector> source, std::span<const SparseVector> target,
                            std::size_t dim, std::uint64_t seed, const LogisticConfig& config = {});

/// 2 (1 - 2 err) clamped to [0, 2], where err is the discriminator's error on
/// a held-out part of the balanced set.
double proxy_a_distance(std::span<const SparseVector> source, std::span<const SparseVector> target, std::size_t dim,
                        double heldout_fraction, std::uint64_t seed, const LogisticConfig& config = {});

/// The formula alone, for a given held-out error rate.
double proxy_a_from_error(double error);

// -- conversions for discriminator input --------------------------------------

SparseVector to_sparse(const TermDistribution& t);
SparseVector to_sparse(const DenseRepresentation& d);

}  // namespace dsel
