#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dsel/corpus.hpp"
#include "dsel/sparse.hpp"

namespace dsel {

struct ClassifierConfig {
  int epochs = 10;
  double learning_rate = 0.1;  // decays as lr / (1 + lr * l2 * t)
  double l2 = 1e-4;
  std::uint64_t seed = 0;
};

/// One-vs-rest linear model: one weight vector and bias per class; the
/// prediction is the argmax margin, ties going to the earlier class.
struct LinearModel {
  std::vector<Label> classes;
  std::size_t dim = 0;
  std::vector<std::vector<double>> weights;
  std::vector<double> bias;
  /// Set when training saw a single class; the model then always predicts it.
  std::optional<Label> constant;

  std::vector<double> margins(const SparseVector& x) const;
  Label predict(const SparseVector& x) const;
};

/// Averaged SGD on the L2-regularized hinge loss, one binary problem per
/// class, examples visited in a seeded shuffle each epoch.
LinearModel train_classifier(std::span<const SparseVector> features, std::span<const Label> labels,
                             std::span<const Label> classes, std::size_t dim, const ClassifierConfig& config);

/// Fraction of correct argmax predictions. ParameterError on an empty set.
double evaluate(const LinearModel& model, std::span<const SparseVector> features, std::span<const Label> labels);

struct SignificanceResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-sided
  bool significant = false;  // p < 0.05
};

/// Two-sample Student's t-test with pooled variance. Each list needs >= 2 runs.
SignificanceResult t_test(std::span<const double> a, std::span<const double> b);

double mean(std::span<const double> values);
/// Sample standard deviation (n - 1); 0 for fewer than two values.
double sample_std(std::span<const double> values);

}  // namespace dsel
