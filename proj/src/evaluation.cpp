#include "dsel/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>

#include "dsel/error.hpp"
#include "dsel/log.hpp"
#include "dsel/random.hpp"

namespace dsel {

std::vector<double> LinearModel::margins(const SparseVector& x) const {
  std::vector<double> out(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    double z = bias[c];
    const auto& w = weights[c];
    for (std::size_t k = 0; k < x.index.size(); ++k)
      if (x.index[k] < dim) z += w[x.index[k]] * x.value[k];
    out[c] = z;
  }
  return out;
}

Label LinearModel::predict(const SparseVector& x) const {
  if (constant) return *constant;
  const auto z = margins(x);
  std::size_t best = 0;
  for (std::size_t c = 1; c < z.size(); ++c)
    if (z[c] > z[best]) best = c;
  return classes[best];
}

namespace {

// Weight vector kept as scale * v so the per-step L2 shrink is O(1), with the
// running average of the true weights maintained lazily per coordinate.
struct AveragedHinge {
  std::vector<double> v, acc;
  double scale = 1.0;
  double scale_sum = 0.0;            // sum of scale over completed steps
  std::vector<double> scale_sum_at;  // scale_sum when acc[j] was last brought up to date
  double b = 0.0, b_sum = 0.0;

  explicit AveragedHinge(std::size_t dim) : v(dim, 0.0), acc(dim, 0.0), scale_sum_at(dim, 0.0) {}

  // acc[j] += sum over the steps since the last flush of scale_t * v[j].
  void flush(std::size_t j) {
    acc[j] += v[j] * (scale_sum - scale_sum_at[j]);
    scale_sum_at[j] = scale_sum;
  }

  double margin(const SparseVector& x) const {
    double z = 0.0;
    for (std::size_t k = 0; k < x.index.size(); ++k) z += v[x.index[k]] * x.value[k];
    return scale * z + b;
  }

  void step(const SparseVector& x, double y, double eta, double l2) {
    const double z = margin(x);
    if (scale < 1e-9) {
      for (std::size_t j = 0; j < v.size(); ++j) {
        flush(j);
        v[j] *= scale;
      }
      scale = 1.0;
    }
    scale *= 1.0 - eta * l2;
    if (y * z < 1.0) {
      for (std::size_t k = 0; k < x.index.size(); ++k) {
        const auto j = x.index[k];
        flush(j);
        v[j] += eta * y * x.value[k] / scale;
      }
      b += eta * y;
    }
    scale_sum += scale;
    b_sum += b;
  }

  void finalize(long steps, std::vector<double>& w_out, double& b_out) {
    w_out.assign(v.size(), 0.0);
    for (std::size_t j = 0; j < v.size(); ++j) {
      flush(j);
      w_out[j] = acc[j] / static_cast<double>(steps);
    }
    b_out = b_sum / static_cast<double>(steps);
  }
};

}  // namespace

LinearModel train_classifier(std::span<const SparseVector> features, std::span<const Label> labels,
                             std::span<const Label> classes, std::size_t dim, const ClassifierConfig& config) {
  if (features.size() != labels.size()) throw ParameterError("features and labels differ in length");
  if (features.empty()) throw ParameterError("cannot train a classifier on an empty set");
  if (classes.size() < 2) throw ParameterError("a classifier needs at least two classes");
  LinearModel model;
  model.classes.assign(classes.begin(), classes.end());
  model.dim = dim;
  model.weights.assign(classes.size(), std::vector<double>(dim, 0.0));
  model.bias.assign(classes.size(), 0.0);

  std::vector<std::size_t> present;
  for (std::size_t c = 0; c < classes.size(); ++c)
    if (std::find(labels.begin(), labels.end(), classes[c]) != labels.end()) present.push_back(c);
  for (Label l : labels)
    if (std::find(classes.begin(), classes.end(), l) == classes.end())
      throw ParameterError("training label outside the task's class list");
  if (present.size() == 1) {
    warn("training set has a single class; the model predicts it constantly");
    model.constant = classes[present.front()];
    return model;
  }

  std::vector<AveragedHinge> learners;
  learners.reserve(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c) learners.emplace_back(dim);

  Rng rng(config.seed);
  std::vector<std::size_t> order(features.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  long t = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t i : order) {
      ++t;
      const double eta = config.learning_rate / (1.0 + config.learning_rate * config.l2 * static_cast<double>(t - 1));
      for (std::size_t c = 0; c < classes.size(); ++c) {
        const double y = labels[i] == classes[c] ? 1.0 : -1.0;
        learners[c].step(features[i], y, eta, config.l2);
      }
    }
  }
  for (std::size_t c = 0; c < classes.size(); ++c) learners[c].finalize(t, model.weights[c], model.bias[c]);
  return model;
}

double evaluate(const LinearModel& model, std::span<const SparseVector> features, std::span<const Label> labels) {
  if (features.size() != labels.size()) throw ParameterError("features and labels differ in length");
  if (features.empty()) throw ParameterError("cannot evaluate on an empty set");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < features.size(); ++i)
    if (model.predict(features[i]) == labels[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(features.size());
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_std(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mu = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mu) * (v - mu);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

SignificanceResult t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw ParameterError("t-test needs at least two runs per group");
  const double n1 = static_cast<double>(a.size()), n2 = static_cast<double>(b.size());
  const double m1 = mean(a), m2 = mean(b);
  const double s1 = sample_std(a), s2 = sample_std(b);
  SignificanceResult r;
  r.df = n1 + n2 - 2.0;
  const double pooled = ((n1 - 1.0) * s1 * s1 + (n2 - 1.0) * s2 * s2) / r.df;
  if (pooled == 0.0) {
    if (m1 == m2) {
      r.t = 0.0;
      r.p = 1.0;
    } else {
      warn("t-test with zero variance and unequal means; reporting p = 0");
      r.t = m1 > m2 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
      r.p = 0.0;
    }
  } else {
    r.t = (m1 - m2) / std::sqrt(pooled * (1.0 / n1 + 1.0 / n2));
    // Two-sided tail of Student's t: I_{df / (df + t^2)}(df / 2, 1 / 2).
    r.p = boost::math::ibeta(r.df / 2.0, 0.5, r.df / (r.df + r.t * r.t));
    r.p = std::clamp(r.p, 0.0, 1.0);
  }
  r.significant = r.p < 0.05;
  return r;
}

}  // namespace dsel
