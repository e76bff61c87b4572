#include "dsel/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "dsel/error.hpp"
#include "dsel/kernels.hpp"
#include "dsel/log.hpp"
#include "dsel/random.hpp"

namespace dsel {

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::jensen_shannon: return "jensen_shannon";
    case Metric::cosine: return "cosine";
    case Metric::proxy_a: return "proxy_a";
  }
  return "jensen_shannon";
}

Metric parse_metric(std::string_view text) {
  if (text == "jensen_shannon" || text == "js") return Metric::jensen_shannon;
  if (text == "cosine" || text == "cos") return Metric::cosine;
  if (text == "proxy_a" || text == "pad" || text == "da") return Metric::proxy_a;
  throw ParameterError("unknown metric '" + std::string(text) + "'");
}

std::string_view to_string(Orientation orientation) {
  return orientation == Orientation::higher_is_more_similar ? "higher_is_more_similar" : "lower_is_more_similar";
}

Orientation orientation_of(Metric metric) {
  return metric == Metric::jensen_shannon ? Orientation::lower_is_more_similar
                                          : Orientation::higher_is_more_similar;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ParameterError("KL divergence of distributions with different lengths");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) {
      warn("KL divergence undefined: p_i > 0 where q_i = 0");
      return std::numeric_limits<double>::infinity();
    }
    sum += p[i] * std::log(p[i] / q[i]);
  }
  return sum;
}

double kl_divergence(const TermDistribution& p, const TermDistribution& q) { return kl_divergence(p.probs, q.probs); }

double js_divergence_values(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ParameterError("JS divergence of distributions with different lengths");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p[i], qi = q[i];
    const double m = 0.5 * pi + 0.5 * qi;
    double a = 0.0, b = 0.0;
    if (pi > 0.0) a = pi * std::log(pi / m);
    if (qi > 0.0) b = qi * std::log(qi / m);
    // a + b is commutative in floating point, so swapping P and Q is exact.
    sum += a + b;
  }
  return std::clamp(0.5 * sum, 0.0, std::numbers::ln2);
}

SimilarityScore js_divergence(const TermDistribution& p, const TermDistribution& q) {
  SimilarityScore s;
  s.metric = Metric::jensen_shannon;
  s.orientation = Orientation::lower_is_more_similar;
  if (p.empty || q.empty) {
    s.empty = true;
    s.value = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  s.value = js_divergence_values(p.probs, q.probs);
  return s;
}

double cosine_values(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ParameterError("cosine of vectors with different dimensions");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

SimilarityScore cosine(const DenseRepresentation& a, const DenseRepresentation& b) {
  SimilarityScore s;
  s.metric = Metric::cosine;
  s.orientation = Orientation::higher_is_more_similar;
  s.value = cosine_values(a.vec, b.vec);
  return s;
}

// -- logistic regression -------------------------------------------------------

namespace {

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

struct LogisticProblem {
  std::span<const SparseVector> rows;
  std::span<const double> sign;  // +1 target, -1 source
  std::size_t dim;
  double l2;
  mutable std::vector<double> margins;

  double objective(std::span<const double> w, double b) const {
    margins.resize(rows.size());
    kernels::row_margins(kernels::default_backend(), rows, w, b, margins);
    double f = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) f += softplus(-sign[i] * margins[i]);
    double ww = 0.0;
    for (double x : w) ww += x * x;
    return f + 0.5 * l2 * ww;
  }

  // Uses the margins left by the last objective() call at the same point.
  double gradient(std::span<const double> w, std::vector<double>& gw) const {
    gw.assign(dim, 0.0);
    double gb = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double r = -sign[i] * sigmoid(-sign[i] * margins[i]);
      gb += r;
      const auto& x = rows[i];
      for (std::size_t k = 0; k < x.index.size(); ++k) gw[x.index[k]] += r * x.value[k];
    }
    for (std::size_t j = 0; j < dim; ++j) gw[j] += l2 * w[j];
    return gb;
  }
};

}  // namespace

void DomainDiscriminator::fit(std::span<const SparseVector> rows, std::span<const int> labels, std::size_t dim,
                              const LogisticConfig& config) {
  if (rows.size() != labels.size()) throw ParameterError("discriminator rows and labels differ in length");
  scale_.assign(dim, 0.0);
  for (const auto& x : rows) {
    for (std::size_t k = 0; k < x.index.size(); ++k) {
      if (x.index[k] >= dim) throw ParameterError("discriminator feature index out of range");
      scale_[x.index[k]] = std::max(scale_[x.index[k]], std::abs(x.value[k]));
    }
  }
  for (double& s : scale_)
    if (s == 0.0) s = 1.0;
  std::vector<SparseVector> scaled(rows.begin(), rows.end());
  for (auto& x : scaled)
    for (std::size_t k = 0; k < x.index.size(); ++k) x.value[k] /= scale_[x.index[k]];
  std::vector<double> sign(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) sign[i] = labels[i] ? 1.0 : -1.0;

  LogisticProblem problem{scaled, sign, dim, config.l2, {}};
  weights_.assign(dim, 0.0);
  bias_ = 0.0;
  history_.clear();
  iterations_ = 0;

  std::vector<double> gw, trial(dim);
  double f = problem.objective(weights_, bias_);
  history_.push_back(f);
  double step = 1.0;
  for (int it = 0; it < config.max_iterations; ++it) {
    const double gb = problem.gradient(weights_, gw);
    double gnorm2 = gb * gb;
    for (double g : gw) gnorm2 += g * g;
    if (std::sqrt(gnorm2) < config.gradient_tol) break;
    bool accepted = false;
    double f_new = f;
    for (int tries = 0; tries < 60; ++tries) {
      for (std::size_t j = 0; j < dim; ++j) trial[j] = weights_[j] - step * gw[j];
      const double trial_b = bias_ - step * gb;
      f_new = problem.objective(trial, trial_b);
      if (f_new <= f - 0.5 * step * gnorm2) {
        weights_.swap(trial);
        bias_ = trial_b;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      problem.objective(weights_, bias_);  // restore margins at the current point
      break;
    }
    f = f_new;
    history_.push_back(f);
    ++iterations_;
    step *= 2.0;
  }
  if (!std::isfinite(f)) throw NumericalError("discriminator objective is not finite");
}

double DomainDiscriminator::probability(const SparseVector& x) const {
  double z = bias_;
  for (std::size_t k = 0; k < x.index.size(); ++k) {
    const auto j = x.index[k];
    if (j < weights_.size()) z += weights_[j] * x.value[k] / scale_[j];
  }
  return sigmoid(z);
}

std::vector<double> DomainDiscriminator::probabilities(std::span<const SparseVector> rows) const {
  std::vector<double> out(rows.size());
  std::vector<double> w(weights_.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = weights_[j] / scale_[j];
  kernels::row_margins(kernels::default_backend(), rows, w, bias_, out);
  for (double& z : out) z = sigmoid(z);
  return out;
}

// -- proxy A -------------------------------------------------------------------

namespace {

// Source positions used for the balanced set, in draw order.
std::vector<std::size_t> balance_sources(std::size_t n_source, std::size_t n_target, Rng& rng, bool& subsampled) {
  if (n_source < n_target) {
    warn("fewer source than target examples; using all source examples without subsampling");
    subsampled = false;
    std::vector<std::size_t> all(n_source);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }
  subsampled = true;
  return rng.sample_without_replacement(n_source, n_target);
}

}  // namespace

ProxyAResult proxy_a_scores(std::span<const SparseVector> source, std::span<const SparseVector> target,
                            std::size_t dim, std::uint64_t seed, const LogisticConfig& config) {
  Rng rng(seed);
  ProxyAResult result;
  const auto picked = balance_sources(source.size(), target.size(), rng, result.subsampled);
  if (picked.size() < 2 || target.size() < 2)
    throw ParameterError("proxy-A scoring needs at least 2 examples per class");
  std::vector<SparseVector> rows;
  std::vector<int> labels;
  rows.reserve(picked.size() + target.size());
  for (std::size_t i : picked) {
    rows.push_back(source[i]);
    labels.push_back(0);
  }
  for (const auto& t : target) {
    rows.push_back(t);
    labels.push_back(1);
  }
  result.discriminator.seed = seed;
  result.discriminator.fit(rows, labels, dim, config);
  result.scores = result.discriminator.probabilities(source);
  return result;
}

double proxy_a_from_error(double error) { return std::clamp(2.0 * (1.0 - 2.0 * error), 0.0, 2.0); }

double proxy_a_distance(std::span<const SparseVector> source, std::span<const SparseVector> target, std::size_t dim,
                        double heldout_fraction, std::uint64_t seed, const LogisticConfig& config) {
  if (!(heldout_fraction > 0.0 && heldout_fraction < 1.0))
    throw ParameterError("held-out fraction must be in (0, 1)");
  Rng rng(seed);
  bool subsampled = true;
  auto src = balance_sources(source.size(), target.size(), rng, subsampled);
  std::vector<std::size_t> tgt(target.size());
  std::iota(tgt.begin(), tgt.end(), std::size_t{0});
  rng.shuffle(src);
  rng.shuffle(tgt);

  auto split = [&](std::size_t n) {
    auto held = static_cast<std::size_t>(std::llround(heldout_fraction * static_cast<double>(n)));
    held = std::max<std::size_t>(held, 1);
    if (held + 1 > n) throw ParameterError("not enough examples to hold out one per class");
    return held;
  };
  const std::size_t held_src = split(src.size());
  const std::size_t held_tgt = split(tgt.size());

  std::vector<SparseVector> train_rows, test_rows;
  std::vector<int> train_labels, test_labels;
  for (std::size_t k = 0; k < src.size(); ++k) {
    auto& rows = k < held_src ? test_rows : train_rows;
    auto& labels = k < held_src ? test_labels : train_labels;
    rows.push_back(source[src[k]]);
    labels.push_back(0);
  }
  for (std::size_t k = 0; k < tgt.size(); ++k) {
    auto& rows = k < held_tgt ? test_rows : train_rows;
    auto& labels = k < held_tgt ? test_labels : train_labels;
    rows.push_back(target[tgt[k]]);
    labels.push_back(1);
  }
  DomainDiscriminator disc;
  disc.seed = seed;
  disc.fit(train_rows, train_labels, dim, config);
  const auto probs = disc.probabilities(test_rows);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < probs.size(); ++i)
    if ((probs[i] >= 0.5 ? 1 : 0) != test_labels[i]) ++wrong;
  return proxy_a_from_error(static_cast<double>(wrong) / static_cast<double>(probs.size()));
}

SparseVector to_sparse(const TermDistribution& t) { return SparseVector::from_dense(t.probs); }
SparseVector to_sparse(const DenseRepresentation& d) { return SparseVector::from_dense(d.vec); }

}  // namespace dsel
