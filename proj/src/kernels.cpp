#include "dsel/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>

#include "dsel/scoring.hpp"

namespace dsel::kernels {

namespace {

std::atomic<Backend> g_backend{Backend::parallel};

// Runs body(i) for i in [0, n). The parallel branch only distributes whole
// iterations, so per-element arithmetic is identical to the serial branch.
template <typename Body>
void for_each_index(Backend be, std::size_t n, Body&& body) {
  if (be == Backend::serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

template <typename Body>
void for_each_index_dynamic(Backend be, std::size_t n, Body&& body) {
  if (be == Backend::serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace

Backend default_backend() { return g_backend.load(); }
void set_default_backend(Backend backend) { g_backend.store(backend); }

void affine_rows(Backend be, std::span<const double> H, std::size_t B, std::size_t h, std::span<const double> W,
                 std::span<const double> bias, std::size_t d, std::span<double> Z) {
  for_each_index(be, B * d, [&](std::size_t k) {
    const std::size_t b = k / d, i = k % d;
    const double* hr = H.data() + b * h;
    const double* wr = W.data() + i * h;
    double s = bias[i];
    for (std::size_t j = 0; j < h; ++j) s += wr[j] * hr[j];
    Z[k] = s;
  });
}

void accumulate_outer(Backend be, std::span<const double> dZ, std::span<const double> H, std::size_t B,
                      std::size_t d, std::size_t h, std::span<double> G) {
  for_each_index(be, d, [&](std::size_t i) {
    double* gr = G.data() + i * h;
    for (std::size_t b = 0; b < B; ++b) {
      const double dz = dZ[b * d + i];
      if (dz == 0.0) continue;
      const double* hr = H.data() + b * h;
      for (std::size_t j = 0; j < h; ++j) gr[j] += dz * hr[j];
    }
  });
}

void backprop_rows(Backend be, std::span<const double> dZ, std::span<const double> W, std::size_t B, std::size_t d,
                   std::size_t h, std::span<double> dH) {
  for_each_index(be, B, [&](std::size_t b) {
    double* out = dH.data() + b * h;
    std::fill(out, out + h, 0.0);
    const double* dz = dZ.data() + b * d;
    for (std::size_t i = 0; i < d; ++i) {
      const double g = dz[i];
      if (g == 0.0) continue;
      const double* wr = W.data() + i * h;
      for (std::size_t j = 0; j < h; ++j) out[j] += g * wr[j];
    }
  });
}

void adam_step(Backend be, std::span<double> param, std::span<const double> grad, std::span<double> m,
               std::span<double> v, double lr, double beta1, double beta2, double eps, long t) {
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  for_each_index(be, param.size(), [&](std::size_t k) {
    const double g = grad[k];
    m[k] = beta1 * m[k] + (1.0 - beta1) * g;
    v[k] = beta2 * v[k] + (1.0 - beta2) * g * g;
    const double mhat = m[k] / c1;
    const double vhat = v[k] / c2;
    param[k] -= lr * mhat / (std::sqrt(vhat) + eps);
  });
}

void row_margins(Backend be, std::span<const SparseVector> rows, std::span<const double> w, double bias,
                 std::span<double> out) {
  for_each_index(be, rows.size(), [&](std::size_t r) { out[r] = rows[r].dot(w) + bias; });
}

std::vector<double> score_groups(Backend be, const PoolScorer& scorer, std::span<const std::size_t> members,
                                 std::span<const std::size_t> offsets) {
  const std::size_t count = offsets.empty() ? 0 : offsets.size() - 1;
  std::vector<double> out(count);
  for_each_index_dynamic(be, count, [&](std::size_t g) {
    out[g] = scorer.score_group(members.subspan(offsets[g], offsets[g + 1] - offsets[g]));
  });
  return out;
}

std::vector<double> score_items(Backend be, const PoolScorer& scorer, std::span<const std::size_t> items) {
  std::vector<double> out(items.size());
  for_each_index_dynamic(be, items.size(), [&](std::size_t k) { out[k] = scorer.score_item(items[k]); });
  return out;
}

double pooled_js(std::span<const SparseCounts> counts, std::span<const std::size_t> members,
                 std::span<const double> target, double target_mass) {
  thread_local std::vector<std::pair<std::uint32_t, std::uint32_t>> merged;
  merged.clear();
  std::uint64_t total = 0;
  for (std::size_t m : members) {
    for (const auto& e : counts[m].entries) {
      merged.push_back(e);
      total += e.second;
    }
  }
  if (total == 0) return std::numeric_limits<double>::quiet_NaN();
  if (members.size() > 1)
    std::sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  const double inv_total = 1.0 / static_cast<double>(total);
  double acc = 0.0;
  double covered_q = 0.0;
  for (std::size_t k = 0; k < merged.size();) {
    const std::uint32_t idx = merged[k].first;
    std::uint64_t c = 0;
    while (k < merged.size() && merged[k].first == idx) c += merged[k++].second;
    const double p = static_cast<double>(c) * inv_total;
    const double q = target[idx];
    const double m = 0.5 * p + 0.5 * q;
    acc += p * std::log(p / m);
    if (q > 0.0) {
      acc += q * std::log(q / m);
      covered_q += q;
    }
  }
  // Outside the pooled support every target term is q ln(q / (q/2)) = q ln 2.
  const double js = 0.5 * (acc + std::numbers::ln2 * (target_mass - covered_q));
  return std::clamp(js, 0.0, std::numbers::ln2);
}

}  // namespace dsel::kernels
