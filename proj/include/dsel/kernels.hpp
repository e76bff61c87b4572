#pragma once

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP version; each output element is reduced in the same order in both,
// so results are bitwise identical regardless of thread count.

#include <cstdint>
#include <span>
#include <vector>

#include "dsel/corpus.hpp"
#include "dsel/sparse.hpp"

namespace dsel {
class PoolScorer;
}

namespace dsel::kernels {

enum class Backend { serial, parallel };

/// Default backend for library calls; tests flip it to compare paths.
Backend default_backend();
void set_default_backend(Backend backend);

/// Z[b, i] = bias[i] + sum_j W[i, j] H[b, j]   (H: B x h, W: d x h, Z: B x d)
void affine_rows(Backend be, std::span<const double> H, std::size_t B, std::size_t h, std::span<const double> W,
                 std::span<const double> bias, std::size_t d, std::span<double> Z);

/// G[i, j] += sum_b dZ[b, i] H[b, j]   (dZ: B x d, H: B x h, G: d x h)
void accumulate_outer(Backend be, std::span<const double> dZ, std::span<const double> H, std::size_t B,
                      std::size_t d, std::size_t h, std::span<double> G);

/// dH[b, j] = sum_i dZ[b, i] W[i, j]   (dZ: B x d, W: d x h, dH: B x h)
void backprop_rows(Backend be, std::span<const double> dZ, std::span<const double> W, std::size_t B, std::size_t d,
                   std::size_t h, std::span<double> dH);

/// One Adam update at step t (1-based) with bias correction.
void adam_step(Backend be, std::span<double> param, std::span<const double> grad, std::span<double> m,
               std::span<double> v, double lr, double beta1, double beta2, double eps, long t);

/// out[r] = w . rows[r] + bias
void row_margins(Backend be, std::span<const SparseVector> rows, std::span<const double> w, double bias,
                 std::span<double> out);

/// Score `count` groups laid out back to back in `members` (group g is
/// members[offsets[g] .. offsets[g+1])).
std::vector<double> score_groups(Backend be, const PoolScorer& scorer, std::span<const std::size_t> members,
                                 std::span<const std::size_t> offsets);

/// Score each item as a singleton group.
std::vector<double> score_items(Backend be, const PoolScorer& scorer, std::span<const std::size_t> items);

/// JS divergence between the pooled, normalized counts of `members` and a
/// dense target distribution. `target_mass` is sum(target). NaN when the
/// members carry no in-vocabulary tokens.
double pooled_js(std::span<const SparseCounts> counts, std::span<const std::size_t> members,
                 std::span<const double> target, double target_mass);

}  // namespace dsel::kernels
