#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "dsel/random.hpp"
#include "dsel/sparse.hpp"

namespace dsel {

struct AETrainConfig {
  std::size_t hidden = 1000;
  int epochs = 50;
  double masking_prob = 0.8;
  double learning_rate = 1e-3;
  std::size_t batch_size = 64;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  /// ParameterError unless 0 <= masking_prob < 1, epochs >= 1, batch_size >= 1, hidden >= 1.
  void validate() const;
};

/// One-hidden-layer denoising autoencoder with sigmoid units:
///   code = sigmoid(W x + b),  reconstruction = sigmoid(W' code + b').
/// W is stored input-major (d x h) so sparse inputs touch contiguous rows;
/// W' is stored output-major (d x h).
class AEModel {
 public:
  AEModel() = default;
  AEModel(std::size_t input_dim, std::size_t hidden_dim);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t hidden_dim() const { return hidden_dim_; }
  std::size_t parameter_count() const { return 2 * input_dim_ * hidden_dim_ + hidden_dim_ + input_dim_; }

  /// encoder weight from input i to hidden j
  double& enc(std::size_t i, std::size_t j) { return enc_w_[i * hidden_dim_ + j]; }
  double enc(std::size_t i, std::size_t j) const { return enc_w_[i * hidden_dim_ + j]; }
  /// decoder weight from hidden j to output i
  double& dec(std::size_t i, std::size_t j) { return dec_w_[i * hidden_dim_ + j]; }
  double dec(std::size_t i, std::size_t j) const { return dec_w_[i * hidden_dim_ + j]; }

  std::vector<double>& enc_weights() { return enc_w_; }
  const std::vector<double>& enc_weights() const { return enc_w_; }
  std::vector<double>& enc_bias() { return enc_b_; }
  const std::vector<double>& enc_bias() const { return enc_b_; }
  std::vector<double>& dec_weights() { return dec_w_; }
  const std::vector<double>& dec_weights() const { return dec_w_; }
  std::vector<double>& dec_bias() { return dec_b_; }
  const std::vector<double>& dec_bias() const { return dec_b_; }

  /// Flat view of all parameters in the order enc_w, enc_b, dec_w, dec_b.
  std::vector<double*> parameters();

  /// Uniform in +-sqrt(6 / (d + h)) for both weight matrices, zero biases.
  void initialize(Rng& rng);

  bool operator==(const AEModel&) const = default;

 private:
  std::size_t input_dim_ = 0;
  std::size_t hidden_dim_ = 0;
  std::vector<double> enc_w_, enc_b_, dec_w_, dec_b_;
};

/// Zero each nonzero component independently with probability `masking_prob`.
/// Zero components stay zero and consume no draws.
SparseVector corrupt(const SparseVector& x, double masking_prob, Rng& rng);
std::vector<double> corrupt(std::span<const double> x, double masking_prob, Rng& rng);

std::vector<double> encode(const AEModel& model, const SparseVector& x);
std::vector<double> encode(const AEModel& model, std::span<const double> x);

/// Sigmoid cross-entropy of reconstructing `target` from `input`, summed over outputs.
double reconstruction_loss(const AEModel& model, const SparseVector& input, const SparseVector& target);

/// Gradient of reconstruction_loss, same layout as AEModel (fields reused as buffers).
AEModel loss_gradient(const AEModel& model, const SparseVector& input, const SparseVector& target);

struct AETrainResult {
  AEModel model;
  std::vector<double> epoch_loss;  // mean per-example loss over each epoch
};

/// Minibatch Adam on the denoising objective. Inputs must lie in [0, 1].
/// RNG schedule: weight init, then per epoch one shuffle followed by one
/// corruption pass per example in shuffled order.
AETrainResult train_autoencoder(std::span<const SparseVector> data, std::size_t input_dim,
                                const AETrainConfig& config);

/// Max relative error between the analytic gradient and central differences
/// over every parameter: |a - n| / max(|a| + |n|, 1e-7).
double gradient_check(const AEModel& model, const SparseVector& x, double step);
double gradient_check(const AEModel& model, const SparseVector& input, const SparseVector& target, double step);

/// Text checkpoint: "dsel-ae 1", "d h", then enc_w, enc_b, dec_w, dec_b one row per line.
void save_model(const AEModel& model, const std::filesystem::path& path);
AEModel load_model(const std::filesystem::path& path);

}  // namespace dsel
