#include "dsel/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "dsel/error.hpp"
#include "dsel/kernels.hpp"

namespace dsel {

namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

void check_input(const AEModel& model, const SparseVector& x) {
  if (!x.index.empty() && x.index.back() >= model.input_dim())
    throw ParameterError("input index " + std::to_string(x.index.back()) + " outside autoencoder input dim " +
                         std::to_string(model.input_dim()));
}

// Hidden pre-activation of a sparse input.
void encode_into(const AEModel& model, const SparseVector& x, double* out) {
  const std::size_t h = model.hidden_dim();
  std::copy(model.enc_bias().begin(), model.enc_bias().end(), out);
  const double* w = model.enc_weights().data();
  for (std::size_t k = 0; k < x.index.size(); ++k) {
    const double v = x.value[k];
    const double* row = w + static_cast<std::size_t>(x.index[k]) * h;
    for (std::size_t j = 0; j < h; ++j) out[j] += v * row[j];
  }
  for (std::size_t j = 0; j < h; ++j) out[j] = sigmoid(out[j]);
}

// Forward + backward over a batch. Adds `scale` times the gradient of the
// summed loss into `grad` (when non-null) and returns the summed loss.
double batch_pass(const AEModel& model, std::span<const SparseVector> inputs, std::span<const SparseVector> targets,
                  double scale, AEModel* grad, kernels::Backend be) {
  const std::size_t B = inputs.size();
  const std::size_t d = model.input_dim();
  const std::size_t h = model.hidden_dim();
  std::vector<double> H(B * h);
  for (std::size_t b = 0; b < B; ++b) encode_into(model, inputs[b], H.data() + b * h);

  std::vector<double> Z(B * d);
  kernels::affine_rows(be, H, B, h, model.dec_weights(), model.dec_bias(), d, Z);

  double loss = 0.0;
  std::vector<double> dZ(B * d);
  for (std::size_t b = 0; b < B; ++b) {
    const SparseVector& x = targets[b];
    double* z = Z.data() + b * d;
    double* dz = dZ.data() + b * d;
    // Cross-entropy with logits: softplus(z) - x z; gradient sigmoid(z) - x.
    for (std::size_t i = 0; i < d; ++i) {
      loss += softplus(z[i]);
      dz[i] = sigmoid(z[i]);
    }
    for (std::size_t k = 0; k < x.index.size(); ++k) {
      loss -= x.value[k] * z[x.index[k]];
      dz[x.index[k]] -= x.value[k];
    }
  }
  if (grad == nullptr) return loss;

  for (double& g : dZ) g *= scale;
  kernels::accumulate_outer(be, dZ, H, B, d, h, grad->dec_weights());
  auto& gdb = grad->dec_bias();
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t i = 0; i < d; ++i) gdb[i] += dZ[b * d + i];

  std::vector<double> dA(B * h);
  kernels::backprop_rows(be, dZ, model.dec_weights(), B, d, h, dA);
  for (std::size_t k = 0; k < B * h; ++k) dA[k] *= H[k] * (1.0 - H[k]);

  auto& gew = grad->enc_weights();
  auto& geb = grad->enc_bias();
  for (std::size_t b = 0; b < B; ++b) {
    const double* da = dA.data() + b * h;
    const SparseVector& x = inputs[b];
    for (std::size_t k = 0; k < x.index.size(); ++k) {
      double* row = gew.data() + static_cast<std::size_t>(x.index[k]) * h;
      const double v = x.value[k];
      for (std::size_t j = 0; j < h; ++j) row[j] += v * da[j];
    }
    for (std::size_t j = 0; j < h; ++j) geb[j] += da[j];
  }
  return loss;
}

}  // namespace

void AETrainConfig::validate() const {
  if (!(masking_prob >= 0.0 && masking_prob < 1.0)) throw ParameterError("masking probability must be in [0, 1)");
  if (epochs < 1) throw ParameterError("epochs must be >= 1");
  if (batch_size < 1) throw ParameterError("batch size must be >= 1");
  if (hidden < 1) throw ParameterError("hidden dimension must be >= 1");
  if (!(learning_rate > 0.0)) throw ParameterError("learning rate must be > 0");
}

AEModel::AEModel(std::size_t input_dim, std::size_t hidden_dim)
    : input_dim_(input_dim),
      hidden_dim_(hidden_dim),
      enc_w_(input_dim * hidden_dim, 0.0),
      enc_b_(hidden_dim, 0.0),
      dec_w_(input_dim * hidden_dim, 0.0),
      dec_b_(input_dim, 0.0) {}

std::vector<double*> AEModel::parameters() {
  std::vector<double*> out;
  out.reserve(parameter_count());
  for (auto* block : {&enc_w_, &enc_b_, &dec_w_, &dec_b_})
    for (double& x : *block) out.push_back(&x);
  return out;
}

void AEModel::initialize(Rng& rng) {
  const double r = std::sqrt(6.0 / static_cast<double>(input_dim_ + hidden_dim_));
  for (double& w : enc_w_) w = rng.uniform(-r, r);
  for (double& w : dec_w_) w = rng.uniform(-r, r);
  std::fill(enc_b_.begin(), enc_b_.end(), 0.0);
  std::fill(dec_b_.begin(), dec_b_.end(), 0.0);
}

SparseVector corrupt(const SparseVector& x, double masking_prob, Rng& rng) {
  SparseVector out;
  out.index.reserve(x.index.size());
  out.value.reserve(x.index.size());
  for (std::size_t k = 0; k < x.index.size(); ++k) {
    if (x.value[k] == 0.0) continue;
    if (rng.bernoulli(masking_prob)) continue;
    out.index.push_back(x.index[k]);
    out.value.push_back(x.value[k]);
  }
  return out;
}

std::vector<double> corrupt(std::span<const double> x, double masking_prob, Rng& rng) {
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out)
    if (v != 0.0 && rng.bernoulli(masking_prob)) v = 0.0;
  return out;
}

std::vector<double> encode(const AEModel& model, const SparseVector& x) {
  check_input(model, x);
  std::vector<double> out(model.hidden_dim());
  encode_into(model, x, out.data());
  return out;
}

std::vector<double> encode(const AEModel& model, std::span<const double> x) {
  if (x.size() != model.input_dim())
    throw ParameterError("input has dimension " + std::to_string(x.size()) + ", autoencoder expects " +
                         std::to_string(model.input_dim()));
  return encode(model, SparseVector::from_dense(x));
}

double reconstruction_loss(const AEModel& model, const SparseVector& input, const SparseVector& target) {
  check_input(model, input);
  check_input(model, target);
  return batch_pass(model, std::span(&input, 1), std::span(&target, 1), 1.0, nullptr, kernels::Backend::serial);
}

AEModel loss_gradient(const AEModel& model, const SparseVector& input, const SparseVector& target) {
  check_input(model, input);
  check_input(model, target);
  AEModel grad(model.input_dim(), model.hidden_dim());
  batch_pass(model, std::span(&input, 1), std::span(&target, 1), 1.0, &grad, kernels::Backend::serial);
  return grad;
}

AETrainResult train_autoencoder(std::span<const SparseVector> data, std::size_t input_dim,
                                const AETrainConfig& config) {
  config.validate();
  if (data.empty()) throw ParameterError("cannot train an autoencoder on an empty dataset");
  for (const auto& x : data) {
    if (!x.index.empty() && x.index.back() >= input_dim) throw ParameterError("training vector exceeds input dim");
    for (double v : x.value)
      if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("autoencoder inputs must lie in [0, 1]");
  }

  Rng rng(config.seed);
  AETrainResult result;
  result.model = AEModel(input_dim, config.hidden);
  AEModel& model = result.model;
  model.initialize(rng);

  AEModel grad(input_dim, config.hidden);
  AEModel m1(input_dim, config.hidden), m2(input_dim, config.hidden);
  const auto be = kernels::default_backend();

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<SparseVector> inputs, targets;
  long step = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      inputs.clear();
      targets.clear();
      for (std::size_t k = start; k < end; ++k) {
        targets.push_back(data[order[k]]);
        inputs.push_back(corrupt(data[order[k]], config.masking_prob, rng));
      }
      for (auto* block : {&grad.enc_weights(), &grad.enc_bias(), &grad.dec_weights(), &grad.dec_bias()})
        std::fill(block->begin(), block->end(), 0.0);
      const double batch_loss =
          batch_pass(model, inputs, targets, 1.0 / static_cast<double>(end - start), &grad, be);
      if (!std::isfinite(batch_loss))
        throw NumericalError("autoencoder loss is not finite at epoch " + std::to_string(epoch + 1) +
                             " (learning rate too high?)");
      epoch_loss += batch_loss;
      ++step;
      kernels::adam_step(be, model.enc_weights(), grad.enc_weights(), m1.enc_weights(), m2.enc_weights(),
                         config.learning_rate, config.beta1, config.beta2, config.epsilon, step);
      kernels::adam_step(be, model.enc_bias(), grad.enc_bias(), m1.enc_bias(), m2.enc_bias(), config.learning_rate,
                         config.beta1, config.beta2, config.epsilon, step);
      kernels::adam_step(be, model.dec_weights(), grad.dec_weights(), m1.dec_weights(), m2.dec_weights(),
                         config.learning_rate, config.beta1, config.beta2, config.epsilon, step);
      kernels::adam_step(be, model.dec_bias(), grad.dec_bias(), m1.dec_bias(), m2.dec_bias(), config.learning_rate,
                         config.beta1, config.beta2, config.epsilon, step);
    }
    result.epoch_loss.push_back(epoch_loss / static_cast<double>(data.size()));
  }
  return result;
}

double gradient_check(const AEModel& model, const SparseVector& input, const SparseVector& target, double step) {
  if (!(step >= 1e-7 && step <= 1e-3)) throw ParameterError("gradient-check step must be in [1e-7, 1e-3]");
  AEModel analytic = loss_gradient(model, input, target);
  AEModel probe = model;
  auto params = probe.parameters();
  auto grads = analytic.parameters();
  double worst = 0.0;
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double saved = *params[k];
    *params[k] = saved + step;
    const double up = reconstruction_loss(probe, input, target);
    *params[k] = saved - step;
    const double down = reconstruction_loss(probe, input, target);
    *params[k] = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double a = *grads[k];
    const double rel = std::abs(a - numeric) / std::max(std::abs(a) + std::abs(numeric), 1e-7);
    worst = std::max(worst, rel);
  }
  return worst;
}

double gradient_check(const AEModel& model, const SparseVector& x, double step) {
  return gradient_check(model, x, x, step);
}

void save_model(const AEModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out.precision(17);
  out << "dsel-ae 1\n" << model.input_dim() << ' ' << model.hidden_dim() << '\n';
  auto write_rows = [&](const std::vector<double>& block, std::size_t row_len) {
    for (std::size_t k = 0; k < block.size(); ++k) out << block[k] << ((k + 1) % row_len == 0 ? '\n' : ' ');
  };
  write_rows(model.enc_weights(), model.hidden_dim());
  write_rows(model.enc_bias(), model.hidden_dim());
  write_rows(model.dec_weights(), model.hidden_dim());
  write_rows(model.dec_bias(), model.input_dim());
}

AEModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open autoencoder checkpoint " + path.string());
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "dsel-ae" || version != 1) throw ParseError("not a dsel-ae version 1 checkpoint", 1);
  std::size_t d = 0, h = 0;
  if (!(in >> d >> h) || d == 0 || h == 0) throw ParseError("invalid checkpoint dimensions", 2);
  AEModel model(d, h);
  for (auto* block : {&model.enc_weights(), &model.enc_bias(), &model.dec_weights(), &model.dec_bias()})
    for (double& x : *block)
      if (!(in >> x)) throw ParseError("checkpoint truncated or non-numeric");
  std::string extra;
  if (in >> extra) throw ParseError("checkpoint has trailing data");
  for (double* p : model.parameters())
    if (!std::isfinite(*p)) throw ParseError("checkpoint contains non-finite parameters");
  return model;
}

}  // namespace dsel
