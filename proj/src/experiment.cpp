#include "dsel/experiment.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "dsel/error.hpp"
#include "dsel/random.hpp"
#include "dsel/tfidf.hpp"

namespace dsel {

ExperimentContext::ExperimentContext(Corpus corpus, ExperimentSettings settings)
    : corpus_(std::move(corpus)), settings_(std::move(settings)) {
  if (corpus_.empty()) throw ValidationError("corpus is empty");
  tokens_ = preprocess_corpus(corpus_, settings_.preprocess);
  vocab_ = build_vocabulary(tokens_, settings_.vocab_size);
  counts_ = term_counts(tokens_, vocab_);
}

void ExperimentContext::set_embeddings(EmbeddingTable table) {
  embeddings_ = std::move(table);
  embedding_reps_.reset();
}

const EmbeddingTable& ExperimentContext::embeddings() {
  if (!embeddings_) {
    if (!settings_.embeddings_path)
      throw ParameterError("the embedding representation needs an embeddings file");
    if (!std::filesystem::exists(*settings_.embeddings_path))
      throw ParameterError("embeddings file not found: " + settings_.embeddings_path->string());
    embeddings_ = load_embeddings(*settings_.embeddings_path, &vocab_, settings_.preprocess.lowercase);
  }
  return *embeddings_;
}

const std::vector<DenseRepresentation>& ExperimentContext::embedding_reps() {
  if (embedding_reps_) return *embedding_reps_;
  const EmbeddingTable& table = embeddings();
  std::map<std::string, UnigramProbabilities> unigrams;
  for (const auto& domain : corpus_.domains()) {
    std::vector<SparseCounts> dc;
    for (std::size_t i : corpus_.indices_of(domain)) dc.push_back(counts_[i]);
    unigrams.emplace(domain, UnigramProbabilities(dc, vocab_));
  }
  std::vector<DenseRepresentation> reps(corpus_.size());
  for (std::size_t i = 0; i < corpus_.size(); ++i)
    reps[i] = sif_embedding(tokens_[i], table, unigrams.at(corpus_[i].domain), settings_.sif_a);
  embedding_reps_ = std::move(reps);
  return *embedding_reps_;
}

const AEModel& ExperimentContext::autoencoder() {
  if (!ae_model_) {
    AETrainConfig config = settings_.ae;
    config.seed = derive_seed(settings_.base_seed, "autoencoder");
    const auto data = vocabulary_tfidf(counts_, vocab_.size());
    ae_model_ = train_autoencoder(data, vocab_.size(), config).model;
  }
  return *ae_model_;
}

const std::vector<DenseRepresentation>& ExperimentContext::autoencoder_reps() {
  if (ae_reps_) return *ae_reps_;
  const AEModel& model = autoencoder();
  const auto data = vocabulary_tfidf(counts_, vocab_.size());
  std::vector<DenseRepresentation> reps(corpus_.size());
  for (std::size_t i = 0; i < corpus_.size(); ++i) reps[i] = ae_representation(data[i], model);
  ae_reps_ = std::move(reps);
  return *ae_reps_;
}

void ExperimentContext::require_target(const std::string& target) const {
  if (!corpus_.has_domain(target)) throw ValidationError("unknown target domain '" + target + "'");
  if (corpus_.domains().size() < 2) throw ValidationError("no source domains besides '" + target + "'");
}

Pool ExperimentContext::pool(const std::string& target) const {
  require_target(target);
  return Pool::excluding(corpus_, target, true);
}

std::vector<std::size_t> ExperimentContext::evaluation_set(const std::string& target) const {
  require_target(target);
  std::vector<std::size_t> out;
  for (std::size_t i : corpus_.indices_of(target))
    if (corpus_[i].label) out.push_back(i);
  if (out.empty()) throw ValidationError("target domain '" + target + "' has no labeled documents");
  return out;
}

std::vector<SparseVector> ExperimentContext::sparse_reps(std::span<const std::size_t> items, Representation rep) {
  std::vector<SparseVector> out;
  out.reserve(items.size());
  switch (rep) {
    case Representation::term_dist:
      for (std::size_t i : items) {
        SparseVector v;
        const auto mass = static_cast<double>(counts_[i].in_vocabulary());
        for (const auto& [idx, c] : counts_[i].entries) {
          v.index.push_back(idx);
          v.value.push_back(static_cast<double>(c) / mass);
        }
        out.push_back(std::move(v));
      }
      break;
    case Representation::embedding: {
      const auto& reps = embedding_reps();
      for (std::size_t i : items) out.push_back(to_sparse(reps[i]));
      break;
    }
    case Representation::autoencoder: {
      const auto& reps = autoencoder_reps();
      for (std::size_t i : items) out.push_back(to_sparse(reps[i]));
      break;
    }
  }
  return out;
}

std::unique_ptr<PoolScorer> ExperimentContext::scorer(const std::string& target, Representation rep, Metric metric,
                                                      std::uint64_t seed) {
  require_target(target);
  const auto target_items = corpus_.indices_of(target);

  if (metric == Metric::proxy_a) {
    const Pool p = pool(target);
    const std::size_t dim = rep == Representation::term_dist     ? vocab_.size()
                            : rep == Representation::embedding ? embeddings().dim()
                                                               : autoencoder().hidden_dim();
    const auto source = sparse_reps(p.items, rep);
    const auto tgt = sparse_reps(target_items, rep);
    auto result = proxy_a_scores(source, tgt, dim, seed, settings_.discriminator);
    std::vector<double> scores(corpus_.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t k = 0; k < p.items.size(); ++k) scores[p.items[k]] = result.scores[k];
    return std::make_unique<ItemScoreScorer>(std::move(scores), Metric::proxy_a);
  }

  if (rep == Representation::term_dist) {
    if (metric != Metric::jensen_shannon) throw ParameterError("term distributions are compared with jensen_shannon");
    std::vector<SparseCounts> tc;
    for (std::size_t i : target_items) tc.push_back(counts_[i]);
    auto dist = term_distribution(tc, vocab_.size());
    if (dist.empty) throw ValidationError("target domain '" + target + "' has no in-vocabulary tokens");
    return std::make_unique<TermDistributionScorer>(counts_, std::move(dist));
  }

  if (metric != Metric::cosine) throw ParameterError("dense representations are compared with cosine");
  const auto& reps = rep == Representation::embedding ? embedding_reps() : autoencoder_reps();
  std::vector<DenseRepresentation> tr;
  for (std::size_t i : target_items) tr.push_back(reps[i]);
  return std::make_unique<CosineScorer>(reps, domain_representation(tr));
}

SelectionResult ExperimentContext::select(const std::string& target, const SelectionConfig& config) {
  validate(config);
  if (config.metric == Metric::proxy_a && config.strategy == Strategy::subset && !settings_.allow_proxy_subset)
    throw ParameterError("proxy_a with subset selection needs allow_proxy_subset");
  const Pool p = pool(target);
  if (p.items.empty()) throw ValidationError("no labeled source documents for target '" + target + "'");
  std::unique_ptr<PoolScorer> s;
  if (config.strategy != Strategy::random && config.strategy != Strategy::balanced)
    s = scorer(target, config.representation, config.metric, derive_seed(config.seed, "proxy"));
  SelectionConfig c = config;
  c.seed = derive_seed(config.seed, "selection");
  SelectionResult r = run_selection(p, s.get(), c);
  r.config = config;
  return r;
}

double ExperimentContext::train_and_evaluate(const std::string& target, std::span<const std::size_t> chosen) {
  if (chosen.empty()) throw ValidationError("empty training selection");
  const auto eval = evaluation_set(target);
  std::vector<std::vector<std::string>> train_tokens, eval_tokens;
  std::vector<Label> train_labels, eval_labels;
  for (std::size_t i : chosen) {
    if (!corpus_[i].label) throw ValidationError("selected document '" + corpus_[i].id + "' has no label");
    train_tokens.push_back(tokens_[i]);
    train_labels.push_back(*corpus_[i].label);
  }
  for (std::size_t i : eval) {
    eval_tokens.push_back(tokens_[i]);
    eval_labels.push_back(*corpus_[i].label);
  }
  TfidfVectorizer vectorizer(settings_.ngram_max, &vocab_);
  vectorizer.fit(train_tokens);
  const auto x_train = vectorizer.transform(train_tokens);
  const auto x_eval = vectorizer.transform(eval_tokens);
  ClassifierConfig config = settings_.classifier;
  config.seed = derive_seed(settings_.base_seed, "classifier");
  const auto classes = task_labels(settings_.task);
  const LinearModel model = train_classifier(x_train, train_labels, classes, vectorizer.dimension(), config);
  return evaluate(model, x_eval, eval_labels);
}

ExperimentResult run_experiment(ExperimentContext& context, const std::string& target, const SelectionConfig& config,
                                int runs, std::uint64_t base_seed) {
  if (runs < 1) throw ParameterError("runs must be >= 1");
  ExperimentResult result;
  result.target = target;
  result.config = config;
  result.config.seed = base_seed;
  for (int i = 0; i < runs; ++i) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
    try {
      SelectionConfig c = config;
      c.seed = seed;
      const SelectionResult sel = context.select(target, c);
      result.accuracies.push_back(context.train_and_evaluate(target, sel.chosen));
      result.selected = sel.chosen.size();
      result.shortfall = std::max(result.shortfall, sel.shortfall);
      if (config.strategy == Strategy::domain) result.chosen_domains.push_back(sel.chosen_domain);
    } catch (const NumericalError& e) {
      throw NumericalError("run " + std::to_string(i) + ": " + e.what());
    } catch (const ParameterError& e) {
      throw ParameterError("run " + std::to_string(i) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("run " + std::to_string(i) + ": " + e.what());
    }
    result.seeds.push_back(seed);
  }
  result.mean = mean(result.accuracies);
  result.std = sample_std(result.accuracies);
  return result;
}

}  // namespace dsel
