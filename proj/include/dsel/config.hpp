#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dsel/corpus.hpp"
#include "dsel/experiment.hpp"

namespace dsel {

inline constexpr std::size_t kBinaryDefaultN = 1600;
inline constexpr std::size_t kTernaryDefaultN = 2000;

/// Everything a command needs. Defaults are the standard training setup.
///
/// File format: one `key = value` per line, `#` starts a comment. Lists are
/// comma-separated. Keys (with defaults):
///
///   task = ternary            binary | ternary
///   corpus =                  JSONL corpus path
///   target =                  target domain; empty means every domain (evaluate)
///   strategies = subset:term_dist:js
///   n = 0                     0 picks 1600 (binary) or 2000 (ternary)
///   n_values =                sweep sizes, ascending
///   s = 20
///   m = 20000
///   distinct_candidates = false
///   allow_proxy_subset = false
///   a = 1e-5                  SIF smoothing
///   vocab_size = 10000
///   ngram_max = 2
///   embeddings =              word vector file (embedding representation)
///   stopwords =               stopword file; empty uses the built-in list
///   lowercase = true
///   ae_hidden = 1000
///   ae_epochs = 50
///   ae_masking = 0.8
///   ae_lr = 0.001
///   ae_batch = 64
///   svm_epochs = 10
///   svm_lr = 0.1
///   svm_l2 = 0.0001
///   runs = 10
///   seed = 0
///   output_dir = .
struct RunConfig {
  Task task = Task::ternary;
  std::filesystem::path corpus;
  std::string target;
  std::vector<std::string> strategies{"subset:term_dist:js"};
  std::size_t n = 0;
  std::vector<std::size_t> n_values;
  std::size_t s = kDefaultSubsetSize;
  std::size_t m = kDefaultSubsetCount;
  bool distinct_candidates = false;
  bool allow_proxy_subset = false;
  double a = kDefaultSifSmoothing;
  std::size_t vocab_size = 10000;
  int ngram_max = 2;
  std::filesystem::path embeddings;
  std::filesystem::path stopwords;
  bool lowercase = true;
  std::size_t ae_hidden = 1000;
  int ae_epochs = 50;
  double ae_masking = 0.8;
  double ae_lr = 1e-3;
  std::size_t ae_batch = 64;
  int svm_epochs = 10;
  double svm_lr = 0.1;
  double svm_l2 = 1e-4;
  int runs = 10;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = ".";

  /// n, or the task default when n is 0.
  std::size_t effective_n() const;

  /// Applies one key/value pair. ParameterError on an unknown key or bad value.
  void set(std::string_view key, std::string_view value);

  /// Range checks plus existence of every referenced path.
  void validate() const;

  /// Strategy specs parsed and filled with n, s, m and the base seed.
  std::vector<SelectionConfig> selection_configs() const;

  ExperimentSettings experiment_settings() const;

  /// Effective configuration, defaults resolved. Keys in schema order.
  nlohmann::ordered_json to_json() const;
  std::string to_text() const;
};

/// Reads a config file into `config`. ParameterError names the offending line.
void load_config(const std::filesystem::path& path, RunConfig& config);
void parse_config(std::string_view text, RunConfig& config);

}  // namespace dsel
