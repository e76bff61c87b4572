#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dsel/corpus.hpp"
#include "dsel/representations.hpp"
#include "dsel/scoring.hpp"
#include "dsel/similarity.hpp"

namespace dsel {

enum class Strategy { random, balanced, domain, instance, subset };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view text);

inline constexpr std::size_t kDefaultSubsetSize = 20;
inline constexpr std::size_t kDefaultSubsetCount = 20000;

struct SelectionConfig {
  std::size_t n = 2000;
  Strategy strategy = Strategy::random;
  Representation representation = Representation::term_dist;
  Metric metric = Metric::jensen_shannon;
  std::size_t s = kDefaultSubsetSize;
  std::size_t m = kDefaultSubsetCount;
  std::uint64_t seed = 0;
  /// Candidates within one subset iteration are pairwise distinct.
  bool distinct_candidates = false;

  /// "rand", "all", or "level:representation[:metric]", e.g. "subset:term_dist:js".
  std::string label() const;
};

/// Parses the label format produced by SelectionConfig::label(). The metric
/// defaults to JS for term distributions and cosine otherwise.
SelectionConfig parse_strategy_spec(std::string_view spec);

/// Rejects representation/metric pairs the scorers do not support.
void validate(const SelectionConfig& config);

/// The candidate pool: corpus positions outside the target domain.
struct Pool {
  const Corpus* corpus = nullptr;
  std::vector<std::size_t> items;

  /// Every document not in `target_domain`; with `labeled_only`, unlabeled ones are dropped.
  static Pool excluding(const Corpus& corpus, const std::string& target_domain, bool labeled_only = false);
};

struct SelectionIteration {
  std::vector<std::size_t> members;  // corpus positions, kept order
  double score = 0.0;
  std::size_t candidates = 0;
};

struct SelectionResult {
  SelectionConfig config;
  std::vector<std::size_t> chosen;  // corpus positions, selection order
  std::vector<std::string> ids;     // matches `chosen`
  std::vector<double> scores;       // per chosen item; NaN where the strategy has none
  std::vector<SelectionIteration> iterations;                 // subset strategy
  std::vector<std::pair<std::string, double>> domain_scores;  // domain strategy, ranked
  std::string chosen_domain;
  std::size_t requested = 0;
  std::size_t shortfall = 0;
};

SelectionResult select_random(const Pool& pool, std::size_t n, std::uint64_t seed);

/// floor(n/K) per domain, remainder to the first domains in name order,
/// shortfalls redistributed by the same rule.
SelectionResult select_balanced(const Pool& pool, std::size_t n, std::uint64_t seed);

/// Uniform sample from the single most similar source domain (no spillover).
SelectionResult select_domain_level(const Pool& pool, const PoolScorer& scorer, std::size_t n, std::uint64_t seed);

/// Top n usable items by similarity, ties broken by document id.
SelectionResult select_instance_level(const Pool& pool, const PoolScorer& scorer, std::size_t n);

struct SubsetOptions {
  std::size_t s = kDefaultSubsetSize;
  std::size_t m = kDefaultSubsetCount;
  bool distinct_candidates = false;
};

/// Iterative subset selection: ceil(n/s) rounds, each drawing m random
/// subsets of the remaining pool, keeping the most similar one and removing
/// its members. The last kept subset is truncated to its best items so that
/// exactly min(n, usable pool) items are returned.
SelectionResult subset_select(const Pool& pool, const PoolScorer& scorer, const SubsetOptions& options,
                              std::size_t n, std::uint64_t seed);

/// Dispatch on config.strategy. `scorer` may be null for random/balanced.
SelectionResult run_selection(const Pool& pool, const PoolScorer* scorer, const SelectionConfig& config);

}  // namespace dsel
