#include "dsel/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "dsel/error.hpp"
#include "dsel/kernels.hpp"
#include "dsel/log.hpp"
#include "dsel/random.hpp"

namespace dsel {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::random: return "random";
    case Strategy::balanced: return "balanced";
    case Strategy::domain: return "domain";
    case Strategy::instance: return "instance";
    case Strategy::subset: return "subset";
  }
  return "random";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "random" || text == "rand") return Strategy::random;
  if (text == "balanced" || text == "all") return Strategy::balanced;
  if (text == "domain") return Strategy::domain;
  if (text == "instance" || text == "ex") return Strategy::instance;
  if (text == "subset") return Strategy::subset;
  throw ParameterError("unknown strategy '" + std::string(text) + "'");
}

std::string SelectionConfig::label() const {
  if (strategy == Strategy::random) return "rand";
  if (strategy == Strategy::balanced) return "all";
  std::string out(to_string(strategy));
  out += ':';
  out += to_string(representation);
  out += ':';
  out += to_string(metric);
  return out;
}

SelectionConfig parse_strategy_spec(std::string_view spec) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t colon = spec.find(':', pos);
    parts.push_back(spec.substr(pos, colon == std::string_view::npos ? std::string_view::npos : colon - pos));
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  SelectionConfig config;
  config.strategy = parse_strategy(parts[0]);
  const bool guided = config.strategy != Strategy::random && config.strategy != Strategy::balanced;
  if (!guided) {
    if (parts.size() > 1) throw ParameterError("baseline strategy '" + std::string(spec) + "' takes no representation");
    return config;
  }
  if (parts.size() > 3) throw ParameterError("malformed strategy '" + std::string(spec) + "'");
  config.representation = parts.size() > 1 ? parse_representation(parts[1]) : Representation::term_dist;
  if (parts.size() > 2) {
    config.metric = parse_metric(parts[2]);
  } else {
    config.metric =
        config.representation == Representation::term_dist ? Metric::jensen_shannon : Metric::cosine;
  }
  validate(config);
  return config;
}

void validate(const SelectionConfig& config) {
  if (config.n < 1) throw ParameterError("n must be >= 1");
  if (config.strategy == Strategy::subset && (config.s < 1 || config.m < 1))
    throw ParameterError("subset selection needs s >= 1 and m >= 1");
  if (config.strategy == Strategy::random || config.strategy == Strategy::balanced) return;
  if (config.representation == Representation::term_dist && config.metric == Metric::cosine)
    throw ParameterError("term distributions are compared with jensen_shannon or proxy_a");
  if (config.representation != Representation::term_dist && config.metric == Metric::jensen_shannon)
    throw ParameterError("dense representations are compared with cosine or proxy_a");
}

Pool Pool::excluding(const Corpus& corpus, const std::string& target_domain, bool labeled_only) {
  Pool pool;
  pool.corpus = &corpus;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].domain == target_domain) continue;
    if (labeled_only && !corpus[i].label) continue;
    pool.items.push_back(i);
  }
  return pool;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Larger is better; NaN (no usable content) ranks last.
double utility(double score, Orientation o) {
  if (std::isnan(score)) return -std::numeric_limits<double>::infinity();
  return o == Orientation::higher_is_more_similar ? score : -score;
}

// Utility on a 1e-12 grid, so scores that differ only by summation-order
// rounding compare equal and fall through to the tie rule.
double rank_key(double score, Orientation o) {
  const double u = utility(score, o);
  return std::isinf(u) ? u : std::nearbyint(u * 1e12);
}

SelectionResult start(const Pool& pool, Strategy strategy, std::size_t n, std::uint64_t seed) {
  if (pool.corpus == nullptr) throw ParameterError("pool has no corpus");
  SelectionResult r;
  r.config.strategy = strategy;
  r.config.n = n;
  r.config.seed = seed;
  r.requested = n;
  return r;
}

void finish(SelectionResult& r, const Pool& pool) {
  r.ids.clear();
  for (std::size_t i : r.chosen) r.ids.push_back((*pool.corpus)[i].id);
  if (r.scores.size() != r.chosen.size()) r.scores.assign(r.chosen.size(), kNaN);
  r.shortfall = r.requested > r.chosen.size() ? r.requested - r.chosen.size() : 0;
  if (r.shortfall > 0)
    warn("selection '" + r.config.label() + "' returned " + std::to_string(r.chosen.size()) + " of " +
         std::to_string(r.requested) + " requested examples");
}

std::map<std::string, std::vector<std::size_t>> by_domain(const Pool& pool) {
  std::map<std::string, std::vector<std::size_t>> out;
  for (std::size_t i : pool.items) out[(*pool.corpus)[i].domain].push_back(i);
  return out;
}

// Better-first order of items by their own score, ties by document id.
void sort_by_item_score(std::vector<std::size_t>& items, std::vector<double>& scores, const Pool& pool,
                        Orientation o) {
  std::vector<std::size_t> order(items.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ua = rank_key(scores[a], o), ub = rank_key(scores[b], o);
    if (ua != ub) return ua > ub;
    return (*pool.corpus)[items[a]].id < (*pool.corpus)[items[b]].id;
  });
  std::vector<std::size_t> sorted_items(items.size());
  std::vector<double> sorted_scores(items.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    sorted_items[k] = items[order[k]];
    sorted_scores[k] = scores[order[k]];
  }
  items.swap(sorted_items);
  scores.swap(sorted_scores);
}

}  // namespace

SelectionResult select_random(const Pool& pool, std::size_t n, std::uint64_t seed) {
  SelectionResult r = start(pool, Strategy::random, n, seed);
  Rng rng(seed);
  for (std::size_t k : rng.sample_without_replacement(pool.items.size(), std::min(n, pool.items.size())))
    r.chosen.push_back(pool.items[k]);
  finish(r, pool);
  return r;
}

SelectionResult select_balanced(const Pool& pool, std::size_t n, std::uint64_t seed) {
  SelectionResult r = start(pool, Strategy::balanced, n, seed);
  Rng rng(seed);
  auto domains = by_domain(pool);
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> members;
  for (auto& [name, items] : domains) {
    rng.shuffle(items);
    names.push_back(name);
    members.push_back(std::move(items));
  }
  std::vector<std::size_t> take(names.size(), 0);
  std::size_t remaining = std::min(n, pool.items.size());
  while (remaining > 0) {
    std::vector<std::size_t> active;
    for (std::size_t d = 0; d < names.size(); ++d)
      if (take[d] < members[d].size()) active.push_back(d);
    if (active.empty()) break;
    const std::size_t base = remaining / active.size();
    const std::size_t extra = remaining % active.size();
    std::size_t given = 0;
    for (std::size_t k = 0; k < active.size(); ++k) {
      const std::size_t d = active[k];
      const std::size_t quota = base + (k < extra ? 1 : 0);
      const std::size_t give = std::min(quota, members[d].size() - take[d]);
      take[d] += give;
      given += give;
    }
    remaining -= given;
  }
  for (std::size_t d = 0; d < names.size(); ++d)
    r.chosen.insert(r.chosen.end(), members[d].begin(), members[d].begin() + static_cast<std::ptrdiff_t>(take[d]));
  finish(r, pool);
  return r;
}

SelectionResult select_domain_level(const Pool& pool, const PoolScorer& scorer, std::size_t n, std::uint64_t seed) {
  SelectionResult r = start(pool, Strategy::domain, n, seed);
  r.config.metric = scorer.metric();
  const auto o = scorer.orientation();
  auto domains = by_domain(pool);
  if (domains.empty()) {
    finish(r, pool);
    return r;
  }
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> members;
  std::vector<std::size_t> offsets{0};
  std::vector<std::size_t> flat;
  for (auto& [name, items] : domains) {
    names.push_back(name);
    flat.insert(flat.end(), items.begin(), items.end());
    offsets.push_back(flat.size());
    members.push_back(items);
  }
  const auto scores = kernels::score_groups(kernels::default_backend(), scorer, flat, offsets);
  std::vector<std::size_t> order(names.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  // names are already lexicographic, so a stable sort keeps that as the tie-break
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rank_key(scores[a], o) > rank_key(scores[b], o); });
  for (std::size_t k : order) r.domain_scores.emplace_back(names[k], scores[k]);
  const std::size_t best = order.front();
  r.chosen_domain = names[best];
  Rng rng(seed);
  const auto& items = members[best];
  for (std::size_t k : rng.sample_without_replacement(items.size(), std::min(n, items.size())))
    r.chosen.push_back(items[k]);
  r.scores.assign(r.chosen.size(), scores[best]);
  finish(r, pool);
  return r;
}

SelectionResult select_instance_level(const Pool& pool, const PoolScorer& scorer, std::size_t n) {
  SelectionResult r = start(pool, Strategy::instance, n, 0);
  r.config.metric = scorer.metric();
  std::vector<std::size_t> items;
  for (std::size_t i : pool.items)
    if (scorer.usable(i)) items.push_back(i);
  auto scores = kernels::score_items(kernels::default_backend(), scorer, items);
  sort_by_item_score(items, scores, pool, scorer.orientation());
  const std::size_t k = std::min(n, items.size());
  r.chosen.assign(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(k));
  r.scores.assign(scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(k));
  finish(r, pool);
  return r;
}

SelectionResult subset_select(const Pool& pool, const PoolScorer& scorer, const SubsetOptions& options,
                              std::size_t n, std::uint64_t seed) {
  if (options.s < 1 || options.m < 1) throw ParameterError("subset selection needs s >= 1 and m >= 1");
  SelectionResult r = start(pool, Strategy::subset, n, seed);
  r.config.metric = scorer.metric();
  r.config.s = options.s;
  r.config.m = options.m;
  r.config.distinct_candidates = options.distinct_candidates;
  const auto o = scorer.orientation();

  std::vector<std::size_t> remaining;
  for (std::size_t i : pool.items)
    if (scorer.usable(i)) remaining.push_back(i);
  const std::size_t goal = std::min(n, remaining.size());

  Rng rng(seed);
  std::vector<std::size_t> flat, offsets;
  std::vector<char> taken;
  while (r.chosen.size() < goal) {
    const std::size_t k = std::min(options.s, remaining.size());
    flat.clear();
    offsets.assign(1, 0);

    // Candidates are drawn up front so scoring order cannot affect the result.
    if (options.distinct_candidates && k == 1 && options.m >= remaining.size()) {
      for (std::size_t p = 0; p < remaining.size(); ++p) {
        flat.push_back(remaining[p]);
        offsets.push_back(flat.size());
      }
    } else if (options.distinct_candidates) {
      std::set<std::vector<std::size_t>> seen;
      const std::size_t max_attempts = 20 * options.m;
      for (std::size_t attempt = 0; attempt < max_attempts && seen.size() < options.m; ++attempt) {
        auto positions = rng.sample_without_replacement(remaining.size(), k);
        auto key = positions;
        std::sort(key.begin(), key.end());
        if (!seen.insert(std::move(key)).second) continue;
        for (std::size_t p : positions) flat.push_back(remaining[p]);
        offsets.push_back(flat.size());
      }
    } else {
      for (std::size_t c = 0; c < options.m; ++c) {
        for (std::size_t p : rng.sample_without_replacement(remaining.size(), k)) flat.push_back(remaining[p]);
        offsets.push_back(flat.size());
      }
    }

    const auto scores = kernels::score_groups(kernels::default_backend(), scorer, flat, offsets);
    std::size_t best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c)
      if (rank_key(scores[c], o) > rank_key(scores[best], o)) best = c;

    SelectionIteration iteration;
    iteration.members.assign(flat.begin() + static_cast<std::ptrdiff_t>(offsets[best]),
                             flat.begin() + static_cast<std::ptrdiff_t>(offsets[best + 1]));
    iteration.score = scores[best];
    iteration.candidates = scores.size();

    const std::size_t take = std::min(iteration.members.size(), goal - r.chosen.size());
    std::vector<std::size_t> kept = iteration.members;
    if (take < kept.size()) {
      std::vector<double> item_scores(kept.size());
      for (std::size_t q = 0; q < kept.size(); ++q) item_scores[q] = scorer.score_item(kept[q]);
      sort_by_item_score(kept, item_scores, pool, o);
      kept.resize(take);
    }
    for (std::size_t i : kept) {
      r.chosen.push_back(i);
      r.scores.push_back(iteration.score);
    }

    // Algorithm invariant: the whole winning subset leaves the pool.
    taken.assign(pool.corpus->size(), 0);
    for (std::size_t i : iteration.members) taken[i] = 1;
    std::erase_if(remaining, [&](std::size_t i) { return taken[i] != 0; });
    r.iterations.push_back(std::move(iteration));
  }
  finish(r, pool);
  return r;
}

SelectionResult run_selection(const Pool& pool, const PoolScorer* scorer, const SelectionConfig& config) {
  validate(config);
  auto need_scorer = [&]() -> const PoolScorer& {
    if (scorer == nullptr) throw ParameterError("strategy '" + config.label() + "' needs a similarity scorer");
    return *scorer;
  };
  SelectionResult r;
  switch (config.strategy) {
    case Strategy::random: r = select_random(pool, config.n, config.seed); break;
    case Strategy::balanced: r = select_balanced(pool, config.n, config.seed); break;
    case Strategy::domain: r = select_domain_level(pool, need_scorer(), config.n, config.seed); break;
    case Strategy::instance: r = select_instance_level(pool, need_scorer(), config.n); break;
    case Strategy::subset:
      r = subset_select(pool, need_scorer(), SubsetOptions{config.s, config.m, config.distinct_candidates}, config.n,
                        config.seed);
      break;
  }
  r.config = config;
  return r;
}

}  // namespace dsel
