// dsel: training-data selection and evaluation from the command line.

#include <deque>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dsel/config.hpp"
#include "dsel/error.hpp"
#include "dsel/experiment.hpp"
#include "dsel/log.hpp"
#include "dsel/reports.hpp"
#include "dsel/synthetic.hpp"

namespace {

using namespace dsel;
using json = nlohmann::ordered_json;

enum Exit { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

// Flags shared by the experiment commands. Each maps to a config key.
struct CommonFlags {
  std::string config_file;
  std::vector<std::string> sets;
  std::vector<std::string> strategies;

  void attach(CLI::App* cmd) {
    cmd->add_option("-c,--config", config_file, "key = value config file")->check(CLI::ExistingFile);
    key(cmd, "--corpus", "corpus", "JSONL corpus");
    key(cmd, "-t,--target", "target", "target domain");
    key(cmd, "--task", "task", "binary or ternary");
    key(cmd, "-n", "n", "examples to select (0: task default)");
    key(cmd, "--subset-size", "s", "subset size s");
    key(cmd, "--subsets", "m", "subsets per iteration m");
    key(cmd, "--runs", "runs", "runs per strategy");
    key(cmd, "--seed", "seed", "base seed");
    key(cmd, "-o,--output", "output_dir", "output directory");
    key(cmd, "--embeddings", "embeddings", "word vector file");
    cmd->add_option("--strategy", strategies, "strategy spec, e.g. subset:term_dist:js (repeatable)");
    cmd->add_option("--set", sets, "override any config key: KEY=VALUE (repeatable)");
  }

  RunConfig resolve() const {
    RunConfig config;
    if (!config_file.empty()) load_config(config_file, config);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ParameterError("--set expects KEY=VALUE, got '" + kv + "'");
      config.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    for (const auto& [k, v] : *values)
      if (!v.empty()) config.set(k, v);
    if (!strategies.empty()) config.strategies = strategies;
    return config;
  }

 private:
  void key(CLI::App* cmd, const std::string& flag, const std::string& name, const std::string& help) {
    values->emplace_back(name, std::string());
    cmd->add_option(flag, values->back().second, help);
  }
  // Stable addresses for CLI11 to write into.
  std::shared_ptr<std::deque<std::pair<std::string, std::string>>> values =
      std::make_shared<std::deque<std::pair<std::string, std::string>>>();
};

Corpus load_checked(const RunConfig& config) {
  config.validate();
  return load_corpus(config.corpus);
}

void require_known_target(const Corpus& corpus, const std::string& target) {
  if (target.empty()) throw ParameterError("no target domain given");
  if (!corpus.has_domain(target)) throw ParameterError("unknown target domain '" + target + "'");
}

int cmd_select(const RunConfig& config) {
  const Corpus corpus = load_checked(config);
  require_known_target(corpus, config.target);
  const auto configs = config.selection_configs();
  if (configs.size() != 1) throw ParameterError("select takes exactly one strategy");
  ExperimentContext context(corpus, config.experiment_settings());
  const SelectionResult result = context.select(config.target, configs.front());
  if (result.shortfall > 0)
    warn("selected " + std::to_string(result.chosen.size()) + " of " + std::to_string(result.requested) +
         " requested examples");
  const auto json_path = config.output_dir / "selection.json";
  const auto ids_path = config.output_dir / "selection.ids";
  write_text(json_path, selection_json(result, context.corpus(), config.to_json()).dump(2) + "\n");
  write_text(ids_path, selection_ids(result));
  std::cout << json_path.string() << '\n' << ids_path.string() << '\n';
  return kOk;
}

std::vector<std::string> evaluation_targets(const Corpus& corpus, const std::string& target) {
  if (!target.empty()) {
    require_known_target(corpus, target);
    return {target};
  }
  std::vector<std::string> out;
  for (const auto& d : corpus.domains()) {
    for (std::size_t i : corpus.indices_of(d)) {
      if (corpus[i].label) {
        out.push_back(d);
        break;
      }
    }
  }
  return out;
}

int cmd_evaluate(const RunConfig& config) {
  const Corpus corpus = load_checked(config);
  const auto targets = evaluation_targets(corpus, config.target);
  std::vector<SelectionConfig> configs;
  for (const char* base : {"rand", "all"}) {
    SelectionConfig c = parse_strategy_spec(base);
    c.n = config.effective_n();
    c.seed = config.seed;
    configs.push_back(c);
  }
  std::set<std::string> seen{"rand", "all"};
  for (const auto& c : config.selection_configs())
    if (seen.insert(c.label()).second) configs.push_back(c);

  ExperimentContext context(corpus, config.experiment_settings());
  std::vector<ExperimentResult> results;
  for (const auto& target : targets) {
    for (const auto& c : configs) {
      std::cerr << "evaluating " << target << " " << c.label() << '\n';
      results.push_back(run_experiment(context, target, c, config.runs, config.seed));
    }
  }
  const auto rows = compare_to_baselines(results);
  const auto tsv_path = config.output_dir / "results.tsv";
  const auto json_path = config.output_dir / "results.json";
  write_text(tsv_path, results_tsv(rows));
  write_text(json_path, results_json(rows, config.to_json()).dump(2) + "\n");
  std::cout << tsv_path.string() << '\n' << json_path.string() << '\n';
  return kOk;
}

int cmd_sweep(const RunConfig& config) {
  const Corpus corpus = load_checked(config);
  require_known_target(corpus, config.target);
  std::vector<std::size_t> sizes = config.n_values;
  if (sizes.empty()) sizes.push_back(config.effective_n());
  ExperimentContext context(corpus, config.experiment_settings());
  std::vector<SweepPoint> points;
  for (std::size_t n : sizes) {
    for (SelectionConfig c : config.selection_configs()) {
      c.n = n;
      std::cerr << "sweep n=" << n << " " << c.label() << '\n';
      points.push_back({n, run_experiment(context, config.target, c, config.runs, config.seed)});
    }
  }
  const auto path = config.output_dir / "sweep.tsv";
  write_text(path, sweep_tsv(points));
  std::cout << path.string() << '\n';
  return kOk;
}

// -- generate -----------------------------------------------------------------

DomainSpec domain_from_json(const nlohmann::json& j, std::uint64_t default_seed) {
  static const std::set<std::string> known{
      "name",      "shared_vocab_size", "private_vocab_size", "lexicon_size", "overlap",     "docs_per_label",
      "min_length", "max_length",       "sentiment_rate",     "shared_rate",  "label_noise", "blend",
      "seed"};
  if (!j.is_object()) throw ParameterError("domain spec must be an object");
  for (const auto& [k, v] : j.items())
    if (!known.contains(k)) throw ParameterError("unknown domain spec field '" + k + "'");
  DomainSpec s;
  s.seed = default_seed;
  try {
    s.name = j.at("name").get<std::string>();
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
    };
    get("shared_vocab_size", s.shared_vocab_size);
    get("private_vocab_size", s.private_vocab_size);
    get("lexicon_size", s.lexicon_size);
    get("overlap", s.overlap);
    get("docs_per_label", s.docs_per_label);
    get("min_length", s.min_length);
    get("max_length", s.max_length);
    get("sentiment_rate", s.sentiment_rate);
    get("shared_rate", s.shared_rate);
    get("label_noise", s.label_noise);
    get("blend", s.blend);
    get("seed", s.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("invalid domain spec: ") + e.what());
  }
  s.validate();
  return s;
}

void write_scenario(const Scenario& scenario, const std::filesystem::path& dir, std::size_t embedding_dim,
                    std::uint64_t seed) {
  const Corpus corpus = scenario.build();
  std::filesystem::create_directories(dir);
  std::vector<std::string> domains{scenario.target.name};
  for (const auto& s : scenario.sources) domains.push_back(s.name);
  for (const auto& d : domains) {
    std::vector<Document> docs;
    for (std::size_t i : corpus.indices_of(d)) docs.push_back(corpus[i]);
    write_corpus(dir / (d + ".jsonl"), docs);
  }
  write_corpus(dir / "corpus.jsonl", corpus.documents());
  json meta;
  meta["scenario"] = scenario.name;
  meta["description"] = scenario.description;
  meta["task"] = std::string(to_string(scenario.options.task));
  meta["target"] = scenario.target.name;
  meta["sources"] = std::vector<std::string>(domains.begin() + 1, domains.end());
  meta["documents"] = corpus.size();
  write_text(dir / "scenario.json", meta.dump(2) + "\n");
  if (embedding_dim > 0) write_embeddings(dir / "embeddings.txt", corpus, embedding_dim, seed);
  std::cout << dir.string() << '\n';
}

int cmd_generate(bool builtin, const std::string& spec_path, const std::filesystem::path& out, std::uint64_t seed,
                 std::size_t embedding_dim) {
  if (builtin == !spec_path.empty()) throw ParameterError("generate needs exactly one of --builtin or --spec");
  if (builtin) {
    for (const auto& scenario : benchmark_suite(seed))
      write_scenario(scenario, out / scenario.name, embedding_dim, seed);
    return kOk;
  }
  std::ifstream in(spec_path);
  if (!in) throw ParameterError("cannot open spec file " + spec_path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("invalid spec file: ") + e.what());
  }
  if (!j.is_object() || !j.contains("target") || !j.contains("sources") || !j["sources"].is_array())
    throw ParameterError("spec file needs 'target' and a 'sources' array");
  const auto spec_seed = j.value("seed", seed);
  Scenario scenario;
  scenario.name = j.value("name", std::string("custom"));
  scenario.description = j.value("description", std::string());
  scenario.options.task = parse_task(j.value("task", std::string("binary")));
  scenario.target = domain_from_json(j["target"], spec_seed);
  for (const auto& s : j["sources"]) scenario.sources.push_back(domain_from_json(s, spec_seed));
  const std::size_t dim = j.value("embedding_dim", embedding_dim);
  write_scenario(scenario, out, dim, spec_seed);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Training-data selection for multi-domain sentiment classification"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "suppress warnings");

  CommonFlags select_flags, evaluate_flags, sweep_flags;
  auto* select = app.add_subcommand("select", "select training data for one target and write the selection");
  select_flags.attach(select);
  auto* evaluate = app.add_subcommand("evaluate", "run the multi-seed protocol; baselines rand and all are added");
  evaluate_flags.attach(evaluate);
  auto* sweep = app.add_subcommand("sweep", "accuracy against training-set size");
  sweep_flags.attach(sweep);
  std::string n_values;
  sweep->add_option("--n-values", n_values, "comma-separated ascending sizes");

  auto* generate = app.add_subcommand("generate", "write synthetic corpora");
  bool builtin = false;
  std::string spec_path;
  std::string gen_out = ".";
  std::uint64_t gen_seed = 0;
  std::size_t embedding_dim = 0;
  generate->add_flag("--builtin", builtin, "write the built-in scenario catalog");
  generate->add_option("--spec", spec_path, "JSON scenario spec");
  generate->add_option("-o,--output", gen_out, "output directory");
  generate->add_option("--seed", gen_seed, "generator seed");
  generate->add_option("--embedding-dim", embedding_dim, "also write synthetic word vectors of this size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  warnings_enabled() = !quiet;

  try {
    if (*select) return cmd_select(select_flags.resolve());
    if (*evaluate) return cmd_evaluate(evaluate_flags.resolve());
    if (*sweep) {
      RunConfig config = sweep_flags.resolve();
      if (!n_values.empty()) config.set("n_values", n_values);
      return cmd_sweep(config);
    }
    if (*generate) return cmd_generate(builtin, spec_path, gen_out, gen_seed, embedding_dim);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}
