#include "dsel/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dsel/error.hpp"

namespace dsel {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const auto comma = value.find(',', pos);
    const auto item = trim(value.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end)
    throw ParameterError("invalid value '" + std::string(value) + "' for " + std::string(key));
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ParameterError("invalid value '" + std::string(value) + "' for " + std::string(key));
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ',';
    out += s;
  }
  return out;
}

}  // namespace

std::size_t RunConfig::effective_n() const {
  if (n != 0) return n;
  return task == Task::binary ? kBinaryDefaultN : kTernaryDefaultN;
}

void RunConfig::set(std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  if (key == "task") task = parse_task(value);
  else if (key == "corpus") corpus = std::string(value);
  else if (key == "target") target = std::string(value);
  else if (key == "strategies") strategies = split_list(value);
  else if (key == "n") n = parse_number<std::size_t>(key, value);
  else if (key == "n_values") {
    n_values.clear();
    for (const auto& item : split_list(value)) n_values.push_back(parse_number<std::size_t>(key, item));
  } else if (key == "s") s = parse_number<std::size_t>(key, value);
  else if (key == "m") m = parse_number<std::size_t>(key, value);
  else if (key == "distinct_candidates") distinct_candidates = parse_bool(key, value);
  else if (key == "allow_proxy_subset") allow_proxy_subset = parse_bool(key, value);
  else if (key == "a") a = parse_number<double>(key, value);
  else if (key == "vocab_size") vocab_size = parse_number<std::size_t>(key, value);
  else if (key == "ngram_max") ngram_max = parse_number<int>(key, value);
  else if (key == "embeddings") embeddings = std::string(value);
  else if (key == "stopwords") stopwords = std::string(value);
  else if (key == "lowercase") lowercase = parse_bool(key, value);
  else if (key == "ae_hidden") ae_hidden = parse_number<std::size_t>(key, value);
  else if (key == "ae_epochs") ae_epochs = parse_number<int>(key, value);
  else if (key == "ae_masking") ae_masking = parse_number<double>(key, value);
  else if (key == "ae_lr") ae_lr = parse_number<double>(key, value);
  else if (key == "ae_batch") ae_batch = parse_number<std::size_t>(key, value);
  else if (key == "svm_epochs") svm_epochs = parse_number<int>(key, value);
  else if (key == "svm_lr") svm_lr = parse_number<double>(key, value);
  else if (key == "svm_l2") svm_l2 = parse_number<double>(key, value);
  else if (key == "runs") runs = parse_number<int>(key, value);
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
  else if (key == "output_dir") output_dir = std::string(value);
  else throw ParameterError("unknown config key '" + std::string(key) + "'");
}

void RunConfig::validate() const {
  if (corpus.empty()) throw ParameterError("no corpus given");
  if (!std::filesystem::exists(corpus)) throw ParameterError("corpus not found: " + corpus.string());
  if (!embeddings.empty() && !std::filesystem::exists(embeddings))
    throw ParameterError("embeddings file not found: " + embeddings.string());
  if (!stopwords.empty() && !std::filesystem::exists(stopwords))
    throw ParameterError("stopword file not found: " + stopwords.string());
  if (strategies.empty()) throw ParameterError("no strategies given");
  if (runs < 1) throw ParameterError("runs must be >= 1");
  if (s < 1 || m < 1) throw ParameterError("s and m must be >= 1");
  if (!(a > 0.0)) throw ParameterError("a must be > 0");
  if (vocab_size < 1) throw ParameterError("vocab_size must be >= 1");
  if (ngram_max != 1 && ngram_max != 2) throw ParameterError("ngram_max must be 1 or 2");
  if (svm_epochs < 1 || !(svm_lr > 0.0) || !(svm_l2 >= 0.0)) throw ParameterError("invalid classifier settings");
  for (std::size_t k = 0; k < n_values.size(); ++k) {
    if (n_values[k] < 1) throw ParameterError("n_values must be >= 1");
    if (k > 0 && n_values[k] <= n_values[k - 1]) throw ParameterError("n_values must be ascending");
  }
  experiment_settings().ae.validate();
  for (const auto& sc : selection_configs()) dsel::validate(sc);
}

std::vector<SelectionConfig> RunConfig::selection_configs() const {
  std::vector<SelectionConfig> out;
  for (const auto& spec : strategies) {
    SelectionConfig c = parse_strategy_spec(spec);
    c.n = effective_n();
    c.s = s;
    c.m = m;
    c.seed = seed;
    c.distinct_candidates = distinct_candidates;
    out.push_back(c);
  }
  return out;
}

ExperimentSettings RunConfig::experiment_settings() const {
  ExperimentSettings e;
  e.task = task;
  e.vocab_size = vocab_size;
  e.preprocess.lowercase = lowercase;
  if (!stopwords.empty()) e.preprocess.stopwords = load_stopwords(stopwords);
  e.ngram_max = ngram_max;
  e.sif_a = a;
  if (!embeddings.empty()) e.embeddings_path = embeddings;
  e.ae.hidden = ae_hidden;
  e.ae.epochs = ae_epochs;
  e.ae.masking_prob = ae_masking;
  e.ae.learning_rate = ae_lr;
  e.ae.batch_size = ae_batch;
  e.classifier.epochs = svm_epochs;
  e.classifier.learning_rate = svm_lr;
  e.classifier.l2 = svm_l2;
  e.allow_proxy_subset = allow_proxy_subset;
  e.base_seed = seed;
  return e;
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["task"] = std::string(to_string(task));
  j["corpus"] = corpus.string();
  j["target"] = target;
  j["strategies"] = strategies;
  j["n"] = effective_n();
  j["n_values"] = n_values;
  j["s"] = s;
  j["m"] = m;
  j["distinct_candidates"] = distinct_candidates;
  j["allow_proxy_subset"] = allow_proxy_subset;
  j["a"] = a;
  j["vocab_size"] = vocab_size;
  j["ngram_max"] = ngram_max;
  j["embeddings"] = embeddings.string();
  j["stopwords"] = stopwords.string();
  j["lowercase"] = lowercase;
  j["ae_hidden"] = ae_hidden;
  j["ae_epochs"] = ae_epochs;
  j["ae_masking"] = ae_masking;
  j["ae_lr"] = ae_lr;
  j["ae_batch"] = ae_batch;
  j["svm_epochs"] = svm_epochs;
  j["svm_lr"] = svm_lr;
  j["svm_l2"] = svm_l2;
  j["runs"] = runs;
  j["seed"] = seed;
  j["output_dir"] = output_dir.string();
  return j;
}

std::string RunConfig::to_text() const {
  std::ostringstream out;
  const auto json = to_json();
  for (const auto& [key, value] : json.items()) {
    out << key << " = ";
    if (value.is_string()) {
      out << value.get<std::string>();
    } else if (value.is_array()) {
      std::vector<std::string> parts;
      for (const auto& v : value) parts.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      out << join(parts);
    } else {
      out << value.dump();
    }
    out << '\n';
  }
  return out.str();
}

void parse_config(std::string_view text, RunConfig& config) {
  std::size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const auto where = " (config line " + std::to_string(line_no) + ")";
    if (eq == std::string_view::npos) throw ParameterError("expected 'key = value'" + where);
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ParameterError("empty key" + where);
    try {
      config.set(key, line.substr(eq + 1));
    } catch (const Error& e) {
      throw ParameterError(e.what() + where);
    }
  }
}

void load_config(const std::filesystem::path& path, RunConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  parse_config(buffer.str(), config);
}

}  // namespace dsel
