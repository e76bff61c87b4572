#include "dsel/reports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "dsel/error.hpp"

namespace dsel {

namespace {

bool is_baseline(const SelectionConfig& c) {
  return c.strategy == Strategy::random || c.strategy == Strategy::balanced;
}

std::string format_p(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", p);
  return buf;
}

nlohmann::ordered_json score_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

nlohmann::ordered_json significance_json(const std::optional<SignificanceResult>& s) {
  if (!s) return std::string(kInsufficientRuns);
  nlohmann::ordered_json j;
  j["t"] = s->t;
  j["df"] = s->df;
  j["p"] = s->p;
  j["significant"] = s->significant;
  return j;
}

}  // namespace

std::string format_number(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

nlohmann::ordered_json selection_json(const SelectionResult& result, const Corpus& corpus,
                                      const nlohmann::ordered_json& config_echo) {
  nlohmann::ordered_json j;
  j["config"] = config_echo;
  nlohmann::ordered_json sel;
  sel["label"] = result.config.label();
  sel["strategy"] = std::string(to_string(result.config.strategy));
  sel["representation"] = std::string(to_string(result.config.representation));
  sel["metric"] = std::string(to_string(result.config.metric));
  sel["n"] = result.config.n;
  sel["s"] = result.config.s;
  sel["m"] = result.config.m;
  sel["seed"] = result.config.seed;
  j["selection"] = sel;
  j["requested"] = result.requested;
  j["selected"] = result.chosen.size();
  j["shortfall"] = result.shortfall;
  j["ids"] = result.ids;
  auto scores = nlohmann::ordered_json::array();
  for (double v : result.scores) scores.push_back(score_or_null(v));
  j["scores"] = scores;
  if (!result.chosen_domain.empty()) {
    j["chosen_domain"] = result.chosen_domain;
    auto ds = nlohmann::ordered_json::array();
    for (const auto& [name, score] : result.domain_scores)
      ds.push_back(nlohmann::ordered_json{{"domain", name}, {"score", score_or_null(score)}});
    j["domain_scores"] = ds;
  }
  if (!result.iterations.empty()) {
    auto its = nlohmann::ordered_json::array();
    for (const auto& it : result.iterations) {
      nlohmann::ordered_json e;
      std::vector<std::string> ids;
      for (std::size_t k : it.members) ids.push_back(corpus[k].id);
      e["score"] = score_or_null(it.score);
      e["candidates"] = it.candidates;
      e["ids"] = ids;
      its.push_back(e);
    }
    j["iterations"] = its;
  }
  return j;
}

std::string selection_ids(const SelectionResult& result) {
  std::string out;
  for (const auto& id : result.ids) {
    out += id;
    out += '\n';
  }
  return out;
}

std::string ResultRow::marks() const {
  std::string out;
  if (vs_rand && vs_rand->significant && result.mean > vs_rand_mean) out += "*";
  if (vs_all && vs_all->significant && result.mean > vs_all_mean) out += "†";
  return out;
}

std::vector<ResultRow> compare_to_baselines(const std::vector<ExperimentResult>& results) {
  std::map<std::string, const ExperimentResult*> rand, all;
  for (const auto& r : results) {
    if (r.config.strategy == Strategy::random) rand.emplace(r.target, &r);
    if (r.config.strategy == Strategy::balanced) all.emplace(r.target, &r);
  }
  auto test = [](const ExperimentResult& a, const ExperimentResult* b) -> std::optional<SignificanceResult> {
    if (b == nullptr || a.accuracies.size() < 2 || b->accuracies.size() < 2) return std::nullopt;
    return t_test(a.accuracies, b->accuracies);
  };
  std::vector<ResultRow> rows;
  for (const auto& r : results) {
    ResultRow row;
    row.result = r;
    const auto* rb = rand.contains(r.target) ? rand.at(r.target) : nullptr;
    const auto* ab = all.contains(r.target) ? all.at(r.target) : nullptr;
    if (r.config.strategy != Strategy::random) row.vs_rand = test(r, rb);
    if (r.config.strategy != Strategy::balanced) row.vs_all = test(r, ab);
    if (rb) row.vs_rand_mean = rb->mean;
    if (ab) row.vs_all_mean = ab->mean;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string results_tsv(const std::vector<ResultRow>& rows) {
  std::string out = "target_domain\tstrategy\trepresentation\tmetric\tmean_acc\tstd\tp_vs_rand\tp_vs_all\tmarks\n";
  for (const auto& row : rows) {
    const auto& r = row.result;
    const bool base = is_baseline(r.config);
    const bool single = r.accuracies.size() < 2;
    auto p_cell = [&](const std::optional<SignificanceResult>& s, Strategy self) {
      if (s) return format_p(s->p);
      if (single) return std::string(kInsufficientRuns);
      return std::string(r.config.strategy == self ? "-" : "");
    };
    out += r.target + '\t';
    out += base ? r.config.label() : std::string(to_string(r.config.strategy));
    out += '\t';
    out += base ? "-" : std::string(to_string(r.config.representation));
    out += '\t';
    out += base ? "-" : std::string(to_string(r.config.metric));
    out += '\t' + format_number(r.mean) + '\t' + format_number(r.std) + '\t';
    out += p_cell(row.vs_rand, Strategy::random) + '\t' + p_cell(row.vs_all, Strategy::balanced) + '\t';
    out += row.marks() + '\n';
  }
  return out;
}

nlohmann::ordered_json results_json(const std::vector<ResultRow>& rows, const nlohmann::ordered_json& config_echo) {
  nlohmann::ordered_json j;
  j["config"] = config_echo;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    const auto& r = row.result;
    nlohmann::ordered_json e;
    e["target_domain"] = r.target;
    e["label"] = r.config.label();
    e["strategy"] = std::string(to_string(r.config.strategy));
    if (!is_baseline(r.config)) {
      e["representation"] = std::string(to_string(r.config.representation));
      e["metric"] = std::string(to_string(r.config.metric));
    }
    e["n"] = r.config.n;
    e["base_seed"] = r.config.seed;
    e["seeds"] = r.seeds;
    e["accuracies"] = r.accuracies;
    e["mean_acc"] = r.mean;
    e["std"] = r.std;
    e["selected"] = r.selected;
    e["shortfall"] = r.shortfall;
    if (!r.chosen_domains.empty()) e["chosen_domains"] = r.chosen_domains;
    if (r.config.strategy != Strategy::random) e["vs_rand"] = significance_json(row.vs_rand);
    if (r.config.strategy != Strategy::balanced) e["vs_all"] = significance_json(row.vs_all);
    e["marks"] = row.marks();
    arr.push_back(e);
  }
  j["results"] = arr;
  return j;
}

std::string sweep_tsv(const std::vector<SweepPoint>& points) {
  std::string out = "n\tstrategy\tmean_acc\tstd\n";
  for (const auto& p : points) {
    out += std::to_string(p.n) + '\t' + p.result.config.label() + '\t' + format_number(p.result.mean) + '\t' +
           format_number(p.result.std) + '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace dsel
