#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dsel/corpus.hpp"
#include "dsel/evaluation.hpp"
#include "dsel/experiment.hpp"
#include "dsel/selection.hpp"

namespace dsel {

inline constexpr std::string_view kInsufficientRuns = "insufficient runs";

nlohmann::ordered_json selection_json(const SelectionResult& result, const Corpus& corpus,
                                      const nlohmann::ordered_json& config_echo);
/// One id per line.
std::string selection_ids(const SelectionResult& result);

/// One results-table row with significance against both baselines.
struct ResultRow {
  ExperimentResult result;
  std::optional<SignificanceResult> vs_rand;
  std::optional<SignificanceResult> vs_all;
  double vs_rand_mean = 0.0;
  double vs_all_mean = 0.0;

  /// "*" for significantly better than rand, "†" for better than all.
  std::string marks() const;
};

/// Attaches t-tests against the "rand" and "all" results of the same target.
/// Significance needs >= 2 runs on both sides; otherwise it stays empty.
std::vector<ResultRow> compare_to_baselines(const std::vector<ExperimentResult>& results);

/// Columns: target_domain strategy representation metric mean_acc std p_vs_rand p_vs_all marks.
std::string results_tsv(const std::vector<ResultRow>& rows);
nlohmann::ordered_json results_json(const std::vector<ResultRow>& rows, const nlohmann::ordered_json& config_echo);

struct SweepPoint {
  std::size_t n = 0;
  ExperimentResult result;
};

/// Columns: n strategy mean_acc std.
std::string sweep_tsv(const std::vector<SweepPoint>& points);

/// Writes `text` exactly; Error when the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& text);

/// Fixed-precision decimal, identical across platforms for the same double.
std::string format_number(double value, int digits = 6);

}  // namespace dsel
