#pragma once

#include "tabsynth/hybrid.hpp"
#include "tabsynth/llm.hpp"
#include "tabsynth/scenario.hpp"
#include "tabsynth/search.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tabsynth {

// Row-wise exact-match score of one produced table against the expected
// table. Rows align by index; a row's accuracy is the fraction of its
// expected cells matched exactly at the same column index. Expected rows
// with no actual counterpart score 0; surplus actual rows are flagged but
// not scored; an execution error zeroes the whole table.
struct TableScore {
  std::vector<double> row_accuracies;  // exactly rows(expected) entries
  double table_accuracy = 0.0;
  bool row_count_mismatch = false;
  bool execution_failure = false;
};

TableScore score_table(const TableOrError& actual, const Table& expected);

enum class Approach { search, llm_one_shot, llm_multi_a, llm_multi_b, hybrid };

const char* to_string(Approach a);
std::optional<Approach> parse_approach(std::string_view name);

// Everything recorded about one evaluated scenario.
struct ScenarioEvalRecord {
  std::string name;
  std::string dataset;
  std::string approach;
  std::string solver;  // "search", "llm" or "failed"
  bool routed_to_llm = false;
  std::optional<Program> program;
  std::optional<int> solved_round;  // 1-based, loop approaches only
  int loop_rounds = 0;
  std::vector<TableScore> test_scores;  // one per test case
  double scenario_accuracy = 0.0;       // mean over this scenario's rows
  bool any_row_count_mismatch = false;
  bool any_execution_failure = false;
  std::string failure_reason;  // why no program was obtained
};

struct DatasetReport {
  std::string dataset;
  std::size_t scenario_count = 0;
  std::size_t row_count = 0;
  double dataset_accuracy = 0.0;  // mean over all scored rows
};

struct OverallReport {
  std::vector<DatasetReport> datasets;  // sorted by dataset label
  double overall = 0.0;  // weighted average, weights = scenario counts
};

// Throws std::invalid_argument on an empty record set.
OverallReport aggregate(const std::vector<ScenarioEvalRecord>& records);

struct RoutingCounts {
  std::size_t total = 0;
  std::size_t routed = 0;
  std::size_t llm_solved = 0;
};

struct EvalConfig {
  Approach approach = Approach::search;
  bool knowledge = false;
  SearchBudget budget;
  LoopConfig loop;
  std::size_t jobs = 1;
};

struct EvalResult {
  std::vector<ScenarioEvalRecord> records;  // corpus order
  OverallReport overall;
  // Scenarios still failing after round r (index r-1); filled for loop
  // approaches and for the routed share of hybrid runs.
  std::vector<std::size_t> failure_series;
  std::map<std::string, RoutingCounts> routing;  // hybrid only
};

// Evaluates every scenario with the chosen approach: one program per
// scenario (a single execution, no resampling), replayed over every test
// input and scored row-wise. Client errors are recorded as scenario
// failures and never abort the batch. Scenario evaluations may run on up to
// config.jobs workers; aggregation is a deterministic fold afterwards.
// `client` may be null for the pure search approach.
EvalResult run_eval(const ScenarioSet& corpus, const EvalConfig& config,
                    LlmClient* client, ProgramExecutor* executor = nullptr);

// Report files written into out_dir: scores.csv (one line per scenario),
// summary.txt (per-dataset accuracies and the weighted overall),
// rounds.csv (failure series, when present), routing.csv (hybrid routing
// percentages, when present) and scenarios/<name>.json with the full
// per-scenario records.
void write_reports(const EvalResult& result, const std::filesystem::path& out_dir);

// Reads scenarios/*.json records back (for re-aggregation).
std::vector<ScenarioEvalRecord> load_scenario_records(
    const std::filesystem::path& scenario_dir);

std::string scenario_record_to_json(const ScenarioEvalRecord& record);
ScenarioEvalRecord scenario_record_from_json(const std::string& text);

}  // namespace tabsynth
