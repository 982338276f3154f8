#include "tabsynth/evalbench.hpp"

#include "tabsynth/interpret.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace tabsynth {

namespace {

using nlohmann::json;

// Mean with a canonical summation order, so aggregation is exactly
// permutation-invariant and reproducible across worker counts.
double sorted_mean(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  long double sum = 0.0L;
  for (double v : values) sum += v;
  return static_cast<double>(sum) / static_cast<double>(values.size());
}

std::string fmt_double(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

std::string flags_text(bool execution_failure, bool row_count_mismatch) {
  std::string out;
  if (execution_failure) out += "execution_failure";
  if (row_count_mismatch) {
    if (!out.empty()) out += ";";
    out += "row_count_mismatch";
  }
  return out.empty() ? "-" : out;
}

}  // namespace

TableScore score_table(const TableOrError& actual, const Table& expected) {
  TableScore score;
  score.row_accuracies.assign(expected.rows.size(), 0.0);
  if (std::holds_alternative<std::string>(actual)) {
    score.execution_failure = true;
    score.table_accuracy = 0.0;
    return score;
  }
  const Table& act = std::get<Table>(actual);
  if (act.rows.size() != expected.rows.size())
    score.row_count_mismatch = true;

  for (std::size_t i = 0; i < expected.rows.size(); ++i) {
    const Row& exp_row = expected.rows[i];
    if (i >= act.rows.size()) continue;  // missing row scores 0
    const Row& act_row = act.rows[i];
    if (exp_row.empty()) {
      score.row_accuracies[i] = act_row.empty() ? 1.0 : 0.0;
      continue;
    }
    std::size_t matched = 0;
    for (std::size_t j = 0; j < exp_row.size(); ++j)
      if (j < act_row.size() && act_row[j] == exp_row[j]) ++matched;
    score.row_accuracies[i] =
        static_cast<double>(matched) / static_cast<double>(exp_row.size());
  }
  score.table_accuracy = sorted_mean(score.row_accuracies);
  return score;
}

const char* to_string(Approach a) {
  switch (a) {
    case Approach::search: return "search";
    case Approach::llm_one_shot: return "llm_one_shot";
    case Approach::llm_multi_a: return "llm_multi_a";
    case Approach::llm_multi_b: return "llm_multi_b";
    case Approach::hybrid: return "hybrid";
  }
  return "unknown";
}

std::optional<Approach> parse_approach(std::string_view name) {
  if (name == "search") return Approach::search;
  if (name == "llm_one_shot") return Approach::llm_one_shot;
  if (name == "llm_multi_a") return Approach::llm_multi_a;
  if (name == "llm_multi_b") return Approach::llm_multi_b;
  if (name == "hybrid") return Approach::hybrid;
  return std::nullopt;
}

OverallReport aggregate(const std::vector<ScenarioEvalRecord>& records) {
  if (records.empty())
    throw std::invalid_argument("aggregate: empty record set");

  std::map<std::string, std::vector<double>> rows_by_dataset;
  std::map<std::string, std::size_t> counts;
  for (const auto& rec : records) {
    ++counts[rec.dataset];
    auto& rows = rows_by_dataset[rec.dataset];
    for (const auto& ts : rec.test_scores)
      rows.insert(rows.end(), ts.row_accuracies.begin(),
                  ts.row_accuracies.end());
  }

  OverallReport report;
  long double weighted = 0.0L;
  long double total_weight = 0.0L;
  for (const auto& [dataset, rows] : rows_by_dataset) {
    DatasetReport dr;
    dr.dataset = dataset;
    dr.scenario_count = counts[dataset];
    dr.row_count = rows.size();
    dr.dataset_accuracy = sorted_mean(rows);
    weighted += static_cast<long double>(dr.scenario_count) *
                static_cast<long double>(dr.dataset_accuracy);
    total_weight += static_cast<long double>(dr.scenario_count);
    report.datasets.push_back(std::move(dr));
  }
  report.overall =
      static_cast<double>(weighted) / static_cast<double>(total_weight);
  return report;
}

namespace {

LoopConfig effective_loop_config(const EvalConfig& config) {
  LoopConfig loop = config.loop;
  loop.knowledge = config.knowledge;
  switch (config.approach) {
    case Approach::llm_one_shot: loop.variant = LoopVariant::one_shot; break;
    case Approach::llm_multi_a: loop.variant = LoopVariant::multi_a; break;
    case Approach::llm_multi_b: loop.variant = LoopVariant::multi_b; break;
    default: break;  // hybrid uses the configured variant
  }
  return loop;
}

std::optional<int> solved_round_of(const AttemptTranscript& transcript) {
  for (std::size_t i = 0; i < transcript.rounds.size(); ++i)
    if (transcript.rounds[i].exec_outcome == ExecOutcome::match)
      return static_cast<int>(i) + 1;
  return std::nullopt;
}

ScenarioEvalRecord eval_one(const Scenario& s, const EvalConfig& config,
                            const LoopConfig& loop, LlmClient* client,
                            ProgramExecutor* executor) {
  ScenarioEvalRecord rec;
  rec.name = s.name;
  rec.dataset = s.source_dataset;
  rec.approach = to_string(config.approach);

  try {
    switch (config.approach) {
      case Approach::search: {
        SynthesisResult r =
            synthesize(s.example_input, s.example_output, config.budget);
        if (r.solved) {
          rec.solver = "search";
          rec.program = std::move(r.program);
        } else {
          rec.solver = "failed";
          rec.failure_reason =
              std::string("search exhausted: ") + to_string(r.reason);
        }
        break;
      }
      case Approach::llm_one_shot:
      case Approach::llm_multi_a:
      case Approach::llm_multi_b: {
        if (!client)
          throw std::invalid_argument("run_eval: approach needs a client");
        AttemptTranscript t = run_loop(s, *client, loop, executor);
        rec.routed_to_llm = true;
        rec.loop_rounds = static_cast<int>(t.rounds.size());
        rec.solved_round = solved_round_of(t);
        if (t.solved) {
          rec.solver = "llm";
          rec.program = t.program;
        } else {
          rec.solver = "failed";
          rec.failure_reason = t.client_failure.value_or(
              t.rounds.empty() ? "no rounds executed"
                               : std::string("last outcome: ") +
                                     to_string(t.rounds.back().exec_outcome));
        }
        break;
      }
      case Approach::hybrid: {
        if (!client)
          throw std::invalid_argument("run_eval: approach needs a client");
        HybridOutcome h =
            solve_hybrid(s, config.budget, loop, *client, executor);
        rec.solver = to_string(h.solver);
        rec.routed_to_llm = h.routed_to_llm;
        rec.program = h.program;
        if (h.transcript) {
          rec.loop_rounds = static_cast<int>(h.transcript->rounds.size());
          rec.solved_round = solved_round_of(*h.transcript);
          if (h.solver == HybridSolver::failed)
            rec.failure_reason = h.transcript->client_failure.value_or(
                "repair loop did not solve the example pair");
        }
        break;
      }
    }
  } catch (const std::exception& e) {
    rec.solver = "failed";
    rec.program.reset();
    rec.failure_reason = e.what();
  }

  // Replay the program (if any) over every test input and score row-wise.
  std::vector<double> all_rows;
  for (const auto& test : s.tests) {
    TableOrError actual = std::string("no program synthesized");
    if (rec.program) {
      try {
        actual = interpret(*rec.program, test.input);
      } catch (const InterpError& e) {
        actual = std::string(e.what());
      }
    } else if (!rec.failure_reason.empty()) {
      actual = rec.failure_reason;
    }
    TableScore ts = score_table(actual, test.expected_output);
    rec.any_row_count_mismatch |= ts.row_count_mismatch;
    rec.any_execution_failure |= ts.execution_failure;
    all_rows.insert(all_rows.end(), ts.row_accuracies.begin(),
                    ts.row_accuracies.end());
    rec.test_scores.push_back(std::move(ts));
  }
  rec.scenario_accuracy = sorted_mean(all_rows);
  return rec;
}

}  // namespace

EvalResult run_eval(const ScenarioSet& corpus, const EvalConfig& config,
                    LlmClient* client, ProgramExecutor* executor) {
  if (corpus.scenarios.empty())
    throw std::invalid_argument("run_eval: empty corpus");

  const LoopConfig loop = effective_loop_config(config);
  const std::size_t n = corpus.scenarios.size();
  std::vector<ScenarioEvalRecord> records(n);

  const std::size_t jobs = std::max<std::size_t>(1, std::min(config.jobs, n));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) break;
      records[i] = eval_one(corpus.scenarios[i], config, loop, client,
                            executor);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  EvalResult result;
  result.records = std::move(records);
  result.overall = aggregate(result.records);

  const bool loop_based = config.approach != Approach::search;
  if (loop_based) {
    const int rounds = config.approach == Approach::llm_one_shot
                           ? 1
                           : std::max(1, loop.max_rounds);
    std::vector<std::size_t> series(static_cast<std::size_t>(rounds), 0);
    bool any = false;
    for (const auto& rec : result.records) {
      if (!rec.routed_to_llm) continue;
      any = true;
      for (int r = 1; r <= rounds; ++r)
        if (!rec.solved_round || *rec.solved_round > r)
          ++series[static_cast<std::size_t>(r) - 1];
    }
    if (any) result.failure_series = std::move(series);
  }

  if (config.approach == Approach::hybrid) {
    for (const auto& rec : result.records) {
      RoutingCounts& rc = result.routing[rec.dataset];
      ++rc.total;
      if (rec.routed_to_llm) {
        ++rc.routed;
        if (rec.solver == "llm") ++rc.llm_solved;
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Report emission

namespace {

json table_score_to_json(const TableScore& ts) {
  json j;
  j["row_accuracies"] = ts.row_accuracies;
  j["table_accuracy"] = ts.table_accuracy;
  j["row_count_mismatch"] = ts.row_count_mismatch;
  j["execution_failure"] = ts.execution_failure;
  return j;
}

TableScore table_score_from_json(const json& j) {
  TableScore ts;
  ts.row_accuracies = j.at("row_accuracies").get<std::vector<double>>();
  ts.table_accuracy = j.at("table_accuracy").get<double>();
  ts.row_count_mismatch = j.at("row_count_mismatch").get<bool>();
  ts.execution_failure = j.at("execution_failure").get<bool>();
  return ts;
}

}  // namespace

std::string scenario_record_to_json(const ScenarioEvalRecord& rec) {
  json j;
  j["name"] = rec.name;
  j["dataset"] = rec.dataset;
  j["approach"] = rec.approach;
  j["solver"] = rec.solver;
  j["routed_to_llm"] = rec.routed_to_llm;
  if (rec.program) j["program"] = print_program(*rec.program);
  if (rec.solved_round) j["solved_round"] = *rec.solved_round;
  j["loop_rounds"] = rec.loop_rounds;
  j["scenario_accuracy"] = rec.scenario_accuracy;
  j["row_count_mismatch"] = rec.any_row_count_mismatch;
  j["execution_failure"] = rec.any_execution_failure;
  if (!rec.failure_reason.empty()) j["failure_reason"] = rec.failure_reason;
  json scores = json::array();
  for (const auto& ts : rec.test_scores)
    scores.push_back(table_score_to_json(ts));
  j["test_scores"] = std::move(scores);
  return j.dump(2) + "\n";
}

ScenarioEvalRecord scenario_record_from_json(const std::string& text) {
  json j = json::parse(text);
  ScenarioEvalRecord rec;
  rec.name = j.at("name").get<std::string>();
  rec.dataset = j.at("dataset").get<std::string>();
  rec.approach = j.at("approach").get<std::string>();
  rec.solver = j.at("solver").get<std::string>();
  rec.routed_to_llm = j.at("routed_to_llm").get<bool>();
  if (j.contains("program"))
    rec.program = parse_program(j["program"].get<std::string>());
  if (j.contains("solved_round")) rec.solved_round = j["solved_round"].get<int>();
  rec.loop_rounds = j.at("loop_rounds").get<int>();
  rec.scenario_accuracy = j.at("scenario_accuracy").get<double>();
  rec.any_row_count_mismatch = j.at("row_count_mismatch").get<bool>();
  rec.any_execution_failure = j.at("execution_failure").get<bool>();
  if (j.contains("failure_reason"))
    rec.failure_reason = j["failure_reason"].get<std::string>();
  for (const auto& ts : j.at("test_scores"))
    rec.test_scores.push_back(table_score_from_json(ts));
  return rec;
}

void write_reports(const EvalResult& result,
                   const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  {
    std::ofstream csv(out_dir / "scores.csv", std::ios::binary);
    csv << "name,dataset,approach,table_accuracy,flags\n";
    for (const auto& rec : result.records)
      csv << rec.name << ',' << rec.dataset << ',' << rec.approach << ','
          << fmt_double(rec.scenario_accuracy, 6) << ','
          << flags_text(rec.any_execution_failure, rec.any_row_count_mismatch)
          << '\n';
  }

  {
    std::ofstream out(out_dir / "summary.txt", std::ios::binary);
    out << "row alignment: by index; dataset accuracy: mean over all scored "
           "rows; overall: weighted average with weights = scenarios per "
           "dataset\n\n";
    out << "approach";
    for (const auto& d : result.overall.datasets) out << '\t' << d.dataset;
    out << "\toverall(weighted)\n";
    const std::string approach =
        result.records.empty() ? "?" : result.records.front().approach;
    out << approach;
    for (const auto& d : result.overall.datasets)
      out << '\t' << fmt_double(d.dataset_accuracy, 3);
    out << '\t' << fmt_double(result.overall.overall, 3) << '\n';
    out << "\nweights:";
    for (const auto& d : result.overall.datasets)
      out << ' ' << d.dataset << '=' << d.scenario_count;
    out << '\n';
  }

  if (!result.failure_series.empty()) {
    std::ofstream out(out_dir / "rounds.csv", std::ios::binary);
    out << "round,still_failing\n";
    for (std::size_t r = 0; r < result.failure_series.size(); ++r)
      out << (r + 1) << ',' << result.failure_series[r] << '\n';
  }

  if (!result.routing.empty()) {
    std::ofstream out(out_dir / "routing.csv", std::ios::binary);
    out << "metric";
    for (const auto& [dataset, rc] : result.routing) out << ',' << dataset;
    out << '\n';
    out << "pct_passed_to_llm";
    for (const auto& [dataset, rc] : result.routing) {
      const double pct =
          rc.total ? 100.0 * static_cast<double>(rc.routed) /
                         static_cast<double>(rc.total)
                   : 0.0;
      out << ',' << fmt_double(pct, 2);
    }
    out << '\n';
    out << "pct_solved_by_llm";
    for (const auto& [dataset, rc] : result.routing) {
      const double pct =
          rc.routed ? 100.0 * static_cast<double>(rc.llm_solved) /
                          static_cast<double>(rc.routed)
                    : 0.0;
      out << ',' << fmt_double(pct, 2);
    }
    out << '\n';
  }

  const fs::path scen_dir = out_dir / "scenarios";
  fs::create_directories(scen_dir);
  for (const auto& rec : result.records) {
    std::ofstream out(scen_dir / (rec.name + ".json"), std::ios::binary);
    out << scenario_record_to_json(rec);
  }
}

std::vector<ScenarioEvalRecord> load_scenario_records(
    const std::filesystem::path& scenario_dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(scenario_dir))
    throw std::invalid_argument("scenario record directory not found: " +
                                scenario_dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(scenario_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<ScenarioEvalRecord> records;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::ostringstream buf;
    buf << in.rdbuf();
    records.push_back(scenario_record_from_json(buf.str()));
  }
  return records;
}

}  // namespace tabsynth
