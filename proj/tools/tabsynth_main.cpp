#include "tabsynth/evalbench.hpp"
#include "tabsynth/hybrid.hpp"
#include "tabsynth/interpret.hpp"
#include "tabsynth/llm.hpp"
#include "tabsynth/scenario.hpp"
#include "tabsynth/search.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

namespace {

using namespace tabsynth;

// Exit codes: 0 success, 1 usage/config error, 2 ingestion error,
// 3 synthesis failure or test mismatch (synth only).
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIngestion = 2;
constexpr int kExitUnsolved = 3;

struct CommonOptions {
  std::string approach = "search";
  std::string variant = "multi_a";
  bool knowledge = false;
  int max_rounds = 10;
  std::size_t max_expansions = 200000;
  std::size_t max_depth = 8;
  double timeout_s = 30.0;
  std::string endpoint;
  std::string model;
  std::string credential_var = "TABSYNTH_API_KEY";
  std::string mock_script;
  std::size_t jobs = 1;
  double temperature = 0.0;
  std::optional<std::uint64_t> seed;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--approach", opt.approach,
                  "search | llm_one_shot | llm_multi_a | llm_multi_b | hybrid")
      ->capture_default_str();
  cmd->add_option("--variant", opt.variant,
                  "loop variant for hybrid runs: one_shot | multi_a | multi_b")
      ->capture_default_str();
  cmd->add_flag("--knowledge", opt.knowledge,
                "append the operator catalog to prompts");
  cmd->add_option("--max-rounds", opt.max_rounds, "repair loop round cap")
      ->capture_default_str();
  cmd->add_option("--max-expansions", opt.max_expansions,
                  "search budget: node expansions")
      ->capture_default_str();
  cmd->add_option("--max-depth", opt.max_depth,
                  "search budget: program length")
      ->capture_default_str();
  cmd->add_option("--timeout", opt.timeout_s,
                  "search budget: wall clock seconds per scenario")
      ->capture_default_str();
  cmd->add_option("--endpoint", opt.endpoint,
                  "chat-completion endpoint (scheme://host[:port])");
  cmd->add_option("--model", opt.model, "model name sent to the endpoint");
  cmd->add_option("--credential-var", opt.credential_var,
                  "environment variable holding the API credential")
      ->capture_default_str();
  cmd->add_option("--mock-script", opt.mock_script,
                  "scripted offline client (JSON file)");
  cmd->add_option("--jobs", opt.jobs, "parallel scenario workers")
      ->capture_default_str();
  cmd->add_option("--temperature", opt.temperature, "sampling temperature")
      ->capture_default_str();
  cmd->add_option("--seed", opt.seed, "completion seed");
}

struct ConfigResult {
  EvalConfig config;
  std::unique_ptr<LlmClient> client;
};

// Builds the eval config and (when the approach needs one) the client.
// Throws CLI::ValidationError-style runtime errors mapped to exit code 1,
// or ScenarioError (exit 2) for unreadable mock scripts.
ConfigResult make_config(const CommonOptions& opt) {
  ConfigResult out;
  auto approach = parse_approach(opt.approach);
  if (!approach)
    throw std::invalid_argument("unknown --approach '" + opt.approach + "'");
  out.config.approach = *approach;
  out.config.knowledge = opt.knowledge;
  out.config.jobs = opt.jobs;
  out.config.budget.max_expansions = opt.max_expansions;
  out.config.budget.max_depth = opt.max_depth;
  out.config.budget.wall_clock =
      std::chrono::milliseconds(static_cast<long>(opt.timeout_s * 1000.0));
  out.config.loop.max_rounds = opt.max_rounds;
  out.config.loop.params.temperature = opt.temperature;
  out.config.loop.params.seed = opt.seed;
  out.config.loop.retry_base_delay = std::chrono::milliseconds(500);

  if (opt.variant == "one_shot")
    out.config.loop.variant = LoopVariant::one_shot;
  else if (opt.variant == "multi_a")
    out.config.loop.variant = LoopVariant::multi_a;
  else if (opt.variant == "multi_b")
    out.config.loop.variant = LoopVariant::multi_b;
  else
    throw std::invalid_argument("unknown --variant '" + opt.variant + "'");

  if (!opt.endpoint.empty() && !opt.mock_script.empty())
    throw std::invalid_argument(
        "exactly one of --endpoint or --mock-script may be active per run");

  const bool needs_client = *approach != Approach::search;
  if (!opt.mock_script.empty()) {
    out.client = std::make_unique<MockLlmClient>(
        MockLlmClient::from_file(opt.mock_script));
  } else if (!opt.endpoint.empty()) {
    if (opt.model.empty())
      throw std::invalid_argument("--endpoint requires --model");
    HttpClientConfig http;
    http.endpoint = opt.endpoint;
    http.model = opt.model;
    http.credential_env = opt.credential_var;
    out.client = std::make_unique<HttpLlmClient>(http);
  } else if (needs_client) {
    throw std::invalid_argument(
        "approach '" + opt.approach +
        "' needs a client: pass --endpoint or --mock-script");
  }
  return out;
}

int cmd_synth(const std::string& scenario_path, const CommonOptions& opt) {
  ConfigResult cfg = make_config(opt);
  Scenario scenario = load_scenario_file(scenario_path);

  std::optional<Program> program;
  std::string solver;
  std::string failure;

  switch (cfg.config.approach) {
    case Approach::search: {
      SynthesisResult r = synthesize(scenario.example_input,
                                     scenario.example_output,
                                     cfg.config.budget);
      solver = "search";
      if (r.solved)
        program = std::move(r.program);
      else
        failure = std::string("search exhausted: ") + to_string(r.reason);
      std::cerr << "search: expanded " << r.stats.expanded << ", generated "
                << r.stats.generated << ", duplicates "
                << r.stats.duplicates_pruned << "\n";
      break;
    }
    case Approach::llm_one_shot:
    case Approach::llm_multi_a:
    case Approach::llm_multi_b: {
      LoopConfig loop = cfg.config.loop;
      loop.knowledge = cfg.config.knowledge;
      loop.variant = cfg.config.approach == Approach::llm_one_shot
                         ? LoopVariant::one_shot
                     : cfg.config.approach == Approach::llm_multi_a
                         ? LoopVariant::multi_a
                         : LoopVariant::multi_b;
      AttemptTranscript t = run_loop(scenario, *cfg.client, loop);
      solver = "llm";
      if (t.solved)
        program = t.program;
      else
        failure = t.client_failure.value_or("repair loop failed");
      std::cerr << "loop: " << t.rounds.size() << " round(s)\n";
      break;
    }
    case Approach::hybrid: {
      LoopConfig loop = cfg.config.loop;
      loop.knowledge = cfg.config.knowledge;
      HybridOutcome h =
          solve_hybrid(scenario, cfg.config.budget, loop, *cfg.client);
      solver = to_string(h.solver);
      program = h.program;
      if (!program) failure = "hybrid: search exhausted and repair loop failed";
      break;
    }
  }

  if (!program) {
    std::cout << "unsolved: " << failure << "\n";
    return kExitUnsolved;
  }

  std::cout << "solver: " << solver << "\n";
  std::cout << "program: " << print_program(*program) << "\n";

  bool all_match = true;
  {
    const Table replay = interpret(*program, scenario.example_input);
    const bool ok = tables_equal(replay, scenario.example_output);
    all_match &= ok;
    std::cout << "example: " << (ok ? "match" : "mismatch") << "\n";
  }
  for (std::size_t i = 0; i < scenario.tests.size(); ++i) {
    std::string status;
    try {
      const Table actual = interpret(*program, scenario.tests[i].input);
      status = tables_equal(actual, scenario.tests[i].expected_output)
                   ? "match"
                   : "mismatch";
    } catch (const InterpError& e) {
      status = std::string("error: ") + e.what();
    }
    if (status != "match") all_match = false;
    std::cout << "test[" << i << "]: " << status << "\n";
  }
  return all_match ? kExitOk : kExitUnsolved;
}

int cmd_eval(const std::string& corpus_dir, const std::string& out_dir,
             const CommonOptions& opt) {
  ConfigResult cfg = make_config(opt);
  ScenarioSet corpus = load_scenario_dir(corpus_dir);
  EvalResult result = run_eval(corpus, cfg.config, cfg.client.get());
  write_reports(result, out_dir);

  std::cout << "evaluated " << result.records.size() << " scenario(s); "
            << "overall(weighted) = ";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", result.overall.overall);
  std::cout << buf << "\nreports written to " << out_dir << "\n";
  return kExitOk;
}

int cmd_import(const std::string& in_path, const std::string& out_path) {
  std::ifstream in(in_path);
  if (!in) throw ScenarioError("cannot read legacy scenario: " + in_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  Scenario s = import_legacy_scenario(buf.str());
  const std::string canonical = serialize_scenario(s);
  if (out_path.empty() || out_path == "-") {
    std::cout << canonical;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
      throw ScenarioError("cannot write scenario file: " + out_path);
    out << canonical;
    std::cout << "imported '" << s.name << "' -> " << out_path << "\n";
  }
  return kExitOk;
}

int cmd_report(const std::string& scenario_dir, const std::string& out_dir) {
  EvalResult result;
  result.records = load_scenario_records(scenario_dir);
  if (result.records.empty())
    throw ScenarioError("no scenario records in " + scenario_dir);
  result.overall = aggregate(result.records);
  write_reports(result, out_dir);
  std::cout << "re-aggregated " << result.records.size()
            << " scenario record(s) into " << out_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tabsynth: table-transformation program synthesis and "
               "evaluation"};
  app.require_subcommand(1);

  CommonOptions opt;

  std::string scenario_path;
  CLI::App* synth = app.add_subcommand(
      "synth", "synthesize a program for one scenario and replay its tests");
  synth->add_option("scenario", scenario_path, "scenario file (.json)")
      ->required();
  add_common_flags(synth, opt);

  std::string corpus_dir, out_dir = "eval_out";
  CLI::App* eval = app.add_subcommand(
      "eval", "evaluate an approach over a scenario corpus");
  eval->add_option("--corpus", corpus_dir, "directory of scenario .json files")
      ->required();
  eval->add_option("--out", out_dir, "report output directory")
      ->capture_default_str();
  add_common_flags(eval, opt);

  std::string import_in, import_out;
  CLI::App* import_cmd = app.add_subcommand(
      "import", "convert a legacy scenario file to the canonical format");
  import_cmd->add_option("--in", import_in, "legacy scenario file")
      ->required();
  import_cmd->add_option("--out", import_out,
                         "output .json path ('-' for stdout)");

  std::string report_scen_dir, report_out = "report_out";
  CLI::App* report = app.add_subcommand(
      "report", "re-aggregate reports from per-scenario record files");
  report->add_option("--scenarios", report_scen_dir,
                     "scenarios/ directory written by eval")
      ->required();
  report->add_option("--out", report_out, "report output directory")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (synth->parsed()) return cmd_synth(scenario_path, opt);
    if (eval->parsed()) return cmd_eval(corpus_dir, out_dir, opt);
    if (import_cmd->parsed()) return cmd_import(import_in, import_out);
    if (report->parsed()) return cmd_report(report_scen_dir, report_out);
  } catch (const ScenarioError& e) {
    std::cerr << "ingestion error: " << e.what() << "\n";
    return kExitIngestion;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ClientError& e) {
    std::cerr << "client error (" << to_string(e.kind) << "): " << e.what()
              << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
