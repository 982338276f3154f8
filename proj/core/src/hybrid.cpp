#include "tabsynth/hybrid.hpp"

namespace tabsynth {

const char* to_string(HybridSolver s) {
  switch (s) {
    case HybridSolver::search: return "search";
    case HybridSolver::llm: return "llm";
    case HybridSolver::failed: return "failed";
  }
  return "unknown";
}

HybridOutcome solve_hybrid(const Scenario& s, const SearchBudget& budget,
                           const LoopConfig& llm_config, LlmClient& client,
                           ProgramExecutor* executor) {
  HybridOutcome outcome;
  SynthesisResult search =
      synthesize(s.example_input, s.example_output, budget);
  outcome.search_stats = search.stats;
  if (search.solved) {
    outcome.solver = HybridSolver::search;
    outcome.program = std::move(search.program);
    return outcome;
  }

  outcome.routed_to_llm = true;
  AttemptTranscript transcript = run_loop(s, client, llm_config, executor);
  if (transcript.solved) {
    outcome.solver = HybridSolver::llm;
    outcome.program = transcript.program;
  } else {
    outcome.solver = HybridSolver::failed;
  }
  outcome.transcript = std::move(transcript);
  return outcome;
}

}  // namespace tabsynth
