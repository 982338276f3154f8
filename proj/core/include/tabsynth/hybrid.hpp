#pragma once

#include "tabsynth/llm.hpp"
#include "tabsynth/scenario.hpp"
#include "tabsynth/search.hpp"

#include <optional>

namespace tabsynth {

enum class HybridSolver { search, llm, failed };

const char* to_string(HybridSolver s);

struct HybridOutcome {
  HybridSolver solver = HybridSolver::failed;
  std::optional<Program> program;
  bool routed_to_llm = false;
  SearchStats search_stats;
  std::optional<AttemptTranscript> transcript;  // present iff routed
};

// Search-first dispatch: run the synthesizer on the example pair; only a
// budget-exhausted search routes the scenario to the repair loop, so a
// search win makes zero client calls.
HybridOutcome solve_hybrid(const Scenario& s, const SearchBudget& budget,
                           const LoopConfig& llm_config, LlmClient& client,
                           ProgramExecutor* executor = nullptr);

}  // namespace tabsynth
