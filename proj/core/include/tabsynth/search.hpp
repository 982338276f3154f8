#pragma once

#include "tabsynth/dsl.hpp"
#include "tabsynth/table.hpp"

#include <chrono>
#include <cstddef>
#include <vector>

namespace tabsynth {

struct SearchBudget {
  std::size_t max_expansions = 200000;
  std::size_t max_depth = 8;  // maximum program length
  std::chrono::milliseconds wall_clock{30000};
};

enum class ExhaustionReason {
  max_expansions,
  wall_clock,
  search_space,  // frontier emptied under the depth cap
};

const char* to_string(ExhaustionReason r);

struct SearchStats {
  std::size_t expanded = 0;
  std::size_t generated = 0;
  std::size_t duplicates_pruned = 0;
  std::size_t relevance_pruned = 0;
  std::chrono::microseconds elapsed{0};
};

struct SynthesisResult {
  bool solved = false;
  Program program;  // valid iff solved
  ExhaustionReason reason = ExhaustionReason::search_space;
  SearchStats stats;
};

struct SearchOptions {
  // f = g + heuristic_weight * h. The default is plain g + h.
  double heuristic_weight = 1.0;
  // Diagnostic mode: forces h = 0, degrading to uniform-cost search.
  bool use_heuristic = true;
};

// Deterministic candidate operators for one expansion step. Column-indexed
// operators range over the state's widest row; separators (split delimiters
// and merge glues) are the whitespace/punctuation characters occurring in
// the target's cells, plus the empty glue; regex parameters come from a
// fixed template library (digit runs, four-digit runs, and leading/trailing
// tokens around each candidate separator).
std::vector<Operator> enumerate_instantiations(const Table& state,
                                               const Table& target);

// Best-first search for a program mapping example_input to example_output.
// Nodes are ordered by f (ties: smaller h, then insertion order), states are
// deduplicated by content hash with full comparison on collision (the first
// path to a state wins), and the goal test runs when a node is popped.
//
// Expansion additionally applies two relevance prunes that keep the junk
// subspace out of the frontier: a child is discarded when (a) the count of
// cells holding a value the target needs falls below min(needed count,
// parent count) - destroying needed content is never progress - or (b) a
// merge produced a cell that is neither empty nor a substring of any target
// cell. Both rules are deterministic functions of (parent, op, child).
//
// A solved result's program has been replayed and checked before returning.
SynthesisResult synthesize(const Table& example_input,
                           const Table& example_output,
                           const SearchBudget& budget,
                           const SearchOptions& options = {});

}  // namespace tabsynth
