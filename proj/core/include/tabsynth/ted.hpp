#pragma once

#include "tabsynth/table.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tabsynth {

// Cell coordinate: (row, column).
struct Coord {
  int row = 0;
  int col = 0;
  auto operator<=>(const Coord&) const = default;
};

// One cell-level edit under the uniform cost model (cost 1 each):
//   add        places a new value at a vacant coordinate
//   remove     deletes the cell at a coordinate
//   move       relocates a cell's value to a vacant coordinate
//   transform  rewrites the value at an occupied coordinate
struct CellEdit {
  enum class Kind { add, remove, move, transform };
  Kind kind;
  Coord from;         // source coordinate (remove, move, transform)
  Coord to;           // target coordinate (add, move, transform)
  std::string value;  // new value (add, transform)
  int cost = 1;

  bool operator==(const CellEdit&) const = default;
};

struct EditPath {
  std::vector<CellEdit> edits;
  int total_cost = 0;
};

// Sparse view of a table's cells. Two tables with the same occupied
// coordinates and values are indistinguishable to the edit model.
using CellMap = std::map<Coord, std::string>;

CellMap cell_map(const Table& t);

// Applies an edit path to a table: all vacations (removes and move sources)
// first, then all placements. Edits produced by ted_greedy_path touch
// disjoint cells, so the result is well defined.
CellMap apply_edit_path(const EditPath& path, const Table& from);

// Greedy feasible edit path from t1 to t2. Matching order: equal values at
// identical coordinates first (cost 0), then for each remaining target cell
// in row-major order the nearest unused equal-value source cell, where
// distance is the difference of row-major ordinals and ties go to the
// smaller source ordinal (cost 1, a move). Unmatched target cells cost 1
// (transform when the coordinate is still occupied, add otherwise);
// unmatched source cells cost 1 (remove).
EditPath ted_greedy_path(const Table& t1, const Table& t2);

int ted_greedy(const Table& t1, const Table& t2);

// Greedy edit set re-priced with batching: a maximal run of same-kind edits
// on adjacent cells (consecutive columns within one row, or consecutive
// rows within one column; moves additionally need an identical
// displacement) costs 1 in total. Runs are carved out deterministically by
// a row-major scan that grows each run rightward first and downward only
// when no right neighbor exists. Never exceeds ted_greedy.
int ted_batch(const Table& t1, const Table& t2);

struct TedBudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact minimum edit cost by iterative-deepening enumeration over edit
// paths. Throws TedBudgetError unless cells(t1) + cells(t2) <= cell_budget
// (intended for tiny instances; keep the budget at or below ~8).
int ted_exact(const Table& t1, const Table& t2, std::size_t cell_budget = 6);

}  // namespace tabsynth
