#include "tabsynth/ted.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <string_view>
#include <unordered_map>

namespace tabsynth {

namespace {

struct FlatCell {
  Coord at;
  const std::string* value;
};

// Row-major flattening; the vector index is the cell's ordinal.
std::vector<FlatCell> flatten(const Table& t) {
  std::vector<FlatCell> cells;
  cells.reserve(t.cell_count());
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    for (std::size_t c = 0; c < t.rows[r].size(); ++c)
      cells.push_back({{static_cast<int>(r), static_cast<int>(c)},
                       &t.rows[r][c]});
  return cells;
}

}  // namespace

CellMap cell_map(const Table& t) {
  CellMap m;
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    for (std::size_t c = 0; c < t.rows[r].size(); ++c)
      m[{static_cast<int>(r), static_cast<int>(c)}] = t.rows[r][c];
  return m;
}

CellMap apply_edit_path(const EditPath& path, const Table& from) {
  CellMap state = cell_map(from);
  // Values carried by moves are read from the pre-edit table.
  std::vector<std::pair<Coord, std::string>> placements;
  for (const auto& e : path.edits) {
    switch (e.kind) {
      case CellEdit::Kind::remove:
        state.erase(e.from);
        break;
      case CellEdit::Kind::move: {
        auto it = state.find(e.from);
        if (it != state.end()) {
          placements.emplace_back(e.to, it->second);
          state.erase(it);
        }
        break;
      }
      case CellEdit::Kind::transform:
        placements.emplace_back(e.to, e.value);
        break;
      case CellEdit::Kind::add:
        placements.emplace_back(e.to, e.value);
        break;
    }
  }
  for (auto& [at, value] : placements) state[at] = std::move(value);
  return state;
}

EditPath ted_greedy_path(const Table& t1, const Table& t2) {
  const std::vector<FlatCell> src = flatten(t1);
  const std::vector<FlatCell> tgt = flatten(t2);

  std::vector<bool> src_used(src.size(), false);
  std::vector<int> tgt_match(tgt.size(), -1);  // source ordinal or -1

  // Coordinate lookup for t1 plus a per-value index of source ordinals
  // (already sorted because flattening is row-major).
  std::map<Coord, int> src_at;
  for (std::size_t i = 0; i < src.size(); ++i) src_at[src[i].at] = static_cast<int>(i);
  std::unordered_map<std::string_view, std::vector<int>> by_value;
  for (std::size_t i = 0; i < src.size(); ++i)
    by_value[*src[i].value].push_back(static_cast<int>(i));

  // Pass 1: equal value at the identical coordinate.
  for (std::size_t j = 0; j < tgt.size(); ++j) {
    auto it = src_at.find(tgt[j].at);
    if (it != src_at.end() && !src_used[it->second] &&
        *src[it->second].value == *tgt[j].value) {
      tgt_match[j] = it->second;
      src_used[it->second] = true;
    }
  }

  // Pass 2: nearest unused equal-value source by row-major ordinal distance;
  // ties prefer the smaller source ordinal.
  for (std::size_t j = 0; j < tgt.size(); ++j) {
    if (tgt_match[j] != -1) continue;
    auto it = by_value.find(*tgt[j].value);
    if (it == by_value.end()) continue;
    int best = -1;
    long best_dist = 0;
    for (int cand : it->second) {
      if (src_used[cand]) continue;
      long dist = std::labs(static_cast<long>(cand) - static_cast<long>(j));
      if (best == -1 || dist < best_dist) {
        best = cand;
        best_dist = dist;
      }
      if (dist > best_dist && cand > static_cast<int>(j)) break;  // sorted: only grows
    }
    if (best != -1) {
      tgt_match[j] = best;
      src_used[best] = true;
    }
  }

  EditPath path;
  // Matched pairs: in place for free, moved for cost 1.
  for (std::size_t j = 0; j < tgt.size(); ++j) {
    if (tgt_match[j] == -1) continue;
    const FlatCell& s = src[tgt_match[j]];
    if (s.at != tgt[j].at)
      path.edits.push_back(
          {CellEdit::Kind::move, s.at, tgt[j].at, {}, 1});
  }
  // Unmatched targets: transform when the source coordinate still holds an
  // unused cell, otherwise add.
  for (std::size_t j = 0; j < tgt.size(); ++j) {
    if (tgt_match[j] != -1) continue;
    auto it = src_at.find(tgt[j].at);
    if (it != src_at.end() && !src_used[it->second]) {
      src_used[it->second] = true;
      path.edits.push_back({CellEdit::Kind::transform, tgt[j].at, tgt[j].at,
                            *tgt[j].value, 1});
    } else {
      path.edits.push_back(
          {CellEdit::Kind::add, {}, tgt[j].at, *tgt[j].value, 1});
    }
  }
  // Unmatched sources.
  for (std::size_t i = 0; i < src.size(); ++i)
    if (!src_used[i])
      path.edits.push_back({CellEdit::Kind::remove, src[i].at, src[i].at, {}, 1});

  for (const auto& e : path.edits) path.total_cost += e.cost;
  return path;
}

int ted_greedy(const Table& t1, const Table& t2) {
  return ted_greedy_path(t1, t2).total_cost;
}

namespace {

// One batch is a maximal straight run of same-kind edit cells: consecutive
// columns within one row, or consecutive rows within one column. The
// partition is deterministic: scan cells in row-major order and grow each
// new run rightward first, downward only when there is no right neighbor.
// `cells` must be sorted row-major and duplicate-free.
int count_runs(const std::vector<Coord>& cells) {
  const std::size_t n = cells.size();
  std::vector<bool> assigned(n, false);
  auto find_cell = [&cells](const Coord& at) -> long {
    auto it = std::lower_bound(cells.begin(), cells.end(), at);
    if (it == cells.end() || *it != at) return -1;
    return it - cells.begin();
  };
  int runs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (assigned[i]) continue;
    ++runs;
    assigned[i] = true;
    Coord cur = cells[i];
    bool grew_right = false;
    for (long j = find_cell({cur.row, cur.col + 1}); j != -1;
         j = find_cell({cur.row, cur.col + 1})) {
      if (assigned[static_cast<std::size_t>(j)]) break;
      assigned[static_cast<std::size_t>(j)] = true;
      grew_right = true;
      ++cur.col;
    }
    if (grew_right) continue;
    for (long j = find_cell({cur.row + 1, cur.col}); j != -1;
         j = find_cell({cur.row + 1, cur.col})) {
      if (assigned[static_cast<std::size_t>(j)]) break;
      assigned[static_cast<std::size_t>(j)] = true;
      ++cur.row;
    }
  }
  return runs;
}

}  // namespace

// Fused hot path: the same matching as ted_greedy_path and the same group
// pricing, counted without materializing an EditPath. The search heuristic
// calls this once per novel state, so the per-call scratch is reused.
int ted_batch(const Table& t1, const Table& t2) {
  thread_local std::vector<std::uint8_t> src_used;
  thread_local std::vector<std::size_t> row_offset;
  thread_local std::vector<int> tgt_match;

  const std::size_t n_rows = t1.rows.size();
  row_offset.assign(n_rows + 1, 0);
  for (std::size_t r = 0; r < n_rows; ++r)
    row_offset[r + 1] = row_offset[r] + t1.rows[r].size();
  const std::size_t n_src = row_offset[n_rows];
  src_used.assign(n_src, 0);

  const std::size_t n_tgt = t2.cell_count();
  tgt_match.assign(n_tgt, -1);

  auto src_cell = [&](std::size_t r, std::size_t c) -> const std::string& {
    return t1.rows[r][c];
  };
  auto src_ord = [&](std::size_t r, std::size_t c) {
    return row_offset[r] + c;
  };

  // Pass 1: equal value at the identical coordinate.
  {
    std::size_t j = 0;
    for (std::size_t r = 0; r < t2.rows.size(); ++r)
      for (std::size_t c = 0; c < t2.rows[r].size(); ++c, ++j)
        if (r < n_rows && c < t1.rows[r].size() &&
            src_cell(r, c) == t2.rows[r][c]) {
          tgt_match[j] = static_cast<int>(src_ord(r, c));
          src_used[src_ord(r, c)] = 1;
        }
  }

  // Pass 2: nearest unused equal-value source by ordinal distance; ties to
  // the smaller source ordinal (ascending scan with strict improvement).
  {
    std::size_t j = 0;
    for (std::size_t r = 0; r < t2.rows.size(); ++r)
      for (std::size_t c = 0; c < t2.rows[r].size(); ++c, ++j) {
        if (tgt_match[j] != -1) continue;
        const std::string& want = t2.rows[r][c];
        long best = -1, best_dist = 0;
        std::size_t ord = 0;
        for (std::size_t sr = 0; sr < n_rows; ++sr)
          for (std::size_t sc = 0; sc < t1.rows[sr].size(); ++sc, ++ord) {
            if (src_used[ord] || t1.rows[sr][sc] != want) continue;
            const long dist =
                std::labs(static_cast<long>(ord) - static_cast<long>(j));
            if (best == -1 || dist < best_dist) {
              best = static_cast<long>(ord);
              best_dist = dist;
            } else if (static_cast<long>(ord) > static_cast<long>(j)) {
              break;  // ordinals ascend; distance only grows from here
            }
          }
        if (best != -1) {
          tgt_match[j] = static_cast<int>(best);
          src_used[static_cast<std::size_t>(best)] = 1;
        }
      }
  }

  // Ordinal -> coordinate for t1.
  auto src_coord = [&](std::size_t ord) -> Coord {
    std::size_t r = 0;
    while (row_offset[r + 1] <= ord) ++r;
    return {static_cast<int>(r), static_cast<int>(ord - row_offset[r])};
  };

  // Move anchors are grouped per displacement; adds and transforms by their
  // target coordinates (already in row-major order from the scan).
  thread_local std::map<Coord, std::vector<Coord>> moves_by_disp;
  thread_local std::vector<Coord> adds, transforms, removes;
  for (auto& [disp, list] : moves_by_disp) list.clear();
  adds.clear();
  transforms.clear();
  removes.clear();
  {
    std::size_t j = 0;
    for (std::size_t r = 0; r < t2.rows.size(); ++r)
      for (std::size_t c = 0; c < t2.rows[r].size(); ++c, ++j) {
        const Coord at{static_cast<int>(r), static_cast<int>(c)};
        if (tgt_match[j] != -1) {
          const Coord from = src_coord(static_cast<std::size_t>(tgt_match[j]));
          if (from != at)
            moves_by_disp[{at.row - from.row, at.col - from.col}]
                .push_back(from);
          continue;
        }
        // Unmatched target: transform the unused occupant, else add.
        if (r < n_rows && c < t1.rows[r].size() && !src_used[src_ord(r, c)]) {
          src_used[src_ord(r, c)] = 1;
          transforms.push_back(at);
        } else {
          adds.push_back(at);
        }
      }
  }
  // Remaining unused source cells are removes, collected row-major.
  for (std::size_t r = 0; r < n_rows; ++r)
    for (std::size_t c = 0; c < t1.rows[r].size(); ++c)
      if (!src_used[src_ord(r, c)])
        removes.push_back({static_cast<int>(r), static_cast<int>(c)});

  int groups = count_runs(adds) + count_runs(transforms) + count_runs(removes);
  for (auto& [disp, list] : moves_by_disp) {
    if (list.empty()) continue;
    std::sort(list.begin(), list.end());
    groups += count_runs(list);
  }
  return groups;
}

namespace {

struct ExactInstance {
  std::vector<FlatCell> src;
  std::vector<FlatCell> tgt;
  std::map<Coord, int> src_at;
};

// Depth-first enumeration of edit paths with the running cost capped at
// `limit`. Each target cell is either matched in place (0), moved from an
// equal-value source (1), transformed from the source occupying its
// coordinate (1), or added (1); leftover sources are removed (1 each).
bool exact_feasible(const ExactInstance& inst, std::size_t t_idx, int spent,
                    int limit, std::vector<bool>& used) {
  if (spent > limit) return false;
  if (t_idx == inst.tgt.size()) {
    int removes = 0;
    for (bool u : used)
      if (!u) ++removes;
    return spent + removes <= limit;
  }
  const FlatCell& t = inst.tgt[t_idx];
  const auto at_same = inst.src_at.find(t.at);

  // in-place match
  if (at_same != inst.src_at.end() && !used[at_same->second] &&
      *inst.src[at_same->second].value == *t.value) {
    used[at_same->second] = true;
    if (exact_feasible(inst, t_idx + 1, spent, limit, used)) return true;
    used[at_same->second] = false;
  }
  // move from an equal-value source elsewhere
  for (std::size_t i = 0; i < inst.src.size(); ++i) {
    if (used[i] || inst.src[i].at == t.at) continue;
    if (*inst.src[i].value != *t.value) continue;
    used[i] = true;
    if (exact_feasible(inst, t_idx + 1, spent + 1, limit, used)) return true;
    used[i] = false;
  }
  // transform the occupant of this coordinate
  if (at_same != inst.src_at.end() && !used[at_same->second] &&
      *inst.src[at_same->second].value != *t.value) {
    used[at_same->second] = true;
    if (exact_feasible(inst, t_idx + 1, spent + 1, limit, used)) return true;
    used[at_same->second] = false;
  }
  // add
  return exact_feasible(inst, t_idx + 1, spent + 1, limit, used);
}

}  // namespace

int ted_exact(const Table& t1, const Table& t2, std::size_t cell_budget) {
  const std::size_t total = t1.cell_count() + t2.cell_count();
  if (total > cell_budget)
    throw TedBudgetError("ted_exact cell budget exceeded: " +
                         std::to_string(total) + " > " +
                         std::to_string(cell_budget));
  ExactInstance inst;
  inst.src = flatten(t1);
  inst.tgt = flatten(t2);
  for (std::size_t i = 0; i < inst.src.size(); ++i)
    inst.src_at[inst.src[i].at] = static_cast<int>(i);

  for (int limit = 0; limit <= static_cast<int>(total); ++limit) {
    std::vector<bool> used(inst.src.size(), false);
    if (exact_feasible(inst, 0, 0, limit, used)) return limit;
  }
  return static_cast<int>(total);  // remove-all-then-add-all always works
}

}  // namespace tabsynth
