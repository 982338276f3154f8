#include "tabsynth/interpret.hpp"

#include <algorithm>
#include <regex>
#include <unordered_map>

namespace tabsynth {

namespace {

// Compiled-pattern cache. Patterns come from small fixed candidate sets, so
// an unbounded per-thread map stays tiny in practice.
const std::regex& compiled(const std::string& pattern) {
  thread_local std::unordered_map<std::string, std::regex> cache;
  auto it = cache.find(pattern);
  if (it != cache.end()) return it->second;
  try {
    auto [pos, inserted] = cache.emplace(
        pattern, std::regex(pattern, std::regex::ECMAScript));
    return pos->second;
  } catch (const std::regex_error& e) {
    throw InterpError("pattern error: invalid regex \"" + pattern +
                      "\": " + e.what());
  }
}

// Every row must have a cell at index c.
void require_column(const Table& t, int c) {
  if (c < 0) throw InterpError("negative column index");
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    if (t.rows[r].size() <= static_cast<std::size_t>(c))
      throw InterpError("column " + std::to_string(c) +
                        " out of range: row " + std::to_string(r) + " has " +
                        std::to_string(t.rows[r].size()) + " cell(s)");
}

Table op_drop(const Table& t, int c) {
  Table out;
  out.rows.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    Row r = row;
    if (static_cast<std::size_t>(c) < r.size())
      r.erase(r.begin() + c);
    out.rows.push_back(std::move(r));
  }
  return out;
}

Table op_copy(const Table& t, const Operator& op) {
  require_column(t, op.a);
  Table out;
  out.rows.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    Row r = row;
    r.insert(r.begin() + op.a + 1, r[op.a]);
    out.rows.push_back(std::move(r));
  }
  return out;
}

Table op_move(const Table& t, const Operator& op) {
  if (op.a < 0 || op.b < 0) throw InterpError("negative column index");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::size_t w = t.rows[i].size();
    if (static_cast<std::size_t>(op.a) >= w ||
        static_cast<std::size_t>(op.b) >= w)
      throw InterpError("column " +
                        std::to_string(std::max(op.a, op.b)) +
                        " out of range: row " + std::to_string(i) + " has " +
                        std::to_string(w) + " cell(s)");
  }
  Table out;
  out.rows.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    Row r = row;
    Cell moved = std::move(r[op.a]);
    r.erase(r.begin() + op.a);
    r.insert(r.begin() + op.b, std::move(moved));
    out.rows.push_back(std::move(r));
  }
  return out;
}

Table op_merge(const Table& t, const Operator& op) {
  require_column(t, op.a);
  require_column(t, op.b);
  Table out;
  out.rows.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    Row r = row;
    Cell merged = r[op.a] + op.text + r[op.b];
    const int lo = std::min(op.a, op.b);
    const int hi = std::max(op.a, op.b);
    r[lo] = std::move(merged);
    if (hi != lo) r.erase(r.begin() + hi);
    out.rows.push_back(std::move(r));
  }
  return out;
}

Table op_split(const Table& t, const Operator& op) {
  require_column(t, op.a);
  Table out;
  out.rows.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    Row r = row;
    const Cell cell = r[op.a];
    std::size_t at = cell.find(op.text);
    Cell left, right;
    if (at == std::string::npos) {
      left = cell;
    } else {
      left = cell.substr(0, at);
      right = cell.substr(at + op.text.size());
    }
    r[op.a] = std::move(left);
    r.insert(r.begin() + op.a + 1, std::move(right));
    out.rows.push_back(std::move(r));
  }
  return out;
}

Table op_fold(const Table& t, const Operator& op) {
  if (op.a < 0) throw InterpError("negative column index");
  const auto c = static_cast<std::size_t>(op.a);
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    if (t.rows[i].size() < c)
      throw InterpError("column " + std::to_string(op.a) +
                        " out of range: row " + std::to_string(i) + " has " +
                        std::to_string(t.rows[i].size()) + " cell(s)");
  Table out;
  for (const auto& row : t.rows) {
    for (std::size_t j = c; j < row.size(); ++j) {
      Row r(row.begin(), row.begin() + c);
      r.push_back(row[j]);
      out.rows.push_back(std::move(r));
    }
  }
  return out;
}

Table op_unfold(const Table& t, const Operator& op) {
  require_column(t, op.a);
  const auto key = static_cast<std::size_t>(op.a);
  Table out;
  std::size_t i = 0;
  while (i < t.rows.size()) {
    std::size_t run_end = i + 1;
    while (run_end < t.rows.size() &&
           t.rows[run_end][key] == t.rows[i][key])
      ++run_end;
    Row r;
    r.push_back(t.rows[i][key]);
    for (std::size_t k = i; k < run_end; ++k)
      for (std::size_t j = 0; j < t.rows[k].size(); ++j)
        if (j != key) r.push_back(t.rows[k][j]);
    out.rows.push_back(std::move(r));
    i = run_end;
  }
  return out;
}

Table op_fill(const Table& t, const Operator& op) {
  require_column(t, op.a);
  Table out = t;
  const Cell* last = nullptr;
  for (auto& row : out.rows) {
    Cell& cell = row[op.a];
    if (cell.empty()) {
      if (last) cell = *last;
    } else {
      last = &cell;
    }
  }
  return out;
}

Table op_delete_row(const Table& t, const Operator& op) {
  if (op.a < 0 || static_cast<std::size_t>(op.a) >= t.rows.size())
    throw InterpError("row " + std::to_string(op.a) +
                      " out of range: table has " +
                      std::to_string(t.rows.size()) + " row(s)");
  Table out = t;
  out.rows.erase(out.rows.begin() + op.a);
  return out;
}

Table op_delete_empty(const Table& t, const Operator& op) {
  Table out;
  out.rows.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    const bool absent = op.a < 0 ||
                        static_cast<std::size_t>(op.a) >= row.size() ||
                        row[op.a].empty();
    if (!absent) out.rows.push_back(row);
  }
  return out;
}

Table op_delete_match(const Table& t, const Operator& op) {
  require_column(t, op.a);
  const std::regex& re = compiled(op.text);
  Table out;
  out.rows.reserve(t.rows.size());
  for (const auto& row : t.rows)
    if (!std::regex_search(row[op.a], re)) out.rows.push_back(row);
  return out;
}

Table op_extract(const Table& t, const Operator& op) {
  require_column(t, op.a);
  const std::regex& re = compiled(op.text);
  Table out = t;
  for (auto& row : out.rows) {
    std::smatch m;
    row[op.a] = std::regex_search(row[op.a], m, re) ? m.str(0) : Cell{};
  }
  return out;
}

Table op_divide(const Table& t, const Operator& op) {
  require_column(t, op.a);
  const std::regex& re = compiled(op.text);
  Table out;
  out.rows.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    Row r = row;
    if (std::regex_search(r[op.a], re)) {
      r.insert(r.begin() + op.a + 1, Cell{});
    } else {
      r.insert(r.begin() + op.a, Cell{});
    }
    out.rows.push_back(std::move(r));
  }
  return out;
}

Table op_transpose(const Table& t) {
  const Table padded = pad_rectangular(t);
  const std::size_t w = padded.max_width();
  Table out;
  out.rows.resize(w);
  for (std::size_t c = 0; c < w; ++c) {
    out.rows[c].reserve(padded.rows.size());
    for (const auto& row : padded.rows) out.rows[c].push_back(row[c]);
  }
  return out;
}

Table op_wrap(const Table& t, const Operator& op) {
  if (op.a <= 0) throw InterpError("wrap count must be positive");
  const auto k = static_cast<std::size_t>(op.a);
  Table out;
  for (std::size_t i = 0; i < t.rows.size(); i += k) {
    Row r;
    for (std::size_t j = i; j < std::min(i + k, t.rows.size()); ++j)
      r.insert(r.end(), t.rows[j].begin(), t.rows[j].end());
    out.rows.push_back(std::move(r));
  }
  return out;
}

}  // namespace

Table apply_operator(const Table& t, const Operator& op) {
  switch (op.kind) {
    case OpKind::drop:
      if (op.a < 0) throw InterpError("negative column index");
      return op_drop(t, op.a);
    case OpKind::copy: return op_copy(t, op);
    case OpKind::move: return op_move(t, op);
    case OpKind::merge: return op_merge(t, op);
    case OpKind::split: return op_split(t, op);
    case OpKind::fold: return op_fold(t, op);
    case OpKind::unfold: return op_unfold(t, op);
    case OpKind::fill: return op_fill(t, op);
    case OpKind::delete_row: return op_delete_row(t, op);
    case OpKind::delete_empty: return op_delete_empty(t, op);
    case OpKind::delete_match: return op_delete_match(t, op);
    case OpKind::extract: return op_extract(t, op);
    case OpKind::divide: return op_divide(t, op);
    case OpKind::transpose: return op_transpose(t);
    case OpKind::wrap: return op_wrap(t, op);
  }
  throw InterpError("unknown operator kind");
}

Table interpret(const Program& p, const Table& t) {
  Table state = t;
  for (std::size_t i = 0; i < p.ops.size(); ++i) {
    try {
      state = apply_operator(state, p.ops[i]);
    } catch (const InterpError& e) {
      throw InterpError("op[" + std::to_string(i) + "] " +
                            print_operator(p.ops[i]) + ": " + e.what(),
                        static_cast<int>(i));
    }
  }
  return state;
}

}  // namespace tabsynth
