#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace tabsynth {

// A cell is raw text. The empty string denotes a blank cell; comparison is
// byte-wise, never trimmed, case-folded, or coerced to numbers.
using Cell = std::string;
using Row = std::vector<Cell>;

// Rectangular-or-ragged grid of string cells. Row and column order matter;
// rows of different lengths are legal. Immutable by convention once built:
// everything downstream takes tables by const reference and returns copies.
struct Table {
  std::vector<Row> rows;

  Table() = default;
  explicit Table(std::vector<Row> r) : rows(std::move(r)) {}
  Table(std::initializer_list<Row> r) : rows(r) {}

  std::size_t row_count() const { return rows.size(); }
  bool empty() const { return rows.empty(); }

  std::size_t cell_count() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.size();
    return n;
  }

  std::size_t max_width() const {
    std::size_t w = 0;
    for (const auto& r : rows)
      if (r.size() > w) w = r.size();
    return w;
  }

  bool operator==(const Table& other) const = default;
};

// Exact equality: same row count, each row the same length, all cells
// byte-equal.
bool tables_equal(const Table& a, const Table& b);

// Content hash used for search-state deduplication. Collisions are resolved
// by full comparison at the call sites.
std::uint64_t table_hash(const Table& t);

struct TableHasher {
  std::size_t operator()(const Table& t) const {
    return static_cast<std::size_t>(table_hash(t));
  }
};

// Pads ragged rows with blank cells up to the widest row.
Table pad_rectangular(const Table& t);

// JSON list-of-lists-of-strings, e.g. [["a","b"],["c"]]. This is the wire
// form used in scenario files and in prompts.
std::string table_to_json(const Table& t);

// One row per line, cells joined by " | ". For diagnostics only.
std::string table_to_text(const Table& t);

}  // namespace tabsynth
