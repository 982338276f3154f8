#include "tabsynth/table.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

namespace tabsynth {

bool tables_equal(const Table& a, const Table& b) { return a.rows == b.rows; }

std::uint64_t table_hash(const Table& t) {
  // FNV-1a over cell bytes with distinct separators for cell and row
  // boundaries, so [["ab"]] and [["a","b"]] hash differently.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](unsigned char byte) {
    h ^= byte;
    h *= 1099511628211ull;
  };
  for (const auto& row : t.rows) {
    for (const auto& cell : row) {
      for (unsigned char c : cell) mix(c);
      mix(0x1f);  // unit separator
    }
    mix(0x1e);  // record separator
  }
  return h;
}

Table pad_rectangular(const Table& t) {
  Table out = t;
  const std::size_t w = t.max_width();
  for (auto& row : out.rows) row.resize(w);
  return out;
}

std::string table_to_json(const Table& t) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json jr = nlohmann::json::array();
    for (const auto& cell : row) jr.push_back(cell);
    j.push_back(std::move(jr));
  }
  return j.dump();
}

std::string table_to_text(const Table& t) {
  std::ostringstream os;
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << " | ";
      os << row[i];
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace tabsynth
