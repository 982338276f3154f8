#pragma once

#include "tabsynth/dsl.hpp"
#include "tabsynth/table.hpp"

#include <stdexcept>
#include <string>

namespace tabsynth {

// Raised when an operator cannot be applied: a column index at or beyond the
// width of a row it must touch, a row index beyond the row count, a wrap
// count of zero, or an invalid regex pattern. Interpretation aborts with no
// partial result. op_index is the zero-based position in the program, or -1
// when a single operator was applied directly.
struct InterpError : std::runtime_error {
  int op_index;
  explicit InterpError(std::string msg, int index = -1)
      : std::runtime_error(std::move(msg)), op_index(index) {}
};

// Applies one operator to a table, returning a new table.
Table apply_operator(const Table& t, const Operator& op);

// Applies the program's operators left to right. The empty program is the
// identity. Never mutates its input.
Table interpret(const Program& p, const Table& t);

}  // namespace tabsynth
