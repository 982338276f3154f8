#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tabsynth {

// The fifteen table-edit operators. Column and row indices are zero-based;
// string parameters (glue, delimiters, patterns) are kept exactly as
// written.
enum class OpKind : std::uint8_t {
  drop,          // drop(c)
  copy,          // copy(c)
  move,          // move(from, to)
  merge,         // merge(c1, c2, glue)
  split,         // split(c, delim)
  fold,          // fold(c_start)
  unfold,        // unfold(key_c)
  fill,          // fill(c)
  delete_row,    // delete_row(r)
  delete_empty,  // delete_empty(c)
  delete_match,  // delete_match(c, pattern)
  extract,       // extract(c, pattern)
  divide,        // divide(c, pattern)
  transpose,     // transpose()
  wrap,          // wrap(k)
};

constexpr std::size_t kOperatorCount = 15;

struct OperatorSignature {
  OpKind kind;
  std::string_view name;
  int int_args;   // leading integer parameters
  int text_args;  // trailing string parameters (0 or 1)
  std::string_view summary;  // one-line semantics, used in knowledge prompts
};

const std::array<OperatorSignature, kOperatorCount>& operator_signatures();
const OperatorSignature& signature_of(OpKind kind);

struct Operator {
  OpKind kind = OpKind::transpose;
  int a = 0;         // first integer parameter
  int b = 0;         // second integer parameter (move/merge)
  std::string text;  // string parameter (merge/split/delete_match/extract/divide)

  bool operator==(const Operator&) const = default;

  static Operator drop(int c) { return {OpKind::drop, c, 0, {}}; }
  static Operator copy(int c) { return {OpKind::copy, c, 0, {}}; }
  static Operator move(int from, int to) { return {OpKind::move, from, to, {}}; }
  static Operator merge(int c1, int c2, std::string glue) {
    return {OpKind::merge, c1, c2, std::move(glue)};
  }
  static Operator split(int c, std::string delim) {
    return {OpKind::split, c, 0, std::move(delim)};
  }
  static Operator fold(int c_start) { return {OpKind::fold, c_start, 0, {}}; }
  static Operator unfold(int key_c) { return {OpKind::unfold, key_c, 0, {}}; }
  static Operator fill(int c) { return {OpKind::fill, c, 0, {}}; }
  static Operator delete_row(int r) { return {OpKind::delete_row, r, 0, {}}; }
  static Operator delete_empty(int c) {
    return {OpKind::delete_empty, c, 0, {}};
  }
  static Operator delete_match(int c, std::string pattern) {
    return {OpKind::delete_match, c, 0, std::move(pattern)};
  }
  static Operator extract(int c, std::string pattern) {
    return {OpKind::extract, c, 0, std::move(pattern)};
  }
  static Operator divide(int c, std::string pattern) {
    return {OpKind::divide, c, 0, std::move(pattern)};
  }
  static Operator transpose() { return {OpKind::transpose, 0, 0, {}}; }
  static Operator wrap(int k) { return {OpKind::wrap, k, 0, {}}; }
};

// A sequential program over the operators above. The empty program is the
// identity transformation.
struct Program {
  std::vector<Operator> ops;

  Program() = default;
  explicit Program(std::vector<Operator> o) : ops(std::move(o)) {}
  Program(std::initializer_list<Operator> o) : ops(o) {}

  bool empty() const { return ops.empty(); }
  std::size_t size() const { return ops.size(); }

  bool operator==(const Program&) const = default;
};

struct DslParseError : std::runtime_error {
  int line;
  int column;
  DslParseError(std::string msg, int line_, int column_)
      : std::runtime_error(std::move(msg)), line(line_), column(column_) {}
};

// Text form:
//   program := (op (";" | newline))*
//   op      := name "(" args? ")"
//   args    := arg ("," arg)*
//   arg     := integer | string
// Integers are decimal digits. Strings are double-quoted with backslash
// escapes for quote and backslash. '#' starts a comment to end of line.
Program parse_program(const std::string& text);

// Canonical text: ops joined by "; ", args by ", ".
// parse_program(print_program(p)) == p for every program.
std::string print_program(const Program& p);
std::string print_operator(const Operator& op);

// The grammar block included in every prompt.
std::string_view dsl_grammar_text();

// The operator catalog (name, signature, one-line semantics) appended to
// prompts when extra knowledge is requested.
std::string operator_catalog_text();

}  // namespace tabsynth
