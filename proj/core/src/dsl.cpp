#include "tabsynth/dsl.hpp"

#include <cctype>
#include <sstream>

namespace tabsynth {

const std::array<OperatorSignature, kOperatorCount>& operator_signatures() {
  static const std::array<OperatorSignature, kOperatorCount> sigs = {{
      {OpKind::drop, "drop", 1, 0,
       "drop(c): remove column c from every row that has it"},
      {OpKind::copy, "copy", 1, 0,
       "copy(c): duplicate column c immediately to its right"},
      {OpKind::move, "move", 2, 0,
       "move(from, to): remove column `from` and reinsert it at index `to`"},
      {OpKind::merge, "merge", 2, 1,
       "merge(c1, c2, glue): concatenate cell c1, glue, cell c2 into the "
       "lower index; the other column is removed"},
      {OpKind::split, "split", 1, 1,
       "split(c, delim): split cell c at the first occurrence of delim into "
       "two adjacent columns (no occurrence: original cell, then empty cell)"},
      {OpKind::fold, "fold", 1, 0,
       "fold(c_start): a row of width w > c_start becomes w-c_start rows, "
       "each the prefix before c_start plus one of the remaining cells"},
      {OpKind::unfold, "unfold", 1, 0,
       "unfold(key_c): consecutive rows with the same cell at key_c collapse "
       "to one row: the key, then every other cell of each run row in order"},
      {OpKind::fill, "fill", 1, 0,
       "fill(c): replace each empty cell in column c with the nearest "
       "non-empty cell above it"},
      {OpKind::delete_row, "delete_row", 1, 0,
       "delete_row(r): remove the row with index r"},
      {OpKind::delete_empty, "delete_empty", 1, 0,
       "delete_empty(c): remove rows whose cell c is empty or absent"},
      {OpKind::delete_match, "delete_match", 1, 1,
       "delete_match(c, pattern): remove rows whose cell c contains a match "
       "of the regex pattern"},
      {OpKind::extract, "extract", 1, 1,
       "extract(c, pattern): replace cell c by its first regex match "
       "(no match: empty cell)"},
      {OpKind::divide, "divide", 1, 1,
       "divide(c, pattern): rows matching at c keep the value and gain an "
       "empty cell at c+1; other rows get an empty cell at c and the value "
       "at c+1"},
      {OpKind::transpose, "transpose", 0, 0,
       "transpose(): swap rows and columns (ragged rows are padded with "
       "empty cells first)"},
      {OpKind::wrap, "wrap", 1, 0,
       "wrap(k): concatenate each group of k consecutive rows into one row "
       "(a trailing partial group is concatenated as-is)"},
  }};
  return sigs;
}

const OperatorSignature& signature_of(OpKind kind) {
  return operator_signatures()[static_cast<std::size_t>(kind)];
}

namespace {

std::string quote_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

class ProgramLexer {
 public:
  explicit ProgramLexer(const std::string& text) : text_(text) {}

  struct Token {
    enum Kind { name, integer, string, lparen, rparen, comma, separator, end };
    Kind kind;
    std::string value;
    int line;
    int column;
  };

  Token next() {
    skip_trivia();
    int line = line_, col = col_;
    if (pos_ >= text_.size()) return {Token::end, "", line, col};
    char c = text_[pos_];
    if (c == '\n' || c == ';') {
      advance();
      return {Token::separator, std::string(1, c), line, col};
    }
    if (c == '(') {
      advance();
      return {Token::lparen, "(", line, col};
    }
    if (c == ')') {
      advance();
      return {Token::rparen, ")", line, col};
    }
    if (c == ',') {
      advance();
      return {Token::comma, ",", line, col};
    }
    if (c == '"') return lex_string(line, col);
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string value;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        value.push_back(text_[pos_]);
        advance();
      }
      return {Token::integer, value, line, col};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string value;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        value.push_back(text_[pos_]);
        advance();
      }
      return {Token::name, value, line, col};
    }
    throw DslParseError("unexpected character '" + std::string(1, c) + "'",
                        line, col);
  }

 private:
  Token lex_string(int line, int col) {
    advance();  // opening quote
    std::string value;
    while (true) {
      if (pos_ >= text_.size())
        throw DslParseError("unterminated string", line, col);
      char c = text_[pos_];
      advance();
      if (c == '\\') {
        if (pos_ >= text_.size())
          throw DslParseError("dangling escape in string", line, col);
        char e = text_[pos_];
        advance();
        if (e == '"' || e == '\\')
          value.push_back(e);
        else
          throw DslParseError(
              "unsupported escape '\\" + std::string(1, e) + "'", line, col);
      } else if (c == '"') {
        break;
      } else {
        value.push_back(c);
      }
    }
    return {Token::string, value, line, col};
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const OperatorSignature* find_signature(const std::string& name) {
  for (const auto& sig : operator_signatures())
    if (sig.name == name) return &sig;
  return nullptr;
}

}  // namespace

Program parse_program(const std::string& text) {
  ProgramLexer lexer(text);
  using Token = ProgramLexer::Token;
  Program program;

  Token tok = lexer.next();
  while (true) {
    while (tok.kind == Token::separator) tok = lexer.next();
    if (tok.kind == Token::end) break;
    if (tok.kind != Token::name)
      throw DslParseError("expected operator name", tok.line, tok.column);

    const OperatorSignature* sig = find_signature(tok.value);
    if (!sig)
      throw DslParseError("unknown operator '" + tok.value + "'", tok.line,
                          tok.column);
    const int name_line = tok.line, name_col = tok.column;

    tok = lexer.next();
    if (tok.kind != Token::lparen)
      throw DslParseError("expected '(' after operator name", tok.line,
                          tok.column);

    std::vector<Token> args;
    tok = lexer.next();
    if (tok.kind != Token::rparen) {
      while (true) {
        if (tok.kind != Token::integer && tok.kind != Token::string)
          throw DslParseError("expected integer or string argument", tok.line,
                              tok.column);
        args.push_back(tok);
        tok = lexer.next();
        if (tok.kind == Token::comma) {
          tok = lexer.next();
          continue;
        }
        if (tok.kind == Token::rparen) break;
        throw DslParseError("expected ',' or ')' in argument list", tok.line,
                            tok.column);
      }
    }

    const int want = sig->int_args + sig->text_args;
    if (static_cast<int>(args.size()) != want)
      throw DslParseError(std::string(sig->name) + " takes " +
                              std::to_string(want) + " argument(s), found " +
                              std::to_string(args.size()),
                          name_line, name_col);

    Operator op;
    op.kind = sig->kind;
    int ints[2] = {0, 0};
    for (int i = 0; i < sig->int_args; ++i) {
      if (args[i].kind != Token::integer)
        throw DslParseError("non-integer index argument for " +
                                std::string(sig->name),
                            args[i].line, args[i].column);
      try {
        ints[i] = std::stoi(args[i].value);
      } catch (const std::exception&) {
        throw DslParseError("integer argument out of range", args[i].line,
                            args[i].column);
      }
    }
    op.a = ints[0];
    op.b = ints[1];
    if (sig->text_args == 1) {
      const Token& targ = args[sig->int_args];
      if (targ.kind != Token::string)
        throw DslParseError("expected string argument for " +
                                std::string(sig->name),
                            targ.line, targ.column);
      op.text = targ.value;
    }
    program.ops.push_back(std::move(op));

    tok = lexer.next();
    if (tok.kind == Token::end) break;
    if (tok.kind != Token::separator)
      throw DslParseError("expected ';' or newline between operations",
                          tok.line, tok.column);
  }
  return program;
}

std::string print_operator(const Operator& op) {
  const OperatorSignature& sig = signature_of(op.kind);
  std::string out(sig.name);
  out.push_back('(');
  bool first = true;
  auto add = [&](const std::string& piece) {
    if (!first) out += ", ";
    out += piece;
    first = false;
  };
  if (sig.int_args >= 1) add(std::to_string(op.a));
  if (sig.int_args >= 2) add(std::to_string(op.b));
  if (sig.text_args == 1) add(quote_string(op.text));
  out.push_back(')');
  return out;
}

std::string print_program(const Program& p) {
  std::string out;
  for (std::size_t i = 0; i < p.ops.size(); ++i) {
    if (i) out += "; ";
    out += print_operator(p.ops[i]);
  }
  return out;
}

std::string_view dsl_grammar_text() {
  return "program := (op (\";\" | newline))*\n"
         "op      := name \"(\" args? \")\"\n"
         "args    := arg (\",\" arg)*\n"
         "arg     := integer | string\n"
         "Integers are decimal digits (no sign). Strings are double-quoted;\n"
         "backslash escapes are \\\" and \\\\. Regex arguments use ECMAScript\n"
         "syntax without backreferences and match against the cell text.\n"
         "'#' starts a comment that runs to end of line.\n";
}

std::string operator_catalog_text() {
  std::ostringstream os;
  for (const auto& sig : operator_signatures()) os << "- " << sig.summary
                                                  << "\n";
  return os.str();
}

}  // namespace tabsynth
