#include "tabsynth/scenario.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace tabsynth {

namespace {

using nlohmann::json;

Table table_from_json(const json& j, const std::string& key) {
  if (!j.is_array())
    throw ScenarioError("key '" + key + "' must be a list of lists of text");
  Table t;
  t.rows.reserve(j.size());
  for (const auto& jr : j) {
    if (!jr.is_array())
      throw ScenarioError("key '" + key + "' must be a list of lists of text");
    Row row;
    row.reserve(jr.size());
    for (const auto& jc : jr) {
      if (!jc.is_string())
        throw ScenarioError("key '" + key +
                            "' contains a non-text cell value");
      row.push_back(jc.get<std::string>());
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

json table_to_json_value(const Table& t) {
  json j = json::array();
  for (const auto& row : t.rows) {
    json jr = json::array();
    for (const auto& cell : row) jr.push_back(cell);
    j.push_back(std::move(jr));
  }
  return j;
}

const json& require_key(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end())
    throw ScenarioError(std::string("missing required key '") + key + "'");
  return *it;
}

}  // namespace

void ScenarioSet::add(Scenario s) {
  for (const auto& existing : scenarios)
    if (existing.name == s.name)
      throw ScenarioError("duplicate scenario name '" + s.name + "'");
  scenarios.push_back(std::move(s));
}

std::map<std::string, std::size_t> ScenarioSet::dataset_counts() const {
  std::map<std::string, std::size_t> counts;
  for (const auto& s : scenarios) ++counts[s.source_dataset];
  return counts;
}

Scenario parse_scenario(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("malformed scenario document: ") +
                        e.what());
  }
  if (!doc.is_object())
    throw ScenarioError("scenario document must be a JSON object");

  Scenario s;
  const json& jname = require_key(doc, "name");
  if (!jname.is_string()) throw ScenarioError("key 'name' must be text");
  s.name = jname.get<std::string>();

  const json& jds = require_key(doc, "source_dataset");
  if (!jds.is_string())
    throw ScenarioError("key 'source_dataset' must be text");
  s.source_dataset = jds.get<std::string>();

  s.example_input = table_from_json(require_key(doc, "example_input"),
                                    "example_input");
  s.example_output = table_from_json(require_key(doc, "example_output"),
                                     "example_output");
  if (s.example_output.empty())
    throw ScenarioError("example_output must be nonempty");

  if (auto it = doc.find("tests"); it != doc.end()) {
    if (!it->is_array()) throw ScenarioError("key 'tests' must be a list");
    for (const auto& jt : *it) {
      if (!jt.is_object())
        throw ScenarioError("each test must be an object");
      TestCase tc;
      tc.input = table_from_json(require_key(jt, "input"), "tests.input");
      tc.expected_output = table_from_json(
          require_key(jt, "expected_output"), "tests.expected_output");
      s.tests.push_back(std::move(tc));
    }
  }
  return s;
}

std::string serialize_scenario(const Scenario& s) {
  json doc;
  doc["name"] = s.name;
  doc["source_dataset"] = s.source_dataset;
  doc["example_input"] = table_to_json_value(s.example_input);
  doc["example_output"] = table_to_json_value(s.example_output);
  json jtests = json::array();
  for (const auto& t : s.tests) {
    json jt;
    jt["input"] = table_to_json_value(t.input);
    jt["expected_output"] = table_to_json_value(t.expected_output);
    jtests.push_back(std::move(jt));
  }
  doc["tests"] = std::move(jtests);
  return doc.dump(2) + "\n";
}

namespace {

// Parser for list-of-lists literals with single-quoted strings, e.g.
// [['a','b'],['$7,664.25']]. Escapes: \' and \\ inside strings.
class LiteralParser {
 public:
  explicit LiteralParser(std::string_view text) : text_(text) {}

  Table parse_table() {
    skip_ws();
    expect('[');
    Table t;
    skip_ws();
    if (peek() == ']') {
      next();
      finish();
      return t;
    }
    while (true) {
      t.rows.push_back(parse_row());
      skip_ws();
      char c = next();
      if (c == ',') {
        skip_ws();
        continue;
      }
      if (c == ']') break;
      fail("expected ',' or ']' in table literal");
    }
    finish();
    return t;
  }

 private:
  Row parse_row() {
    skip_ws();
    if (peek() == '\'')
      fail("non-text leaf value: expected a list where a string was found");
    expect('[');
    Row row;
    skip_ws();
    if (peek() == ']') {
      next();
      return row;
    }
    while (true) {
      skip_ws();
      if (peek() == '[')
        fail("non-text leaf value: nested list inside a row");
      row.push_back(parse_string());
      skip_ws();
      char c = next();
      if (c == ',') continue;
      if (c == ']') break;
      fail("expected ',' or ']' in row literal");
    }
    return row;
  }

  std::string parse_string() {
    skip_ws();
    if (peek() != '\'') fail("non-text leaf value: expected a quoted string");
    next();
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated string literal");
      char c = text_[pos_++];
      if (c == '\\') {
        if (pos_ >= text_.size()) fail("dangling escape in string literal");
        char e = text_[pos_++];
        if (e == '\'' || e == '\\')
          out.push_back(e);
        else
          fail(std::string("unsupported escape '\\") + e + "'");
      } else if (c == '\'') {
        break;
      } else {
        out.push_back(c);
      }
    }
    return out;
  }

  void finish() {
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters after table literal");
  }

  char peek() {
    if (pos_ >= text_.size()) fail("unbalanced brackets: unexpected end");
    return text_[pos_];
  }
  char next() {
    char c = peek();
    ++pos_;
    return c;
  }
  void expect(char want) {
    char c = next();
    if (c != want)
      fail(std::string("expected '") + want + "', found '" + c + "'");
  }
  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r'))
      ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw ScenarioError("legacy table literal: " + msg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

Table parse_legacy_table(const std::string& literal) {
  return LiteralParser(literal).parse_table();
}

}  // namespace

Scenario import_legacy_scenario(const std::string& text) {
  // Sections are `key: value`. A table literal may span lines; it ends when
  // its brackets balance outside of string quotes.
  Scenario s;
  bool have_name = false, have_ds = false, have_in = false, have_out = false;
  std::vector<Table> test_inputs, test_outputs;

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    // strip comments and blank lines
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    std::size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw ScenarioError("legacy scenario: expected 'key: value' line: " +
                          line);
    std::string key = line.substr(first, colon - first);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t'))
      key.pop_back();
    std::string value = line.substr(colon + 1);

    auto is_table_key = [](const std::string& k) {
      return k == "example_input" || k == "example_output" ||
             k == "test_input" || k == "test_output";
    };

    if (is_table_key(key)) {
      // accumulate lines until brackets balance (quote-aware)
      int depth = 0;
      bool in_string = false, escaped = false, seen_bracket = false;
      auto scan = [&](const std::string& chunk) {
        for (char c : chunk) {
          if (in_string) {
            if (escaped)
              escaped = false;
            else if (c == '\\')
              escaped = true;
            else if (c == '\'')
              in_string = false;
          } else if (c == '\'') {
            in_string = true;
          } else if (c == '[') {
            ++depth;
            seen_bracket = true;
          } else if (c == ']') {
            --depth;
          }
        }
      };
      scan(value);
      std::string more;
      while ((!seen_bracket || depth > 0) && std::getline(in, more)) {
        value += "\n" + more;
        scan(more);
      }
      if (depth != 0)
        throw ScenarioError("legacy scenario: unbalanced brackets in '" +
                            key + "'");
      Table t = parse_legacy_table(value);
      if (key == "example_input") {
        s.example_input = std::move(t);
        have_in = true;
      } else if (key == "example_output") {
        s.example_output = std::move(t);
        have_out = true;
      } else if (key == "test_input") {
        test_inputs.push_back(std::move(t));
      } else {
        test_outputs.push_back(std::move(t));
      }
    } else {
      // scalar text value
      std::size_t v0 = value.find_first_not_of(" \t");
      std::size_t v1 = value.find_last_not_of(" \t\r");
      std::string scalar =
          v0 == std::string::npos ? "" : value.substr(v0, v1 - v0 + 1);
      if (key == "name") {
        s.name = scalar;
        have_name = true;
      } else if (key == "source_dataset") {
        s.source_dataset = scalar;
        have_ds = true;
      }
      // unknown keys ignored
    }
  }

  if (!have_name) throw ScenarioError("legacy scenario: missing 'name'");
  if (!have_ds)
    throw ScenarioError("legacy scenario: missing 'source_dataset'");
  if (!have_in)
    throw ScenarioError("legacy scenario: missing 'example_input'");
  if (!have_out)
    throw ScenarioError("legacy scenario: missing 'example_output'");
  if (s.example_output.empty())
    throw ScenarioError("example_output must be nonempty");
  if (test_inputs.size() != test_outputs.size())
    throw ScenarioError(
        "legacy scenario: test_input/test_output sections do not pair up");
  for (std::size_t i = 0; i < test_inputs.size(); ++i)
    s.tests.push_back({std::move(test_inputs[i]), std::move(test_outputs[i])});
  return s;
}

Scenario load_scenario_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in)
    throw ScenarioError("cannot read scenario file: " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ScenarioError& e) {
    throw ScenarioError(file.string() + ": " + e.what());
  }
}

ScenarioSet load_scenario_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw ScenarioError("corpus directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw ScenarioError("empty corpus: no .json scenario files in " +
                        dir.string());
  ScenarioSet set;
  for (const auto& f : files) set.add(load_scenario_file(f));
  return set;
}

}  // namespace tabsynth
