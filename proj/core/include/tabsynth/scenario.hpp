#pragma once

#include "tabsynth/table.hpp"

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace tabsynth {

// Raised on malformed scenario documents (canonical or legacy).
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TestCase {
  Table input;
  Table expected_output;
  bool operator==(const TestCase&) const = default;
};

// One synthesis task: an example input/output pair plus held-out test pairs.
struct Scenario {
  std::string name;
  std::string source_dataset;
  Table example_input;
  Table example_output;  // never empty
  std::vector<TestCase> tests;

  bool operator==(const Scenario&) const = default;
};

// A corpus of scenarios. Names are unique; per-dataset counts feed the
// weighted aggregation downstream.
struct ScenarioSet {
  std::vector<Scenario> scenarios;

  // Throws ScenarioError on a duplicate name.
  void add(Scenario s);

  std::map<std::string, std::size_t> dataset_counts() const;
};

// Canonical scenario document: a JSON object with keys `name`,
// `source_dataset`, `example_input`, `example_output` and `tests` (a list of
// {"input": ..., "expected_output": ...}). Tables are lists of lists of
// strings. Unknown top-level keys are ignored.
Scenario parse_scenario(const std::string& document);

// Canonical serialization; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& s);

// Legacy scenario files as shipped with older PBE benchmark collections:
// one `key: value` section per line, tables written as list-of-lists
// literals with single-quoted strings ([['a','b']]). `test_input` /
// `test_output` sections pair up in file order.
Scenario import_legacy_scenario(const std::string& text);

// Reads every *.json file in `dir` (sorted by filename) as a canonical
// scenario. Throws ScenarioError on an empty corpus, unreadable file, parse
// failure, or duplicate scenario name.
ScenarioSet load_scenario_dir(const std::filesystem::path& dir);

Scenario load_scenario_file(const std::filesystem::path& file);

}  // namespace tabsynth
