#include "tabsynth/search.hpp"

#include "tabsynth/interpret.hpp"
#include "tabsynth/ted.hpp"

#include <algorithm>
#include <cctype>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace tabsynth {

const char* to_string(ExhaustionReason r) {
  switch (r) {
    case ExhaustionReason::max_expansions: return "max_expansions";
    case ExhaustionReason::wall_clock: return "wall_clock";
    case ExhaustionReason::search_space: return "search_space";
  }
  return "unknown";
}

namespace {

std::string char_class_escape(char c) {
  switch (c) {
    case '\\': case ']': case '[': case '^': case '-':
      return std::string("\\") + c;
    default:
      return std::string(1, c);
  }
}

// Parameter pools derived from the target table once per search.
struct ParamPool {
  std::vector<std::string> separators;  // single-character strings
  std::vector<std::string> glues;       // "" plus separators
  std::vector<std::string> patterns;    // regex template instantiations
};

ParamPool build_param_pool(const Table& target) {
  std::set<char> seps;
  for (const auto& row : target.rows)
    for (const auto& cell : row)
      for (char c : cell) {
        auto u = static_cast<unsigned char>(c);
        if (u < 128 && (std::ispunct(u) || std::isspace(u))) seps.insert(c);
      }
  ParamPool pool;
  pool.glues.push_back("");
  for (char c : seps) {
    pool.separators.emplace_back(1, c);
    pool.glues.emplace_back(1, c);
  }
  pool.patterns.push_back("[0-9]+");
  pool.patterns.push_back("[0-9]{4}");
  for (char c : seps) {
    const std::string esc = char_class_escape(c);
    pool.patterns.push_back("^[^" + esc + "]+");
    pool.patterns.push_back("[^" + esc + "]+$");
  }
  return pool;
}

// Candidates depend on the state only through (widest row, row count), so
// lists are cached per shape for the lifetime of one search. Structural
// operators come first; parameter-heavy ones (merge in particular) last,
// which also fixes the insertion-order tie-break.
std::vector<Operator> build_candidates(std::size_t width, std::size_t rows,
                                       std::size_t delete_row_limit,
                                       const ParamPool& pool) {
  std::vector<Operator> ops;
  const int w = static_cast<int>(width);
  for (int c = 0; c < w; ++c) ops.push_back(Operator::drop(c));
  for (int c = 0; c < w; ++c) ops.push_back(Operator::delete_empty(c));
  const std::size_t del_rows = std::min(rows, delete_row_limit);
  for (int r = 0; r < static_cast<int>(del_rows); ++r)
    ops.push_back(Operator::delete_row(r));
  for (int c = 0; c < w; ++c) ops.push_back(Operator::fill(c));
  for (int c = 0; c < w; ++c) ops.push_back(Operator::unfold(c));
  for (int c = 0; c < w; ++c) ops.push_back(Operator::fold(c));
  std::set<int> wrap_counts;
  for (int k = 2; k <= 6; ++k)
    if (static_cast<std::size_t>(k) <= rows && rows % k == 0)
      wrap_counts.insert(k);
  if (rows >= 2 && rows <= 6) wrap_counts.insert(static_cast<int>(rows));
  for (int k : wrap_counts) ops.push_back(Operator::wrap(k));
  ops.push_back(Operator::transpose());
  for (int c = 0; c < w; ++c)
    for (const auto& d : pool.separators) ops.push_back(Operator::split(c, d));
  for (int c = 0; c < w; ++c)
    for (const auto& p : pool.patterns) ops.push_back(Operator::divide(c, p));
  for (int c = 0; c < w; ++c)
    for (const auto& p : pool.patterns) ops.push_back(Operator::extract(c, p));
  for (int c = 0; c < w; ++c)
    for (const auto& p : pool.patterns)
      ops.push_back(Operator::delete_match(c, p));
  for (int c = 0; c < w; ++c) ops.push_back(Operator::copy(c));
  for (int from = 0; from < w; ++from)
    for (int to = 0; to < w; ++to)
      if (from != to) ops.push_back(Operator::move(from, to));
  for (int c1 = 0; c1 < w; ++c1)
    for (int c2 = 0; c2 < w; ++c2) {
      if (c1 == c2) continue;
      for (const auto& g : pool.glues) ops.push_back(Operator::merge(c1, c2, g));
    }
  return ops;
}

// Expanded-node arena entry. The table of any node is rematerialized by
// replaying its operator chain from the root, so no tables are stored.
struct ArenaNode {
  std::int32_t parent;  // arena index, -1 for the root
  const Operator* op;   // nullptr for the root
};

struct FrontierEntry {
  double f;
  std::uint32_t h;
  std::uint64_t seq;
  std::int32_t parent;  // arena index of the expanded parent
  const Operator* op;
  std::uint16_t g;
};

struct FrontierOrder {
  bool operator()(const FrontierEntry& a, const FrontierEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    return a.seq > b.seq;
  }
};

// A state's identity for duplicate detection: the expanded parent plus the
// operator that produced it (enough to rematerialize for full comparison).
struct SeenClaim {
  std::int32_t parent;
  const Operator* op;
};

class Search {
 public:
  Search(const Table& input, const Table& target, const SearchBudget& budget,
         const SearchOptions& options)
      : root_(input),
        target_(target),
        budget_(budget),
        options_(options),
        pool_(build_param_pool(target)) {}

  SynthesisResult run() {
    const auto started = std::chrono::steady_clock::now();
    SynthesisResult result;

    seen_.emplace(table_hash(root_), SeenClaim{-1, nullptr});
    const std::uint32_t h0 = heuristic(root_);
    frontier_.push({options_.heuristic_weight * h0, h0, next_seq_++, -1,
                    nullptr, 0});

    while (!frontier_.empty()) {
      const auto now = std::chrono::steady_clock::now();
      if (now - started >= budget_.wall_clock) {
        result.reason = ExhaustionReason::wall_clock;
        break;
      }
      FrontierEntry entry = frontier_.top();
      frontier_.pop();

      Table state = rematerialize(entry.parent, entry.op);
      if (tables_equal(state, target_)) {
        result.solved = true;
        result.program = program_of(entry.parent, entry.op);
        break;
      }
      if (entry.g >= budget_.max_depth) continue;
      if (stats_.expanded >= budget_.max_expansions) {
        result.reason = ExhaustionReason::max_expansions;
        break;
      }
      expand(entry, std::move(state));
    }

    stats_.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::steady_clock::now() - started);
    result.stats = stats_;

    if (result.solved) {
      // Replay check: a solved program must reproduce the target exactly.
      if (!tables_equal(interpret(result.program, root_), target_))
        throw std::logic_error("synthesize: solved program failed replay");
    }
    return result;
  }

 private:
  std::uint32_t heuristic(const Table& state) const {
    if (!options_.use_heuristic) return 0;
    return static_cast<std::uint32_t>(ted_batch(state, target_));
  }

  Table rematerialize(std::int32_t parent, const Operator* op) const {
    std::vector<const Operator*> chain;
    for (const Operator* cur = op; cur != nullptr;) {
      chain.push_back(cur);
      if (parent < 0) break;
      const ArenaNode& node = arena_[parent];
      cur = node.op;
      parent = node.parent;
    }
    Table state = root_;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
      state = apply_operator(state, **it);
    return state;
  }

  Program program_of(std::int32_t parent, const Operator* op) const {
    Program p;
    std::vector<const Operator*> chain;
    for (const Operator* cur = op; cur != nullptr;) {
      chain.push_back(cur);
      if (parent < 0) break;
      const ArenaNode& node = arena_[parent];
      cur = node.op;
      parent = node.parent;
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
      p.ops.push_back(**it);
    return p;
  }

  const std::vector<Operator>& candidates_for(const Table& state) {
    const std::uint64_t key =
        (static_cast<std::uint64_t>(state.max_width()) << 32) |
        static_cast<std::uint64_t>(state.row_count());
    auto it = candidate_cache_.find(key);
    if (it != candidate_cache_.end()) return it->second;
    auto [pos, inserted] = candidate_cache_.emplace(
        key, build_candidates(state.max_width(), state.row_count(),
                              delete_row_limit(), pool_));
    return pos->second;
  }

  std::size_t delete_row_limit() const { return root_.row_count(); }

  void expand(const FrontierEntry& entry, Table state) {
    const std::int32_t arena_idx = static_cast<std::int32_t>(arena_.size());
    arena_.push_back({entry.parent, entry.op});
    ++stats_.expanded;

    const auto& candidates = candidates_for(state);
    for (const Operator& op : candidates) {
      Table child;
      try {
        child = apply_operator(state, op);
      } catch (const InterpError&) {
        continue;  // inapplicable instantiation
      }
      ++stats_.generated;
      if (is_duplicate(child, arena_idx, &op)) {
        ++stats_.duplicates_pruned;
        continue;
      }
      const std::uint32_t h = heuristic(child);
      const double f =
          static_cast<double>(entry.g) + 1.0 + options_.heuristic_weight * h;
      frontier_.push({f, h, next_seq_++, arena_idx,
                      &op, static_cast<std::uint16_t>(entry.g + 1)});
    }
  }

  // First path to a state wins; a hash hit is confirmed by rebuilding the
  // claimant's table and comparing in full. Genuine 64-bit collisions get a
  // slot in the overflow list.
  bool is_duplicate(const Table& child, std::int32_t parent,
                    const Operator* op) {
    const std::uint64_t h = table_hash(child);
    auto it = seen_.find(h);
    if (it == seen_.end()) {
      seen_.emplace(h, SeenClaim{parent, op});
      return false;
    }
    if (tables_equal(rematerialize(it->second.parent, it->second.op), child))
      return true;
    auto& extra = seen_overflow_[h];
    for (const SeenClaim& claim : extra)
      if (tables_equal(rematerialize(claim.parent, claim.op), child))
        return true;
    extra.push_back({parent, op});
    return false;
  }

  Table root_;
  Table target_;
  SearchBudget budget_;
  SearchOptions options_;
  ParamPool pool_;

  std::vector<ArenaNode> arena_;
  std::priority_queue<FrontierEntry, std::vector<FrontierEntry>, FrontierOrder>
      frontier_;
  std::unordered_map<std::uint64_t, SeenClaim> seen_;
  std::unordered_map<std::uint64_t, std::vector<SeenClaim>> seen_overflow_;
  std::unordered_map<std::uint64_t, std::vector<Operator>> candidate_cache_;
  std::uint64_t next_seq_ = 0;
  SearchStats stats_;
};

}  // namespace

std::vector<Operator> enumerate_instantiations(const Table& state,
                                               const Table& target) {
  return build_candidates(state.max_width(), state.row_count(),
                          state.row_count(), build_param_pool(target));
}

SynthesisResult synthesize(const Table& example_input,
                           const Table& example_output,
                           const SearchBudget& budget,
                           const SearchOptions& options) {
  if (example_output.empty())
    throw std::invalid_argument("synthesize: example_output must be nonempty");
  Search search(example_input, example_output, budget, options);
  return search.run();
}

}  // namespace tabsynth
